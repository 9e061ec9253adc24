// Copyright 2026 The STIA Authors
// SPDX-License-Identifier: Apache-2.0

#include "stia/acceptance.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "stia/cli.hpp"
#include "stia/harness.hpp"
#include "stia/ic3.hpp"
#include "stia/rates.hpp"
#include "stia/rng.hpp"
#include "stia/schedule.hpp"
#include "stia/tradeoff.hpp"
#include "stia/xchannel.hpp"

namespace stia {

namespace {

struct Outcome {
    bool passed = true;
    std::ostringstream detail;

    void fail(const std::string& why) {
        if (!passed) detail << "; ";
        else detail.str("");
        passed = false;
        detail << why;
    }
};

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", x);
    return buf;
}

Outcome xchan_exact(int workers) {
    Outcome o;
    double worst = 0.0;
    int rejected = 0;
    int total = 0;
    for (int k = 2; k <= 6; ++k) {
        SweepConfig cfg;
        cfg.experiment = Experiment::xchan_decode;
        cfg.num_tx = k;
        cfg.trials = 200;
        cfg.seed = 1000 + static_cast<std::uint64_t>(k);
        cfg.workers = workers;
        const XchanSweep s = run_xchan_sweep(cfg);
        worst = std::max(worst, s.max_abs_error());
        rejected += s.rejected();
        total += cfg.trials;
        if (!s.all_exact()) o.fail("K=" + std::to_string(k) + " has an inexact decode");
    }
    const double frac = static_cast<double>(rejected) / total;
    if (!(worst < 1e-9)) o.fail("max error " + fmt(worst));
    if (!(frac < 1e-3)) o.fail("rejected fraction " + fmt(frac));
    if (o.passed) {
        o.detail << "K=2..6 x 200 seeds, max error " << fmt(worst) << ", rejected " << rejected;
    }
    return o;
}

Outcome ic3_exact(int workers) {
    Outcome o;
    SweepConfig cfg;
    cfg.experiment = Experiment::ic3_decode;
    cfg.trials = 1000;
    cfg.seed = 2000;
    cfg.workers = workers;
    const Ic3Sweep s = run_ic3_sweep(cfg);
    const double worst = s.max_abs_error();
    if (s.rejected() > 0) o.fail(std::to_string(s.rejected()) + " rejected draws");
    if (!s.all_exact()) o.fail("inexact decode");
    if (!(worst < 1e-9)) o.fail("max error " + fmt(worst));
    if (o.passed) o.detail << "1000 seeds, max error " << fmt(worst);
    return o;
}

Outcome alignment_identities(int workers) {
    Outcome o;
    constexpr int kInstances = 10000;
    std::vector<double> xres(kInstances), ires(kInstances);
    parallel_for(kInstances, workers, [&](std::int64_t i) {
        const int k = 2 + static_cast<int>(i % 5);
        const std::uint64_t seed = trial_seed(3000, i);
        xres[static_cast<std::size_t>(i)] =
            run_xchannel(k, seed, NoiseModel::noiseless(), 1).max_alignment_residual;
        ires[static_cast<std::size_t>(i)] = run_ic3(seed, NoiseModel::noiseless()).alignment_residual;
    });
    double xw = 0.0, iw = 0.0;
    for (int i = 0; i < kInstances; ++i) {
        xw = std::max(xw, xres[static_cast<std::size_t>(i)]);
        iw = std::max(iw, ires[static_cast<std::size_t>(i)]);
    }
    if (!(xw <= 1e-12)) o.fail("X-channel residual " + fmt(xw));
    if (!(iw <= 1e-12)) o.fail("IC residual " + fmt(iw));
    if (o.passed) {
        o.detail << kInstances << " instances each, X residual " << fmt(xw) << ", IC residual "
                 << fmt(iw);
    }
    return o;
}

/// Copy of `t` with every gain of transmitters other than `keep` redrawn.
ChannelTensor perturb_others(const ChannelTensor& t, int keep, std::uint64_t seed) {
    const ChannelTensor fresh = generate_channels(seed, t.num_rx(), t.num_tx(), t.num_blocks());
    std::vector<cplx> g = t.raw();
    for (int b = 1; b <= t.num_blocks(); ++b) {
        for (int rx = 1; rx <= t.num_rx(); ++rx) {
            for (int tx = 1; tx <= t.num_tx(); ++tx) {
                if (tx != keep) g[t.index(rx, tx, b)] = fresh.gain(rx, tx, b);
            }
        }
    }
    return {t.num_rx(), t.num_tx(), t.num_blocks(), std::move(g)};
}

bool same_bits(cplx a, cplx b) {
    return std::bit_cast<std::uint64_t>(a.real()) == std::bit_cast<std::uint64_t>(b.real()) &&
           std::bit_cast<std::uint64_t>(a.imag()) == std::bit_cast<std::uint64_t>(b.imag());
}

Outcome locality(int) {
    Outcome o;
    int compared = 0;
    for (int k : {2, 4}) {
        const SlotSchedule sched = build_schedule(k, 2);
        const FeedbackConfig cfg = sched.feedback();
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            const ChannelTensor base = generate_channels(4000 + seed, 2, k, sched.num_blocks());
            const SymbolVector s1 = random_symbols(1, k, seed, 0);
            const SymbolVector s2 = random_symbols(2, k, seed, 0);
            for (int keep = 1; keep <= k; ++keep) {
                const ChannelTensor other = perturb_others(base, keep, 5000 + seed);
                for (const IndexSet& group : sched.groups) {
                    const auto a = simulate_round(base, cfg, group, s1, s2,
                                                  NoiseModel::noiseless(), seed).precoders;
                    const auto b = simulate_round(other, cfg, group, s1, s2,
                                                  NoiseModel::noiseless(), seed).precoders;
                    for (std::size_t j = 2; j < group.size(); ++j) {
                        for (int stream = 1; stream <= 2; ++stream) {
                            ++compared;
                            if (!same_bits(a.v(stream, keep, group[j]), b.v(stream, keep, group[j]))) {
                                o.fail("K=" + std::to_string(k) + " seed " + std::to_string(seed) +
                                       " tx " + std::to_string(keep) + " changed");
                                return o;
                            }
                        }
                    }
                }
            }
        }
    }
    o.detail << compared << " precoder entries bit-identical";
    return o;
}

Outcome schedule_correctness(int) {
    Outcome o;
    const SlotSchedule ex = build_schedule(2, 3);
    const std::vector<IndexSet> want{{1, 4, 9}, {2, 5, 12}, {7, 10, 15}};
    if (ex.groups != want) o.fail("K=2, n=3 index sets differ from {1,4,9},{2,5,12},{7,10,15}");
    int checked = 0;
    for (int k = 2; k <= 8; ++k) {
        for (int n = 1; n <= 20; ++n) {
            const SlotSchedule s = build_schedule(k, n);
            const ScheduleCheck c = validate_schedule(s);
            if (!c.ok) {
                o.fail("K=" + std::to_string(k) + " n=" + std::to_string(n) + ": " +
                       (c.violations.empty() ? std::string("invalid") : c.violations.front()));
            }
            const auto sd = static_cast<long long>(s.delayed_only.size());
            const auto sc = static_cast<long long>(s.current_ok.size());
            if (sd != 2LL * n + 2LL * k) o.fail("|S_d| mismatch at K=" + std::to_string(k));
            if (sc != (k - 1LL) * n + (k - 1LL) * k) o.fail("|S_c| mismatch at K=" + std::to_string(k));
            ++checked;
        }
    }
    if (o.passed) o.detail << "example reproduced, " << checked << " schedules valid";
    return o;
}

Outcome tradeoff_values(int) {
    Outcome o;
    const TradeoffRegion x2 = dof_x_local(2);
    const Rational l23(2, 3);
    auto expect = [&o](const std::string& what, const Rational& got, const Rational& want) {
        if (got != want) o.fail(what + " = " + to_string(got) + ", expected " + to_string(want));
    };
    expect("x_local(2) at 0", x2.value(0), {4, 3});
    expect("x_local(2) at 2/3", x2.value(l23), {4, 3});
    expect("x_local(2) at 1", x2.value(1), 1);
    expect("x_local(2) at 2", x2.value(2), 1);
    const TradeoffRegion ic = dof_ic3_local();
    expect("ic3_local at 0", ic.value(0), {6, 5});
    expect("ic3_local at 3/5", ic.value({3, 5}), {6, 5});
    expect("ic3_local at 1", ic.value(1), 1);
    expect("x_global at 1", dof_x_global_2x2().value(1), {6, 5});
    expect("gain vs IA-TDMA", x2.value(l23) - ia_tdma_region().value(l23), {2, 9});
    expect("gain vs IA-GMK", x2.value(l23) - ia_gmk_region().value(l23), {4, 45});
    if (!(Rational(6, 5) > agk_ic3_dof())) o.fail("6/5 does not exceed 36/31");
    if (o.passed) o.detail << "all exact rational values match";
    return o;
}

Outcome constant_gap_check(int) {
    Outcome o;
    std::vector<double> grid;
    for (int db = -20; db <= 60; db += 5) grid.push_back(db);
    const GapReport r = constant_gap(grid);
    double at0 = std::nan("");
    for (const GapPoint& p : r.points) {
        if (p.snr_db == 0.0) at0 = p.gap;
    }
    if (!(r.max_gap <= 2.39 + 1e-6)) o.fail("max gap " + fmt(r.max_gap));
    if (!(std::abs(at0 - 1.3453) <= 1e-3)) o.fail("gap at 0 dB " + fmt(at0));
    if (o.passed) o.detail << "max gap " << fmt(r.max_gap) << ", gap at 0 dB " << fmt(at0);
    return o;
}

Outcome ergodic(int workers) {
    Outcome o;
    SweepConfig cfg;
    cfg.trials = 10000;
    cfg.seed = 6000;
    cfg.workers = workers;
    const ErgodicReport r = run_ergodic_x2(cfg);
    double worst_gap = 0.0;
    for (const ErgodicPoint& p : r.points) {
        worst_gap = std::max(worst_gap, p.gap.mean);
        const std::string at = " at " + fmt(p.snr_db) + " dB";
        if (p.proposed.mean < p.tdma.mean) o.fail("proposed below TDMA" + at);
        if (p.gap.mean > 4.0) o.fail("gap " + fmt(p.gap.mean) + at);
        if ((p.snr_db == -10.0 || p.snr_db == -5.0) && p.gap.mean > 1.0) {
            o.fail("low-SNR gap " + fmt(p.gap.mean) + at);
        }
    }
    if (!(r.rejected_fraction() < 1e-3)) o.fail("rejected fraction " + fmt(r.rejected_fraction()));
    if (o.passed) o.detail << r.trials_used << " trials, worst mean gap " << fmt(worst_gap);
    return o;
}

Outcome slope(int workers) {
    Outcome o;
    SweepConfig cfg;
    cfg.trials = 10000;
    cfg.seed = 7000;
    cfg.workers = workers;
    const SlopeReport s = ergodic_slopes(cfg);
    if (!(std::abs(s.proposed - 4.0 / 3.0) <= 0.05)) o.fail("proposed slope " + fmt(s.proposed));
    if (!(std::abs(s.tdma - 1.0) <= 0.05)) o.fail("TDMA slope " + fmt(s.tdma));
    if (o.passed) o.detail << "proposed " << fmt(s.proposed) << ", TDMA " << fmt(s.tdma);
    return o;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

Outcome determinism(int) {
    Outcome o;
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() /
                         ("stia-determinism-" + std::to_string(mix64(
                              static_cast<std::uint64_t>(
                                  std::chrono::steady_clock::now().time_since_epoch().count()))));
    fs::create_directories(dir);
    const std::vector<std::vector<std::string>> experiments{
        {"ergodic", "--trials", "2000", "--seed", "11"},
        {"xchan", "--k", "4", "--trials", "200", "--seed", "12", "--noiseless"},
        {"ic3", "--trials", "200", "--seed", "13", "--noiseless"},
        {"gap-check"},
        {"tradeoff", "--figure", "4"},
    };
    int runs = 0;
    for (std::size_t e = 0; e < experiments.size(); ++e) {
        std::string reference;
        for (int w : {1, 4, 16}) {
            const fs::path out = dir / (std::to_string(e) + "-" + std::to_string(w) + ".csv");
            std::vector<std::string> args = experiments[e];
            args.insert(args.end(), {"--workers", std::to_string(w), "--out", out.string()});
            std::ostringstream sink_out, sink_err;
            const int code = cli_main(args, sink_out, sink_err);
            if (code != 0) {
                o.fail(experiments[e][0] + " exited " + std::to_string(code) + ": " + sink_err.str());
                continue;
            }
            const std::string body = slurp(out);
            ++runs;
            if (w == 1) {
                reference = body;
                if (body.empty()) o.fail(experiments[e][0] + " wrote an empty file");
            } else if (body != reference) {
                o.fail(experiments[e][0] + " differs at workers=" + std::to_string(w));
            }
        }
    }
    std::error_code ec;
    fs::remove_all(dir, ec);
    if (o.passed) o.detail << runs << " runs over 5 experiments byte-identical";
    return o;
}

struct CriterionDef {
    const char* name;
    double time_limit;
    std::function<Outcome(int)> check;
};

const std::vector<CriterionDef>& criteria() {
    static const std::vector<CriterionDef> defs{
        {"x-channel noiseless exact recovery", 30.0, xchan_exact},
        {"3-user IC noiseless exact recovery", 10.0, ic3_exact},
        {"alignment identities", 0.0, alignment_identities},
        {"precoder locality", 0.0, locality},
        {"schedule correctness", 0.0, schedule_correctness},
        {"trade-off values", 0.0, tradeoff_values},
        {"constant gap on phase fading", 1.0, constant_gap_check},
        {"ergodic sweep", 120.0, ergodic},
        {"DoF slope", 0.0, slope},
        {"parallel determinism", 0.0, determinism},
    };
    return defs;
}

}  // namespace

CriterionResult run_criterion(int id, int workers) {
    if (id < 1 || id > kNumCriteria) throw std::out_of_range("no criterion " + std::to_string(id));
    const CriterionDef& def = criteria()[static_cast<std::size_t>(id - 1)];
    CriterionResult r;
    r.id = id;
    r.name = def.name;
    r.time_limit = def.time_limit;
    const auto start = std::chrono::steady_clock::now();
    try {
        Outcome o = def.check(workers);
        r.passed = o.passed;
        r.detail = o.detail.str();
    } catch (const std::exception& e) {
        r.passed = false;
        r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (r.passed && r.time_limit > 0.0 && r.seconds >= r.time_limit) {
        r.passed = false;
        r.detail += "; over the " + fmt(r.time_limit) + " s limit";
    }
    return r;
}

std::string format_result(const CriterionResult& r) {
    char secs[32];
    std::snprintf(secs, sizeof secs, "%.2f", r.seconds);
    return std::string(r.passed ? "PASS" : "FAIL") + " [" + std::to_string(r.id) + "] " + r.name +
           ": " + r.detail + " (" + secs + " s)";
}

}  // namespace stia
