// Copyright 2026 The STIA Authors
// SPDX-License-Identifier: Apache-2.0

#include "stia/cli.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "stia/acceptance.hpp"
#include "stia/harness.hpp"
#include "stia/rates.hpp"
#include "stia/schedule.hpp"
#include "stia/tradeoff.hpp"

namespace stia {

namespace {

struct Options {
    int k = 2;
    int trials = 0;  // 0: per-command default
    std::uint64_t seed = 1;
    std::vector<double> snr_db;
    bool noiseless = false;
    std::string out;
    int workers = 1;
    int figure = 4;
    int groups = 3;
    std::vector<int> criteria;
};

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

SweepConfig make_config(const Options& o, Experiment e, int default_trials) {
    SweepConfig cfg;
    cfg.experiment = e;
    cfg.num_tx = o.k;
    cfg.trials = o.trials > 0 ? o.trials : default_trials;
    cfg.seed = o.seed;
    cfg.noise_enabled = !o.noiseless;
    cfg.output_path = o.out;
    cfg.workers = o.workers;
    cfg.n_groups = o.groups;
    if (!o.snr_db.empty()) cfg.snr_grid_db = o.snr_db;
    cfg.validate();
    return cfg;
}

/// Writes to --out (JSON when it ends in .json, CSV otherwise); without
/// --out the CSV goes to stdout when `echo` is set.
void deliver(const Table& t, const SweepConfig& cfg, std::ostream& out, bool echo) {
    if (cfg.output_path.empty()) {
        if (echo) write_csv(t, out);
    } else if (ends_with(cfg.output_path, ".json")) {
        emit_json(t, cfg, cfg.output_path);
    } else {
        emit_csv(t, cfg.output_path);
    }
}

int cmd_xchan(const Options& o, std::ostream& out) {
    const SweepConfig cfg = make_config(o, Experiment::xchan_decode, 100);
    const XchanSweep s = run_xchan_sweep(cfg);
    std::int64_t symbols = 0, slots = 0;
    int exact = 0;
    for (const XchanTrial& t : s.trials) {
        symbols += t.symbols;
        slots += t.slots;
        exact += t.exact ? 1 : 0;
    }
    out << "xchan K=" << cfg.num_tx << " trials=" << cfg.trials << " exact=" << exact
        << " rejected=" << s.rejected() << " max_abs_error=" << format_decimal(s.max_abs_error())
        << " symbols_per_slot=" << to_string(Rational(symbols, std::max<std::int64_t>(slots, 1)))
        << '\n';
    deliver(xchan_table(s), cfg, out, false);
    if (!cfg.noise_enabled && !s.all_exact()) return kExitFailure;
    return kExitOk;
}

int cmd_ic3(const Options& o, std::ostream& out) {
    const SweepConfig cfg = make_config(o, Experiment::ic3_decode, 100);
    const Ic3Sweep s = run_ic3_sweep(cfg);
    int exact = 0;
    for (const XchanTrial& t : s.trials) exact += t.exact ? 1 : 0;
    out << "ic3 trials=" << cfg.trials << " exact=" << exact << " rejected=" << s.rejected()
        << " max_abs_error=" << format_decimal(s.max_abs_error()) << '\n';
    deliver(ic3_table(s), cfg, out, false);
    if (!cfg.noise_enabled && !s.all_exact()) return kExitFailure;
    return kExitOk;
}

int cmd_ergodic(const Options& o, std::ostream& out) {
    const SweepConfig cfg = make_config(o, Experiment::ergodic_x2, 10000);
    const ErgodicReport r = run_ergodic_x2(cfg);
    deliver(ergodic_table(r), cfg, out, true);
    if (!cfg.output_path.empty()) {
        out << "ergodic trials=" << r.trials_used << " rejected=" << r.rejected << " points="
            << r.points.size() << '\n';
    }
    return r.rejected_fraction() < 1e-3 ? kExitOk : kExitFailure;
}

int cmd_slope(const Options& o, std::ostream& out) {
    const SweepConfig cfg = make_config(o, Experiment::ergodic_x2, 10000);
    const SlopeReport s = ergodic_slopes(cfg);
    out << "slope proposed=" << format_decimal(s.proposed) << " tdma=" << format_decimal(s.tdma)
        << '\n';
    return kExitOk;
}

int cmd_tradeoff(const Options& o, std::ostream& out, std::ostream& err) {
    if (o.figure != 4 && o.figure != 5) {
        err << "--figure must be 4 or 5\n";
        return kExitUsage;
    }
    SweepConfig cfg = make_config(o, Experiment::tradeoff_tables, 1);
    const auto regions = o.figure == 4 ? x2_comparison_regions() : ic3_comparison_regions();
    const auto grid = lambda_grid(30, 60);
    deliver(emit_region_table(regions, grid), cfg, out, true);
    for (const auto& r : regions) {
        if (!r.is_nonincreasing()) return kExitFailure;
    }
    return kExitOk;
}

int cmd_gap(const Options& o, std::ostream& out) {
    Options local = o;
    if (local.snr_db.empty()) {
        for (int db = -20; db <= 60; db += 5) local.snr_db.push_back(db);
    }
    SweepConfig cfg = make_config(local, Experiment::gap_check, 1);
    const GapReport r = constant_gap(cfg.snr_grid_db, cfg.seed);
    out << "max_gap=" << format_decimal(r.max_gap) << " bound=" << format_decimal(r.bound)
        << " within_bound=" << (r.within_bound ? "true" : "false") << '\n';
    deliver(gap_table(cfg.snr_grid_db, cfg.seed), cfg, out, false);
    return r.within_bound ? kExitOk : kExitFailure;
}

int cmd_validate(const Options& o, std::ostream& out) {
    if (o.k < 2 || o.groups < 1) throw std::invalid_argument("need --k >= 2 and --groups >= 1");
    const SlotSchedule s = build_schedule(o.k, o.groups);
    const ScheduleCheck c = validate_schedule(s);
    for (std::size_t g = 0; g < s.groups.size(); ++g) {
        out << "I" << g + 1 << " = {";
        for (std::size_t j = 0; j < s.groups[g].size(); ++j) out << (j ? "," : "") << s.groups[g][j];
        out << "}\n";
    }
    out << "|S_d|=" << s.delayed_only.size() << " |S_c|=" << s.current_ok.size()
        << " filler=" << s.filler.size() << '\n';
    for (const auto& v : c.violations) out << "violation: " << v << '\n';
    out << (c.ok ? "schedule ok" : "schedule invalid") << '\n';
    return c.ok ? kExitOk : kExitFailure;
}

int cmd_acceptance(const Options& o, std::ostream& out) {
    std::vector<int> ids = o.criteria;
    if (ids.empty()) {
        for (int i = 1; i <= kNumCriteria; ++i) ids.push_back(i);
    }
    nlohmann::ordered_json report = nlohmann::ordered_json::array();
    bool all = true;
    for (int id : ids) {
        if (id < 1 || id > kNumCriteria) throw std::invalid_argument("unknown criterion");
        const CriterionResult r = run_criterion(id, o.workers);
        out << format_result(r) << '\n';
        all = all && r.passed;
        report.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed},
                          {"detail", r.detail}, {"seconds", r.seconds}});
    }
    if (!o.out.empty()) {
        std::ofstream f(o.out);
        if (!f) throw std::runtime_error("cannot open " + o.out + " for writing");
        f << report.dump(2) << '\n';
    }
    return all ? kExitOk : kExitFailure;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Distributed space-time interference alignment simulator", "stia"};
    app.require_subcommand(1);
    app.set_version_flag("--version", version());
    app.set_config("--config", "", "Read flag values from a key=value file");

    Options o;
    o.workers = 1;
    app.add_option("--k", o.k, "Number of transmitters K")->check(CLI::Range(2, 64));
    app.add_option("--trials", o.trials, "Monte Carlo trials")->check(CLI::PositiveNumber);
    app.add_option("--seed", o.seed, "Base seed")->envname("STIA_SEED");
    app.add_option("--snr-db", o.snr_db, "SNR grid in dB, comma separated")->delimiter(',');
    app.add_flag("--noiseless", o.noiseless, "Disable receiver noise");
    app.add_option("--out", o.out, "Output file (.csv or .json)");
    app.add_option("--workers", o.workers, "Worker threads")->check(CLI::Range(1, 1024));

    auto* xchan = app.add_subcommand("xchan", "K x 2 X-channel decode sweep")->fallthrough();
    auto* ic3 = app.add_subcommand("ic3", "3-user interference channel decode sweep")->fallthrough();
    auto* ergodic = app.add_subcommand("ergodic", "Ergodic sum-rate sweep, 2 x 2 X-channel")->fallthrough();
    auto* slope = app.add_subcommand("slope", "High-SNR DoF slope of the ergodic rates")->fallthrough();
    auto* tradeoff = app.add_subcommand("tradeoff", "DoF versus feedback-delay tables")->fallthrough();
    tradeoff->add_option("--figure", o.figure, "4: 2 x 2 X-channel, 5: 3-user IC");
    auto* gap = app.add_subcommand("gap-check", "Constant-gap check on the phase-fading family")->fallthrough();
    auto* validate = app.add_subcommand("validate-schedule", "Build and check a slot schedule")->fallthrough();
    validate->add_option("--groups", o.groups, "Number of alignment rounds")->check(CLI::PositiveNumber);
    auto* acceptance = app.add_subcommand("acceptance", "Run the acceptance checks")->fallthrough();
    acceptance->add_option("--criterion", o.criteria, "Criterion ids (default: all)")->delimiter(',');

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << version() << '\n';
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    try {
        if (acceptance->parsed() && o.workers == 1 && app.get_option("--workers")->count() == 0) {
            o.workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
        }
        if (xchan->parsed()) return cmd_xchan(o, out);
        if (ic3->parsed()) return cmd_ic3(o, out);
        if (ergodic->parsed()) return cmd_ergodic(o, out);
        if (slope->parsed()) return cmd_slope(o, out);
        if (tradeoff->parsed()) return cmd_tradeoff(o, out, err);
        if (gap->parsed()) return cmd_gap(o, out);
        if (validate->parsed()) return cmd_validate(o, out);
        if (acceptance->parsed()) return cmd_acceptance(o, out);
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitUsage;
}

}  // namespace stia
