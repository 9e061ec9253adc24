// Copyright 2026 The STIA Authors
// SPDX-License-Identifier: Apache-2.0

#include "stia/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <exception>
#include <fstream>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "stia/errors.hpp"
#include "stia/ic3.hpp"
#include "stia/rates.hpp"
#include "stia/rng.hpp"
#include "stia/xchannel.hpp"

#ifndef STIA_VERSION
#define STIA_VERSION "0.0.0"
#endif

namespace stia {

std::string to_string(Experiment e) {
    switch (e) {
        case Experiment::xchan_decode: return "xchan_decode";
        case Experiment::ic3_decode: return "ic3_decode";
        case Experiment::ergodic_x2: return "ergodic_x2";
        case Experiment::tradeoff_tables: return "tradeoff_tables";
        case Experiment::gap_check: return "gap_check";
    }
    return "unknown";
}

std::vector<double> default_snr_grid_db() {
    std::vector<double> out;
    for (int db = -10; db <= 40; db += 5) out.push_back(db);
    return out;
}

void SweepConfig::validate() const {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (workers < 1) throw std::invalid_argument("workers must be >= 1");
    if (num_tx < 2) throw std::invalid_argument("K must be >= 2");
    if (n_groups < 1) throw std::invalid_argument("n_groups must be >= 1");
    const bool rate_experiment =
        experiment == Experiment::ergodic_x2 || experiment == Experiment::gap_check;
    if (rate_experiment && snr_grid_db.empty()) {
        throw std::invalid_argument("SNR grid must be nonempty");
    }
}

void parallel_for(std::int64_t n, int workers, const std::function<void(std::int64_t)>& fn) {
    if (n <= 0) return;
    const auto threads = static_cast<std::int64_t>(std::max(1, workers));
    if (threads == 1) {
        for (std::int64_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::int64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    auto body = [&] {
        for (;;) {
            const std::int64_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(failure_mu);
                if (!failure) failure = std::current_exception();
                next.store(n);
                return;
            }
        }
    };
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(std::min(threads, n)));
    for (std::int64_t t = 0; t < std::min(threads, n); ++t) pool.emplace_back(body);
    pool.clear();
    if (failure) std::rethrow_exception(failure);
}

std::uint64_t trial_seed(std::uint64_t seed, std::int64_t trial) {
    return derive_key(seed, {tag(Stream::trial), static_cast<std::uint64_t>(trial)});
}

namespace {

struct Accumulator {
    double sum = 0.0;
    double sum_sq = 0.0;
    int n = 0;

    void add(double x) {
        sum += x;
        sum_sq += x * x;
        ++n;
    }
    Estimate finish() const {
        if (n == 0) return {};
        const double mean = sum / n;
        if (n < 2) return {mean, 0.0};
        const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1));
        return {mean, std::sqrt(var / n)};
    }
};

struct TrialRates {
    bool ok = false;
    std::string error;
    std::vector<double> proposed, tdma, outer;
};

}  // namespace

ErgodicReport run_ergodic_x2(const SweepConfig& cfg) {
    cfg.validate();
    const std::size_t m = cfg.snr_grid_db.size();
    std::vector<SnrConfig> snrs;
    snrs.reserve(m);
    for (double db : cfg.snr_grid_db) snrs.push_back(SnrConfig::from_db(db));

    std::vector<TrialRates> per_trial(static_cast<std::size_t>(cfg.trials));
    parallel_for(cfg.trials, cfg.workers, [&](std::int64_t i) {
        TrialRates& out = per_trial[static_cast<std::size_t>(i)];
        try {
            const X2SlotGains g = rayleigh_slot_gains(trial_seed(cfg.seed, i));
            out.proposed.resize(m);
            out.tdma.resize(m);
            out.outer.resize(m);
            for (std::size_t s = 0; s < m; ++s) {
                out.proposed[s] = achievable_sum_rate(g, snrs[s]).sum_rate;
                out.tdma[s] = tdma_rate(g.slot[0], snrs[s]);
                out.outer[s] = sum_rate_outer(g.slot[0], snrs[s]);
            }
            out.ok = true;
        } catch (const std::exception& e) {
            out.ok = false;
            out.error = e.what();
        }
    });

    ErgodicReport report;
    std::vector<Accumulator> prop(m), tdma(m), outer(m), gap(m);
    for (std::size_t i = 0; i < per_trial.size(); ++i) {
        const TrialRates& t = per_trial[i];
        if (!t.ok) {
            ++report.rejected;
            report.rejection_log.push_back("trial " + std::to_string(i) + ": " + t.error);
            continue;
        }
        ++report.trials_used;
        for (std::size_t s = 0; s < m; ++s) {
            prop[s].add(t.proposed[s]);
            tdma[s].add(t.tdma[s]);
            outer[s].add(t.outer[s]);
            gap[s].add(t.outer[s] - t.proposed[s]);
        }
    }
    for (std::size_t s = 0; s < m; ++s) {
        report.points.push_back({cfg.snr_grid_db[s], prop[s].finish(), tdma[s].finish(),
                                 outer[s].finish(), gap[s].finish()});
    }
    return report;
}

double estimate_dof_slope(double snr1, double rate1, double snr2, double rate2) {
    if (snr1 == snr2) throw std::invalid_argument("estimate_dof_slope: SNRs must differ");
    if (!(snr1 >= 1e6) || !(snr2 > snr1)) {
        throw std::invalid_argument("estimate_dof_slope: need snr2 > snr1 >= 1e6");
    }
    return (rate2 - rate1) / (std::log2(snr2) - std::log2(snr1));
}

SlopeReport ergodic_slopes(const SweepConfig& cfg, double low_db, double high_db) {
    SweepConfig c = cfg;
    c.experiment = Experiment::ergodic_x2;
    c.snr_grid_db = {low_db, high_db};
    SlopeReport out;
    out.sweep = run_ergodic_x2(c);
    const double s1 = std::pow(10.0, low_db / 10.0);
    const double s2 = std::pow(10.0, high_db / 10.0);
    const auto& p = out.sweep.points;
    out.proposed = estimate_dof_slope(s1, p[0].proposed.mean, s2, p[1].proposed.mean);
    out.tdma = estimate_dof_slope(s1, p[0].tdma.mean, s2, p[1].tdma.mean);
    return out;
}

namespace {

template <typename T>
int count_rejected(const std::vector<T>& trials) {
    return static_cast<int>(std::count_if(trials.begin(), trials.end(),
                                          [](const T& t) { return t.rejected; }));
}

template <typename T>
bool every_exact(const std::vector<T>& trials) {
    return std::all_of(trials.begin(), trials.end(),
                       [](const T& t) { return t.rejected || t.exact; });
}

template <typename T>
double worst_error(const std::vector<T>& trials) {
    double out = 0.0;
    for (const T& t : trials) {
        if (!t.rejected) out = std::max(out, t.max_abs_error);
    }
    return out;
}

NoiseModel noise_of(const SweepConfig& cfg) {
    return cfg.noise_enabled ? NoiseModel::gaussian(1.0) : NoiseModel::noiseless();
}

}  // namespace

int XchanSweep::rejected() const { return count_rejected(trials); }
bool XchanSweep::all_exact() const { return every_exact(trials); }
double XchanSweep::max_abs_error() const { return worst_error(trials); }
int Ic3Sweep::rejected() const { return count_rejected(trials); }
bool Ic3Sweep::all_exact() const { return every_exact(trials); }
double Ic3Sweep::max_abs_error() const { return worst_error(trials); }

XchanSweep run_xchan_sweep(const SweepConfig& cfg) {
    cfg.validate();
    XchanSweep sweep;
    sweep.num_tx = cfg.num_tx;
    sweep.trials.resize(static_cast<std::size_t>(cfg.trials));
    const NoiseModel noise = noise_of(cfg);
    parallel_for(cfg.trials, cfg.workers, [&](std::int64_t i) {
        XchanTrial& t = sweep.trials[static_cast<std::size_t>(i)];
        t.seed = trial_seed(cfg.seed, i);
        const XchannelRunReport r = run_xchannel(cfg.num_tx, t.seed, noise, cfg.n_groups);
        t.rejected = r.rejected_groups > 0;
        t.exact = r.decode.exact_recovery;
        t.max_abs_error = r.decode.max_abs_error;
        t.condition = r.decode.effective_condition;
        t.alignment_residual = r.max_alignment_residual;
        t.symbols = r.accounting.symbols_delivered;
        t.slots = r.accounting.slots_used;
    });
    return sweep;
}

Ic3Sweep run_ic3_sweep(const SweepConfig& cfg) {
    cfg.validate();
    Ic3Sweep sweep;
    sweep.trials.resize(static_cast<std::size_t>(cfg.trials));
    const NoiseModel noise = noise_of(cfg);
    parallel_for(cfg.trials, cfg.workers, [&](std::int64_t i) {
        XchanTrial& t = sweep.trials[static_cast<std::size_t>(i)];
        t.seed = trial_seed(cfg.seed, i);
        const Ic3RunReport r = run_ic3(t.seed, noise);
        t.rejected = r.rejected;
        t.exact = r.decode.exact_recovery;
        t.max_abs_error = r.decode.max_abs_error;
        t.condition = r.decode.worst_condition;
        t.alignment_residual = r.alignment_residual;
        t.symbols = r.accounting.symbols_delivered;
        t.slots = r.accounting.slots_used;
    });
    return sweep;
}

std::string format_decimal(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

Table ergodic_table(const ErgodicReport& report) {
    Table t;
    t.header = {"snr_db",   "proposed", "proposed_se", "tdma",     "tdma_se",
                "outer",    "outer_se", "gap",         "gap_se",   "trials"};
    for (const ErgodicPoint& p : report.points) {
        t.rows.push_back({format_decimal(p.snr_db), format_decimal(p.proposed.mean),
                          format_decimal(p.proposed.std_error), format_decimal(p.tdma.mean),
                          format_decimal(p.tdma.std_error), format_decimal(p.outer.mean),
                          format_decimal(p.outer.std_error), format_decimal(p.gap.mean),
                          format_decimal(p.gap.std_error), std::to_string(report.trials_used)});
    }
    return t;
}

namespace {

Table trial_table(const std::vector<XchanTrial>& trials, int num_tx) {
    Table t;
    t.header = {"trial", "k",         "seed",      "rejected",           "exact",
                "max_abs_error", "condition", "alignment_residual", "symbols", "slots"};
    for (std::size_t i = 0; i < trials.size(); ++i) {
        const XchanTrial& x = trials[i];
        t.rows.push_back({std::to_string(i), std::to_string(num_tx), std::to_string(x.seed),
                          x.rejected ? "1" : "0", x.exact ? "1" : "0",
                          format_decimal(x.max_abs_error), format_decimal(x.condition),
                          format_decimal(x.alignment_residual), std::to_string(x.symbols),
                          std::to_string(x.slots)});
    }
    return t;
}

}  // namespace

Table xchan_table(const XchanSweep& sweep) { return trial_table(sweep.trials, sweep.num_tx); }
Table ic3_table(const Ic3Sweep& sweep) { return trial_table(sweep.trials, 3); }

Table gap_table(std::span<const double> grid_db, std::uint64_t seed) {
    const GapReport r = constant_gap(grid_db, seed);
    Table t;
    t.header = {"snr_db", "achievable", "outer", "gap", "bound"};
    for (const GapPoint& p : r.points) {
        t.rows.push_back({format_decimal(p.snr_db), format_decimal(p.achievable),
                          format_decimal(p.outer), format_decimal(p.gap),
                          format_decimal(r.bound)});
    }
    return t;
}

void write_csv(const Table& table, std::ostream& out) {
    auto line = [&out](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out << ',';
            out << cells[i];
        }
        out << '\n';
    };
    line(table.header);
    for (const auto& row : table.rows) line(row);
}

void emit_csv(const Table& table, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    write_csv(table, f);
    f.flush();
    if (!f) throw std::runtime_error("failed writing " + path);
}

namespace {

nlohmann::ordered_json cell_value(const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (!s.empty() && end == s.c_str() + s.size() && std::isfinite(v)) return v;
    return s;
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

std::string table_to_json(const Table& table, const SweepConfig& cfg) {
    nlohmann::ordered_json doc;
    doc["config"] = {
        {"experiment", to_string(cfg.experiment)},
        {"k", cfg.num_tx},
        {"snr_db", cfg.snr_grid_db},
        {"trials", cfg.trials},
        {"seed", cfg.seed},
        {"noise_enabled", cfg.noise_enabled},
        {"workers", cfg.workers},
    };
    nlohmann::ordered_json results = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        nlohmann::ordered_json obj;
        for (std::size_t i = 0; i < table.header.size() && i < row.size(); ++i) {
            obj[table.header[i]] = cell_value(row[i]);
        }
        results.push_back(std::move(obj));
    }
    doc["results"] = std::move(results);
    doc["provenance"] = {{"seed", cfg.seed}, {"version", version()}, {"timestamp", utc_timestamp()}};
    return doc.dump(2);
}

void emit_json(const Table& table, const SweepConfig& cfg, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f << table_to_json(table, cfg) << '\n';
    f.flush();
    if (!f) throw std::runtime_error("failed writing " + path);
}

std::string version() { return STIA_VERSION; }

}  // namespace stia
