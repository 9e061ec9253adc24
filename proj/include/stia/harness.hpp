// Copyright 2026 The STIA Authors
// SPDX-License-Identifier: Apache-2.0

// Monte Carlo sweeps, DoF slope estimation and CSV/JSON emission.

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "stia/tradeoff.hpp"

namespace stia {

enum class Experiment { xchan_decode, ic3_decode, ergodic_x2, tradeoff_tables, gap_check };

std::string to_string(Experiment e);

std::vector<double> default_snr_grid_db();  // -10, -5, ..., 40

struct SweepConfig {
    Experiment experiment = Experiment::ergodic_x2;
    int num_tx = 2;
    std::vector<double> snr_grid_db = default_snr_grid_db();
    int trials = 10000;
    std::uint64_t seed = 1;
    bool noise_enabled = false;
    std::string output_path;
    int workers = 1;
    int n_groups = 3;

    /// Throws std::invalid_argument on trials < 1, workers < 1, or an empty
    /// SNR grid for rate experiments.
    void validate() const;
};

/// Calls fn(i) for i in [0, n) on up to `workers` threads. Work items are
/// claimed dynamically; callers write to slot i so completion order never
/// matters. The first exception thrown by fn is rethrown after all threads
/// join.
void parallel_for(std::int64_t n, int workers, const std::function<void(std::int64_t)>& fn);

/// Seed of trial i's private stream.
std::uint64_t trial_seed(std::uint64_t seed, std::int64_t trial);

struct Estimate {
    double mean = 0.0;
    double std_error = 0.0;
};

struct ErgodicPoint {
    double snr_db = 0.0;
    Estimate proposed;
    Estimate tdma;
    Estimate outer;
    Estimate gap;  // outer - proposed, per trial
};

struct ErgodicReport {
    std::vector<ErgodicPoint> points;
    int trials_used = 0;
    int rejected = 0;
    std::vector<std::string> rejection_log;

    double rejected_fraction() const {
        const int total = trials_used + rejected;
        return total == 0 ? 0.0 : static_cast<double>(rejected) / total;
    }
};

/// Averages the proposed rate, TDMA and the outer bound over fresh Rayleigh
/// draws. Numeric failures reject the whole trial and are logged.
ErgodicReport run_ergodic_x2(const SweepConfig& cfg);

/// (R2 - R1) / (log2 snr2 - log2 snr1), SNRs in linear scale.
double estimate_dof_slope(double snr1, double rate1, double snr2, double rate2);

struct SlopeReport {
    double proposed = 0.0;
    double tdma = 0.0;
    ErgodicReport sweep;
};

/// Slope between two high SNRs, both given in dB.
SlopeReport ergodic_slopes(const SweepConfig& cfg, double low_db = 60.0, double high_db = 80.0);

struct XchanTrial {
    std::uint64_t seed = 0;
    bool rejected = false;
    bool exact = false;
    double max_abs_error = 0.0;
    double condition = 0.0;
    double alignment_residual = 0.0;
    std::int64_t symbols = 0;
    std::int64_t slots = 0;
};

struct XchanSweep {
    int num_tx = 2;
    std::vector<XchanTrial> trials;

    int rejected() const;
    bool all_exact() const;  // every non-rejected trial recovered exactly
    double max_abs_error() const;
};

XchanSweep run_xchan_sweep(const SweepConfig& cfg);

struct Ic3Sweep {
    std::vector<XchanTrial> trials;

    int rejected() const;
    bool all_exact() const;
    double max_abs_error() const;
};

Ic3Sweep run_ic3_sweep(const SweepConfig& cfg);

/// "%.12g".
std::string format_decimal(double x);

Table ergodic_table(const ErgodicReport& report);
Table xchan_table(const XchanSweep& sweep);
Table ic3_table(const Ic3Sweep& sweep);
Table gap_table(std::span<const double> grid_db, std::uint64_t seed);

void write_csv(const Table& table, std::ostream& out);
/// Throws std::runtime_error when the file cannot be written.
void emit_csv(const Table& table, const std::string& path);

/// Single object: {"config": ..., "results": [...], "provenance": {...}}.
std::string table_to_json(const Table& table, const SweepConfig& cfg);
void emit_json(const Table& table, const SweepConfig& cfg, const std::string& path);

std::string version();

}  // namespace stia
