// Copyright 2026 The STIA Authors
// SPDX-License-Identifier: Apache-2.0

// Finite-SNR sum rate of the 2x2 X-channel scheme, the three-message outer
// bounds, and the phase-fading constant-gap analysis.

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "stia/channel.hpp"

namespace stia {

struct SnrConfig {
    double transmit_power = 1.0;
    double noise_variance = 1.0;

    SnrConfig(double power, double noise_variance);
    static SnrConfig from_db(double snr_db);
    double snr() const noexcept { return transmit_power / noise_variance; }
};

/// 2x2 X-channel gains at the three slots (t_1, t_2, t_3) of one round;
/// slot[t](l-1, k-1) = h_{l,k}[t_{t+1}].
struct X2SlotGains {
    std::array<Eigen::Matrix2cd, 3> slot;

    cplx h(int rx, int tx, int t) const { return slot[static_cast<std::size_t>(t - 1)](rx - 1, tx - 1); }
};

/// Draws the three slots from independent Rayleigh blocks.
X2SlotGains rayleigh_slot_gains(std::uint64_t seed);

enum class PowerMethod { equality_solve, symmetric_fallback };

/// Stream power coefficients; each stream uses the same power at both
/// transmitters so the alignment is preserved.
struct PowerAllocation {
    double p1 = 0.0;
    double p2 = 0.0;
    bool feasible = false;
    PowerMethod method = PowerMethod::equality_solve;
};

/// Rows of M in M (p1, p2)^T <= (1, 1)^T.
Eigen::Matrix2d power_constraint_matrix(const X2SlotGains& g);

/// Transmit power used by transmitters 1 and 2 under (p1, p2).
std::array<double, 2> power_constraint_rows(const X2SlotGains& g, double p1, double p2);

PowerAllocation solve_power(const X2SlotGains& g);

struct RateModel {
    Eigen::Matrix2cd H1;
    Eigen::Matrix2cd H2;
    Eigen::Matrix2d Z1;
    Eigen::Matrix2d Z2;
    PowerAllocation power;
    double sum_rate = 0.0;                   // bits per slot
    std::array<double, 4> per_message{};     // R_{1,1}, R_{1,2}, R_{2,1}, R_{2,2}
};

/// Effective 2x2 matrices seen by receiver 1 (symbols a_1, b_1) and receiver
/// 2 (a_2, b_2) after cancellation.
std::array<Eigen::Matrix2cd, 2> effective_matrices(const X2SlotGains& g);

RateModel achievable_sum_rate(const X2SlotGains& g, const SnrConfig& snr);

/// The four three-message bounds evaluated with the gains of one slot.
std::array<double, 4> outer_bounds(const Eigen::Matrix2cd& h, const SnrConfig& snr);

/// One third of the sum of the four bounds.
double sum_rate_outer(const Eigen::Matrix2cd& h, const SnrConfig& snr);

/// Round-robin single-user transmission over the four messages.
double tdma_rate(const Eigen::Matrix2cd& h, const SnrConfig& snr);

/// Unit-modulus gains h = exp(-j t theta) at slot labels t whose effective
/// matrices have orthogonal rows.
struct PhaseFadingInstance {
    X2SlotGains gains;
    std::array<int, 3> slot_labels{};
    Eigen::Matrix2d theta;
};

PhaseFadingInstance phase_fading_orthogonal(std::uint64_t seed);

struct GapPoint {
    double snr_db;
    double achievable;
    double outer;
    double gap;
};

struct GapReport {
    std::vector<GapPoint> points;
    double max_gap = 0.0;
    /// (2/3) log2 3 + 4/3.
    double bound = 0.0;
    bool within_bound = false;
};

/// Upper limit on the phase-fading gap, approached as SNR grows.
double asymptotic_gap_bound();

GapReport constant_gap(std::span<const double> snr_grid_db, std::uint64_t seed = 0);

}  // namespace stia
