// Copyright 2026 The STIA Authors
// SPDX-License-Identifier: Apache-2.0

#include "stia/rates.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "stia/errors.hpp"
#include "stia/linalg.hpp"
#include "stia/rng.hpp"

namespace stia {

namespace {

constexpr double kPowerCondition = 1e10;

double log2_1p(double x) { return std::log1p(x) / std::numbers::ln2; }

double log2_det_hpd(const Eigen::Matrix2cd& a) {
    Eigen::LLT<Eigen::Matrix2cd> llt(a);
    if (llt.info() != Eigen::Success) {
        throw NumericError("rate matrix is not positive definite");
    }
    const Eigen::Matrix2cd& l = llt.matrixLLT();
    const double out = 2.0 * (std::log2(l(0, 0).real()) + std::log2(l(1, 1).real()));
    if (!std::isfinite(out)) throw NumericError("non-finite log-determinant");
    return out;
}

}  // namespace

SnrConfig::SnrConfig(double power, double noise_variance)
    : transmit_power(power), noise_variance(noise_variance) {
    if (!(power > 0.0) || !(noise_variance > 0.0)) {
        throw std::invalid_argument("SnrConfig: power and noise variance must be > 0");
    }
}

SnrConfig SnrConfig::from_db(double snr_db) { return {std::pow(10.0, snr_db / 10.0), 1.0}; }

X2SlotGains rayleigh_slot_gains(std::uint64_t seed) {
    const ChannelTensor t = generate_channels(seed, 2, 2, 3);
    X2SlotGains g;
    for (int s = 1; s <= 3; ++s) {
        for (int rx = 1; rx <= 2; ++rx) {
            for (int tx = 1; tx <= 2; ++tx) {
                g.slot[static_cast<std::size_t>(s - 1)](rx - 1, tx - 1) = t.gain(rx, tx, s);
            }
        }
    }
    return g;
}

Eigen::Matrix2d power_constraint_matrix(const X2SlotGains& g) {
    auto sq = [](cplx z) { return std::norm(z); };
    Eigen::Matrix2d m;
    m << sq(g.h(2, 1, 1) / g.h(2, 1, 3)), sq(g.h(1, 1, 2) / g.h(1, 1, 3)),
         sq(g.h(2, 2, 1) / g.h(2, 2, 3)), sq(g.h(1, 2, 2) / g.h(1, 2, 3));
    return m;
}

std::array<double, 2> power_constraint_rows(const X2SlotGains& g, double p1, double p2) {
    const Eigen::Matrix2d m = power_constraint_matrix(g);
    const Eigen::Vector2d rows = m * Eigen::Vector2d(p1, p2);
    return {rows(0), rows(1)};
}

PowerAllocation solve_power(const X2SlotGains& g) {
    const Eigen::Matrix2d m = power_constraint_matrix(g);
    PowerAllocation out;
    if (condition_number(Eigen::MatrixXd(m)) <= kPowerCondition) {
        const Eigen::Vector2d p = m.colPivHouseholderQr().solve(Eigen::Vector2d::Ones());
        if (p(0) > 0.0 && p(1) > 0.0 && std::isfinite(p(0)) && std::isfinite(p(1))) {
            out.p1 = p(0);
            out.p2 = p(1);
            out.method = PowerMethod::equality_solve;
            out.feasible = true;
            return out;
        }
    }
    const double p = 1.0 / std::max(m.row(0).sum(), m.row(1).sum());
    out.p1 = p;
    out.p2 = p;
    out.method = PowerMethod::symmetric_fallback;
    out.feasible = p > 0.0 && std::isfinite(p);
    return out;
}

std::array<Eigen::Matrix2cd, 2> effective_matrices(const X2SlotGains& g) {
    Eigen::Matrix2cd h1;
    h1 << g.h(1, 1, 1), g.h(1, 2, 1),
          g.h(1, 1, 3) * g.h(2, 1, 1) / g.h(2, 1, 3), g.h(1, 2, 3) * g.h(2, 2, 1) / g.h(2, 2, 3);
    Eigen::Matrix2cd h2;
    h2 << g.h(2, 1, 2), g.h(2, 2, 2),
          g.h(2, 1, 3) * g.h(1, 1, 2) / g.h(1, 1, 3), g.h(2, 2, 3) * g.h(1, 2, 2) / g.h(1, 2, 3);
    return {h1, h2};
}

RateModel achievable_sum_rate(const X2SlotGains& g, const SnrConfig& snr) {
    RateModel model;
    model.power = solve_power(g);
    if (!model.power.feasible) throw NumericError("no feasible power allocation");
    const auto [h1, h2] = effective_matrices(g);
    model.H1 = h1;
    model.H2 = h2;

    const double s2 = snr.noise_variance;
    model.Z1 << s2, 0.0, 0.0, s2 * (1.0 + 1.0 / model.power.p1);
    model.Z2 << s2, 0.0, 0.0, s2 * (1.0 + 1.0 / model.power.p2);

    auto term = [&snr](const Eigen::Matrix2cd& h, const Eigen::Matrix2d& z) {
        const Eigen::Matrix2cd zinv = z.inverse().cast<cplx>();
        const Eigen::Matrix2cd a =
            Eigen::Matrix2cd::Identity() + snr.transmit_power * h * zinv * h.adjoint();
        return log2_det_hpd(a);
    };
    const double r1 = term(model.H1, model.Z1);
    const double r2 = term(model.H2, model.Z2);
    model.sum_rate = (r1 + r2) / 3.0;
    model.per_message = {r1 / 6.0, r1 / 6.0, r2 / 6.0, r2 / 6.0};
    return model;
}

std::array<double, 4> outer_bounds(const Eigen::Matrix2cd& h, const SnrConfig& snr) {
    const double P = snr.transmit_power;
    const double s2 = snr.noise_variance;
    const double h11 = std::norm(h(0, 0));
    const double h12 = std::norm(h(0, 1));
    const double h21 = std::norm(h(1, 0));
    const double h22 = std::norm(h(1, 1));
    const double rx1 = log2_1p((h11 + h12) * P / s2);
    const double rx2 = log2_1p((h22 + h21) * P / s2);
    return {
        rx1 + log2_1p(h22 * P / (s2 + h12 * P)),  // R11 + R12 + R22
        rx2 + log2_1p(h11 * P / (s2 + h21 * P)),  // R22 + R11 + R21
        rx1 + log2_1p(h21 * P / (s2 + h11 * P)),  // R11 + R12 + R21
        rx2 + log2_1p(h12 * P / (s2 + h22 * P)),  // R22 + R21 + R12
    };
}

double sum_rate_outer(const Eigen::Matrix2cd& h, const SnrConfig& snr) {
    const auto b = outer_bounds(h, snr);
    return (b[0] + b[1] + b[2] + b[3]) / 3.0;
}

double tdma_rate(const Eigen::Matrix2cd& h, const SnrConfig& snr) {
    double sum = 0.0;
    for (int i = 0; i < 4; ++i) sum += log2_1p(snr.snr() * std::norm(h(i / 2, i % 2)));
    return sum / 4.0;
}

PhaseFadingInstance phase_fading_orthogonal(std::uint64_t seed) {
    // With slot labels whose differences t3 - t1 and t3 - t2 are odd, picking
    // (theta11 - theta21) - (theta12 - theta22) = pi makes the two row
    // products of each effective matrix cancel exactly.
    CounterRng rng(seed, {tag(Stream::phases)});
    const double two_pi = 2.0 * std::numbers::pi;
    PhaseFadingInstance inst;
    inst.slot_labels = {1, 3, 4};
    const double t21 = two_pi * rng.uniform();
    const double t12 = two_pi * rng.uniform();
    const double t22 = two_pi * rng.uniform();
    inst.theta << t21 + t12 - t22 + std::numbers::pi, t12, t21, t22;

    for (std::size_t s = 0; s < 3; ++s) {
        const double t = inst.slot_labels[s];
        for (int rx = 0; rx < 2; ++rx) {
            for (int tx = 0; tx < 2; ++tx) {
                inst.gains.slot[s](rx, tx) = std::polar(1.0, -t * inst.theta(rx, tx));
            }
        }
    }

    for (const Eigen::Matrix2cd& h : effective_matrices(inst.gains)) {
        const cplx inner = h.row(0).dot(h.row(1));
        if (std::abs(inner) > 1e-12) {
            throw std::logic_error("phase_fading_orthogonal: rows are not orthogonal");
        }
    }
    return inst;
}

double asymptotic_gap_bound() { return 2.0 / 3.0 * std::log2(3.0) + 4.0 / 3.0; }

GapReport constant_gap(std::span<const double> snr_grid_db, std::uint64_t seed) {
    const PhaseFadingInstance inst = phase_fading_orthogonal(seed);
    GapReport report;
    report.bound = asymptotic_gap_bound();
    for (double db : snr_grid_db) {
        const SnrConfig snr = SnrConfig::from_db(db);
        GapPoint p{db, achievable_sum_rate(inst.gains, snr).sum_rate,
                   sum_rate_outer(inst.gains.slot[0], snr), 0.0};
        p.gap = p.outer - p.achievable;
        report.max_gap = report.points.empty() ? p.gap : std::max(report.max_gap, p.gap);
        report.points.push_back(p);
    }
    report.within_bound = report.max_gap <= report.bound + 1e-6;
    return report;
}

}  // namespace stia
