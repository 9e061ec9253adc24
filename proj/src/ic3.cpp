// Copyright 2026 The STIA Authors
// SPDX-License-Identifier: Apache-2.0

#include "stia/ic3.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "stia/errors.hpp"
#include "stia/linalg.hpp"
#include "stia/rng.hpp"

namespace stia {

std::array<cplx, 2> Ic3SymbolSet::desired(int rx) const {
    switch (rx) {
        case 1: return {a1, a2};
        case 2: return {b1, b2};
        case 3: return {c1, c2};
        default: throw std::invalid_argument("receiver must be 1..3");
    }
}

std::array<Ic3SlotSignal, 3> ic3_phase_one(const Ic3SymbolSet& s) {
    return {{
        {s.a1, s.b1, cplx{}},
        {s.a2, cplx{}, s.c1},
        {cplx{}, s.b2, s.c2},
    }};
}

FeedbackConfig ic3_feedback() { return {5, 3}; }

int ic3_physical_slot(const FeedbackConfig& cfg, int protocol_slot) {
    if (protocol_slot < 1 || protocol_slot > 5) {
        throw std::invalid_argument("protocol slot must be 1..5");
    }
    if (cfg.feedback_slots() >= cfg.coherence_slots()) {
        throw std::invalid_argument("the 3-user protocol needs T_fb < T_c");
    }
    return cfg.first_slot(protocol_slot) + cfg.feedback_slots();
}

namespace {

// h_{rx,k}[p] / h_{rx,k}[q] from transmitter k's own view.
cplx local_ratio(const CsitView& view, const FeedbackConfig& cfg, int rx, int num_p, int den_p) {
    const cplx den = view.gain(rx, ic3_physical_slot(cfg, den_p));
    if (std::abs(den) < kMinGainMagnitude) {
        throw PreconditionViolation("transmitter " + std::to_string(view.tx_index()) +
                                    ": gain below the floor at protocol slot " +
                                    std::to_string(den_p));
    }
    return view.gain(rx, ic3_physical_slot(cfg, num_p)) / den;
}

}  // namespace

Ic3Precoders ic3_phase_two(std::span<const CsitViews> views_per_slot, const FeedbackConfig& cfg) {
    if (views_per_slot.size() != 2) {
        throw std::invalid_argument("ic3_phase_two: need views for protocol slots 4 and 5");
    }
    for (std::size_t j = 0; j < 2; ++j) {
        const CsitViews& views = views_per_slot[j];
        if (views.size() != 3) throw std::invalid_argument("ic3_phase_two: need 3 views per slot");
        for (int k = 0; k < 3; ++k) {
            const CsitView& v = views[static_cast<std::size_t>(k)];
            if (v.tx_index() != k + 1 ||
                v.as_of_slot() != ic3_physical_slot(cfg, static_cast<int>(j) + 4)) {
                throw std::invalid_argument("ic3_phase_two: views must be ordered by transmitter "
                                            "and taken at the precoded slot");
            }
            if (v.num_rx() != 3) throw std::invalid_argument("ic3_phase_two: 3 receivers required");
        }
    }
    const CsitViews& at4 = views_per_slot[0];
    const CsitViews& at5 = views_per_slot[1];

    Ic3Precoders v;
    // Slot 4: receiver 3 sees (a1, b1) as in slot 1, receiver 2 sees (a2, c1)
    // as in slot 2.
    v.va1_4 = local_ratio(at4[0], cfg, 3, 1, 4);
    v.va2_4 = local_ratio(at4[0], cfg, 2, 2, 4);
    v.vb1_4 = local_ratio(at4[1], cfg, 3, 1, 4);
    v.vc1_4 = local_ratio(at4[2], cfg, 2, 2, 4);
    // Slot 5: receiver 3 sees (a1, b1) as in slot 1, receiver 1 sees (b2, c2)
    // as in slot 3.
    v.vb1_5 = local_ratio(at5[1], cfg, 3, 1, 5);
    v.vb2_5 = local_ratio(at5[1], cfg, 1, 3, 5);
    v.va1_5 = local_ratio(at5[0], cfg, 3, 1, 5);
    v.vc2_5 = local_ratio(at5[2], cfg, 1, 3, 5);
    return v;
}

std::array<Ic3SlotSignal, 2> ic3_phase_two_signals(const Ic3Precoders& v, const Ic3SymbolSet& s) {
    return {{
        {v.va1_4 * s.a1 + v.va2_4 * s.a2, v.vb1_4 * s.b1, v.vc1_4 * s.c1},
        {v.va1_5 * s.a1, v.vb1_5 * s.b1 + v.vb2_5 * s.b2, v.vc2_5 * s.c2},
    }};
}

Ic3Gains ic3_gains(const ChannelTensor& tensor, const FeedbackConfig& cfg) {
    if (tensor.num_rx() != 3 || tensor.num_tx() != 3) {
        throw std::invalid_argument("3-user channel tensor must be 3 x 3");
    }
    Ic3Gains g;
    for (int p = 1; p <= 5; ++p) {
        const int slot = ic3_physical_slot(cfg, p);
        for (int rx = 1; rx <= 3; ++rx) {
            for (int tx = 1; tx <= 3; ++tx) g(rx, tx, p) = gain_at(tensor, cfg, rx, tx, slot);
        }
    }
    return g;
}

Ic3Round ic3_simulate(const ChannelTensor& tensor, const FeedbackConfig& cfg,
                      const Ic3SymbolSet& symbols, const NoiseModel& noise, std::uint64_t seed,
                      const CsitProvider& provider) {
    if (cfg.block_of(ic3_physical_slot(cfg, 5)) > tensor.num_blocks()) {
        throw std::invalid_argument("ic3_simulate: tensor needs at least 5 blocks");
    }
    Ic3Round round;
    round.gains = ic3_gains(tensor, cfg);

    std::vector<CsitViews> views(2);
    for (int j = 0; j < 2; ++j) {
        const int slot = ic3_physical_slot(cfg, j + 4);
        for (int k = 1; k <= 3; ++k) {
            views[static_cast<std::size_t>(j)].push_back(
                provider ? provider(tensor, cfg, k, slot) : csit_view(tensor, cfg, k, slot));
        }
    }
    round.precoders = ic3_phase_two(views, cfg);

    const auto p1 = ic3_phase_one(symbols);
    const auto p2 = ic3_phase_two_signals(round.precoders, symbols);
    for (int rx = 1; rx <= 3; ++rx) {
        ReceiverTape& tape = round.tapes[static_cast<std::size_t>(rx - 1)];
        tape.rx_index = rx;
        for (int p = 1; p <= 5; ++p) {
            const Ic3SlotSignal& x = p <= 3 ? p1[static_cast<std::size_t>(p - 1)]
                                            : p2[static_cast<std::size_t>(p - 4)];
            cplx y = noise_sample(noise, seed, rx, ic3_physical_slot(cfg, p));
            for (int k = 1; k <= 3; ++k) y += round.gains(rx, k, p) * x[static_cast<std::size_t>(k - 1)];
            tape.observations[p] = y;
        }
    }
    return round;
}

double ic3_alignment_residual(const Ic3Gains& g, const Ic3Precoders& v) {
    auto rel = [](cplx got, cplx want) { return std::abs(got - want) / std::abs(want); };
    return std::max({
        rel(v.va1_4 * g(3, 1, 4), g(3, 1, 1)),
        rel(v.va2_4 * g(2, 1, 4), g(2, 1, 2)),
        rel(v.vb1_4 * g(3, 2, 4), g(3, 2, 1)),
        rel(v.vc1_4 * g(2, 3, 4), g(2, 3, 2)),
        rel(v.vb1_5 * g(3, 2, 5), g(3, 2, 1)),
        rel(v.vb2_5 * g(1, 2, 5), g(1, 2, 3)),
        rel(v.va1_5 * g(3, 1, 5), g(3, 1, 1)),
        rel(v.vc2_5 * g(1, 3, 5), g(1, 3, 3)),
    });
}

namespace {

struct Solve2 {
    std::array<cplx, 2> x;
    double condition;
};

Solve2 solve2(cplx r0c0, cplx r0c1, cplx y0, cplx r1c0, cplx r1c1, cplx y1) {
    Eigen::MatrixXcd m(2, 2);
    m << r0c0, r0c1, r1c0, r1c1;
    Eigen::VectorXcd rhs(2);
    rhs << y0, y1;
    double cond = 0.0;
    const Eigen::VectorXcd x = checked_solve(m, rhs, kMaxCondition, &cond);
    return {{x(0), x(1)}, cond};
}

}  // namespace

Ic3DecodeReport ic3_decode(const std::array<ReceiverTape, 3>& tapes, const Ic3Genie& genie,
                           const Ic3SymbolSet* truth) {
    const Ic3Gains& g = genie.gains;
    const Ic3Precoders& v = genie.precoders;
    Ic3DecodeReport report;
    using K = DecodeStep::Kind;
    auto log = [&report](int rx, K kind, std::vector<int> slots, std::string note) {
        report.transcripts[static_cast<std::size_t>(rx - 1)].push_back(
            {kind, rx, std::move(slots), std::move(note)});
    };
    auto worst = [&report](double c) { report.worst_condition = std::max(report.worst_condition, c); };

    {  // receiver 1
        const ReceiverTape& y = tapes[0];
        const cplx e = y.at(5) - y.at(3);
        log(1, K::subtract, {5, 3}, "y[5] - y[3] -> L1[5](a1,b1)");
        const Solve2 ab = solve2(g(1, 1, 1), g(1, 2, 1), y.at(1),
                                 g(1, 1, 5) * v.va1_5, g(1, 2, 5) * v.vb1_5, e);
        log(1, K::solve, {1}, "y[1] + L1[5] -> (a1, b1)");
        worst(ab.condition);
        const cplx r = y.at(4) - (g(1, 1, 4) * v.va1_4 * ab.x[0] + g(1, 2, 4) * v.vb1_4 * ab.x[1]);
        log(1, K::reconstruct_subtract, {4}, "y[4] - L1[4](a1,b1) -> L1[4](a2,c1)");
        const Solve2 ac = solve2(g(1, 1, 2), g(1, 3, 2), y.at(2),
                                 g(1, 1, 4) * v.va2_4, g(1, 3, 4) * v.vc1_4, r);
        log(1, K::solve, {2}, "y[2] + L1[4] -> (a2, c1)");
        worst(ac.condition);
        report.desired[0] = {ab.x[0], ac.x[0]};
    }
    {  // receiver 2
        const ReceiverTape& y = tapes[1];
        const cplx e = y.at(4) - y.at(2);
        log(2, K::subtract, {4, 2}, "y[4] - y[2] -> L2[4](a1,b1)");
        const Solve2 ab = solve2(g(2, 1, 1), g(2, 2, 1), y.at(1),
                                 g(2, 1, 4) * v.va1_4, g(2, 2, 4) * v.vb1_4, e);
        log(2, K::solve, {1}, "y[1] + L2[4] -> (a1, b1)");
        worst(ab.condition);
        const cplx r = y.at(5) - (g(2, 1, 5) * v.va1_5 * ab.x[0] + g(2, 2, 5) * v.vb1_5 * ab.x[1]);
        log(2, K::reconstruct_subtract, {5}, "y[5] - L2[5](a1,b1) -> L2[5](b2,c2)");
        const Solve2 bc = solve2(g(2, 2, 3), g(2, 3, 3), y.at(3),
                                 g(2, 2, 5) * v.vb2_5, g(2, 3, 5) * v.vc2_5, r);
        log(2, K::solve, {3}, "y[3] + L2[5] -> (b2, c2)");
        worst(bc.condition);
        report.desired[1] = {ab.x[1], bc.x[0]};
    }
    {  // receiver 3
        const ReceiverTape& y = tapes[2];
        const cplx e5 = y.at(5) - y.at(1);
        log(3, K::subtract, {5, 1}, "y[5] - y[1] -> L3[5](b2,c2)");
        const Solve2 bc = solve2(g(3, 2, 3), g(3, 3, 3), y.at(3),
                                 g(3, 2, 5) * v.vb2_5, g(3, 3, 5) * v.vc2_5, e5);
        log(3, K::solve, {3}, "y[3] + L3[5] -> (b2, c2)");
        worst(bc.condition);
        const cplx e4 = y.at(4) - y.at(1);
        log(3, K::subtract, {4, 1}, "y[4] - y[1] -> L3[4](a2,c1)");
        const Solve2 ac = solve2(g(3, 1, 2), g(3, 3, 2), y.at(2),
                                 g(3, 1, 4) * v.va2_4, g(3, 3, 4) * v.vc1_4, e4);
        log(3, K::solve, {2}, "y[2] + L3[4] -> (a2, c1)");
        worst(ac.condition);
        report.desired[2] = {ac.x[1], bc.x[1]};
    }

    if (truth) {
        for (int rx = 1; rx <= 3; ++rx) {
            const auto want = truth->desired(rx);
            const auto& got = report.desired[static_cast<std::size_t>(rx - 1)];
            for (std::size_t i = 0; i < 2; ++i) {
                report.max_abs_error = std::max(report.max_abs_error, std::abs(got[i] - want[i]));
            }
        }
        report.exact_recovery = report.max_abs_error < kExactRecoveryTol;
    }
    return report;
}

Ic3SymbolSet random_ic3_symbols(std::uint64_t seed) {
    CounterRng rng(seed, {tag(Stream::symbols), 3});
    Ic3SymbolSet s;
    for (cplx* p : {&s.a1, &s.a2, &s.b1, &s.b2, &s.c1, &s.c2}) *p = rng.unit_phase();
    return s;
}

Ic3RunReport run_ic3(std::uint64_t seed, const NoiseModel& noise) {
    const FeedbackConfig cfg = ic3_feedback();
    const ChannelTensor tensor = generate_channels(seed, 3, 3, 5);
    const Ic3SymbolSet symbols = random_ic3_symbols(seed);
    Ic3RunReport report;
    report.accounting.slots_used = 5;
    const Ic3Round round = ic3_simulate(tensor, cfg, symbols, noise, seed);
    report.alignment_residual = ic3_alignment_residual(round.gains, round.precoders);
    try {
        report.decode = ic3_decode(round.tapes, {round.gains, round.precoders}, &symbols);
        report.accounting.symbols_delivered = 6;
    } catch (const SingularMatrixError& e) {
        report.rejected = true;
        report.rejection = std::string("seed ") + std::to_string(seed) + ": " + e.what();
    }
    return report;
}

}  // namespace stia
