#include <doctest.h>

#include <cmath>

#include "stia/errors.hpp"
#include "stia/rng.hpp"
#include "stia/schedule.hpp"
#include "stia/xchannel.hpp"

using namespace stia;

namespace {

struct Setup {
    SlotSchedule schedule;
    FeedbackConfig cfg;
    ChannelTensor tensor;

    Setup(int k, int n, std::uint64_t seed)
        : schedule(build_schedule(k, n)),
          cfg(schedule.feedback()),
          tensor(generate_channels(seed, 2, k, schedule.num_blocks())) {}
};

SymbolVector scaled(const SymbolVector& s, cplx a) {
    SymbolVector out = s;
    for (cplx& x : out.symbols) x *= a;
    return out;
}

SymbolVector zeros(int rx, int k) { return {rx, std::vector<cplx>(static_cast<std::size_t>(k))}; }

SymbolVector unit(int rx, int k, int which) {
    SymbolVector s = zeros(rx, k);
    s.symbols[static_cast<std::size_t>(which)] = 1.0;
    return s;
}

}  // namespace

TEST_CASE("phase one sends the raw symbols") {
    const SymbolVector s1{1, {cplx(1, 2), cplx(3, 4)}};
    const SymbolVector s2{2, {cplx(5, 6), cplx(7, 8)}};
    const PhaseOneSignals p = phase_one_signals(s1, s2);
    CHECK(p.at_t1 == s1.symbols);
    CHECK(p.at_t2 == s2.symbols);

    const PhaseOneSignals z = phase_one_signals(zeros(1, 5), zeros(2, 5));
    CHECK(z.at_t1.size() == 5);
    for (cplx x : z.at_t1) CHECK(x == cplx(0.0, 0.0));
    CHECK_THROWS_AS(phase_one_signals(zeros(1, 2), zeros(2, 3)), std::invalid_argument);
}

TEST_CASE("precoders of the 2x2 example are the documented gain ratios") {
    const Setup s(2, 3, 21);
    const IndexSet& g = s.schedule.groups[0];  // {1, 4, 9}
    const RoundResult r = simulate_round(s.tensor, s.cfg, g, random_symbols(1, 2, 21, 0),
                                         random_symbols(2, 2, 21, 0), NoiseModel::noiseless(), 21);
    auto h = [&](int rx, int tx, int slot) { return gain_at(s.tensor, s.cfg, rx, tx, slot); };
    for (int k = 1; k <= 2; ++k) {
        CHECK(r.precoders.v(1, k, 9) == h(2, k, 1) / h(2, k, 9));
        CHECK(r.precoders.v(2, k, 9) == h(1, k, 4) / h(1, k, 9));
    }
    CHECK_THROWS_AS(r.precoders.v(1, 1, 8), std::invalid_argument);
}

TEST_CASE("constant channel gives unit precoders") {
    const int k = 3;
    const SlotSchedule sched = build_schedule(k, 2);
    std::vector<cplx> g(static_cast<std::size_t>(2 * k * sched.num_blocks()), cplx(0.6, -0.8));
    const ChannelTensor t(2, k, sched.num_blocks(), g);
    const RoundResult r = simulate_round(t, sched.feedback(), sched.groups[1], random_symbols(1, k, 1, 0),
                                         random_symbols(2, k, 1, 0), NoiseModel::noiseless(), 1);
    for (int slot : r.precoders.slots) {
        for (int tx = 1; tx <= k; ++tx) {
            CHECK(std::abs(r.precoders.v(1, tx, slot) - 1.0) < 1e-15);
            CHECK(std::abs(r.precoders.v(2, tx, slot) - 1.0) < 1e-15);
        }
    }
}

TEST_CASE("alignment identity holds by direct substitution") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const Setup s(3, 2, seed);
        for (const IndexSet& g : s.schedule.groups) {
            const RoundResult r = simulate_round(s.tensor, s.cfg, g, random_symbols(1, 3, seed, 0),
                                                 random_symbols(2, 3, seed, 0),
                                                 NoiseModel::noiseless(), seed);
            for (std::size_t j = 2; j < g.size(); ++j) {
                for (int k = 1; k <= 3; ++k) {
                    const cplx h2n = gain_at(s.tensor, s.cfg, 2, k, g[j]);
                    const cplx h2t1 = gain_at(s.tensor, s.cfg, 2, k, g[0]);
                    const cplx h1n = gain_at(s.tensor, s.cfg, 1, k, g[j]);
                    const cplx h1t2 = gain_at(s.tensor, s.cfg, 1, k, g[1]);
                    CHECK(std::abs(h2n * r.precoders.v(1, k, g[j]) - h2t1) <= 1e-12 * std::abs(h2t1));
                    CHECK(std::abs(h1n * r.precoders.v(2, k, g[j]) - h1t2) <= 1e-12 * std::abs(h1t2));
                }
            }
            CHECK(alignment_residual(s.tensor, s.cfg, g, r.precoders) <= 1e-12);
        }
    }
}

TEST_CASE("phase-two signal is the two-stream superposition") {
    PrecoderSet p;
    p.slots = {9};
    p.stream1 = {{cplx(1, 0), cplx(1, 0)}};
    p.stream2 = {{cplx(1, 0), cplx(1, 0)}};
    const SymbolVector ones1{1, {1.0, 1.0}};
    const SymbolVector ones2{2, {1.0, 1.0}};
    for (cplx x : transmit_phase_two(p, ones1, ones2, 9)) CHECK(x == cplx(2.0, 0.0));

    p.stream1 = {{cplx(0.5, 1), cplx(-2, 0.25)}};
    p.stream2 = {{cplx(3, -1), cplx(0, 1)}};
    const SymbolVector s1{1, {cplx(1, 1), cplx(0, -2)}};
    const SymbolVector s2{2, {cplx(2, 0), cplx(-1, 1)}};
    const auto x = transmit_phase_two(p, s1, s2, 9);
    CHECK(x[0] == p.stream1[0][0] * s1.symbols[0] + p.stream2[0][0] * s2.symbols[0]);
    CHECK(x[1] == p.stream1[0][1] * s1.symbols[1] + p.stream2[0][1] * s2.symbols[1]);
    const auto only1 = transmit_phase_two(p, s1, zeros(2, 2), 9);
    CHECK(only1[0] == p.stream1[0][0] * s1.symbols[0]);
}

TEST_CASE("receiver 1 at slot 9 sees its own combination plus the slot-4 interference") {
    const Setup s(2, 3, 5);
    const IndexSet& g = s.schedule.groups[0];
    const SymbolVector s1 = random_symbols(1, 2, 5, 0);
    const SymbolVector s2 = random_symbols(2, 2, 5, 0);
    const RoundResult r = simulate_round(s.tensor, s.cfg, g, s1, s2, NoiseModel::noiseless(), 5);
    auto h = [&](int rx, int tx, int slot) { return gain_at(s.tensor, s.cfg, rx, tx, slot); };
    const cplx l1_9 = h(1, 1, 9) * r.precoders.v(1, 1, 9) * s1.symbols[0] +
                      h(1, 2, 9) * r.precoders.v(1, 2, 9) * s1.symbols[1];
    const cplx l1_4 = h(1, 1, 4) * s2.symbols[0] + h(1, 2, 4) * s2.symbols[1];
    CHECK(std::abs(r.rx1.at(9) - (l1_9 + l1_4)) < 1e-12);
    CHECK(std::abs(r.rx1.at(4) - l1_4) < 1e-15);
}

TEST_CASE("noiseless tapes are linear in the symbols") {
    const Setup s(4, 2, 8);
    const IndexSet& g = s.schedule.groups[1];
    const SymbolVector s1 = random_symbols(1, 4, 8, 1);
    const SymbolVector s2 = random_symbols(2, 4, 8, 1);
    const cplx alpha(0.7, -1.3);
    const RoundResult a = simulate_round(s.tensor, s.cfg, g, s1, s2, NoiseModel::noiseless(), 8);
    const RoundResult b = simulate_round(s.tensor, s.cfg, g, scaled(s1, alpha), scaled(s2, alpha),
                                         NoiseModel::noiseless(), 8);
    const RoundResult z = simulate_round(s.tensor, s.cfg, g, zeros(1, 4), zeros(2, 4),
                                         NoiseModel::noiseless(), 8);
    for (int t : g) {
        CHECK(std::abs(b.rx1.at(t) - alpha * a.rx1.at(t)) < 1e-12);
        CHECK(std::abs(b.rx2.at(t) - alpha * a.rx2.at(t)) < 1e-12);
        CHECK(z.rx1.at(t) == cplx(0.0, 0.0));
        CHECK(z.rx2.at(t) == cplx(0.0, 0.0));
    }
}

TEST_CASE("aligned cancellation removes the other stream") {
    const int k = 4;
    const Setup s(k, 3, 13);
    const IndexSet& g = s.schedule.groups[2];
    // Probe with unit symbols on the unwanted stream only.
    for (int which = 0; which < k; ++which) {
        const RoundResult r1 = simulate_round(s.tensor, s.cfg, g, zeros(1, k), unit(2, k, which),
                                              NoiseModel::noiseless(), 13);
        const auto e1 = align_cancel(r1.rx1, g, 1);
        for (std::size_t j = 1; j < e1.size(); ++j) CHECK(std::abs(e1[j]) < 1e-10);
        CHECK(e1[0] == cplx(0.0, 0.0));

        const RoundResult r2 = simulate_round(s.tensor, s.cfg, g, unit(1, k, which), zeros(2, k),
                                              NoiseModel::noiseless(), 13);
        const auto e2 = align_cancel(r2.rx2, g, 2);
        for (std::size_t j = 1; j < e2.size(); ++j) CHECK(std::abs(e2[j]) < 1e-10);
    }
}

TEST_CASE("align_cancel needs every group slot") {
    ReceiverTape tape;
    tape.observations = {{1, 1.0}, {4, 2.0}};
    CHECK_THROWS_AS(align_cancel(tape, {1, 4, 9}, 1), std::invalid_argument);
    tape.observations[9] = 5.0;
    const auto e = align_cancel(tape, {1, 4, 9}, 1);
    CHECK(e[0] == cplx(1.0, 0.0));
    CHECK(e[1] == cplx(3.0, 0.0));
    const auto e2 = align_cancel(tape, {1, 4, 9}, 2);
    CHECK(e2[0] == cplx(2.0, 0.0));
    CHECK(e2[1] == cplx(4.0, 0.0));
}

TEST_CASE("zero forcing inverts the identity and flags singular systems") {
    const std::vector<cplx> s{cplx(1, 2), cplx(-3, 0.5), cplx(0, 1)};
    const DecodeReport r = zf_decode(s, Eigen::MatrixXcd::Identity(3, 3), s);
    CHECK(r.exact_recovery);
    CHECK(r.max_abs_error < 1e-15);
    CHECK(r.effective_condition == doctest::Approx(1.0));

    Eigen::MatrixXcd sing(2, 2);
    sing << 1.0, 2.0, 2.0, 4.0;
    const std::vector<cplx> y{1.0, 2.0};
    CHECK_THROWS_AS(zf_decode(y, sing), SingularMatrixError);

    const DecodeReport untruthed = zf_decode(s, Eigen::MatrixXcd::Identity(3, 3));
    CHECK_FALSE(untruthed.exact_recovery);
}

TEST_CASE("round trip recovers every symbol for K = 2 and K = 8") {
    for (int k : {2, 8}) {
        const Setup s(k, 2, 30 + static_cast<std::uint64_t>(k));
        for (std::size_t gi = 0; gi < s.schedule.groups.size(); ++gi) {
            const IndexSet& g = s.schedule.groups[gi];
            const SymbolVector s1 = random_symbols(1, k, 1, gi);
            const SymbolVector s2 = random_symbols(2, k, 1, gi);
            const RoundResult r = simulate_round(s.tensor, s.cfg, g, s1, s2, NoiseModel::noiseless(), 1);
            const DecodeReport d1 = zf_decode(align_cancel(r.rx1, g, 1),
                                              effective_matrix(s.tensor, s.cfg, g, r.precoders, 1), s1.symbols);
            const DecodeReport d2 = zf_decode(align_cancel(r.rx2, g, 2),
                                              effective_matrix(s.tensor, s.cfg, g, r.precoders, 2), s2.symbols);
            CHECK(d1.exact_recovery);
            CHECK(d2.exact_recovery);
        }
    }
}

TEST_CASE("transmitter precoders ignore the other transmitters' channels") {
    const int k = 3;
    const SlotSchedule sched = build_schedule(k, 2);
    const FeedbackConfig cfg = sched.feedback();
    const ChannelTensor base = generate_channels(1, 2, k, sched.num_blocks());
    std::vector<cplx> g = base.raw();
    for (int b = 1; b <= base.num_blocks(); ++b) {
        for (int rx = 1; rx <= 2; ++rx) {
            for (int tx = 2; tx <= k; ++tx) g[base.index(rx, tx, b)] *= cplx(-1.7, 0.3);
        }
    }
    const ChannelTensor other(2, k, base.num_blocks(), g);
    const auto s1 = random_symbols(1, k, 0, 0);
    const auto s2 = random_symbols(2, k, 0, 0);
    for (const IndexSet& grp : sched.groups) {
        const auto a = simulate_round(base, cfg, grp, s1, s2, NoiseModel::noiseless(), 0).precoders;
        const auto b = simulate_round(other, cfg, grp, s1, s2, NoiseModel::noiseless(), 0).precoders;
        for (std::size_t j = 2; j < grp.size(); ++j) {
            CHECK(a.v(1, 1, grp[j]) == b.v(1, 1, grp[j]));
            CHECK(a.v(2, 1, grp[j]) == b.v(2, 1, grp[j]));
            CHECK(a.v(1, 2, grp[j]) != b.v(1, 2, grp[j]));
        }
    }
}

TEST_CASE("precoding without current CSIT is refused") {
    const Setup s(2, 3, 4);
    const CsitProvider stale = [](const ChannelTensor& t, const FeedbackConfig& cfg, int tx, int slot) {
        // Everything through slot - T_fb, but not the current block.
        const int last = slot - cfg.feedback_slots();
        const int blocks = last < 1 ? 0 : cfg.block_of(last) - (cfg.block_of(last) == cfg.block_of(slot));
        return CsitView(t, cfg, tx, slot, blocks);
    };
    for (const IndexSet& g : s.schedule.groups) {
        CHECK_THROWS_AS(simulate_round(s.tensor, s.cfg, g, random_symbols(1, 2, 0, 0),
                                       random_symbols(2, 2, 0, 0), NoiseModel::noiseless(), 0, stale),
                        PreconditionViolation);
    }
}

TEST_CASE("run_xchannel slot accounting") {
    const XchannelRunReport r = run_xchannel(2, 3, NoiseModel::noiseless(), 3);
    CHECK(r.accounting.symbols_delivered == 18);
    CHECK(r.accounting.slots_used == 15);
    CHECK(r.accounting.ratio() == Rational(6, 5));
    CHECK(r.decode.exact_recovery);
    CHECK(r.groups_decoded == 3);

    const XchannelRunReport big = run_xchannel(2, 3, NoiseModel::noiseless(), 10000);
    CHECK(std::abs(to_double(big.accounting.ratio()) - 4.0 / 3.0) < 1e-3);
    CHECK(big.decode.exact_recovery);
}

TEST_CASE("noiseless exact recovery for K = 2..6") {
    for (int k = 2; k <= 6; ++k) {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const XchannelRunReport r = run_xchannel(k, seed, NoiseModel::noiseless(), 3);
            CHECK(r.rejected_groups == 0);
            CHECK(r.decode.exact_recovery);
            CHECK(r.decode.max_abs_error < 1e-9);
            CHECK(std::isfinite(r.decode.effective_condition));
        }
    }
}

TEST_CASE("noise makes recovery inexact but bounded") {
    const XchannelRunReport r = run_xchannel(2, 3, NoiseModel::gaussian(1e-6), 3);
    CHECK_FALSE(r.decode.exact_recovery);
    CHECK(r.decode.max_abs_error < 1.0);
}
