#include <doctest.h>

#include <cmath>
#include <numbers>

#include "stia/channel.hpp"
#include "stia/errors.hpp"
#include "stia/rng.hpp"

using namespace stia;

TEST_CASE("feedback config derives lambda exactly") {
    const FeedbackConfig cfg(3, 2);
    CHECK(cfg.normalized_delay() == Rational(2, 3));
    CHECK(FeedbackConfig(5, 3).normalized_delay() == Rational(3, 5));
    CHECK(cfg.block_of(1) == 1);
    CHECK(cfg.block_of(3) == 1);
    CHECK(cfg.block_of(4) == 2);
    CHECK(cfg.first_slot(3) == 7);
    CHECK_THROWS_AS(FeedbackConfig(0, 0), std::invalid_argument);
    CHECK_THROWS_AS(FeedbackConfig(3, -1), std::invalid_argument);
    CHECK_THROWS_AS(cfg.block_of(0), std::invalid_argument);
}

TEST_CASE("rayleigh generation is deterministic per seed") {
    const ChannelTensor a = generate_channels(7, 2, 2, 3);
    const ChannelTensor b = generate_channels(7, 2, 2, 3);
    const ChannelTensor c = generate_channels(8, 2, 2, 3);
    CHECK(a == b);
    CHECK_FALSE(a == c);
    CHECK(a.num_rx() == 2);
    CHECK(a.num_tx() == 2);
    CHECK(a.num_blocks() == 3);
    for (const cplx& h : a.raw()) CHECK(std::abs(h) >= kMinGainMagnitude);
}

TEST_CASE("rayleigh gains have unit mean power over a million blocks") {
    const int blocks = 1'000'000;
    const ChannelTensor t = generate_channels(7, 2, 3, blocks);
    for (int rx = 1; rx <= 2; ++rx) {
        for (int tx = 1; tx <= 3; ++tx) {
            double sum = 0.0;
            for (int b = 1; b <= blocks; ++b) sum += std::norm(t.gain(rx, tx, b));
            const double mean = sum / blocks;
            CHECK(mean >= 0.99);
            CHECK(mean <= 1.01);
        }
    }
}

TEST_CASE("rayleigh gains are circularly symmetric") {
    const ChannelTensor t = generate_channels(11, 1, 1, 200'000);
    double re = 0.0, im = 0.0, cross = 0.0;
    for (const cplx& h : t.raw()) {
        re += h.real() * h.real();
        im += h.imag() * h.imag();
        cross += h.real() * h.imag();
    }
    const double n = static_cast<double>(t.raw().size());
    CHECK(re / n == doctest::Approx(0.5).epsilon(0.02));
    CHECK(im / n == doctest::Approx(0.5).epsilon(0.02));
    CHECK(std::abs(cross / n) < 0.01);
}

TEST_CASE("phase-only fading has unit modulus at the first slot of each block") {
    Eigen::MatrixXd theta(2, 2);
    theta << 0.3, 1.7, -2.1, 4.4;
    const ChannelTensor t = generate_channels(0, 2, 2, 6, PhaseOnlyFading{theta, 3});
    for (int b = 1; b <= 6; ++b) {
        const double slot = 3.0 * (b - 1) + 1.0;
        for (int rx = 1; rx <= 2; ++rx) {
            for (int tx = 1; tx <= 2; ++tx) {
                const cplx h = t.gain(rx, tx, b);
                CHECK(std::abs(std::abs(h) - 1.0) <= std::ldexp(1.0, -45));
                const cplx want = std::polar(1.0, -slot * theta(rx - 1, tx - 1));
                CHECK(std::abs(h - want) < 1e-15);
            }
        }
    }
}

TEST_CASE("generation rejects empty dimensions and mismatched phases") {
    CHECK_THROWS_AS(generate_channels(1, 0, 2, 3), std::invalid_argument);
    CHECK_THROWS_AS(generate_channels(1, 2, 0, 3), std::invalid_argument);
    CHECK_THROWS_AS(generate_channels(1, 2, 2, 0), std::invalid_argument);
    CHECK_THROWS_AS(generate_channels(1, 2, 2, 3, PhaseOnlyFading{Eigen::MatrixXd::Zero(3, 2), 1}),
                    std::invalid_argument);
}

TEST_CASE("tensor rejects zero and non-finite gains") {
    CHECK_THROWS_AS(ChannelTensor(1, 1, 1, {cplx(0.0, 0.0)}), std::invalid_argument);
    CHECK_THROWS_AS(ChannelTensor(1, 1, 1, {cplx(std::nan(""), 0.0)}), std::invalid_argument);
    CHECK_THROWS_AS(ChannelTensor(1, 1, 2, {cplx(1.0, 0.0)}), std::invalid_argument);
    CHECK_NOTHROW(ChannelTensor(1, 1, 1, {cplx(1e-300, 0.0)}));
}

TEST_CASE("gain_at is constant within a block") {
    const ChannelTensor t = generate_channels(3, 2, 2, 5);
    const FeedbackConfig tc3(3, 2);
    CHECK(gain_at(t, tc3, 1, 2, 7) == gain_at(t, tc3, 1, 2, 9));
    for (int b = 1; b <= 5; ++b) {
        for (int s = 3 * b - 2; s <= 3 * b; ++s) {
            CHECK(gain_at(t, tc3, 2, 1, s) == t.gain(2, 1, b));
        }
    }
    const FeedbackConfig tc1(1, 0);
    for (int b = 1; b <= 5; ++b) CHECK(gain_at(t, tc1, 1, 1, b) == t.gain(1, 1, b));
    CHECK_THROWS_AS(gain_at(t, tc3, 1, 1, 16), std::invalid_argument);
    CHECK_THROWS_AS(gain_at(t, tc3, 1, 1, 0), std::invalid_argument);
    CHECK_THROWS_AS(gain_at(t, tc3, 3, 1, 1), std::invalid_argument);
}

TEST_CASE("adjacent blocks differ under rayleigh") {
    const FeedbackConfig cfg(3, 2);
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        const ChannelTensor t = generate_channels(seed, 1, 1, 2);
        CHECK(gain_at(t, cfg, 1, 1, 4) != gain_at(t, cfg, 1, 1, 1));
    }
}

TEST_CASE("knows_current follows the within-block offset") {
    const FeedbackConfig cfg(3, 2);
    CHECK(knows_current(cfg, 9));
    CHECK_FALSE(knows_current(cfg, 7));
    CHECK_FALSE(knows_current(cfg, 8));
    CHECK(knows_current(cfg, 3));
    for (int slot = 1; slot <= 20; ++slot) {
        CHECK(knows_current(FeedbackConfig(4, 0), slot));
        const bool same_block = slot - 2 >= 1 && cfg.block_of(slot - 2) == cfg.block_of(slot);
        CHECK(knows_current(cfg, slot) == same_block);
    }
}

TEST_CASE("csit view at slot 9 of the 2x2 example") {
    const ChannelTensor t = generate_channels(5, 2, 2, 3);
    const FeedbackConfig cfg(3, 2);
    const CsitView v = csit_view(t, cfg, 1, 9);
    CHECK(v.tx_index() == 1);
    CHECK(v.revealed_through_block() == 3);
    for (int m = 1; m <= 9; ++m) {
        CHECK(v.contains(1, m));
        CHECK(v.contains(2, m));
        CHECK(v.gain(2, m) == gain_at(t, cfg, 2, 1, m));
    }
    CHECK_FALSE(v.contains(1, 10));

    const CsitView at8 = csit_view(t, cfg, 1, 8);
    CHECK(at8.contains(1, 4));
    CHECK(at8.contains(1, 6));
    CHECK_FALSE(at8.contains(1, 7));
    CHECK_FALSE(at8.contains(1, 8));
    CHECK_FALSE(at8.find(2, 7).has_value());
}

TEST_CASE("csit view with instantaneous feedback includes the current slot") {
    const ChannelTensor t = generate_channels(5, 2, 2, 6);
    const FeedbackConfig cfg(1, 0);
    for (int n = 1; n <= 6; ++n) {
        const CsitView v = csit_view(t, cfg, 2, n);
        CHECK(v.contains(1, n));
        CHECK(v.gain(1, n) == t.gain(1, 2, n));
        CHECK_FALSE(v.contains(1, n + 1));
    }
}

TEST_CASE("early slots reveal nothing") {
    const ChannelTensor t = generate_channels(5, 2, 2, 3);
    const FeedbackConfig cfg(3, 2);
    for (int n : {1, 2}) {
        const CsitView v = csit_view(t, cfg, 1, n);
        CHECK(v.revealed_through_block() == 0);
        for (int m = 1; m <= 9; ++m) CHECK_FALSE(v.contains(1, m));
    }
}

TEST_CASE("csit views grow monotonically") {
    const ChannelTensor t = generate_channels(9, 2, 3, 8);
    for (const FeedbackConfig& cfg : {FeedbackConfig(3, 2), FeedbackConfig(4, 2), FeedbackConfig(5, 3),
                                      FeedbackConfig(2, 0), FeedbackConfig(3, 5)}) {
        const int last = cfg.coherence_slots() * 8;
        for (int tx = 1; tx <= 3; ++tx) {
            for (int n = 1; n < last; ++n) {
                const CsitView a = csit_view(t, cfg, tx, n);
                const CsitView b = csit_view(t, cfg, tx, n + 1);
                for (int rx = 1; rx <= 2; ++rx) {
                    for (int m = 1; m <= last; ++m) {
                        if (a.contains(rx, m)) {
                            REQUIRE(b.contains(rx, m));
                            CHECK(a.gain(rx, m) == b.gain(rx, m));
                        }
                        // Nothing later than n - T_fb from a block not yet fed back.
                        if (a.contains(rx, m)) CHECK(m <= n);
                    }
                }
            }
        }
    }
}

TEST_CASE("csit view exposes only its own transmitter") {
    const ChannelTensor t = generate_channels(2, 2, 3, 4);
    const FeedbackConfig cfg(4, 2);
    const CsitView v = csit_view(t, cfg, 2, 15);
    for (int m = 1; m <= 15; ++m) {
        if (!v.contains(1, m)) continue;
        CHECK(v.gain(1, m) == gain_at(t, cfg, 1, 2, m));
        CHECK(v.gain(2, m) == gain_at(t, cfg, 2, 2, m));
    }
}

TEST_CASE("missing csit names the gain and slot") {
    const ChannelTensor t = generate_channels(2, 2, 2, 3);
    const CsitView v = csit_view(t, FeedbackConfig(3, 2), 1, 8);
    try {
        (void)v.gain(2, 8);
        FAIL("expected a precondition violation");
    } catch (const PreconditionViolation& e) {
        const std::string msg = e.what();
        CHECK(msg.find("h[2,1]") != std::string::npos);
        CHECK(msg.find("8") != std::string::npos);
    }
}

TEST_CASE("noise samples are deterministic and switch off cleanly") {
    const NoiseModel off = NoiseModel::noiseless();
    CHECK(noise_sample(off, 3, 1, 5) == cplx(0.0, 0.0));
    const NoiseModel on = NoiseModel::gaussian(2.0);
    CHECK(noise_sample(on, 3, 1, 5) == noise_sample(on, 3, 1, 5));
    CHECK(noise_sample(on, 3, 1, 5) != noise_sample(on, 3, 2, 5));
    CHECK(noise_sample(on, 3, 1, 5) != noise_sample(on, 3, 1, 6));
    CHECK_THROWS_AS(NoiseModel::gaussian(0.0), std::invalid_argument);

    double power = 0.0;
    const int n = 100'000;
    for (int s = 1; s <= n; ++s) power += std::norm(noise_sample(on, 17, 1, s));
    CHECK(power / n == doctest::Approx(2.0).epsilon(0.02));
}

TEST_CASE("counter rng streams are order independent") {
    CounterRng a(42, {1, 2, 3});
    CounterRng b(42, {1, 2, 3});
    CounterRng c(42, {1, 2, 4});
    const auto a0 = a();
    const auto a1 = a();
    CHECK(b() == a0);
    CHECK(b() == a1);
    CHECK(c() != a0);
    for (int i = 0; i < 10000; ++i) {
        const double u = a.uniform();
        CHECK(u > 0.0);
        CHECK(u < 1.0);
    }
}
