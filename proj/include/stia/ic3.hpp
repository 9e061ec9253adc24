// Copyright 2026 The STIA Authors
// SPDX-License-Identifier: Apache-2.0

// Five-slot distributed alignment for the 3-user interference channel.
//
// Receiver 1 wants (a1, a2), receiver 2 (b1, b2), receiver 3 (c1, c2).
// Slots 1-3 send pairs (a1,b1), (a2,c1), (b2,c2) without CSIT. Slots 4 and 5
// repeat precoded combinations so that each receiver sees one earlier
// interference equation again; successive cancellation then leaves two
// 2x2 solves per receiver.
//
// Protocol slot p is played in fading block p at within-block offset
// T_fb + 1, so slots 4 and 5 have current CSIT and slots 1-3 are fed back
// before they are needed.

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "stia/channel.hpp"
#include "stia/rational.hpp"
#include "stia/xchannel.hpp"

namespace stia {

struct Ic3SymbolSet {
    cplx a1, a2;  // receiver 1
    cplx b1, b2;  // receiver 2
    cplx c1, c2;  // receiver 3

    /// The two symbols receiver `rx` wants.
    std::array<cplx, 2> desired(int rx) const;
};

/// x_k per transmitter for one slot.
using Ic3SlotSignal = std::array<cplx, 3>;

/// Phase one, protocol slots 1..3 (index 0..2).
std::array<Ic3SlotSignal, 3> ic3_phase_one(const Ic3SymbolSet& s);

struct Ic3Precoders {
    // slot 4
    cplx va1_4;  // tx 1, a1
    cplx va2_4;  // tx 1, a2
    cplx vb1_4;  // tx 2, b1
    cplx vc1_4;  // tx 3, c1
    // slot 5
    cplx vb1_5;  // tx 2, b1
    cplx vb2_5;  // tx 2, b2
    cplx va1_5;  // tx 1, a1
    cplx vc2_5;  // tx 3, c2
};

/// Physical slot of protocol slot p (1..5).
int ic3_physical_slot(const FeedbackConfig& cfg, int protocol_slot);

/// The feedback configuration the protocol is built for: T_c = 5, T_fb = 3.
FeedbackConfig ic3_feedback();

/// views_per_slot[0] are the three transmitters' views at protocol slot 4,
/// views_per_slot[1] at slot 5. Each coefficient of transmitter k reads only
/// view k.
Ic3Precoders ic3_phase_two(std::span<const CsitViews> views_per_slot, const FeedbackConfig& cfg);

/// Phase two, protocol slots 4 and 5 (index 0, 1).
std::array<Ic3SlotSignal, 2> ic3_phase_two_signals(const Ic3Precoders& v, const Ic3SymbolSet& s);

/// h_{l,k}[p] for protocol slots, as the receivers' genie knows them.
struct Ic3Gains {
    std::array<cplx, 45> h{};

    cplx operator()(int rx, int tx, int slot) const {
        return h[static_cast<std::size_t>(((slot - 1) * 3 + (rx - 1)) * 3 + (tx - 1))];
    }
    cplx& operator()(int rx, int tx, int slot) {
        return h[static_cast<std::size_t>(((slot - 1) * 3 + (rx - 1)) * 3 + (tx - 1))];
    }
};

Ic3Gains ic3_gains(const ChannelTensor& tensor, const FeedbackConfig& cfg);

struct Ic3Round {
    std::array<ReceiverTape, 3> tapes;  // keyed by protocol slot 1..5
    Ic3Precoders precoders;
    Ic3Gains gains;
};

Ic3Round ic3_simulate(const ChannelTensor& tensor, const FeedbackConfig& cfg,
                      const Ic3SymbolSet& symbols, const NoiseModel& noise, std::uint64_t seed,
                      const CsitProvider& provider = {});

/// Largest relative violation of the eight alignment identities.
double ic3_alignment_residual(const Ic3Gains& gains, const Ic3Precoders& v);

struct Ic3Genie {
    Ic3Gains gains;
    Ic3Precoders precoders;
};

struct DecodeStep {
    enum class Kind { subtract, reconstruct_subtract, solve };
    Kind kind;
    int rx;
    std::vector<int> slots;  // protocol slots of the tape this step reads
    std::string note;
};

struct Ic3DecodeReport {
    std::array<std::array<cplx, 2>, 3> desired{};  // per receiver
    std::array<std::vector<DecodeStep>, 3> transcripts;
    bool exact_recovery = false;
    double max_abs_error = 0.0;
    double worst_condition = 0.0;
};

/// Runs the three successive-cancellation chains. With `truth` the report
/// scores every receiver's desired pair.
Ic3DecodeReport ic3_decode(const std::array<ReceiverTape, 3>& tapes, const Ic3Genie& genie,
                           const Ic3SymbolSet* truth = nullptr);

struct Ic3RunReport {
    Ic3DecodeReport decode;
    SlotAccounting accounting;  // 6 symbols over 5 slots when decoded
    bool rejected = false;
    std::string rejection;
    double alignment_residual = 0.0;
};

/// Draws a Rayleigh 3x3 channel over five blocks from `seed` and runs one
/// full round.
Ic3RunReport run_ic3(std::uint64_t seed, const NoiseModel& noise);

Ic3SymbolSet random_ic3_symbols(std::uint64_t seed);

}  // namespace stia
