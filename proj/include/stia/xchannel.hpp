// Copyright 2026 The STIA Authors
// SPDX-License-Identifier: Apache-2.0

// Distributed space-time interference alignment for the K x 2 X-channel.
//
// One round occupies the slots of an IndexSet (t_1, ..., t_{K+1}). In t_1 every
// transmitter sends its symbol for receiver 1, in t_2 its symbol for
// receiver 2. In each later slot n, transmitter k sends
//     x_k[n] = v_{1,k}[n] s_{1,k} + v_{2,k}[n] s_{2,k}
// with v chosen from its own CSIT so that receiver 2 sees the stream-1
// interference exactly as it overheard it in t_1, and receiver 1 sees the
// stream-2 interference exactly as in t_2. Each receiver then subtracts the
// overheard equation and zero-forces its K symbols out of K equations.

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "stia/channel.hpp"
#include "stia/rational.hpp"
#include "stia/schedule.hpp"

namespace stia {

/// Condition-number ceiling for the zero-forcing solve.
inline constexpr double kMaxCondition = 1e12;
/// Absolute error below which a noiseless decode counts as exact.
inline constexpr double kExactRecoveryTol = 1e-9;

/// The K symbols s_{l,1..K} meant for receiver l.
struct SymbolVector {
    int intended_rx = 1;
    std::vector<cplx> symbols;

    int size() const noexcept { return static_cast<int>(symbols.size()); }
};

struct PhaseOneSignals {
    std::vector<cplx> at_t1;  // x_k[t_1] = s_{1,k}
    std::vector<cplx> at_t2;  // x_k[t_2] = s_{2,k}
};

PhaseOneSignals phase_one_signals(const SymbolVector& rx1, const SymbolVector& rx2);

/// v_{1,k}[n] and v_{2,k}[n] for every phase-two slot n of one round.
struct PrecoderSet {
    std::vector<int> slots;                  // t_3 .. t_{K+1}
    std::vector<std::vector<cplx>> stream1;  // [slot][k-1]
    std::vector<std::vector<cplx>> stream2;

    int num_tx() const noexcept {
        return stream1.empty() ? 0 : static_cast<int>(stream1.front().size());
    }
    /// stream in {1, 2}; throws std::invalid_argument for unknown slots.
    cplx v(int stream, int tx, int slot) const;
};

/// One transmitter's pair (v_1, v_2) for the slot its view is taken at. The
/// view is the only input, which is what makes the scheme local.
std::pair<cplx, cplx> phase_two_coefficients(const CsitView& view, const IndexSet& group);

/// One view per transmitter, all as of the same slot.
using CsitViews = std::vector<CsitView>;

/// views_per_slot[j] holds the transmitters' views as of group[j + 2].
PrecoderSet phase_two_precoders(std::span<const CsitViews> views_per_slot,
                                const IndexSet& group);

std::vector<cplx> transmit_phase_two(const PrecoderSet& precoders, const SymbolVector& rx1,
                                     const SymbolVector& rx2, int slot);

struct ReceiverTape {
    int rx_index = 1;
    std::map<int, cplx> observations;

    cplx at(int slot) const;
};

/// How a transmitter obtains CSIT; defaults to csit_view.
using CsitProvider =
    std::function<CsitView(const ChannelTensor&, const FeedbackConfig&, int tx, int slot)>;

struct RoundResult {
    ReceiverTape rx1;
    ReceiverTape rx2;
    PrecoderSet precoders;
};

/// Runs one round over the channel. Noise for (rx, slot) is drawn from
/// `seed`; precoders see the channel only through `provider`.
RoundResult simulate_round(const ChannelTensor& tensor, const FeedbackConfig& cfg,
                           const IndexSet& group, const SymbolVector& rx1,
                           const SymbolVector& rx2, const NoiseModel& noise, std::uint64_t seed,
                           const CsitProvider& provider = {});

/// Aligned interference cancellation. Receiver 1 gets
/// (y[t_1], y[t_3] - y[t_2], ..., y[t_{K+1}] - y[t_2]); receiver 2 the same
/// with the roles of t_1 and t_2 swapped.
std::vector<cplx> align_cancel(const ReceiverTape& tape, const IndexSet& group, int rx);

/// The K x K matrix seen by `rx` after align_cancel: first row the raw
/// phase-one gains, then h_{rx,k}[n] v_{rx,k}[n] for each phase-two slot.
Eigen::MatrixXcd effective_matrix(const ChannelTensor& tensor, const FeedbackConfig& cfg,
                                  const IndexSet& group, const PrecoderSet& precoders, int rx);

struct DecodeReport {
    std::vector<std::vector<cplx>> estimates;  // one entry per decoded receiver
    bool exact_recovery = false;
    double max_abs_error = 0.0;
    double effective_condition = 0.0;  // worst over decoded receivers
};

/// Zero-forcing solve. When `truth` is non-empty the report scores the
/// estimates against it; otherwise exact_recovery stays false.
DecodeReport zf_decode(std::span<const cplx> observations, const Eigen::MatrixXcd& effective,
                       std::span<const cplx> truth = {});

/// Largest |h_{2,k}[n] v_{1,k}[n] - h_{2,k}[t_1]| / |h_{2,k}[t_1]| over k, n
/// and stream 2's mirror.
double alignment_residual(const ChannelTensor& tensor, const FeedbackConfig& cfg,
                          const IndexSet& group, const PrecoderSet& precoders);

struct SlotAccounting {
    std::int64_t symbols_delivered = 0;
    std::int64_t slots_used = 0;

    Rational ratio() const { return {symbols_delivered, slots_used}; }
};

struct XchannelRunReport {
    DecodeReport decode;  // aggregated over decoded rounds and filler slots
    SlotAccounting accounting;
    int groups_decoded = 0;
    int rejected_groups = 0;
    std::vector<std::string> rejection_log;
    double max_alignment_residual = 0.0;
};

/// Draws a Rayleigh channel from `seed`, builds the schedule, runs every
/// round plus the TDMA filler slots and decodes everything.
XchannelRunReport run_xchannel(int num_tx, std::uint64_t seed, const NoiseModel& noise,
                               int n_groups);

/// Random unit-modulus symbols for receiver `rx`.
SymbolVector random_symbols(int rx, int num_tx, std::uint64_t seed, std::uint64_t round);

}  // namespace stia
