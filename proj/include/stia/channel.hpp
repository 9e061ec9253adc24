// Copyright 2026 The STIA Authors
// SPDX-License-Identifier: Apache-2.0

// Block-fading channel tensors and the delayed local CSIT visibility model.
//
// Receivers, transmitters, blocks and slots are all numbered from 1.

#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "stia/rational.hpp"

namespace stia {

using cplx = std::complex<double>;

/// Rayleigh draws below this magnitude are redrawn.
inline constexpr double kMinGainMagnitude = 1e-6;

/// Coherence time T_c and feedback delay T_fb, both in slots.
class FeedbackConfig {
public:
    FeedbackConfig(int coherence_slots, int feedback_slots);

    int coherence_slots() const noexcept { return coherence_slots_; }
    int feedback_slots() const noexcept { return feedback_slots_; }

    /// lambda = T_fb / T_c.
    Rational normalized_delay() const { return {feedback_slots_, coherence_slots_}; }

    /// ceil(slot / T_c); slot must be >= 1.
    int block_of(int slot) const;

    /// First slot of a block.
    int first_slot(int block) const { return (block - 1) * coherence_slots_ + 1; }

private:
    int coherence_slots_;
    int feedback_slots_;
};

struct RayleighFading {};

/// h_{i,k} = exp(-j t theta_{i,k}) evaluated at the first slot t of each
/// block, for blocks of `coherence_slots` slots.
struct PhaseOnlyFading {
    Eigen::MatrixXd theta;  // num_rx x num_tx
    int coherence_slots = 1;
};

using Fading = std::variant<RayleighFading, PhaseOnlyFading>;

/// Complex gains h_{l,k}[b] for every receiver, transmitter and block.
/// Immutable once built.
class ChannelTensor {
public:
    /// `gains` is laid out block-major, then receiver, then transmitter; see
    /// index(). Every gain must be finite and nonzero.
    ChannelTensor(int num_rx, int num_tx, int num_blocks, std::vector<cplx> gains);

    int num_rx() const noexcept { return num_rx_; }
    int num_tx() const noexcept { return num_tx_; }
    int num_blocks() const noexcept { return num_blocks_; }

    cplx gain(int rx, int tx, int block) const;

    std::size_t index(int rx, int tx, int block) const noexcept {
        return (static_cast<std::size_t>(block - 1) * num_rx_ + (rx - 1)) * num_tx_ + (tx - 1);
    }

    const std::vector<cplx>& raw() const noexcept { return gains_; }

    bool operator==(const ChannelTensor&) const = default;

private:
    int num_rx_;
    int num_tx_;
    int num_blocks_;
    std::vector<cplx> gains_;
};

ChannelTensor generate_channels(std::uint64_t seed, int num_rx, int num_tx, int num_blocks,
                                const Fading& fading = RayleighFading{});

/// Gain over the block containing `slot`.
cplx gain_at(const ChannelTensor& tensor, const FeedbackConfig& cfg, int rx, int tx, int slot);

/// True iff the block of slot - T_fb is the block of slot, i.e. the
/// transmitter already holds the current block's gains.
bool knows_current(const FeedbackConfig& cfg, int slot);

/// What one transmitter knows at one slot: its own gains to every receiver,
/// for every slot up to `as_of_slot` whose block has been fed back. Views
/// reference the tensor they were built from, which must outlive them.
class CsitView {
public:
    /// Reveals blocks 1..revealed_through_block (0 reveals nothing).
    CsitView(const ChannelTensor& tensor, const FeedbackConfig& cfg, int tx, int as_of_slot,
             int revealed_through_block);

    int tx_index() const noexcept { return tx_; }
    int as_of_slot() const noexcept { return as_of_slot_; }
    int revealed_through_block() const noexcept { return revealed_through_; }
    int num_rx() const noexcept { return tensor_->num_rx(); }

    bool contains(int rx, int slot) const noexcept;
    std::optional<cplx> find(int rx, int slot) const;

    /// Throws PreconditionViolation naming the missing (rx, slot).
    cplx gain(int rx, int slot) const;

private:
    const ChannelTensor* tensor_;
    FeedbackConfig cfg_;
    int tx_;
    int as_of_slot_;
    int revealed_through_;
};

CsitView csit_view(const ChannelTensor& tensor, const FeedbackConfig& cfg, int tx, int slot);

struct NoiseModel {
    double variance = 1.0;
    bool enabled = false;

    static NoiseModel noiseless() { return {1.0, false}; }
    static NoiseModel gaussian(double variance);
};

/// z_l[n] for one receiver and slot; zero when disabled.
cplx noise_sample(const NoiseModel& noise, std::uint64_t seed, int rx, int slot);

}  // namespace stia
