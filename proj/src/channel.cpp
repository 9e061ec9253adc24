// Copyright 2026 The STIA Authors
// SPDX-License-Identifier: Apache-2.0

#include "stia/channel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "stia/errors.hpp"
#include "stia/rng.hpp"

namespace stia {

FeedbackConfig::FeedbackConfig(int coherence_slots, int feedback_slots)
    : coherence_slots_(coherence_slots), feedback_slots_(feedback_slots) {
    if (coherence_slots < 1) {
        throw std::invalid_argument("coherence_slots must be >= 1");
    }
    if (feedback_slots < 0) {
        throw std::invalid_argument("feedback_slots must be >= 0");
    }
}

int FeedbackConfig::block_of(int slot) const {
    if (slot < 1) {
        throw std::invalid_argument("slot must be >= 1, got " + std::to_string(slot));
    }
    return (slot - 1) / coherence_slots_ + 1;
}

ChannelTensor::ChannelTensor(int num_rx, int num_tx, int num_blocks, std::vector<cplx> gains)
    : num_rx_(num_rx), num_tx_(num_tx), num_blocks_(num_blocks), gains_(std::move(gains)) {
    if (num_rx < 1 || num_tx < 1 || num_blocks < 1) {
        throw std::invalid_argument("channel tensor dimensions must be >= 1");
    }
    const auto expected = static_cast<std::size_t>(num_rx) * num_tx * num_blocks;
    if (gains_.size() != expected) {
        throw std::invalid_argument("channel tensor expects " + std::to_string(expected) +
                                    " gains, got " + std::to_string(gains_.size()));
    }
    for (const cplx& g : gains_) {
        if (!std::isfinite(g.real()) || !std::isfinite(g.imag()) || g == cplx{}) {
            throw std::invalid_argument("channel gains must be finite and nonzero");
        }
    }
}

cplx ChannelTensor::gain(int rx, int tx, int block) const {
    if (rx < 1 || rx > num_rx_ || tx < 1 || tx > num_tx_ || block < 1 || block > num_blocks_) {
        throw std::invalid_argument("gain index (" + std::to_string(rx) + ", " +
                                    std::to_string(tx) + ", " + std::to_string(block) +
                                    ") out of range");
    }
    return gains_[index(rx, tx, block)];
}

namespace {

cplx rayleigh_draw(std::uint64_t seed, int rx, int tx, int block) {
    CounterRng rng(seed, {tag(Stream::channel), static_cast<std::uint64_t>(block),
                          static_cast<std::uint64_t>(rx), static_cast<std::uint64_t>(tx)});
    cplx h = rng.complex_normal();
    while (std::abs(h) < kMinGainMagnitude) {
        h = rng.complex_normal();
    }
    return h;
}

}  // namespace

ChannelTensor generate_channels(std::uint64_t seed, int num_rx, int num_tx, int num_blocks,
                                const Fading& fading) {
    if (num_rx < 1 || num_tx < 1 || num_blocks < 1) {
        throw std::invalid_argument("generate_channels: all dimensions must be >= 1");
    }
    std::vector<cplx> gains(static_cast<std::size_t>(num_rx) * num_tx * num_blocks);

    if (const auto* phase = std::get_if<PhaseOnlyFading>(&fading)) {
        if (phase->theta.rows() != num_rx || phase->theta.cols() != num_tx) {
            throw std::invalid_argument("phase_only theta must be num_rx x num_tx");
        }
        if (phase->coherence_slots < 1) {
            throw std::invalid_argument("phase_only coherence_slots must be >= 1");
        }
        std::size_t i = 0;
        for (int b = 1; b <= num_blocks; ++b) {
            const double t = static_cast<double>((b - 1) * phase->coherence_slots + 1);
            for (int rx = 1; rx <= num_rx; ++rx) {
                for (int tx = 1; tx <= num_tx; ++tx) {
                    gains[i++] = std::polar(1.0, -t * phase->theta(rx - 1, tx - 1));
                }
            }
        }
    } else {
        std::size_t i = 0;
        for (int b = 1; b <= num_blocks; ++b) {
            for (int rx = 1; rx <= num_rx; ++rx) {
                for (int tx = 1; tx <= num_tx; ++tx) {
                    gains[i++] = rayleigh_draw(seed, rx, tx, b);
                }
            }
        }
    }
    return ChannelTensor(num_rx, num_tx, num_blocks, std::move(gains));
}

cplx gain_at(const ChannelTensor& tensor, const FeedbackConfig& cfg, int rx, int tx, int slot) {
    if (slot < 1) {
        throw std::invalid_argument("gain_at: slot must be >= 1");
    }
    const int block = cfg.block_of(slot);
    if (block > tensor.num_blocks()) {
        throw std::invalid_argument("gain_at: slot " + std::to_string(slot) +
                                    " lies beyond the last block");
    }
    return tensor.gain(rx, tx, block);
}

bool knows_current(const FeedbackConfig& cfg, int slot) {
    if (slot < 1) {
        throw std::invalid_argument("knows_current: slot must be >= 1");
    }
    return (slot - 1) % cfg.coherence_slots() >= cfg.feedback_slots();
}

CsitView::CsitView(const ChannelTensor& tensor, const FeedbackConfig& cfg, int tx, int as_of_slot,
                   int revealed_through_block)
    : tensor_(&tensor),
      cfg_(cfg),
      tx_(tx),
      as_of_slot_(as_of_slot),
      revealed_through_(revealed_through_block) {
    if (tx < 1 || tx > tensor.num_tx()) {
        throw std::invalid_argument("csit view: transmitter index out of range");
    }
    if (as_of_slot < 1) {
        throw std::invalid_argument("csit view: slot must be >= 1");
    }
    if (revealed_through_block < 0) {
        throw std::invalid_argument("csit view: revealed block count must be >= 0");
    }
}

bool CsitView::contains(int rx, int slot) const noexcept {
    if (rx < 1 || rx > tensor_->num_rx() || slot < 1 || slot > as_of_slot_) return false;
    const int block = (slot - 1) / cfg_.coherence_slots() + 1;
    return block <= revealed_through_ && block <= tensor_->num_blocks();
}

std::optional<cplx> CsitView::find(int rx, int slot) const {
    if (!contains(rx, slot)) return std::nullopt;
    return tensor_->gain(rx, tx_, cfg_.block_of(slot));
}

cplx CsitView::gain(int rx, int slot) const {
    if (auto g = find(rx, slot)) return *g;
    throw PreconditionViolation("transmitter " + std::to_string(tx_) + " has no CSIT for h[" +
                                std::to_string(rx) + "," + std::to_string(tx_) + "] at slot " +
                                std::to_string(slot) + " (view as of slot " +
                                std::to_string(as_of_slot_) + ")");
}

CsitView csit_view(const ChannelTensor& tensor, const FeedbackConfig& cfg, int tx, int slot) {
    if (slot < 1) {
        throw std::invalid_argument("csit_view: slot must be >= 1");
    }
    const int horizon_slot = slot - cfg.feedback_slots();
    const int revealed = horizon_slot >= 1 ? cfg.block_of(horizon_slot) : 0;
    return CsitView(tensor, cfg, tx, slot, revealed);
}

NoiseModel NoiseModel::gaussian(double variance) {
    if (!(variance > 0.0)) {
        throw std::invalid_argument("noise variance must be > 0");
    }
    return {variance, true};
}

cplx noise_sample(const NoiseModel& noise, std::uint64_t seed, int rx, int slot) {
    if (!noise.enabled) return {};
    CounterRng rng(seed, {tag(Stream::noise), static_cast<std::uint64_t>(rx),
                          static_cast<std::uint64_t>(slot)});
    return rng.complex_normal(noise.variance);
}

}  // namespace stia
