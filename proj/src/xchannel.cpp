// Copyright 2026 The STIA Authors
// SPDX-License-Identifier: Apache-2.0

#include "stia/xchannel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "stia/errors.hpp"
#include "stia/linalg.hpp"
#include "stia/rng.hpp"

namespace stia {

namespace {

void require_group(const IndexSet& group) {
    if (group.size() < 3) {
        throw std::invalid_argument("index set needs at least 3 slots (K >= 2)");
    }
}

bool in_phase_two(const IndexSet& group, int slot) {
    return std::find(group.begin() + 2, group.end(), slot) != group.end();
}

cplx checked_ratio(const CsitView& view, int rx, int num_slot, int den_slot) {
    const cplx den = view.gain(rx, den_slot);
    if (std::abs(den) < kMinGainMagnitude) {
        throw PreconditionViolation("transmitter " + std::to_string(view.tx_index()) +
                                    ": |h[" + std::to_string(rx) + "," +
                                    std::to_string(view.tx_index()) + "] at slot " +
                                    std::to_string(den_slot) + "| below the gain floor");
    }
    return view.gain(rx, num_slot) / den;
}

}  // namespace

PhaseOneSignals phase_one_signals(const SymbolVector& rx1, const SymbolVector& rx2) {
    if (rx1.size() != rx2.size() || rx1.size() < 1) {
        throw std::invalid_argument("phase_one_signals: symbol vectors must both have length K");
    }
    return {rx1.symbols, rx2.symbols};
}

cplx PrecoderSet::v(int stream, int tx, int slot) const {
    const auto it = std::find(slots.begin(), slots.end(), slot);
    if (it == slots.end()) {
        throw std::invalid_argument("no precoder for slot " + std::to_string(slot));
    }
    if (tx < 1 || tx > num_tx()) throw std::invalid_argument("precoder tx out of range");
    const auto j = static_cast<std::size_t>(it - slots.begin());
    switch (stream) {
        case 1: return stream1[j][tx - 1];
        case 2: return stream2[j][tx - 1];
        default: throw std::invalid_argument("stream must be 1 or 2");
    }
}

std::pair<cplx, cplx> phase_two_coefficients(const CsitView& view, const IndexSet& group) {
    require_group(group);
    const int n = view.as_of_slot();
    if (!in_phase_two(group, n)) {
        throw std::invalid_argument("view slot " + std::to_string(n) +
                                    " is not a phase-two slot of this round");
    }
    if (view.num_rx() < 2) throw std::invalid_argument("X-channel views need two receivers");
    // v_1 = h_{2,k}[t_1] / h_{2,k}[n],  v_2 = h_{1,k}[t_2] / h_{1,k}[n]
    return {checked_ratio(view, 2, group[0], n), checked_ratio(view, 1, group[1], n)};
}

PrecoderSet phase_two_precoders(std::span<const CsitViews> views_per_slot,
                                const IndexSet& group) {
    require_group(group);
    if (views_per_slot.size() != group.size() - 2) {
        throw std::invalid_argument("phase_two_precoders: need one set of views per phase-two slot");
    }
    PrecoderSet out;
    for (std::size_t j = 0; j < views_per_slot.size(); ++j) {
        const int n = group[j + 2];
        const CsitViews& views = views_per_slot[j];
        if (j > 0 && views.size() != views_per_slot[0].size()) {
            throw std::invalid_argument("phase_two_precoders: inconsistent transmitter count");
        }
        std::vector<cplx> v1(views.size());
        std::vector<cplx> v2(views.size());
        for (std::size_t k = 0; k < views.size(); ++k) {
            const CsitView& view = views[k];
            if (view.tx_index() != static_cast<int>(k) + 1 || view.as_of_slot() != n) {
                throw std::invalid_argument("phase_two_precoders: views must be ordered by "
                                            "transmitter and taken at the precoded slot");
            }
            std::tie(v1[k], v2[k]) = phase_two_coefficients(view, group);
        }
        out.slots.push_back(n);
        out.stream1.push_back(std::move(v1));
        out.stream2.push_back(std::move(v2));
    }
    return out;
}

std::vector<cplx> transmit_phase_two(const PrecoderSet& precoders, const SymbolVector& rx1,
                                     const SymbolVector& rx2, int slot) {
    const int K = precoders.num_tx();
    if (rx1.size() != K || rx2.size() != K) {
        throw std::invalid_argument("transmit_phase_two: symbol vectors must have length K");
    }
    std::vector<cplx> x(K);
    for (int k = 1; k <= K; ++k) {
        x[k - 1] = precoders.v(1, k, slot) * rx1.symbols[k - 1] +
                   precoders.v(2, k, slot) * rx2.symbols[k - 1];
    }
    return x;
}

cplx ReceiverTape::at(int slot) const {
    const auto it = observations.find(slot);
    if (it == observations.end()) {
        throw std::invalid_argument("receiver " + std::to_string(rx_index) +
                                    " has no observation at slot " + std::to_string(slot));
    }
    return it->second;
}

RoundResult simulate_round(const ChannelTensor& tensor, const FeedbackConfig& cfg,
                           const IndexSet& group, const SymbolVector& rx1,
                           const SymbolVector& rx2, const NoiseModel& noise, std::uint64_t seed,
                           const CsitProvider& provider) {
    require_group(group);
    const int K = tensor.num_tx();
    if (tensor.num_rx() != 2) throw std::invalid_argument("X-channel tensor needs 2 receivers");
    if (static_cast<int>(group.size()) != K + 1) {
        throw std::invalid_argument("index set must have K+1 slots");
    }
    for (int t : group) {
        if (cfg.block_of(t) > tensor.num_blocks()) {
            throw std::invalid_argument("group slot " + std::to_string(t) +
                                        " lies beyond the channel tensor");
        }
    }
    const PhaseOneSignals p1 = phase_one_signals(rx1, rx2);
    if (rx1.size() != K) throw std::invalid_argument("symbol vectors must have length K");

    std::vector<CsitViews> views(group.size() - 2);
    for (std::size_t j = 2; j < group.size(); ++j) {
        for (int k = 1; k <= K; ++k) {
            views[j - 2].push_back(provider ? provider(tensor, cfg, k, group[j])
                                            : csit_view(tensor, cfg, k, group[j]));
        }
    }

    RoundResult out;
    out.precoders = phase_two_precoders(views, group);
    out.rx1.rx_index = 1;
    out.rx2.rx_index = 2;

    auto receive = [&](int slot, const std::vector<cplx>& x) {
        for (int rx = 1; rx <= 2; ++rx) {
            cplx y = noise_sample(noise, seed, rx, slot);
            for (int k = 1; k <= K; ++k) y += gain_at(tensor, cfg, rx, k, slot) * x[k - 1];
            (rx == 1 ? out.rx1 : out.rx2).observations[slot] = y;
        }
    };
    receive(group[0], p1.at_t1);
    receive(group[1], p1.at_t2);
    for (std::size_t j = 2; j < group.size(); ++j) {
        receive(group[j], transmit_phase_two(out.precoders, rx1, rx2, group[j]));
    }
    return out;
}

std::vector<cplx> align_cancel(const ReceiverTape& tape, const IndexSet& group, int rx) {
    require_group(group);
    if (rx != 1 && rx != 2) throw std::invalid_argument("align_cancel: rx must be 1 or 2");
    const int anchor = rx == 1 ? group[0] : group[1];
    const int overheard = rx == 1 ? group[1] : group[0];
    std::vector<cplx> out;
    out.reserve(group.size() - 1);
    out.push_back(tape.at(anchor));
    const cplx side = tape.at(overheard);
    for (std::size_t j = 2; j < group.size(); ++j) out.push_back(tape.at(group[j]) - side);
    return out;
}

Eigen::MatrixXcd effective_matrix(const ChannelTensor& tensor, const FeedbackConfig& cfg,
                                  const IndexSet& group, const PrecoderSet& precoders, int rx) {
    require_group(group);
    if (rx != 1 && rx != 2) throw std::invalid_argument("effective_matrix: rx must be 1 or 2");
    const int K = tensor.num_tx();
    Eigen::MatrixXcd m(K, K);
    const int anchor = rx == 1 ? group[0] : group[1];
    for (int k = 1; k <= K; ++k) m(0, k - 1) = gain_at(tensor, cfg, rx, k, anchor);
    for (int j = 2; j <= K; ++j) {
        const int n = group[j];
        for (int k = 1; k <= K; ++k) {
            m(j - 1, k - 1) = gain_at(tensor, cfg, rx, k, n) * precoders.v(rx, k, n);
        }
    }
    return m;
}

DecodeReport zf_decode(std::span<const cplx> observations, const Eigen::MatrixXcd& effective,
                       std::span<const cplx> truth) {
    const auto K = static_cast<Eigen::Index>(observations.size());
    if (effective.rows() != K || effective.cols() != K) {
        throw std::invalid_argument("zf_decode: matrix shape must match observation count");
    }
    if (!truth.empty() && static_cast<Eigen::Index>(truth.size()) != K) {
        throw std::invalid_argument("zf_decode: truth length must match observation count");
    }
    Eigen::VectorXcd rhs(K);
    for (Eigen::Index i = 0; i < K; ++i) rhs(i) = observations[static_cast<std::size_t>(i)];

    DecodeReport report;
    const Eigen::VectorXcd est =
        checked_solve(effective, rhs, kMaxCondition, &report.effective_condition);
    report.estimates.emplace_back(est.data(), est.data() + est.size());
    if (!truth.empty()) {
        for (Eigen::Index i = 0; i < K; ++i) {
            report.max_abs_error = std::max(report.max_abs_error,
                                            std::abs(est(i) - truth[static_cast<std::size_t>(i)]));
        }
        report.exact_recovery = report.max_abs_error < kExactRecoveryTol;
    }
    return report;
}

double alignment_residual(const ChannelTensor& tensor, const FeedbackConfig& cfg,
                          const IndexSet& group, const PrecoderSet& precoders) {
    require_group(group);
    double worst = 0.0;
    for (std::size_t j = 2; j < group.size(); ++j) {
        const int n = group[j];
        for (int k = 1; k <= tensor.num_tx(); ++k) {
            const cplx ref1 = gain_at(tensor, cfg, 2, k, group[0]);
            const cplx ref2 = gain_at(tensor, cfg, 1, k, group[1]);
            const cplx got1 = gain_at(tensor, cfg, 2, k, n) * precoders.v(1, k, n);
            const cplx got2 = gain_at(tensor, cfg, 1, k, n) * precoders.v(2, k, n);
            worst = std::max({worst, std::abs(got1 - ref1) / std::abs(ref1),
                              std::abs(got2 - ref2) / std::abs(ref2)});
        }
    }
    return worst;
}

SymbolVector random_symbols(int rx, int num_tx, std::uint64_t seed, std::uint64_t round) {
    CounterRng rng(seed, {tag(Stream::symbols), round, static_cast<std::uint64_t>(rx)});
    SymbolVector s{rx, std::vector<cplx>(static_cast<std::size_t>(num_tx))};
    for (cplx& v : s.symbols) v = rng.unit_phase();
    return s;
}

XchannelRunReport run_xchannel(int num_tx, std::uint64_t seed, const NoiseModel& noise,
                               int n_groups) {
    if (num_tx < 2) throw std::invalid_argument("run_xchannel: K must be >= 2");
    const SlotSchedule schedule = build_schedule(num_tx, n_groups);
    const FeedbackConfig cfg = schedule.feedback();
    const ChannelTensor tensor = generate_channels(seed, 2, num_tx, schedule.num_blocks());

    XchannelRunReport report;
    report.decode.exact_recovery = true;
    report.accounting.slots_used = static_cast<std::int64_t>(schedule.all_slots.size());

    for (std::size_t g = 0; g < schedule.groups.size(); ++g) {
        const IndexSet& group = schedule.groups[g];
        const SymbolVector s1 = random_symbols(1, num_tx, seed, g);
        const SymbolVector s2 = random_symbols(2, num_tx, seed, g);
        try {
            const RoundResult round = simulate_round(tensor, cfg, group, s1, s2, noise, seed);
            DecodeReport r1 = zf_decode(align_cancel(round.rx1, group, 1),
                                        effective_matrix(tensor, cfg, group, round.precoders, 1),
                                        s1.symbols);
            DecodeReport r2 = zf_decode(align_cancel(round.rx2, group, 2),
                                        effective_matrix(tensor, cfg, group, round.precoders, 2),
                                        s2.symbols);
            for (const DecodeReport* r : {&r1, &r2}) {
                report.decode.estimates.push_back(r->estimates.front());
                report.decode.exact_recovery = report.decode.exact_recovery && r->exact_recovery;
                report.decode.max_abs_error = std::max(report.decode.max_abs_error, r->max_abs_error);
                report.decode.effective_condition =
                    std::max(report.decode.effective_condition, r->effective_condition);
            }
            report.max_alignment_residual = std::max(
                report.max_alignment_residual,
                alignment_residual(tensor, cfg, group, round.precoders));
            report.accounting.symbols_delivered += 2 * num_tx;
            ++report.groups_decoded;
        } catch (const SingularMatrixError& e) {
            ++report.rejected_groups;
            report.rejection_log.push_back("seed " + std::to_string(seed) + " group " +
                                           std::to_string(g + 1) + ": " + e.what());
        }
    }

    // TDMA filler: one transmitter serves one receiver per slot, round robin.
    CounterRng filler_rng(seed, {tag(Stream::symbols), 0xF111ULL});
    for (std::size_t i = 0; i < schedule.filler.size(); ++i) {
        const int slot = schedule.filler[i];
        const int tx = static_cast<int>(i % num_tx) + 1;
        const int rx = static_cast<int>((i / num_tx) % 2) + 1;
        const cplx s = filler_rng.unit_phase();
        const cplx h = gain_at(tensor, cfg, rx, tx, slot);
        const cplx y = h * s + noise_sample(noise, seed, rx, slot);
        const double err = std::abs(y / h - s);
        report.decode.max_abs_error = std::max(report.decode.max_abs_error, err);
        report.decode.exact_recovery = report.decode.exact_recovery && err < kExactRecoveryTol;
        ++report.accounting.symbols_delivered;
    }
    if (report.groups_decoded == 0) report.decode.exact_recovery = false;
    return report;
}

}  // namespace stia
