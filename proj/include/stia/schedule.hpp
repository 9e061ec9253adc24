// Copyright 2026 The STIA Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "stia/channel.hpp"

namespace stia {

/// Ordered slots (t_1, ..., t_{K+1}) of one alignment round. t_1 and t_2
/// carry phase one; the rest carry phase two.
using IndexSet = std::vector<int>;

/// Slot plan for the K x 2 X-channel at T_c = K + 1, T_fb = 2.
struct SlotSchedule {
    int num_tx = 0;
    int n_groups = 0;
    int coherence_slots = 0;
    int feedback_slots = 2;
    std::vector<int> all_slots;     // S_t, ascending
    std::vector<int> delayed_only;  // S_d
    std::vector<int> current_ok;    // S_c
    std::vector<IndexSet> groups;   // I_1 .. I_n
    std::vector<int> filler;        // S_t minus the groups, served by TDMA

    FeedbackConfig feedback() const { return {coherence_slots, feedback_slots}; }
    int num_blocks() const { return n_groups + num_tx; }
};

SlotSchedule build_schedule(int num_tx, int n_groups);

struct ScheduleCheck {
    bool ok = true;
    std::vector<std::string> violations;
};

/// Checks every structural invariant of a schedule and lists each clause
/// that fails.
ScheduleCheck validate_schedule(const SlotSchedule& s);

}  // namespace stia
