// Copyright 2026 The STIA Authors
// SPDX-License-Identifier: Apache-2.0

#include "stia/schedule.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace stia {

namespace {

bool is_current_slot(int slot, int coherence_slots, int feedback_slots) {
    return (slot - 1) % coherence_slots >= feedback_slots;
}

// Picks the earliest unused slot from `pool` whose block is not in `taken`
// and is greater than `min_block`. Returns 0 if none exists.
int take_earliest(const std::vector<int>& pool, std::vector<bool>& used, std::set<int>& taken,
                  int min_block, const FeedbackConfig& cfg) {
    for (std::size_t i = 0; i < pool.size(); ++i) {
        if (used[i]) continue;
        const int block = cfg.block_of(pool[i]);
        if (block <= min_block || taken.contains(block)) continue;
        used[i] = true;
        taken.insert(block);
        return pool[i];
    }
    return 0;
}

}  // namespace

SlotSchedule build_schedule(int num_tx, int n_groups) {
    if (num_tx < 2) throw std::invalid_argument("build_schedule: K must be >= 2");
    if (n_groups < 1) throw std::invalid_argument("build_schedule: n_groups must be >= 1");

    SlotSchedule s;
    s.num_tx = num_tx;
    s.n_groups = n_groups;
    s.coherence_slots = num_tx + 1;
    s.feedback_slots = 2;
    const FeedbackConfig cfg = s.feedback();

    const int total = (num_tx + 1) * n_groups + num_tx * (num_tx + 1);
    for (int m = 1; m <= total; ++m) {
        s.all_slots.push_back(m);
        if (is_current_slot(m, s.coherence_slots, s.feedback_slots)) {
            s.current_ok.push_back(m);
        } else {
            s.delayed_only.push_back(m);
        }
    }

    std::vector<bool> used_d(s.delayed_only.size(), false);
    std::vector<bool> used_c(s.current_ok.size(), false);
    for (int g = 0; g < n_groups; ++g) {
        std::set<int> blocks;
        IndexSet group;
        const int t1 = take_earliest(s.delayed_only, used_d, blocks, 0, cfg);
        const int t2 = take_earliest(s.delayed_only, used_d, blocks, 0, cfg);
        if (t1 == 0 || t2 == 0) {
            throw std::logic_error("build_schedule: ran out of delayed-CSIT slots");
        }
        group.push_back(t1);
        group.push_back(t2);
        // Phase-two slots must follow both phase-one blocks so that their
        // gains have been fed back.
        const int after = std::max(cfg.block_of(t1), cfg.block_of(t2));
        for (int j = 2; j < num_tx + 1; ++j) {
            const int t = take_earliest(s.current_ok, used_c, blocks, after, cfg);
            if (t == 0) {
                throw std::logic_error("build_schedule: ran out of current-CSIT slots");
            }
            group.push_back(t);
        }
        s.groups.push_back(std::move(group));
    }

    std::set<int> in_groups;
    for (const auto& g : s.groups) in_groups.insert(g.begin(), g.end());
    for (int m : s.all_slots) {
        if (!in_groups.contains(m)) s.filler.push_back(m);
    }
    return s;
}

ScheduleCheck validate_schedule(const SlotSchedule& s) {
    ScheduleCheck out;
    auto fail = [&out](std::string msg) {
        out.ok = false;
        out.violations.push_back(std::move(msg));
    };

    const int K = s.num_tx;
    if (K < 2 || s.n_groups < 1 || s.coherence_slots != K + 1 || s.feedback_slots != 2) {
        fail("parameters: require K >= 2, n_groups >= 1, T_c = K+1, T_fb = 2");
        return out;
    }
    const FeedbackConfig cfg = s.feedback();
    const int n = s.n_groups;

    const auto expected_total = static_cast<std::size_t>((K + 1) * n + K * (K + 1));
    if (s.all_slots.size() != expected_total) fail("|S_t| != (K+1)n + K(K+1)");
    if (s.delayed_only.size() != static_cast<std::size_t>(2 * n + 2 * K)) {
        fail("|S_d| != 2n + 2K");
    }
    if (s.current_ok.size() != static_cast<std::size_t>((K - 1) * n + (K - 1) * K)) {
        fail("|S_c| != (K-1)n + (K-1)K");
    }

    const std::set<int> all(s.all_slots.begin(), s.all_slots.end());
    const std::set<int> sd(s.delayed_only.begin(), s.delayed_only.end());
    const std::set<int> sc(s.current_ok.begin(), s.current_ok.end());
    for (int m : sc) {
        if (sd.contains(m)) {
            fail("S_c and S_d overlap at slot " + std::to_string(m));
            break;
        }
    }
    {
        std::set<int> uni = sd;
        uni.insert(sc.begin(), sc.end());
        if (uni != all) fail("S_c union S_d != S_t");
    }
    for (int m : sc) {
        if (!is_current_slot(m, s.coherence_slots, s.feedback_slots)) {
            fail("slot " + std::to_string(m) + " in S_c without current CSIT");
        }
    }
    for (int m : sd) {
        if (is_current_slot(m, s.coherence_slots, s.feedback_slots)) {
            fail("slot " + std::to_string(m) + " in S_d despite current CSIT");
        }
    }

    if (s.groups.size() != static_cast<std::size_t>(n)) fail("number of groups != n_groups");

    std::set<int> seen;
    for (std::size_t g = 0; g < s.groups.size(); ++g) {
        const IndexSet& grp = s.groups[g];
        const std::string label = "group " + std::to_string(g + 1) + ": ";
        if (grp.size() != static_cast<std::size_t>(K + 1)) {
            fail(label + "size != K+1");
            continue;
        }
        std::set<int> blocks;
        bool dup_block = false;
        for (std::size_t j = 0; j < grp.size(); ++j) {
            const int t = grp[j];
            if (!all.contains(t)) {
                fail(label + "slot " + std::to_string(t) + " outside S_t");
                continue;
            }
            if (j < 2 && !sd.contains(t)) {
                fail(label + "group slot " + std::to_string(j + 1) + " not in S_d");
            }
            if (j >= 2 && !sc.contains(t)) {
                fail(label + "group slot " + std::to_string(j + 1) + " not in S_c");
            }
            if (!blocks.insert(cfg.block_of(t)).second) dup_block = true;
            if (!seen.insert(t).second) {
                fail(label + "slot " + std::to_string(t) + " shared with another group");
            }
        }
        if (dup_block) fail(label + "duplicate block");
        const int last_phase_one = std::max(cfg.block_of(grp[0]), cfg.block_of(grp[1]));
        for (std::size_t j = 2; j < grp.size(); ++j) {
            if (cfg.block_of(grp[j]) <= last_phase_one) {
                fail(label + "group slot " + std::to_string(j + 1) +
                     " precedes the phase-one feedback");
            }
        }
    }

    if (s.filler.size() != static_cast<std::size_t>(K * (K + 1))) fail("|filler| != K(K+1)");
    {
        std::set<int> expected_filler;
        for (int m : all) {
            if (!seen.contains(m)) expected_filler.insert(m);
        }
        if (std::set<int>(s.filler.begin(), s.filler.end()) != expected_filler) {
            fail("filler != S_t minus groups");
        }
    }
    return out;
}

}  // namespace stia
