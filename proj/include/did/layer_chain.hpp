/**
 * Composition of deceptions across layers.
 *
 * Deceptions encountered in sequence are not independent: noticing one
 * changes the effective probability of later ones through a pairwise
 * multiplier table, and once the number of noticed deceptions reaches the
 * scenario threshold the attacker switches behavior (higher alertness and
 * suspiciousness for the rest of the campaign).
 *
 * ExposureState is a value; operations return new states, so per-trial
 * copies can evolve independently in parallel simulations.
 */

#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "did/types.hpp"

namespace did {

/// What the attacker has noticed so far, and whether the cumulative
/// threshold has been crossed.
struct ExposureState {
    std::vector<std::string> noticed_ids; // insertion order, no duplicates
    int suspicion_count = 0;              // == noticed_ids.size()
    int threshold = 1;
    bool alerted = false;                 // == suspicion_count >= threshold

    bool has_noticed(const std::string& id) const {
        return std::find(noticed_ids.begin(), noticed_ids.end(), id) != noticed_ids.end();
    }

    bool operator==(const ExposureState&) const = default;
};

inline ExposureState make_exposure_state(int threshold) {
    ExposureState state;
    state.threshold = threshold;
    state.alerted = state.suspicion_count >= threshold;
    return state;
}

/// Effective probability of deception `later_id` given what has already
/// been noticed: base scaled by the product of the conditional multipliers
/// of every noticed prior, clamped to [0,1]. An empty state returns the
/// base unchanged (independence).
inline double effective_probability(double base, const std::string& later_id,
                                    const ExposureState& state, const ConditionalTable& table) {
    double scaled = base;
    for (const std::string& prior : state.noticed_ids)
        scaled *= table.multiplier(prior, later_id);
    return clamp01(scaled);
}

/// Record that a deception was noticed. Idempotent: noticing the same id
/// again returns the state unchanged.
inline ExposureState record_notice(const ExposureState& state, const std::string& deception_id) {
    if (state.has_noticed(deception_id)) return state;
    ExposureState next = state;
    next.noticed_ids.push_back(deception_id);
    next.suspicion_count = static_cast<int>(next.noticed_ids.size());
    next.alerted = next.suspicion_count >= next.threshold;
    return next;
}

/// Default attribute bump applied once the threshold is crossed.
inline constexpr double kAlertBump = 0.25;

/// The attacker's post-threshold behavior switch: alertness and
/// suspiciousness rise (clamped to 1); patience, adaptability, and skill
/// are unchanged.
inline AttackerProfile alerted_profile(const AttackerProfile& profile, double bump = kAlertBump) {
    AttackerProfile out = profile;
    out.alertness = std::min(1.0, profile.alertness + bump);
    out.suspiciousness = std::min(1.0, profile.suspiciousness + bump);
    return out;
}

} // namespace did
