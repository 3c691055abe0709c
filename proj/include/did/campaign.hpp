/**
 * Exact analytic evaluation of a whole campaign against a deployment.
 *
 * The attacker walks the techniques in order; at each step every deployed
 * deception applicable at that technique's layer is one false-excuse
 * encounter. The evaluator runs a dynamic program over the set of noticed
 * deceptions (a bitmask), which captures both the conditional-probability
 * multipliers between deceptions and the cumulative-suspicion threshold:
 * once the number of noticed deceptions reaches the threshold, subsequent
 * steps use the alerted attacker profile.
 *
 * Per encounter the retry recursion is solved in closed form. Attempt 1
 * can differ from later attempts (noticing a deception adds it to the
 * mask, which may change its own effective notice probability through a
 * self multiplier), so the encounter is a two-phase geometric series.
 *
 * By default retries are unbounded, matching closed_form_excuse_value; an
 * option respects the derived retry cap instead, matching the simulator
 * exactly. The difference is the tail mass (p_n*p_b*p_r)^(cap+1).
 */

#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "did/decision_tree.hpp"
#include "did/errors.hpp"
#include "did/layer_chain.hpp"
#include "did/scenario.hpp"
#include "did/types.hpp"

namespace did {

/// Raised when a scenario has interactions this evaluator cannot express
/// (too many distinct deployed deceptions for the mask representation).
class AnalyticUnsupported : public Error {
public:
    explicit AnalyticUnsupported(const std::string& msg) : Error(msg) {}
};

/// Campaign-level expectations.
struct CampaignValuation {
    double deterrence_prob = 0.0; // attacker gave up
    double exhausted_prob = 0.0;  // attacker ran out of retries
    double goal_prob = 0.0;       // attacker completed every technique
    double expected_net = 0.0;    // attacker's expected payoff
    double expected_time = 0.0;
    double expected_steps = 0.0;

    /// Probability the attacker did not reach the goal.
    double defender_success_prob() const { return 1.0 - goal_prob; }
};

struct AnalyticOptions {
    bool respect_retry_cap = false; // true mirrors the simulator's retry cap
    int retry_cap = kRetryCapScale;
    double alert_bump = kAlertBump;
};

/// One encounter: a technique step index and the deception met there.
struct Encounter {
    int step = 0;
    const Technique* technique = nullptr;
    const DeceptionEntry* deception = nullptr;
};

/// The ordered encounter list: per technique, deceptions deployed at that
/// technique's layer (in deployment order) that apply to the technique.
inline std::vector<Encounter> build_encounters(const ScenarioFile& file) {
    std::vector<Encounter> encounters;
    for (std::size_t s = 0; s < file.scenario.techniques.size(); ++s) {
        const Technique& tech = file.scenario.techniques[s];
        auto deployed = file.scenario.deployment.find(tech.layer);
        if (deployed == file.scenario.deployment.end()) continue;
        for (const std::string& id : deployed->second) {
            const DeceptionEntry* entry = file.find_deception(id);
            if (entry && entry->applicable_techniques.count(tech.id))
                encounters.push_back({static_cast<int>(s), &tech, entry});
        }
    }
    return encounters;
}

namespace detail {

/// Per-class outcome of one encounter: probability mass, expected attempts
/// restricted to the class, and whether the deception was noticed.
struct EncounterClass {
    double mass = 0.0;
    double attempts = 0.0; // E[attempts * 1{class}]
    bool noticed = false;
};

struct EncounterSplit {
    EncounterClass proceed_unnoticed;
    EncounterClass proceed_noticed;
    EncounterClass deterred;
    EncounterClass exhausted;
};

/// Solve the two-phase retry recursion. p1 is the notice probability on
/// attempt 1, p2 on later attempts (the mask then contains the deception).
/// attempts_cap < 0 means unbounded.
inline EncounterSplit solve_encounter(double p1, double p2, double p_b, double p_g, double p_r,
                                      long attempts_cap) {
    const double q1 = p1 * p_b * p_r;
    const double q2 = p2 * p_b * p_r;

    EncounterSplit split;
    split.proceed_unnoticed = {1.0 - p1, 1.0 - p1, false};

    // Per-attempt absorbing masses from attempt 2 onward.
    const double late_proceed = (1.0 - p2) + p2 * (1.0 - p_b);
    const double late_deter = p2 * p_b * p_g;

    double geom_mass;      // sum over t>=2 of q2^(t-2)
    double geom_attempts;  // sum over t>=2 of t * q2^(t-2)
    double tail = 0.0;     // probability of exhausting, given attempt 2 reached
    double tail_attempts = 0.0;
    if (attempts_cap < 0) {
        if (q2 >= 1.0)
            throw DivergenceError("encounter retry loop is absorbing (p_n*p_b*p_r = 1)");
        const double geom = 1.0 / (1.0 - q2);
        geom_mass = geom;
        geom_attempts = q2 * geom * geom + 2.0 * geom;
    } else if (attempts_cap <= 1) {
        // Attempt 1 is the only one allowed: a retry draw exhausts at once.
        geom_mass = 0.0;
        geom_attempts = 0.0;
        tail = 1.0;
        tail_attempts = 1.0;
    } else {
        const long extra = attempts_cap - 1; // attempts 2..cap
        if (q2 >= 1.0) {
            geom_mass = static_cast<double>(extra);
            // sum_{t=2}^{cap} t = cap*(cap+1)/2 - 1
            geom_attempts =
                static_cast<double>(attempts_cap) * static_cast<double>(attempts_cap + 1) / 2.0 -
                1.0;
            tail = 1.0;
        } else {
            double q2_pow = std::pow(q2, static_cast<double>(extra));
            const double one_minus = 1.0 - q2;
            // sums over u = 0..extra-1 of q2^u and u*q2^u
            const double g1 = (1.0 - q2_pow) / one_minus;
            const double g2 =
                (q2 - static_cast<double>(extra) * q2_pow + static_cast<double>(extra - 1) * q2_pow * q2) /
                (one_minus * one_minus);
            geom_mass = g1;
            geom_attempts = g2 + 2.0 * g1;
            tail = q2_pow;
        }
        tail_attempts = static_cast<double>(attempts_cap);
    }

    split.proceed_noticed.noticed = true;
    split.proceed_noticed.mass = p1 * (1.0 - p_b) + q1 * late_proceed * geom_mass;
    split.proceed_noticed.attempts = p1 * (1.0 - p_b) + q1 * late_proceed * geom_attempts;

    split.deterred.noticed = true;
    split.deterred.mass = p1 * p_b * p_g + q1 * late_deter * geom_mass;
    split.deterred.attempts = p1 * p_b * p_g + q1 * late_deter * geom_attempts;

    split.exhausted.noticed = true;
    split.exhausted.mass = q1 * tail;
    split.exhausted.attempts = q1 * tail * tail_attempts;
    return split;
}

struct StateAcc {
    double prob = 0.0;
    double net = 0.0;  // E[net * 1{state}]
    double time = 0.0; // E[time * 1{state}]
};

} // namespace detail

/// Exact campaign expectation under campaign-scoped give-up semantics
/// (a give-up or exhaustion ends the whole campaign).
///
/// State space: when the conditional table is default and no deception is
/// met twice, only the suspicion count matters and the DP runs over counts
/// (O(k^2)). Otherwise the state is the set of noticed deceptions, which
/// holds up to 20 distinct ids.
inline CampaignValuation evaluate_campaign(const ScenarioFile& file,
                                           const AnalyticOptions& opts = {}) {
    const auto encounters = build_encounters(file);

    // Index the distinct deceptions that can actually be noticed.
    std::map<std::string, int> index_of;
    bool repeat_encounter = false;
    for (const auto& enc : encounters) {
        if (index_of.count(enc.deception->id))
            repeat_encounter = true;
        else
            index_of[enc.deception->id] = static_cast<int>(index_of.size());
    }
    const ConditionalTable& table = file.scenario.conditional_table;
    const bool count_state = table.is_default() && !repeat_encounter;
    if (!count_state && index_of.size() > 20)
        throw AnalyticUnsupported("analytic evaluation supports at most 20 distinct deployed "
                                  "deceptions when conditional multipliers are present; "
                                  "use Monte Carlo");
    std::vector<std::string> ids(index_of.size());
    for (const auto& [id, idx] : index_of) ids[idx] = id;

    const int threshold = file.scenario.threshold;
    const auto suspicion_of = [count_state](std::uint64_t state) {
        return count_state ? static_cast<int>(state) : std::popcount(state);
    };

    // State key: (noticed mask | suspicion count) << 1 | alerted-at-entry.
    std::map<std::uint64_t, detail::StateAcc> dist;
    dist[0] = {1.0, 0.0, 0.0};

    CampaignValuation out;
    detail::StateAcc deter_acc, exhaust_acc;

    int current_step = -1;
    for (const auto& enc : encounters) {
        // Step boundary: charge base durations of any steps entered since
        // the previous encounter and refresh the alerted flag.
        while (current_step < enc.step) {
            ++current_step;
            const double duration = file.scenario.techniques[current_step].base_duration;
            std::map<std::uint64_t, detail::StateAcc> next;
            for (const auto& [key, acc] : dist) {
                const std::uint64_t state = key >> 1;
                const bool alerted = suspicion_of(state) >= threshold;
                auto& slot = next[(state << 1) | (alerted ? 1u : 0u)];
                slot.prob += acc.prob;
                slot.net += acc.net;
                slot.time += acc.time + acc.prob * duration;
                out.expected_steps += acc.prob;
            }
            dist = std::move(next);
        }

        const int i = index_of[enc.deception->id];
        std::map<std::uint64_t, detail::StateAcc> next;
        for (const auto& [key, acc] : dist) {
            const std::uint64_t state = key >> 1;
            const bool alerted = key & 1u;
            const AttackerProfile profile =
                alerted ? alerted_profile(file.profile, opts.alert_bump) : file.profile;
            const ExcuseTreeParams params =
                derive_tree_params(profile, *enc.deception, file.costs, opts.retry_cap);

            double p1 = params.p_n;
            double p2 = params.p_n;
            bool newly_noticed = true;
            std::uint64_t state_noticed = state + 1; // count mode
            if (!count_state) {
                for (std::size_t j = 0; j < ids.size(); ++j)
                    if (state & (1ull << j)) p1 *= table.multiplier(ids[j], enc.deception->id);
                state_noticed = state | (1ull << i);
                p2 = params.p_n;
                for (std::size_t j = 0; j < ids.size(); ++j)
                    if (state_noticed & (1ull << j))
                        p2 *= table.multiplier(ids[j], enc.deception->id);
                newly_noticed = !(state & (1ull << i));
                if (!newly_noticed) state_noticed = state;
            }
            p1 = clamp01(p1);
            p2 = clamp01(p2);

            const long cap = opts.respect_retry_cap ? params.max_retries + 1L : -1L;
            const auto split = detail::solve_encounter(p1, p2, params.p_b, params.p_g,
                                                       params.p_r, cap);

            const double proceed_payoff = params.b_nw - params.c_nw;

            auto push = [&](const detail::EncounterClass& cls, detail::StateAcc& slot,
                            double payoff) {
                if (cls.mass <= 0.0) return;
                const double retries = cls.attempts - cls.mass;
                const double delay =
                    (cls.noticed && newly_noticed) ? enc.deception->delay_inflicted : 0.0;
                slot.prob += acc.prob * cls.mass;
                slot.net += acc.net * cls.mass +
                            acc.prob * (-params.c_i * cls.attempts + payoff * cls.mass);
                slot.time += acc.time * cls.mass + acc.prob * (retries + delay * cls.mass);
            };

            push(split.proceed_unnoticed, next[(state << 1) | (alerted ? 1u : 0u)],
                 proceed_payoff);
            push(split.proceed_noticed, next[(state_noticed << 1) | (alerted ? 1u : 0u)],
                 proceed_payoff);
            push(split.deterred, deter_acc, 0.0);
            push(split.exhausted, exhaust_acc, 0.0);
        }
        dist = std::move(next);
    }

    // Steps after the last encounter still take their base duration.
    const int total_steps = static_cast<int>(file.scenario.techniques.size());
    while (current_step < total_steps - 1) {
        ++current_step;
        const double duration = file.scenario.techniques[current_step].base_duration;
        for (auto& [key, acc] : dist) {
            acc.time += acc.prob * duration;
            out.expected_steps += acc.prob;
        }
    }

    for (const auto& [key, acc] : dist) {
        out.goal_prob += acc.prob;
        out.expected_net += acc.net + acc.prob * file.scenario.goal_benefit;
        out.expected_time += acc.time;
    }
    out.deterrence_prob = deter_acc.prob;
    out.exhausted_prob = exhaust_acc.prob;
    out.expected_net += deter_acc.net + exhaust_acc.net;
    out.expected_time += deter_acc.time + exhaust_acc.time;
    return out;
}

} // namespace did
