/**
 * Seeded Monte Carlo simulation of an attacker running a campaign against
 * deployed deceptions.
 *
 * Each trial is a pure function of (scenario file, options, seed): per-trial
 * seeds derive from the master seed by hashing (master, index), every random
 * draw comes from the trial's own generator in a fixed order, and
 * aggregation walks trials by index. Results are therefore bit-identical
 * across runs and across thread counts.
 *
 * Draw order per encounter attempt: notice, then (if noticed) believe,
 * then (if believed) give-up-vs-retry. Draws that a branch makes
 * unreachable are not consumed.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "did/campaign.hpp"
#include "did/decision_tree.hpp"
#include "did/errors.hpp"
#include "did/layer_chain.hpp"
#include "did/rng.hpp"
#include "did/scenario.hpp"
#include "did/types.hpp"

namespace did {

enum class TrialResult { GoalAchieved, GaveUp, Exhausted };

inline const char* trial_result_name(TrialResult r) {
    switch (r) {
        case TrialResult::GoalAchieved: return "goal_achieved";
        case TrialResult::GaveUp: return "gave_up";
        case TrialResult::Exhausted: return "exhausted";
    }
    return "?";
}

/// Whether a give-up (or retry exhaustion) ends the whole campaign or only
/// abandons the current technique.
enum class GiveUpScope { Campaign, Step };

struct SimOptions {
    GiveUpScope give_up_scope = GiveUpScope::Campaign;
    int retry_cap = kRetryCapScale; // scales patience into max_retries
    double alert_bump = kAlertBump;
    int threads = 1;

    bool operator==(const SimOptions&) const = default;
};

struct NoticeEvent {
    int step = 0;
    std::string deception_id;

    bool operator==(const NoticeEvent&) const = default;
};

struct TrialOutcome {
    TrialResult result = TrialResult::GoalAchieved;
    int steps_executed = 0;   // technique steps entered
    double total_time = 0.0;
    double attacker_net = 0.0;
    std::vector<NoticeEvent> notice_events; // one per successful notice draw
    int final_suspicion = 0;
    int total_attempts = 0;   // encounter attempts across the campaign

    bool operator==(const TrialOutcome&) const = default;
};

/// Compact per-trial record for CSV emission.
struct TrialRow {
    TrialResult result = TrialResult::GoalAchieved;
    int steps = 0;
    double time = 0.0;
    double net = 0.0;
    int suspicion = 0;
};

struct SimMetrics {
    int n_trials = 0;
    double deterrence_rate = 0.0; // fraction of trials ending GaveUp
    double deterrence_ci = 0.0;   // 95% halfwidth (0 by convention at n=1)
    double exhausted_rate = 0.0;
    double goal_rate = 0.0;
    double mean_steps = 0.0;
    double mean_steps_ci = 0.0;
    double mean_time = 0.0;
    double mean_time_ci = 0.0;
    double mean_attacker_net = 0.0;
    double mean_attacker_net_ci = 0.0;
    double mean_attempts = 0.0;
    std::uint64_t master_seed = 0;
    std::string scenario_fingerprint;

    bool operator==(const SimMetrics&) const = default;
};

namespace detail {

inline void throw_if_invalid(const ScenarioFile& file) {
    auto violations = validate_file(file);
    if (violations.empty()) return;
    std::string msg = "invalid scenario:";
    for (const auto& v : violations) msg += " [" + v.code + "] " + v.message + ";";
    throw std::invalid_argument(msg);
}

} // namespace detail

/// Run one trial. Deterministic in (file, opts, seed).
inline TrialOutcome run_trial(const ScenarioFile& file, std::uint64_t seed,
                              const SimOptions& opts = {}) {
    detail::throw_if_invalid(file);

    Xoshiro256 rng(seed);
    ExposureState exposure = make_exposure_state(file.scenario.threshold);
    TrialOutcome trial;
    double net = 0.0;
    double time = 0.0;
    bool campaign_over = false;

    for (std::size_t s = 0; s < file.scenario.techniques.size() && !campaign_over; ++s) {
        const Technique& tech = file.scenario.techniques[s];
        ++trial.steps_executed;
        time += tech.base_duration;

        // The behavior switch applies from the step after the threshold
        // was crossed; within a step the profile is frozen.
        const AttackerProfile step_profile =
            exposure.alerted ? alerted_profile(file.profile, opts.alert_bump) : file.profile;

        auto deployed = file.scenario.deployment.find(tech.layer);
        if (deployed == file.scenario.deployment.end()) continue;
        for (const std::string& id : deployed->second) {
            const DeceptionEntry* entry = file.find_deception(id);
            if (!entry || !entry->applicable_techniques.count(tech.id)) continue;

            const ExcuseTreeParams params =
                derive_tree_params(step_profile, *entry, file.costs, opts.retry_cap);
            const int attempts_allowed = params.max_retries + 1;
            bool step_abandoned = false;

            for (int attempt = 1;; ++attempt) {
                ++trial.total_attempts;
                net -= params.c_i;

                const double p_notice =
                    effective_probability(params.p_n, entry->id, exposure,
                                          file.scenario.conditional_table);
                if (!rng.bernoulli(p_notice)) {
                    net += params.b_nw - params.c_nw; // excuse unnoticed: proceed
                    break;
                }
                trial.notice_events.push_back({static_cast<int>(s), entry->id});
                if (!exposure.has_noticed(entry->id)) time += entry->delay_inflicted;
                exposure = record_notice(exposure, entry->id);

                if (!rng.bernoulli(params.p_b)) {
                    net += params.b_nw - params.c_nw; // noticed but disbelieved: proceed
                    break;
                }
                if (rng.bernoulli(params.p_g)) {
                    trial.result = TrialResult::GaveUp; // believed and gave up
                    if (opts.give_up_scope == GiveUpScope::Campaign) campaign_over = true;
                    step_abandoned = true;
                    break;
                }
                if (attempt >= attempts_allowed) {
                    trial.result = TrialResult::Exhausted; // retry denied by the cap
                    if (opts.give_up_scope == GiveUpScope::Campaign) campaign_over = true;
                    step_abandoned = true;
                    break;
                }
                time += 1.0; // one time unit per retry
            }
            if (campaign_over || step_abandoned) break;
        }
    }

    if (!campaign_over) {
        // The campaign ran to completion (including step-scoped give-ups).
        if (opts.give_up_scope == GiveUpScope::Step || trial.result == TrialResult::GoalAchieved) {
            trial.result = TrialResult::GoalAchieved;
            net += file.scenario.goal_benefit;
        }
    }
    trial.attacker_net = net;
    trial.total_time = time;
    trial.final_suspicion = exposure.suspicion_count;
    return trial;
}

namespace detail {

struct TrialScalars {
    TrialResult result;
    int steps;
    double time;
    double net;
    int suspicion;
    int attempts;
};

inline double mean_of(const std::vector<double>& xs) {
    double sum = 0.0;
    for (double x : xs) sum += x;
    return xs.empty() ? 0.0 : sum / static_cast<double>(xs.size());
}

/// 95% normal-approximation halfwidth; 0 by convention for n < 2.
inline double ci_halfwidth(const std::vector<double>& xs, double mean) {
    const std::size_t n = xs.size();
    if (n < 2) return 0.0;
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    return 1.96 * sd / std::sqrt(static_cast<double>(n));
}

} // namespace detail

/// Run n_trials independent trials and aggregate. Per-trial scalars can be
/// captured through `rows` for CSV output. Thread count never changes the
/// result: trial i's seed is hash(master_seed, i) and aggregation is by
/// trial index.
inline SimMetrics run_monte_carlo(const ScenarioFile& file, int n_trials,
                                  std::uint64_t master_seed, const SimOptions& opts = {},
                                  std::vector<TrialRow>* rows = nullptr) {
    if (n_trials < 1) throw std::invalid_argument("n_trials must be >= 1");
    detail::throw_if_invalid(file);

    std::vector<detail::TrialScalars> scalars(static_cast<std::size_t>(n_trials));
    const int threads = std::max(1, opts.threads);

    auto worker = [&](int begin, int end) {
        for (int i = begin; i < end; ++i) {
            TrialOutcome t = run_trial(file, trial_seed(master_seed, static_cast<std::uint64_t>(i)),
                                       opts);
            scalars[static_cast<std::size_t>(i)] = {t.result,        t.steps_executed,
                                                    t.total_time,    t.attacker_net,
                                                    t.final_suspicion, t.total_attempts};
        }
    };
    if (threads == 1) {
        worker(0, n_trials);
    } else {
        std::vector<std::thread> pool;
        const int chunk = (n_trials + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            const int begin = t * chunk;
            const int end = std::min(n_trials, begin + chunk);
            if (begin < end) pool.emplace_back(worker, begin, end);
        }
        for (auto& th : pool) th.join();
    }

    SimMetrics metrics;
    metrics.n_trials = n_trials;
    metrics.master_seed = master_seed;
    metrics.scenario_fingerprint = scenario_fingerprint(file);

    std::vector<double> steps, times, nets;
    steps.reserve(scalars.size());
    times.reserve(scalars.size());
    nets.reserve(scalars.size());
    int gave_up = 0, exhausted = 0, goal = 0;
    double attempts_sum = 0.0;
    for (const auto& s : scalars) {
        switch (s.result) {
            case TrialResult::GaveUp: ++gave_up; break;
            case TrialResult::Exhausted: ++exhausted; break;
            case TrialResult::GoalAchieved: ++goal; break;
        }
        steps.push_back(static_cast<double>(s.steps));
        times.push_back(s.time);
        nets.push_back(s.net);
        attempts_sum += static_cast<double>(s.attempts);
    }
    const double n = static_cast<double>(n_trials);
    metrics.deterrence_rate = static_cast<double>(gave_up) / n;
    metrics.exhausted_rate = static_cast<double>(exhausted) / n;
    metrics.goal_rate = static_cast<double>(goal) / n;
    metrics.deterrence_ci =
        n < 2 ? 0.0
              : 1.96 * std::sqrt(metrics.deterrence_rate * (1.0 - metrics.deterrence_rate) / n);
    metrics.mean_steps = detail::mean_of(steps);
    metrics.mean_steps_ci = detail::ci_halfwidth(steps, metrics.mean_steps);
    metrics.mean_time = detail::mean_of(times);
    metrics.mean_time_ci = detail::ci_halfwidth(times, metrics.mean_time);
    metrics.mean_attacker_net = detail::mean_of(nets);
    metrics.mean_attacker_net_ci = detail::ci_halfwidth(nets, metrics.mean_attacker_net);
    metrics.mean_attempts = attempts_sum / n;

    if (rows) {
        rows->clear();
        rows->reserve(scalars.size());
        for (const auto& s : scalars)
            rows->push_back({s.result, s.steps, s.time, s.net, s.suspicion});
    }
    return metrics;
}

// ---------------------------------------------------------------------------
// Simulation vs analytic cross-check
// ---------------------------------------------------------------------------

struct AgreementReport {
    double z_deterrence = 0.0;
    double z_net = 0.0;
    bool pass = false;
    bool insufficient_samples = false;
    std::string notes;
};

/// Compare simulated metrics to an analytic valuation of the same
/// single-deception scenario. PASS iff both z-scores are within 3.
/// Fingerprints, when present on both sides, must match.
inline AgreementReport compare_to_analytic(const SimMetrics& metrics, const Valuation& valuation) {
    if (!metrics.scenario_fingerprint.empty() && !valuation.scenario_fingerprint.empty() &&
        metrics.scenario_fingerprint != valuation.scenario_fingerprint)
        throw std::invalid_argument("scenario fingerprints do not match: " +
                                    metrics.scenario_fingerprint + " vs " +
                                    valuation.scenario_fingerprint);

    AgreementReport report;
    const double n = static_cast<double>(metrics.n_trials);
    if (metrics.n_trials < 2) {
        report.insufficient_samples = true;
        report.notes = "need at least 2 trials for a z-test";
        return report;
    }

    const double p = valuation.deterrence_prob;
    const double se_deter = std::sqrt(p * (1.0 - p) / n);
    const double deter_diff = metrics.deterrence_rate - p;
    if (se_deter > 0.0)
        report.z_deterrence = deter_diff / se_deter;
    else
        report.z_deterrence = deter_diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();

    const double se_net = metrics.mean_attacker_net_ci / 1.96;
    const double net_diff = metrics.mean_attacker_net - valuation.attacker_expected_net;
    if (se_net > 0.0)
        report.z_net = net_diff / se_net;
    else
        report.z_net = net_diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();

    report.pass = std::abs(report.z_deterrence) <= 3.0 && std::abs(report.z_net) <= 3.0;
    return report;
}

} // namespace did
