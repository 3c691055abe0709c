/**
 * Deception placement under a defender budget.
 *
 * The objective is a weighted scalarization:
 *
 *   value = w_deter * P(attacker fails to reach the goal)
 *         + w_time  * normalized expected attacker time
 *         - w_cost  * total_cost / budget
 *
 * Time is normalized by the campaign's maximum conceivable duration given
 * the whole catalog, so the term is plan-independent in scale and lies in
 * [0,1]. Deterrence and time come from the exact analytic campaign
 * evaluator; scenarios it cannot express fall back to a seeded Monte Carlo
 * estimate with a warning, which keeps planning deterministic.
 *
 * plan_exhaustive enumerates all feasible subsets (catalogs up to 15
 * entries); plan_greedy adds the best marginal-gain-per-cost deception
 * until no positive-gain addition fits. Ties break by higher value, then
 * lower cost, then lexicographic id order, so results are identical no
 * matter how evaluations are scheduled.
 */

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "did/attacker_sim.hpp"
#include "did/campaign.hpp"
#include "did/errors.hpp"
#include "did/scenario.hpp"
#include "did/types.hpp"

namespace did {

enum class EvalMode { Analytic, MonteCarlo };

struct Objective {
    double w_deter = 1.0;
    double w_time = 0.0;
    double w_cost = 0.0;
    EvalMode mode = EvalMode::Analytic;
    int mc_trials = 10000;
    std::uint64_t mc_seed = 0;
};

inline void validate_objective(const Objective& objective) {
    if (objective.w_deter < 0.0 || objective.w_time < 0.0 || objective.w_cost < 0.0)
        throw std::invalid_argument("objective weights must be >= 0");
    if (objective.w_deter <= 0.0 && objective.w_time <= 0.0 && objective.w_cost <= 0.0)
        throw std::invalid_argument("at least one objective weight must be > 0");
    if (objective.mc_trials < 1) throw std::invalid_argument("mc_trials must be >= 1");
}

enum class PlanMethod { Exhaustive, Greedy };

inline const char* plan_method_name(PlanMethod m) {
    return m == PlanMethod::Exhaustive ? "exhaustive" : "greedy";
}

struct DeploymentPlan {
    std::vector<std::pair<std::string, Layer>> chosen; // sorted by id
    double total_cost = 0.0;
    double objective_value = 0.0;
    PlanMethod method = PlanMethod::Exhaustive;

    std::vector<std::string> chosen_ids() const {
        std::vector<std::string> ids;
        ids.reserve(chosen.size());
        for (const auto& [id, layer] : chosen) ids.push_back(id);
        return ids;
    }

    bool operator==(const DeploymentPlan&) const = default;
};

namespace detail {

/// Upper bound on campaign time, independent of the chosen plan: every
/// catalog deception noticed everywhere it applies, every retry taken.
inline double max_campaign_time(const ScenarioFile& file, int retry_cap) {
    const int cap = static_cast<int>(std::floor(clamp01(file.profile.patience) * retry_cap));
    double total = 0.0;
    for (const auto& tech : file.scenario.techniques) {
        total += tech.base_duration;
        for (const auto& entry : file.catalog)
            if (entry.layer == tech.layer && entry.applicable_techniques.count(tech.id))
                total += entry.delay_inflicted + static_cast<double>(cap);
    }
    return total;
}

/// Replace the scenario's deployment with the chosen ids, grouped by each
/// deception's declared layer in catalog order.
inline ScenarioFile with_deployment(const ScenarioFile& file,
                                    const std::vector<std::string>& chosen_ids) {
    ScenarioFile out = file;
    out.scenario.deployment.clear();
    for (const auto& entry : file.catalog) {
        if (std::find(chosen_ids.begin(), chosen_ids.end(), entry.id) != chosen_ids.end())
            out.scenario.deployment[entry.layer].push_back(entry.id);
    }
    return out;
}

} // namespace detail

/// Evaluate the objective for a candidate deployment. `budget` only enters
/// the cost term (0 budget drops it: only the empty plan is feasible then).
/// Falls back from Analytic to Monte Carlo when the analytic evaluator
/// cannot express the scenario, appending a note to `warnings`.
inline double objective_value(const ScenarioFile& file, const std::vector<std::string>& chosen_ids,
                              const Objective& objective, double budget,
                              std::vector<std::string>* warnings = nullptr) {
    validate_objective(objective);
    const ScenarioFile candidate = detail::with_deployment(file, chosen_ids);

    double total_cost = 0.0;
    for (const auto& id : chosen_ids) {
        const DeceptionEntry* entry = file.find_deception(id);
        if (!entry) throw std::invalid_argument("plan references unknown deception id '" + id + "'");
        total_cost += entry->deploy_cost;
    }

    double deter = 0.0;
    double expected_time = 0.0;
    bool use_monte_carlo = objective.mode == EvalMode::MonteCarlo;
    if (!use_monte_carlo) {
        try {
            const CampaignValuation val = evaluate_campaign(candidate);
            deter = val.defender_success_prob();
            expected_time = val.expected_time;
        } catch (const Error& e) {
            if (warnings)
                warnings->push_back(std::string("analytic evaluation unavailable (") + e.what() +
                                    "); falling back to Monte Carlo");
            use_monte_carlo = true;
        }
    }
    if (use_monte_carlo) {
        const SimMetrics metrics =
            run_monte_carlo(candidate, objective.mc_trials, objective.mc_seed);
        deter = 1.0 - metrics.goal_rate;
        expected_time = metrics.mean_time;
    }

    const double time_cap = detail::max_campaign_time(file, kRetryCapScale);
    const double time_norm = time_cap > 0.0 ? clamp01(expected_time / time_cap) : 0.0;
    const double cost_term = budget > 0.0 ? total_cost / budget : 0.0;
    return objective.w_deter * deter + objective.w_time * time_norm - objective.w_cost * cost_term;
}

namespace detail {

inline bool plan_better(double value_a, double cost_a, const std::vector<std::string>& ids_a,
                        double value_b, double cost_b, const std::vector<std::string>& ids_b) {
    if (value_a != value_b) return value_a > value_b;
    if (cost_a != cost_b) return cost_a < cost_b;
    return ids_a < ids_b;
}

inline DeploymentPlan finish_plan(const ScenarioFile& file, std::vector<std::string> ids,
                                  double cost, double value, PlanMethod method) {
    std::sort(ids.begin(), ids.end());
    DeploymentPlan plan;
    for (const auto& id : ids) plan.chosen.emplace_back(id, file.find_deception(id)->layer);
    plan.total_cost = cost;
    plan.objective_value = value;
    plan.method = method;
    return plan;
}

} // namespace detail

/// Search every subset of the catalog. Requires |catalog| <= 15.
inline DeploymentPlan plan_exhaustive(const ScenarioFile& file, double budget,
                                      const Objective& objective,
                                      std::vector<std::string>* warnings = nullptr) {
    validate_objective(objective);
    if (budget < 0.0) throw std::invalid_argument("budget must be >= 0");
    const std::size_t n = file.catalog.size();
    if (n > 15)
        throw std::invalid_argument("catalog too large for exhaustive search (" +
                                    std::to_string(n) + " > 15 entries); use the greedy planner");

    std::vector<std::string> best_ids;
    double best_cost = 0.0;
    double best_value = 0.0;
    bool have_best = false;

    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        double cost = 0.0;
        std::vector<std::string> ids;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (1u << i)) {
                cost += file.catalog[i].deploy_cost;
                ids.push_back(file.catalog[i].id);
            }
        }
        if (cost > budget) continue;
        std::sort(ids.begin(), ids.end());
        const double value = objective_value(file, ids, objective, budget, warnings);
        if (!have_best || detail::plan_better(value, cost, ids, best_value, best_cost, best_ids)) {
            best_ids = std::move(ids);
            best_cost = cost;
            best_value = value;
            have_best = true;
        }
    }
    return detail::finish_plan(file, best_ids, best_cost, best_value, PlanMethod::Exhaustive);
}

/// Greedy marginal-gain-per-cost heuristic; scales to any catalog size.
inline DeploymentPlan plan_greedy(const ScenarioFile& file, double budget,
                                  const Objective& objective,
                                  std::vector<std::string>* warnings = nullptr) {
    validate_objective(objective);
    if (budget < 0.0) throw std::invalid_argument("budget must be >= 0");

    std::vector<std::string> chosen;
    double cost = 0.0;
    double value = objective_value(file, chosen, objective, budget, warnings);

    std::vector<bool> taken(file.catalog.size(), false);
    while (true) {
        int best_index = -1;
        double best_score = 0.0, best_gain = 0.0, best_value = 0.0;
        for (std::size_t i = 0; i < file.catalog.size(); ++i) {
            if (taken[i]) continue;
            const DeceptionEntry& entry = file.catalog[i];
            if (cost + entry.deploy_cost > budget) continue;
            std::vector<std::string> candidate = chosen;
            candidate.push_back(entry.id);
            std::sort(candidate.begin(), candidate.end());
            const double cand_value = objective_value(file, candidate, objective, budget, warnings);
            const double gain = cand_value - value;
            if (gain <= 0.0) continue;
            const double score = gain / std::max(entry.deploy_cost, 1e-12);
            const bool better =
                best_index < 0 || score > best_score ||
                (score == best_score &&
                 (gain > best_gain ||
                  (gain == best_gain && entry.id < file.catalog[best_index].id)));
            if (better) {
                best_index = static_cast<int>(i);
                best_score = score;
                best_gain = gain;
                best_value = cand_value;
            }
        }
        if (best_index < 0) break;
        taken[best_index] = true;
        chosen.push_back(file.catalog[best_index].id);
        std::sort(chosen.begin(), chosen.end());
        cost += file.catalog[best_index].deploy_cost;
        value = best_value;
    }
    return detail::finish_plan(file, chosen, cost, value, PlanMethod::Greedy);
}

} // namespace did
