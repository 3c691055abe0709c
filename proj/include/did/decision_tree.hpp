/**
 * Decision trees for false-excuse deceptions.
 *
 * The canonical tree models one encounter with a false excuse (e.g. a faked
 * "network is down" error). Per attempt the attacker pays the connection
 * cost c_i and then one of four things happens:
 *
 *   - with probability 1 - p_n they do not notice the excuse and simply
 *     proceed, collecting b_nw - c_nw;
 *   - with probability p_n * (1 - p_b) they notice it but do not believe
 *     it, proceed with the same payoff, and grow more suspicious;
 *   - with probability p_n * p_b * p_g they believe it and give up;
 *   - with probability p_n * p_b * p_r they believe it and retry, paying
 *     c_i again on the next attempt, up to max_retries retries. Once the
 *     cap is hit the encounter ends as Exhausted with no further payoff.
 *
 * Retries re-incur c_i only, not c_nw: the maintenance cost attaches to a
 * maintained connection, which only proceed paths reach.
 *
 * Evaluation is exact finite-horizon path enumeration (the repeat is
 * expanded up to `horizon` times); the closed form is the geometric-series
 * limit of the same recursion and the two agree up to the truncated tail
 * mass (p_n*p_b*p_r)^horizon.
 */

#pragma once

#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "did/errors.hpp"
#include "did/types.hpp"

namespace did {

// ---------------------------------------------------------------------------
// Parameters
// ---------------------------------------------------------------------------

/// Retry cap meaning "no cap": evaluation is then bounded by the horizon.
inline constexpr int kUnlimitedRetries = std::numeric_limits<int>::max();

/// Costs, benefits, and branch probabilities of a false-excuse encounter.
struct ExcuseTreeParams {
    double c_i = 0.0;   // cost of initial connection, paid per attempt
    double c_nw = 0.0;  // cost of maintaining the connection
    double b_nw = 0.0;  // benefit of the maintained connection
    double p_n = 0.0;   // probability the attacker notices the excuse
    double p_b = 0.0;   // probability the attacker believes the excuse
    double p_g = 0.0;   // probability the attacker gives up (given belief)
    double p_r = 0.0;   // probability the attacker retries (given belief)
    int max_retries = kUnlimitedRetries;

    /// Probability mass that recurses per attempt.
    double retry_mass() const { return p_n * p_b * p_r; }

    bool operator==(const ExcuseTreeParams&) const = default;
};

inline void validate_params(const ExcuseTreeParams& p) {
    auto fail = [](const std::string& msg) { throw std::invalid_argument("excuse tree params: " + msg); };
    if (!(p.c_i >= 0.0) || !(p.c_nw >= 0.0) || !(p.b_nw >= 0.0)) fail("costs and benefit must be >= 0");
    for (double prob : {p.p_n, p.p_b, p.p_g, p.p_r})
        if (!in_unit_interval(prob)) fail("probabilities must lie in [0,1]");
    if (std::abs(p.p_g + p.p_r - 1.0) > 1e-9) fail("p_g + p_r must equal 1");
    if (p.max_retries < 0) fail("max_retries must be >= 0");
}

// ---------------------------------------------------------------------------
// Tree structure
// ---------------------------------------------------------------------------

enum class Outcome { Deterred, Proceeded, Exhausted };

inline const char* outcome_name(Outcome o) {
    switch (o) {
        case Outcome::Deterred: return "deterred";
        case Outcome::Proceeded: return "proceeded";
        case Outcome::Exhausted: return "exhausted";
    }
    return "?";
}

struct ChanceNode;
struct CostNode;
struct TerminalNode;
struct RepeatNode;

using TreeNode = std::variant<ChanceNode, CostNode, TerminalNode, RepeatNode>;
using NodePtr = std::shared_ptr<const TreeNode>;

/// Probabilistic branching; branch probabilities must sum to 1 within 1e-9.
struct ChanceNode {
    std::string label;
    std::vector<std::pair<double, NodePtr>> branches;
};

/// Adds a signed payoff delta to every path passing through.
struct CostNode {
    double delta = 0.0;
    NodePtr child;
};

/// Absorbing leaf. `attacker_net` is the leaf-local payoff; the full path
/// net is the sum of CostNode deltas plus this value. `noticed` marks
/// suspicion-raising leaves (the attacker saw the excuse).
struct TerminalNode {
    double attacker_net = 0.0;
    Outcome outcome = Outcome::Proceeded;
    bool noticed = false;
};

/// Returns control to the tree root for another attempt, at most
/// `max_repeats` times; once the cap is hit the path ends as Exhausted.
struct RepeatNode {
    int max_repeats = kUnlimitedRetries;
};

/// An immutable decision tree plus the duration of one attempt
/// (1 time unit plus any deception-inflicted delay).
struct DecisionTree {
    NodePtr root;
    double attempt_duration = 1.0;
};

template <typename... Args>
NodePtr make_node(Args&&... args) {
    return std::make_shared<const TreeNode>(std::forward<Args>(args)...);
}

// ---------------------------------------------------------------------------
// Valuation
// ---------------------------------------------------------------------------

/// Expected outcome of an encounter from the attacker's perspective.
struct Valuation {
    double attacker_expected_net = 0.0;
    double deterrence_prob = 0.0;
    double proceed_prob = 0.0;
    double exhausted_prob = 0.0;
    double expected_attempts = 1.0;
    double expected_attacker_time = 0.0;
    std::string scenario_fingerprint; // optional provenance tag

    bool operator==(const Valuation&) const = default;
};

// ---------------------------------------------------------------------------
// Building
// ---------------------------------------------------------------------------

/// Build the four-branch false-excuse tree. Zero-probability branches are
/// pruned, so degenerate parameter choices collapse to their single
/// reachable outcome. `delay_inflicted` lengthens each attempt.
inline DecisionTree build_false_excuse_tree(const ExcuseTreeParams& params,
                                            double delay_inflicted = 0.0) {
    validate_params(params);
    if (delay_inflicted < 0.0) throw std::invalid_argument("delay_inflicted must be >= 0");

    const double proceed_payoff = params.b_nw - params.c_nw;
    ChanceNode attempt;
    attempt.label = "excuse_attempt";

    auto add = [&attempt](double prob, NodePtr node) {
        if (prob > 0.0) attempt.branches.emplace_back(prob, std::move(node));
    };
    add(1.0 - params.p_n,
        make_node(TerminalNode{proceed_payoff, Outcome::Proceeded, false}));
    add(params.p_n * (1.0 - params.p_b),
        make_node(TerminalNode{proceed_payoff, Outcome::Proceeded, true}));
    add(params.p_n * params.p_b * params.p_g,
        make_node(TerminalNode{0.0, Outcome::Deterred, true}));
    add(params.p_n * params.p_b * params.p_r,
        make_node(RepeatNode{params.max_retries}));

    DecisionTree tree;
    tree.attempt_duration = 1.0 + delay_inflicted;
    tree.root = make_node(CostNode{-params.c_i, make_node(std::move(attempt))});
    return tree;
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

namespace detail {

/// One absorbing path class within a single attempt.
struct PathClass {
    double prob = 0.0;
    double net = 0.0;
    Outcome outcome = Outcome::Proceeded;
};

/// Per-attempt path classes, produced by one exhaustive walk of the tree.
struct AttemptClasses {
    std::vector<PathClass> absorbing;
    double repeat_prob = 0.0;    // total mass that re-enters the root
    double repeat_sunk = 0.0;    // E[net * 1{repeat}] per attempt
    int repeat_cap = kUnlimitedRetries;
    bool has_repeat = false;
};

inline void collect_paths(const NodePtr& node, double prob, double net, AttemptClasses& out) {
    if (!node) throw StructureError("decision tree: null node");
    if (const auto* chance = std::get_if<ChanceNode>(node.get())) {
        double sum = 0.0;
        for (const auto& [p, child] : chance->branches) {
            if (p < 0.0)
                throw StructureError("chance node '" + chance->label + "': negative branch probability");
            sum += p;
        }
        if (std::abs(sum - 1.0) > 1e-9) {
            std::ostringstream msg;
            msg << "chance node '" << chance->label << "': branch probabilities sum to " << sum;
            throw StructureError(msg.str());
        }
        for (const auto& [p, child] : chance->branches)
            if (p > 0.0) collect_paths(child, prob * p, net, out);
        return;
    }
    if (const auto* cost = std::get_if<CostNode>(node.get())) {
        collect_paths(cost->child, prob, net + cost->delta, out);
        return;
    }
    if (const auto* terminal = std::get_if<TerminalNode>(node.get())) {
        out.absorbing.push_back({prob, net + terminal->attacker_net, terminal->outcome});
        return;
    }
    // A repeat node is a leaf of the walk, so "at most one repeat per
    // root-to-leaf path" holds by construction.
    const auto& repeat = std::get<RepeatNode>(*node);
    out.has_repeat = true;
    out.repeat_prob += prob;
    out.repeat_sunk += prob * net;
    out.repeat_cap = std::min(out.repeat_cap, repeat.max_repeats);
}

} // namespace detail

/// Exact expectation of the tree with the repeat expanded up to `horizon`
/// times (and never beyond the repeat node's own cap). Paths that would
/// repeat past the cap end as Exhausted, keeping only their sunk costs.
inline Valuation evaluate_tree(const DecisionTree& tree, int horizon) {
    if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
    if (!tree.root) throw StructureError("decision tree: empty");

    detail::AttemptClasses cls;
    detail::collect_paths(tree.root, 1.0, 0.0, cls);

    // Per-attempt aggregates. Attempts are i.i.d. rounds of the same walk,
    // so the expectation rolls up as a capped geometric series.
    double absorb_prob = 0.0, absorb_net = 0.0;
    double deter = 0.0, proceed = 0.0, exhaust_leaf = 0.0;
    for (const auto& pc : cls.absorbing) {
        absorb_prob += pc.prob;
        absorb_net += pc.prob * pc.net;
        switch (pc.outcome) {
            case Outcome::Deterred: deter += pc.prob; break;
            case Outcome::Proceeded: proceed += pc.prob; break;
            case Outcome::Exhausted: exhaust_leaf += pc.prob; break;
        }
    }

    const double repeat_prob = cls.repeat_prob;
    // Attempts allowed: the initial one plus min(cap, horizon) re-entries.
    const long long allowed =
        1 + std::min<long long>(horizon, cls.has_repeat ? cls.repeat_cap : 0);
    const double rounds = static_cast<double>(allowed);

    // Partial geometric sums over rounds 1..allowed (mass entering round k
    // is repeat_prob^(k-1)).
    double mass_all = 0.0;        // sum of P^(k-1)
    double weighted_rounds = 0.0; // sum of k * P^(k-1)
    double prior_repeats = 0.0;   // sum of (k-1) * P^(k-1)
    double tail;                  // P^allowed
    if (repeat_prob <= 0.0) {
        mass_all = 1.0;
        weighted_rounds = 1.0;
        prior_repeats = 0.0;
        tail = 0.0;
    } else if (repeat_prob >= 1.0) {
        mass_all = rounds;
        weighted_rounds = rounds * (rounds + 1.0) / 2.0;
        prior_repeats = rounds * (rounds - 1.0) / 2.0;
        tail = 1.0;
    } else {
        const double pA = std::pow(repeat_prob, rounds);
        const double one_minus = 1.0 - repeat_prob;
        mass_all = (1.0 - pA) / one_minus;
        weighted_rounds = (1.0 - (rounds + 1.0) * pA + rounds * pA * repeat_prob) /
                          (one_minus * one_minus);
        prior_repeats = weighted_rounds - mass_all;
        tail = pA;
    }
    const double sunk_per_repeat = repeat_prob > 0.0 ? cls.repeat_sunk / repeat_prob : 0.0;

    Valuation val;
    val.attacker_expected_net = absorb_net * mass_all
                              + absorb_prob * sunk_per_repeat * prior_repeats
                              + tail * rounds * sunk_per_repeat;
    val.deterrence_prob = deter * mass_all;
    val.proceed_prob = proceed * mass_all;
    val.exhausted_prob = exhaust_leaf * mass_all + tail;
    val.expected_attempts = absorb_prob * weighted_rounds + tail * rounds;
    val.expected_attacker_time = val.expected_attempts * tree.attempt_duration;
    return val;
}

/// Infinite-horizon value of the false-excuse encounter:
///
///   V = [-c_i + (1 - p_n*p_b) * (b_nw - c_nw)] / (1 - p_n*p_b*p_r)
///
/// with deterrence p_n*p_b*p_g / (1 - p_n*p_b*p_r) and expected attempts
/// 1 / (1 - p_n*p_b*p_r). Requires the retry mass to be strictly below 1.
inline Valuation closed_form_excuse_value(const ExcuseTreeParams& params,
                                          double delay_inflicted = 0.0) {
    validate_params(params);
    const double q = params.retry_mass();
    if (q >= 1.0)
        throw DivergenceError("closed form diverges: p_n * p_b * p_r = 1 (absorbing retry loop)");

    Valuation val;
    const double denom = 1.0 - q;
    val.attacker_expected_net =
        (-params.c_i + (1.0 - params.p_n * params.p_b) * (params.b_nw - params.c_nw)) / denom;
    val.deterrence_prob = params.p_n * params.p_b * params.p_g / denom;
    val.proceed_prob = (1.0 - params.p_n * params.p_b) / denom;
    val.exhausted_prob = 0.0;
    val.expected_attempts = 1.0 / denom;
    val.expected_attacker_time = val.expected_attempts * (1.0 + delay_inflicted);
    return val;
}

// ---------------------------------------------------------------------------
// Sensitivity sweeps
// ---------------------------------------------------------------------------

struct SweepPoint {
    double value = 0.0;
    std::optional<Valuation> valuation;
    std::string error; // nonempty when this grid value was invalid
};

inline const std::array<const char*, 7>& sweep_parameter_names() {
    static const std::array<const char*, 7> names = {"c_i", "c_nw", "b_nw", "p_n",
                                                     "p_b", "p_g", "p_r"};
    return names;
}

/// Sweep one parameter over a grid. Setting p_g adjusts p_r to keep
/// p_g + p_r = 1 (and vice versa). Invalid grid values produce per-point
/// error entries; the sweep continues. Points whose retry mass reaches 1
/// fall back to finite-horizon evaluation.
inline std::vector<SweepPoint> sensitivity(const ExcuseTreeParams& params,
                                           const std::string& param_name,
                                           const std::vector<double>& grid,
                                           int horizon = 50) {
    validate_params(params);
    bool known = false;
    for (const char* name : sweep_parameter_names())
        if (param_name == name) known = true;
    if (!known) throw std::invalid_argument("unknown sweep parameter: " + param_name);

    std::vector<SweepPoint> points;
    points.reserve(grid.size());
    for (double value : grid) {
        SweepPoint point;
        point.value = value;
        ExcuseTreeParams p = params;
        bool is_prob = param_name[0] == 'p';
        if (is_prob && !in_unit_interval(value)) {
            point.error = "probability out of [0,1]";
            points.push_back(std::move(point));
            continue;
        }
        if (!is_prob && value < 0.0) {
            point.error = "cost must be >= 0";
            points.push_back(std::move(point));
            continue;
        }
        if (param_name == "c_i") p.c_i = value;
        else if (param_name == "c_nw") p.c_nw = value;
        else if (param_name == "b_nw") p.b_nw = value;
        else if (param_name == "p_n") p.p_n = value;
        else if (param_name == "p_b") p.p_b = value;
        else if (param_name == "p_g") { p.p_g = value; p.p_r = 1.0 - value; }
        else { p.p_r = value; p.p_g = 1.0 - value; }

        if (p.retry_mass() < 1.0) {
            point.valuation = closed_form_excuse_value(p);
        } else {
            point.valuation = evaluate_tree(build_false_excuse_tree(p), horizon);
        }
        points.push_back(std::move(point));
    }
    return points;
}

} // namespace did
