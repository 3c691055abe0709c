/**
 * Honeypot-likeness scoring and two-sided deception.
 *
 * A system profile holds five indicator degrees in [0,1]; the honeyscore
 * is their weighted sum (equal weights by default), and a score of 0.5 or
 * above classifies the host as honeypot-looking — the boundary is
 * inclusive. For two-sided deception, suggest_clues finds the smallest set
 * of indicators to raise so a real system crosses a target score and gets
 * avoided by honeypot-shy attackers.
 */

#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <string>
#include <vector>

#include "did/errors.hpp"
#include "did/types.hpp"

namespace did {

enum class Classification { LooksHoneypot, LooksReal };

inline const char* classification_name(Classification c) {
    return c == Classification::LooksHoneypot ? "looks_honeypot" : "looks_real";
}

/// Weighted indicator sum in [0,1]. With default weights this is the
/// arithmetic mean of the five indicator values. Throws when explicit
/// weights are negative or do not sum to 1.
inline double honeyscore(const SystemProfile& profile) {
    if (profile.weights) {
        double sum = 0.0;
        for (const auto& [ind, w] : *profile.weights) {
            if (w < 0.0) throw std::invalid_argument("honeyscore: negative indicator weight");
            sum += w;
        }
        if (std::abs(sum - 1.0) > 1e-9)
            throw std::invalid_argument("honeyscore: indicator weights must sum to 1");
    }
    double score = 0.0;
    for (Indicator ind : kAllIndicators)
        score += profile.weight(ind) * profile.indicator_value(ind);
    return score;
}

/// Conventional classification threshold.
inline constexpr double kHoneyscoreThreshold = 0.5;

/// LooksHoneypot iff score >= threshold (0.5-or-above convention).
inline Classification classify(double score, double threshold = kHoneyscoreThreshold) {
    if (!in_unit_interval(score)) throw std::invalid_argument("classify: score outside [0,1]");
    if (!in_unit_interval(threshold))
        throw std::invalid_argument("classify: threshold outside [0,1]");
    return score >= threshold ? Classification::LooksHoneypot : Classification::LooksReal;
}

/// What the attacker believes the score to be: skilled attackers see the
/// true score, unskilled ones regress toward the uninformative 0.5.
inline double perceived_score(const SystemProfile& profile, const AttackerProfile& attacker) {
    const double truth = honeyscore(profile);
    return truth * attacker.skill + 0.5 * (1.0 - attacker.skill);
}

// ---------------------------------------------------------------------------
// Clue injection
// ---------------------------------------------------------------------------

struct ClueRaise {
    Indicator indicator = Indicator::DefaultConfig;
    double new_value = 1.0;

    bool operator==(const ClueRaise&) const = default;
};

/// Faking order when marginal gains tie: cheapest-to-fake first.
inline int fake_order_rank(Indicator ind) {
    switch (ind) {
        case Indicator::DefaultConfig: return 0;
        case Indicator::StaticReplies: return 1;
        case Indicator::FastLatency: return 2;
        case Indicator::ProtocolSubset: return 3;
        case Indicator::GenericOsTell: return 4;
    }
    return 5;
}

inline SystemProfile apply_clues(const SystemProfile& profile,
                                 const std::vector<ClueRaise>& raises) {
    SystemProfile out = profile;
    for (const auto& raise : raises)
        out.indicators[raise.indicator] =
            std::max(out.indicator_value(raise.indicator), raise.new_value);
    return out;
}

/// Minimum-cardinality set of indicator raises (to 1.0) that pushes the
/// honeyscore to at least `target`. With only five indicators the search
/// is a direct scan over all subsets by increasing size, so the returned
/// cardinality is exactly minimal. Among minimal reaching subsets the
/// preferred one raises larger marginal gains first, breaking ties by the
/// fixed faking order. Already-met targets return the empty set.
/// Infeasible targets (impossible for valid weights, which sum to 1)
/// raise InfeasibleError.
inline std::vector<ClueRaise> suggest_clues(const SystemProfile& profile, double target) {
    if (!in_unit_interval(target)) throw std::invalid_argument("suggest_clues: target outside [0,1]");
    if (honeyscore(profile) >= target) return {};

    // Indicators in preference order: biggest gain first, faking order on
    // ties. Subsets are compared as sorted preference-index sequences.
    std::array<Indicator, kAllIndicators.size()> pref = kAllIndicators;
    std::sort(pref.begin(), pref.end(), [&profile](Indicator a, Indicator b) {
        const double gain_a = profile.weight(a) * (1.0 - profile.indicator_value(a));
        const double gain_b = profile.weight(b) * (1.0 - profile.indicator_value(b));
        if (gain_a != gain_b) return gain_a > gain_b;
        return fake_order_rank(a) < fake_order_rank(b);
    });

    const unsigned n = static_cast<unsigned>(pref.size());
    for (unsigned size = 1; size <= n; ++size) {
        std::vector<unsigned> best;
        for (unsigned mask = 1; mask < (1u << n); ++mask) {
            if (static_cast<unsigned>(std::popcount(mask)) != size) continue;
            std::vector<unsigned> picks;
            std::vector<ClueRaise> raises;
            for (unsigned i = 0; i < n; ++i) {
                if (mask & (1u << i)) {
                    picks.push_back(i);
                    raises.push_back({pref[i], 1.0});
                }
            }
            if (honeyscore(apply_clues(profile, raises)) < target) continue;
            if (best.empty() || picks < best) best = std::move(picks);
        }
        if (!best.empty()) {
            std::vector<ClueRaise> raises;
            for (unsigned i : best) raises.push_back({pref[i], 1.0});
            return raises;
        }
    }
    throw InfeasibleError("clue target unreachable even with every indicator at 1.0 "
                          "(profile weights do not sum to 1)");
}

} // namespace did
