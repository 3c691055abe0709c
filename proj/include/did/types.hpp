/**
 * Shared domain types for the deception-in-depth toolkit.
 *
 * Everything here is immutable value data once loaded: types carry no
 * behavior beyond small helpers, and all operations elsewhere take them
 * by const reference and return new values. Safe to share read-only
 * across threads.
 */

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace did {

// ---------------------------------------------------------------------------
// Layers
// ---------------------------------------------------------------------------

/// The three logical layers a deception or technique operates on.
enum class Layer { Network, Host, Data };

inline constexpr std::array<Layer, 3> kAllLayers = {Layer::Network, Layer::Host, Layer::Data};

inline const char* layer_name(Layer layer) {
    switch (layer) {
        case Layer::Network: return "network";
        case Layer::Host: return "host";
        case Layer::Data: return "data";
    }
    return "?";
}

inline std::optional<Layer> layer_from_name(const std::string& name) {
    if (name == "network") return Layer::Network;
    if (name == "host") return Layer::Host;
    if (name == "data") return Layer::Data;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Fingerprint indicators
// ---------------------------------------------------------------------------

/// The five observable tells that make a host look like a honeypot:
/// default configuration values, partial protocol coverage, static or
/// predictable replies, a general-purpose OS where an embedded one is
/// expected, and answering faster than the real device would.
enum class Indicator {
    DefaultConfig,
    ProtocolSubset,
    StaticReplies,
    GenericOsTell,
    FastLatency,
};

inline constexpr std::array<Indicator, 5> kAllIndicators = {
    Indicator::DefaultConfig, Indicator::ProtocolSubset, Indicator::StaticReplies,
    Indicator::GenericOsTell, Indicator::FastLatency};

inline const char* indicator_name(Indicator ind) {
    switch (ind) {
        case Indicator::DefaultConfig: return "default_config";
        case Indicator::ProtocolSubset: return "protocol_subset";
        case Indicator::StaticReplies: return "static_replies";
        case Indicator::GenericOsTell: return "generic_os_tell";
        case Indicator::FastLatency: return "fast_latency";
    }
    return "?";
}

inline std::optional<Indicator> indicator_from_name(const std::string& name) {
    for (Indicator ind : kAllIndicators)
        if (name == indicator_name(ind)) return ind;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Techniques and deceptions
// ---------------------------------------------------------------------------

/// One attacker technique in a campaign. Ids are opaque tokens (ATT&CK-style
/// ids are fine); base_duration is in abstract time units.
struct Technique {
    std::string id;
    std::string name;
    std::string tactic;
    Layer layer = Layer::Network;
    double base_duration = 0.0;

    bool operator==(const Technique&) const = default;
};

/// Selection-criteria flags for a catalog entry.
struct DeceptionMetadata {
    bool open_source = false;
    bool popular = false;
    bool maintained = false;
    bool linux_based = false;
    bool fingerprintable = false;

    bool operator==(const DeceptionMetadata&) const = default;
};

/// A deployable deception: what it costs, which techniques it can interfere
/// with, its base effectiveness, and which honeypot clues it contributes
/// when used as a false clue on a real system.
struct DeceptionEntry {
    std::string id;
    std::string name;
    Layer layer = Layer::Network;
    double deploy_cost = 0.0;                 // defender cost units
    double base_notice_prob = 0.0;            // in [0,1]
    double base_believe_prob = 0.0;           // in [0,1]
    std::set<std::string> applicable_techniques;
    double delay_inflicted = 0.0;             // time units added when noticed
    std::set<Indicator> clue_indicators;      // optional honeypot clues
    DeceptionMetadata metadata;

    bool operator==(const DeceptionEntry&) const = default;
};

// ---------------------------------------------------------------------------
// Attacker profile
// ---------------------------------------------------------------------------

/// Five engagement attributes, each in [0,1].
struct AttackerProfile {
    double patience = 0.5;
    double adaptability = 0.5;
    double suspiciousness = 0.5;
    double alertness = 0.5;
    double skill = 0.5;

    bool operator==(const AttackerProfile&) const = default;
};

// ---------------------------------------------------------------------------
// Encounter costs
// ---------------------------------------------------------------------------

/// Costs and benefits of a false-excuse encounter. Dimensionless units.
/// The attacker's campaign-completion payoff lives on CampaignScenario
/// (in scenario files it is carried in the `costs` object).
struct EncounterCosts {
    double c_i = 0.0;  // cost of initial connection (per attempt)
    double c_nw = 0.0; // cost of maintaining the connection
    double b_nw = 0.0; // benefit of the maintained connection

    bool operator==(const EncounterCosts&) const = default;
};

// ---------------------------------------------------------------------------
// Conditional table
// ---------------------------------------------------------------------------

/// Pairwise conditional-probability multipliers: having noticed deception
/// `prior` scales the effective probability of deception `later`. Absent
/// pairs default to 1.0 (independence). Effective probabilities are always
/// clamped to [0,1] at the point of use.
struct ConditionalTable {
    std::map<std::pair<std::string, std::string>, double> entries;

    double multiplier(const std::string& prior, const std::string& later) const {
        auto it = entries.find({prior, later});
        return it == entries.end() ? 1.0 : it->second;
    }

    bool is_default() const { return entries.empty(); }

    bool operator==(const ConditionalTable&) const = default;
};

// ---------------------------------------------------------------------------
// Campaign scenario
// ---------------------------------------------------------------------------

/// An ordered attacker campaign plus the defender's deployment.
struct CampaignScenario {
    std::vector<Technique> techniques;            // executed in order
    double goal_benefit = 0.0;
    std::map<Layer, std::vector<std::string>> deployment;
    ConditionalTable conditional_table;
    int threshold = 1;                            // cumulative-suspicion threshold

    bool operator==(const CampaignScenario&) const = default;
};

// ---------------------------------------------------------------------------
// System profile (fingerprinting)
// ---------------------------------------------------------------------------

/// Fingerprintable indicators of one host. Indicator values are degrees in
/// [0,1] (e.g. protocol_subset = fraction of the protocol not implemented).
/// Weights, when given, must be nonnegative and sum to 1; the default is
/// equal weighting.
struct SystemProfile {
    std::string label;
    std::map<Indicator, double> indicators;
    std::optional<std::map<Indicator, double>> weights;

    double indicator_value(Indicator ind) const {
        auto it = indicators.find(ind);
        return it == indicators.end() ? 0.0 : it->second;
    }

    double weight(Indicator ind) const {
        if (!weights) return 1.0 / static_cast<double>(kAllIndicators.size());
        auto it = weights->find(ind);
        return it == weights->end() ? 0.0 : it->second;
    }

    bool operator==(const SystemProfile&) const = default;
};

// ---------------------------------------------------------------------------
// Small numeric helpers
// ---------------------------------------------------------------------------

inline double clamp01(double x) {
    if (x < 0.0) return 0.0;
    if (x > 1.0) return 1.0;
    return x;
}

inline bool in_unit_interval(double x) { return x >= 0.0 && x <= 1.0; }

} // namespace did
