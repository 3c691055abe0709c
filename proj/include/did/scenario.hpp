/**
 * Scenario files: loading, saving, validation, and the mapping from
 * attacker attributes to decision-tree probabilities.
 *
 * A scenario file is a UTF-8 JSON document with top-level keys `catalog`,
 * `techniques`, `deployment`, `profile`, `costs`, `threshold`,
 * `conditional_table`, and optionally `system_profiles`. Unknown keys are
 * rejected at every level. See docs/schema.md for the full schema.
 *
 * Parsing is strict about structure (types, required keys); range and
 * cross-reference rules are checked separately by validate_scenario /
 * validate_file, which report violations as data rather than failures.
 */

#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "did/decision_tree.hpp"
#include "did/errors.hpp"
#include "did/types.hpp"

namespace did {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Scenario file contents
// ---------------------------------------------------------------------------

struct ScenarioFile {
    std::vector<DeceptionEntry> catalog;
    CampaignScenario scenario;
    AttackerProfile profile;
    EncounterCosts costs;
    std::vector<SystemProfile> system_profiles;

    const DeceptionEntry* find_deception(const std::string& id) const {
        for (const auto& entry : catalog)
            if (entry.id == id) return &entry;
        return nullptr;
    }

    bool operator==(const ScenarioFile&) const = default;
};

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

/// One invariant violation: a stable machine-readable code plus a human
/// message. Violations are data, not failures.
struct Violation {
    std::string code;
    std::string message;

    bool operator==(const Violation&) const = default;
};

namespace codes {
inline constexpr const char* kUnknownDeception = "UNKNOWN_DECEPTION";
inline constexpr const char* kDuplicateDeception = "DUPLICATE_DECEPTION";
inline constexpr const char* kDuplicateDeployment = "DUPLICATE_DEPLOYMENT";
inline constexpr const char* kDuplicateTechnique = "DUPLICATE_TECHNIQUE";
inline constexpr const char* kLayerMismatch = "LAYER_MISMATCH";
inline constexpr const char* kBadThreshold = "BAD_THRESHOLD";
inline constexpr const char* kBadProbability = "BAD_PROBABILITY";
inline constexpr const char* kNegativeCost = "NEGATIVE_COST";
inline constexpr const char* kNegativeDuration = "NEGATIVE_DURATION";
inline constexpr const char* kEmptyApplicable = "EMPTY_APPLICABLE";
inline constexpr const char* kBadAttribute = "BAD_ATTRIBUTE";
inline constexpr const char* kBadMultiplier = "BAD_MULTIPLIER";
inline constexpr const char* kBadWeights = "BAD_WEIGHTS";
inline constexpr const char* kBadIndicator = "BAD_INDICATOR";
} // namespace codes

/// Check every scenario and catalog invariant. An empty report means valid.
inline std::vector<Violation> validate_scenario(const CampaignScenario& scenario,
                                                const std::vector<DeceptionEntry>& catalog) {
    std::vector<Violation> report;
    auto flag = [&report](const char* code, const std::string& msg) {
        report.push_back({code, msg});
    };

    std::set<std::string> catalog_ids;
    for (const auto& entry : catalog) {
        if (!catalog_ids.insert(entry.id).second)
            flag(codes::kDuplicateDeception, "catalog id '" + entry.id + "' appears more than once");
        if (!in_unit_interval(entry.base_notice_prob))
            flag(codes::kBadProbability, "deception '" + entry.id + "': base_notice_prob outside [0,1]");
        if (!in_unit_interval(entry.base_believe_prob))
            flag(codes::kBadProbability, "deception '" + entry.id + "': base_believe_prob outside [0,1]");
        if (entry.deploy_cost < 0.0)
            flag(codes::kNegativeCost, "deception '" + entry.id + "': deploy_cost is negative");
        if (entry.delay_inflicted < 0.0)
            flag(codes::kNegativeCost, "deception '" + entry.id + "': delay_inflicted is negative");
        if (entry.applicable_techniques.empty())
            flag(codes::kEmptyApplicable, "deception '" + entry.id + "': applicable_techniques is empty");
    }

    std::set<std::string> technique_ids;
    for (const auto& tech : scenario.techniques) {
        if (!technique_ids.insert(tech.id).second)
            flag(codes::kDuplicateTechnique, "technique id '" + tech.id + "' appears more than once");
        if (tech.base_duration < 0.0)
            flag(codes::kNegativeDuration, "technique '" + tech.id + "': base_duration is negative");
    }

    if (scenario.goal_benefit < 0.0)
        flag(codes::kNegativeCost, "goal_benefit is negative");
    if (scenario.threshold < 1)
        flag(codes::kBadThreshold, "threshold must be a positive integer");

    for (const auto& [layer, ids] : scenario.deployment) {
        std::set<std::string> seen;
        for (const auto& id : ids) {
            if (!seen.insert(id).second)
                flag(codes::kDuplicateDeployment,
                     std::string("deception '") + id + "' deployed twice at layer " + layer_name(layer));
            auto it = catalog_ids.find(id);
            if (it == catalog_ids.end()) {
                flag(codes::kUnknownDeception,
                     "deployment references unknown deception id '" + id + "'");
                continue;
            }
            for (const auto& entry : catalog) {
                if (entry.id == id && entry.layer != layer) {
                    flag(codes::kLayerMismatch,
                         "deception '" + id + "' is declared for layer " +
                             layer_name(entry.layer) + " but deployed at layer " + layer_name(layer));
                    break;
                }
            }
        }
    }

    for (const auto& [pair, multiplier] : scenario.conditional_table.entries) {
        if (!(multiplier > 0.0))
            flag(codes::kBadMultiplier, "conditional multiplier for (" + pair.first + ", " +
                                            pair.second + ") must be > 0");
    }
    return report;
}

inline std::vector<Violation> validate_profile(const AttackerProfile& profile) {
    std::vector<Violation> report;
    auto check = [&report](double value, const char* name) {
        if (!in_unit_interval(value))
            report.push_back({codes::kBadAttribute, std::string("profile attribute '") + name +
                                                        "' outside [0,1]"});
    };
    check(profile.patience, "patience");
    check(profile.adaptability, "adaptability");
    check(profile.suspiciousness, "suspiciousness");
    check(profile.alertness, "alertness");
    check(profile.skill, "skill");
    return report;
}

inline std::vector<Violation> validate_system_profile(const SystemProfile& profile) {
    std::vector<Violation> report;
    for (const auto& [ind, value] : profile.indicators) {
        if (!in_unit_interval(value))
            report.push_back({codes::kBadIndicator, "profile '" + profile.label + "': indicator " +
                                                        indicator_name(ind) + " outside [0,1]"});
    }
    if (profile.weights) {
        double sum = 0.0;
        bool negative = false;
        for (const auto& [ind, w] : *profile.weights) {
            sum += w;
            if (w < 0.0) negative = true;
        }
        if (negative)
            report.push_back({codes::kBadWeights, "profile '" + profile.label + "': negative weight"});
        else if (std::abs(sum - 1.0) > 1e-9)
            report.push_back({codes::kBadWeights,
                              "profile '" + profile.label + "': weights must sum to 1"});
    }
    return report;
}

/// Validate a whole scenario file (scenario + catalog + profile + costs +
/// system profiles).
inline std::vector<Violation> validate_file(const ScenarioFile& file) {
    std::vector<Violation> report = validate_scenario(file.scenario, file.catalog);
    for (auto& v : validate_profile(file.profile)) report.push_back(std::move(v));
    if (file.costs.c_i < 0.0) report.push_back({codes::kNegativeCost, "costs.c_i is negative"});
    if (file.costs.c_nw < 0.0) report.push_back({codes::kNegativeCost, "costs.c_nw is negative"});
    if (file.costs.b_nw < 0.0) report.push_back({codes::kNegativeCost, "costs.b_nw is negative"});
    for (const auto& sp : file.system_profiles)
        for (auto& v : validate_system_profile(sp)) report.push_back(std::move(v));
    return report;
}

// ---------------------------------------------------------------------------
// Attribute -> probability mapping
// ---------------------------------------------------------------------------

/// Default retry cap scale: max_retries = floor(patience * kRetryCapScale).
inline constexpr int kRetryCapScale = 5;

/// Map attacker attributes and a deception's base effectiveness onto the
/// parameters of the false-excuse tree:
///
///   p_n = alertness                      (notice probability)
///   p_b = (1 - suspiciousness) * base_believe_prob
///   p_r = adaptability,  p_g = 1 - adaptability
///   max_retries = floor(patience * retry_cap)
///
/// Belief is deliberately inverted against suspicion: a more suspicious
/// attacker is less likely to accept the excuse at face value. Skill does
/// not enter here; it only affects fingerprint perception.
inline ExcuseTreeParams derive_tree_params(const AttackerProfile& profile,
                                           const DeceptionEntry& deception,
                                           const EncounterCosts& costs,
                                           int retry_cap = kRetryCapScale) {
    ExcuseTreeParams params;
    params.c_i = costs.c_i;
    params.c_nw = costs.c_nw;
    params.b_nw = costs.b_nw;
    params.p_n = clamp01(profile.alertness);
    params.p_b = clamp01((1.0 - profile.suspiciousness) * deception.base_believe_prob);
    params.p_r = clamp01(profile.adaptability);
    params.p_g = 1.0 - params.p_r;
    params.max_retries = static_cast<int>(std::floor(clamp01(profile.patience) * retry_cap));
    return params;
}

// ---------------------------------------------------------------------------
// JSON serialization
// ---------------------------------------------------------------------------

namespace detail {

[[noreturn]] inline void parse_fail(const std::string& path, const std::string& what) {
    throw ParseError(path.empty() ? what : path + ": " + what);
}

inline void require_keys(const Json& j, const std::string& path,
                         const std::vector<std::string>& required,
                         const std::vector<std::string>& optional = {}) {
    if (!j.is_object()) parse_fail(path, "expected an object");
    for (const auto& key : required)
        if (!j.contains(key)) parse_fail(path, "missing required key '" + key + "'");
    for (const auto& item : j.items()) {
        const std::string& key = item.key();
        bool known = false;
        for (const auto& k : required)
            if (k == key) known = true;
        for (const auto& k : optional)
            if (k == key) known = true;
        if (!known) parse_fail(path, "unknown key '" + key + "'");
    }
}

inline double get_double(const Json& j, const std::string& path, const std::string& key) {
    const Json& v = j.at(key);
    if (!v.is_number()) parse_fail(path + "." + key, "expected a number");
    return v.get<double>();
}

inline int get_int(const Json& j, const std::string& path, const std::string& key) {
    const Json& v = j.at(key);
    if (!v.is_number_integer()) parse_fail(path + "." + key, "expected an integer");
    return v.get<int>();
}

inline std::string get_string(const Json& j, const std::string& path, const std::string& key) {
    const Json& v = j.at(key);
    if (!v.is_string()) parse_fail(path + "." + key, "expected a string");
    return v.get<std::string>();
}

inline bool get_bool(const Json& j, const std::string& path, const std::string& key) {
    const Json& v = j.at(key);
    if (!v.is_boolean()) parse_fail(path + "." + key, "expected a boolean");
    return v.get<bool>();
}

inline Layer get_layer(const Json& j, const std::string& path, const std::string& key) {
    auto layer = layer_from_name(get_string(j, path, key));
    if (!layer) parse_fail(path + "." + key, "expected one of \"network\", \"host\", \"data\"");
    return *layer;
}

inline Indicator parse_indicator(const std::string& name, const std::string& path) {
    auto ind = indicator_from_name(name);
    if (!ind) parse_fail(path, "unknown indicator '" + name + "'");
    return *ind;
}

} // namespace detail

inline Technique technique_from_json(const Json& j, const std::string& path) {
    detail::require_keys(j, path, {"id", "name", "tactic", "layer", "base_duration"});
    Technique tech;
    tech.id = detail::get_string(j, path, "id");
    tech.name = detail::get_string(j, path, "name");
    tech.tactic = detail::get_string(j, path, "tactic");
    tech.layer = detail::get_layer(j, path, "layer");
    tech.base_duration = detail::get_double(j, path, "base_duration");
    return tech;
}

inline Json technique_to_json(const Technique& tech) {
    Json j;
    j["id"] = tech.id;
    j["name"] = tech.name;
    j["tactic"] = tech.tactic;
    j["layer"] = layer_name(tech.layer);
    j["base_duration"] = tech.base_duration;
    return j;
}

inline DeceptionEntry deception_from_json(const Json& j, const std::string& path) {
    detail::require_keys(j, path,
                         {"id", "name", "layer", "deploy_cost", "base_notice_prob",
                          "base_believe_prob", "applicable_techniques", "delay_inflicted"},
                         {"clue_indicators", "metadata"});
    DeceptionEntry entry;
    entry.id = detail::get_string(j, path, "id");
    entry.name = detail::get_string(j, path, "name");
    entry.layer = detail::get_layer(j, path, "layer");
    entry.deploy_cost = detail::get_double(j, path, "deploy_cost");
    entry.base_notice_prob = detail::get_double(j, path, "base_notice_prob");
    entry.base_believe_prob = detail::get_double(j, path, "base_believe_prob");
    entry.delay_inflicted = detail::get_double(j, path, "delay_inflicted");

    const Json& techs = j.at("applicable_techniques");
    if (!techs.is_array()) detail::parse_fail(path + ".applicable_techniques", "expected an array");
    for (const auto& t : techs) {
        if (!t.is_string())
            detail::parse_fail(path + ".applicable_techniques", "expected strings");
        entry.applicable_techniques.insert(t.get<std::string>());
    }

    if (j.contains("clue_indicators")) {
        const Json& clues = j.at("clue_indicators");
        if (!clues.is_array()) detail::parse_fail(path + ".clue_indicators", "expected an array");
        for (const auto& c : clues) {
            if (!c.is_string()) detail::parse_fail(path + ".clue_indicators", "expected strings");
            entry.clue_indicators.insert(
                detail::parse_indicator(c.get<std::string>(), path + ".clue_indicators"));
        }
    }
    if (j.contains("metadata")) {
        const Json& meta = j.at("metadata");
        const std::string meta_path = path + ".metadata";
        detail::require_keys(meta, meta_path,
                             {"open_source", "popular", "maintained", "linux_based",
                              "fingerprintable"});
        entry.metadata.open_source = detail::get_bool(meta, meta_path, "open_source");
        entry.metadata.popular = detail::get_bool(meta, meta_path, "popular");
        entry.metadata.maintained = detail::get_bool(meta, meta_path, "maintained");
        entry.metadata.linux_based = detail::get_bool(meta, meta_path, "linux_based");
        entry.metadata.fingerprintable = detail::get_bool(meta, meta_path, "fingerprintable");
    }
    return entry;
}

inline Json deception_to_json(const DeceptionEntry& entry) {
    Json j;
    j["id"] = entry.id;
    j["name"] = entry.name;
    j["layer"] = layer_name(entry.layer);
    j["deploy_cost"] = entry.deploy_cost;
    j["base_notice_prob"] = entry.base_notice_prob;
    j["base_believe_prob"] = entry.base_believe_prob;
    j["applicable_techniques"] = Json::array();
    for (const auto& id : entry.applicable_techniques) j["applicable_techniques"].push_back(id);
    j["delay_inflicted"] = entry.delay_inflicted;
    if (!entry.clue_indicators.empty()) {
        j["clue_indicators"] = Json::array();
        for (Indicator ind : entry.clue_indicators)
            j["clue_indicators"].push_back(indicator_name(ind));
    }
    j["metadata"] = {{"open_source", entry.metadata.open_source},
                     {"popular", entry.metadata.popular},
                     {"maintained", entry.metadata.maintained},
                     {"linux_based", entry.metadata.linux_based},
                     {"fingerprintable", entry.metadata.fingerprintable}};
    return j;
}

inline SystemProfile system_profile_from_json(const Json& j, const std::string& path) {
    detail::require_keys(j, path, {"label", "indicators"}, {"weights"});
    SystemProfile profile;
    profile.label = detail::get_string(j, path, "label");

    const Json& inds = j.at("indicators");
    if (!inds.is_object()) detail::parse_fail(path + ".indicators", "expected an object");
    for (const auto& item : inds.items()) {
        Indicator ind = detail::parse_indicator(item.key(), path + ".indicators");
        if (!item.value().is_number())
            detail::parse_fail(path + ".indicators." + item.key(), "expected a number");
        profile.indicators[ind] = item.value().get<double>();
    }
    if (j.contains("weights")) {
        const Json& ws = j.at("weights");
        if (!ws.is_object()) detail::parse_fail(path + ".weights", "expected an object");
        std::map<Indicator, double> weights;
        for (const auto& item : ws.items()) {
            Indicator ind = detail::parse_indicator(item.key(), path + ".weights");
            if (!item.value().is_number())
                detail::parse_fail(path + ".weights." + item.key(), "expected a number");
            weights[ind] = item.value().get<double>();
        }
        profile.weights = std::move(weights);
    }
    return profile;
}

inline Json system_profile_to_json(const SystemProfile& profile) {
    Json j;
    j["label"] = profile.label;
    j["indicators"] = Json::object();
    for (const auto& [ind, value] : profile.indicators) j["indicators"][indicator_name(ind)] = value;
    if (profile.weights) {
        j["weights"] = Json::object();
        for (const auto& [ind, value] : *profile.weights) j["weights"][indicator_name(ind)] = value;
    }
    return j;
}

inline ScenarioFile scenario_from_json(const Json& root) {
    detail::require_keys(root, "",
                         {"catalog", "techniques", "deployment", "profile", "costs", "threshold",
                          "conditional_table"},
                         {"system_profiles"});
    ScenarioFile file;

    const Json& catalog = root.at("catalog");
    if (!catalog.is_array()) detail::parse_fail("catalog", "expected an array");
    for (std::size_t i = 0; i < catalog.size(); ++i)
        file.catalog.push_back(
            deception_from_json(catalog[i], "catalog[" + std::to_string(i) + "]"));

    const Json& techniques = root.at("techniques");
    if (!techniques.is_array()) detail::parse_fail("techniques", "expected an array");
    for (std::size_t i = 0; i < techniques.size(); ++i)
        file.scenario.techniques.push_back(
            technique_from_json(techniques[i], "techniques[" + std::to_string(i) + "]"));

    const Json& deployment = root.at("deployment");
    if (!deployment.is_object()) detail::parse_fail("deployment", "expected an object");
    for (const auto& item : deployment.items()) {
        auto layer = layer_from_name(item.key());
        if (!layer) detail::parse_fail("deployment", "unknown layer '" + item.key() + "'");
        if (!item.value().is_array())
            detail::parse_fail("deployment." + item.key(), "expected an array");
        std::vector<std::string> ids;
        for (const auto& id : item.value()) {
            if (!id.is_string()) detail::parse_fail("deployment." + item.key(), "expected strings");
            ids.push_back(id.get<std::string>());
        }
        file.scenario.deployment[*layer] = std::move(ids);
    }

    const Json& profile = root.at("profile");
    detail::require_keys(profile, "profile",
                         {"patience", "adaptability", "suspiciousness", "alertness", "skill"});
    file.profile.patience = detail::get_double(profile, "profile", "patience");
    file.profile.adaptability = detail::get_double(profile, "profile", "adaptability");
    file.profile.suspiciousness = detail::get_double(profile, "profile", "suspiciousness");
    file.profile.alertness = detail::get_double(profile, "profile", "alertness");
    file.profile.skill = detail::get_double(profile, "profile", "skill");

    const Json& costs = root.at("costs");
    detail::require_keys(costs, "costs", {"c_i", "c_nw", "b_nw", "goal_benefit"});
    file.costs.c_i = detail::get_double(costs, "costs", "c_i");
    file.costs.c_nw = detail::get_double(costs, "costs", "c_nw");
    file.costs.b_nw = detail::get_double(costs, "costs", "b_nw");
    file.scenario.goal_benefit = detail::get_double(costs, "costs", "goal_benefit");

    file.scenario.threshold = detail::get_int(root, "", "threshold");

    const Json& table = root.at("conditional_table");
    if (!table.is_array()) detail::parse_fail("conditional_table", "expected an array");
    for (std::size_t i = 0; i < table.size(); ++i) {
        const std::string path = "conditional_table[" + std::to_string(i) + "]";
        detail::require_keys(table[i], path, {"prior", "later", "multiplier"});
        const std::string prior = detail::get_string(table[i], path, "prior");
        const std::string later = detail::get_string(table[i], path, "later");
        file.scenario.conditional_table.entries[{prior, later}] =
            detail::get_double(table[i], path, "multiplier");
    }

    if (root.contains("system_profiles")) {
        const Json& profiles = root.at("system_profiles");
        if (!profiles.is_array()) detail::parse_fail("system_profiles", "expected an array");
        for (std::size_t i = 0; i < profiles.size(); ++i)
            file.system_profiles.push_back(system_profile_from_json(
                profiles[i], "system_profiles[" + std::to_string(i) + "]"));
    }
    return file;
}

inline Json scenario_to_json(const ScenarioFile& file) {
    Json root;
    root["catalog"] = Json::array();
    for (const auto& entry : file.catalog) root["catalog"].push_back(deception_to_json(entry));
    root["techniques"] = Json::array();
    for (const auto& tech : file.scenario.techniques)
        root["techniques"].push_back(technique_to_json(tech));
    root["deployment"] = Json::object();
    for (const auto& [layer, ids] : file.scenario.deployment) {
        Json list = Json::array();
        for (const auto& id : ids) list.push_back(id);
        root["deployment"][layer_name(layer)] = std::move(list);
    }
    root["profile"] = {{"patience", file.profile.patience},
                       {"adaptability", file.profile.adaptability},
                       {"suspiciousness", file.profile.suspiciousness},
                       {"alertness", file.profile.alertness},
                       {"skill", file.profile.skill}};
    root["costs"] = {{"c_i", file.costs.c_i},
                     {"c_nw", file.costs.c_nw},
                     {"b_nw", file.costs.b_nw},
                     {"goal_benefit", file.scenario.goal_benefit}};
    root["threshold"] = file.scenario.threshold;
    root["conditional_table"] = Json::array();
    for (const auto& [pair, multiplier] : file.scenario.conditional_table.entries)
        root["conditional_table"].push_back(
            {{"prior", pair.first}, {"later", pair.second}, {"multiplier", multiplier}});
    if (!file.system_profiles.empty()) {
        root["system_profiles"] = Json::array();
        for (const auto& sp : file.system_profiles)
            root["system_profiles"].push_back(system_profile_to_json(sp));
    }
    return root;
}

// ---------------------------------------------------------------------------
// File I/O
// ---------------------------------------------------------------------------

inline ScenarioFile parse_scenario_text(const std::string& text) {
    Json root;
    try {
        root = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(e.what());
    }
    return scenario_from_json(root);
}

inline ScenarioFile load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open scenario file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try {
        return parse_scenario_text(buffer.str());
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

inline std::string scenario_to_text(const ScenarioFile& file) {
    return scenario_to_json(file).dump(2) + "\n";
}

inline void save_scenario(const ScenarioFile& file, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write scenario file: " + path);
    out << scenario_to_text(file);
    if (!out) throw Error("short write to scenario file: " + path);
}

/// Load system profiles from either a full scenario file or a standalone
/// document of the form {"system_profiles": [...]}.
inline std::vector<SystemProfile> load_system_profiles(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open profile file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    Json root;
    try {
        root = Json::parse(buffer.str());
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path + ": " + std::string(e.what()));
    }
    if (!root.is_object()) throw ParseError(path + ": expected an object");
    try {
        if (root.contains("catalog")) return scenario_from_json(root).system_profiles;
        detail::require_keys(root, "", {"system_profiles"});
        std::vector<SystemProfile> profiles;
        const Json& arr = root.at("system_profiles");
        if (!arr.is_array()) detail::parse_fail("system_profiles", "expected an array");
        for (std::size_t i = 0; i < arr.size(); ++i)
            profiles.push_back(system_profile_from_json(
                arr[i], "system_profiles[" + std::to_string(i) + "]"));
        return profiles;
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

// ---------------------------------------------------------------------------
// Content fingerprint
// ---------------------------------------------------------------------------

/// FNV-1a 64-bit hash, used to fingerprint scenario content in reports.
inline std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t hash = 0xCBF29CE484222325ULL;
    for (unsigned char byte : data) {
        hash ^= byte;
        hash *= 0x100000001B3ULL;
    }
    return hash;
}

/// Whitespace-insensitive fingerprint of a scenario's content: the hash of
/// its canonical serialized form.
inline std::string scenario_fingerprint(const ScenarioFile& file) {
    std::ostringstream out;
    out << "fnv1a64:" << std::hex << fnv1a64(scenario_to_json(file).dump());
    return out.str();
}

} // namespace did
