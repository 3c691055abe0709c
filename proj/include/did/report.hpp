/**
 * Machine-readable run reports: JSON payload builders, CSV emission, and
 * atomic file writing.
 *
 * Reports carry no timestamps or host details; every field is a pure
 * function of (inputs, seed, tool version), so identical runs produce
 * byte-identical files. Files are written to a temporary name and renamed
 * into place.
 */

#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "did/attacker_sim.hpp"
#include "did/decision_tree.hpp"
#include "did/errors.hpp"
#include "did/fingerprint.hpp"
#include "did/planner.hpp"
#include "did/scenario.hpp"
#include "did/version.hpp"

namespace did {

/// Compact, locale-independent float formatting for CSV and summaries.
inline std::string fmt_double(double x) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.10g", x);
    return buffer;
}

inline std::string fmt_fixed(double x, int digits) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.*f", digits, x);
    return buffer;
}

// ---------------------------------------------------------------------------
// Report payloads
// ---------------------------------------------------------------------------

/// Common header of every report.
inline Json report_base(const std::string& command, const std::string& input_path,
                        const std::string& input_fingerprint) {
    Json j;
    j["command"] = command;
    j["tool_version"] = kToolVersion;
    j["input_path"] = input_path;
    j["input_fingerprint"] = input_fingerprint;
    return j;
}

inline Json valuation_to_json(const Valuation& v) {
    Json j;
    j["attacker_expected_net"] = v.attacker_expected_net;
    j["deterrence_prob"] = v.deterrence_prob;
    j["proceed_prob"] = v.proceed_prob;
    j["exhausted_prob"] = v.exhausted_prob;
    j["expected_attempts"] = v.expected_attempts;
    j["expected_attacker_time"] = v.expected_attacker_time;
    return j;
}

inline Json sim_metrics_to_json(const SimMetrics& m) {
    Json j;
    j["n_trials"] = m.n_trials;
    j["master_seed"] = m.master_seed;
    j["deterrence_rate"] = m.deterrence_rate;
    j["deterrence_ci_halfwidth"] = m.deterrence_ci;
    j["exhausted_rate"] = m.exhausted_rate;
    j["goal_rate"] = m.goal_rate;
    j["mean_steps"] = m.mean_steps;
    j["mean_steps_ci_halfwidth"] = m.mean_steps_ci;
    j["mean_time"] = m.mean_time;
    j["mean_time_ci_halfwidth"] = m.mean_time_ci;
    j["mean_attacker_net"] = m.mean_attacker_net;
    j["mean_attacker_net_ci_halfwidth"] = m.mean_attacker_net_ci;
    j["mean_attempts"] = m.mean_attempts;
    j["scenario_fingerprint"] = m.scenario_fingerprint;
    return j;
}

inline Json plan_to_json(const DeploymentPlan& plan) {
    Json j;
    j["method"] = plan_method_name(plan.method);
    j["chosen"] = Json::array();
    for (const auto& [id, layer] : plan.chosen)
        j["chosen"].push_back({{"id", id}, {"layer", layer_name(layer)}});
    j["total_cost"] = plan.total_cost;
    j["objective_value"] = plan.objective_value;
    return j;
}

inline Json agreement_to_json(const AgreementReport& report) {
    Json j;
    j["z_deterrence"] = report.z_deterrence;
    j["z_net"] = report.z_net;
    j["pass"] = report.pass;
    j["insufficient_samples"] = report.insufficient_samples;
    if (!report.notes.empty()) j["notes"] = report.notes;
    return j;
}

inline Json violations_to_json(const std::vector<Violation>& violations) {
    Json j = Json::array();
    for (const auto& v : violations) j.push_back({{"code", v.code}, {"message", v.message}});
    return j;
}

// ---------------------------------------------------------------------------
// CSV emission
// ---------------------------------------------------------------------------

/// Per-trial table: trial,result,steps,time,net,suspicion
inline std::string trials_to_csv(const std::vector<TrialRow>& rows) {
    std::string out = "trial,result,steps,time,net,suspicion\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const TrialRow& r = rows[i];
        out += std::to_string(i) + ',' + trial_result_name(r.result) + ',' +
               std::to_string(r.steps) + ',' + fmt_double(r.time) + ',' + fmt_double(r.net) +
               ',' + std::to_string(r.suspicion) + '\n';
    }
    return out;
}

/// Plot data: cumulative deterrence rate over trial-count prefixes.
inline std::string deterrence_prefix_csv(const std::vector<TrialRow>& rows) {
    std::string out = "trials,deterrence_rate\n";
    long gave_up = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].result == TrialResult::GaveUp) ++gave_up;
        out += std::to_string(i + 1) + ',' +
               fmt_double(static_cast<double>(gave_up) / static_cast<double>(i + 1)) + '\n';
    }
    return out;
}

/// Sensitivity sweep rows: value plus the main valuation columns.
inline std::string sweep_to_csv(const std::string& param_name,
                                const std::vector<SweepPoint>& points) {
    std::string out =
        param_name + ",attacker_expected_net,deterrence_prob,proceed_prob,expected_attempts,error\n";
    for (const auto& p : points) {
        out += fmt_double(p.value) + ',';
        if (p.valuation) {
            out += fmt_double(p.valuation->attacker_expected_net) + ',' +
                   fmt_double(p.valuation->deterrence_prob) + ',' +
                   fmt_double(p.valuation->proceed_prob) + ',' +
                   fmt_double(p.valuation->expected_attempts) + ',';
        } else {
            out += ",,,,";
        }
        out += p.error + '\n';
    }
    return out;
}

// ---------------------------------------------------------------------------
// File writing
// ---------------------------------------------------------------------------

/// Write-temp-then-rename so readers never observe a partial file.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write file: " + tmp.string());
        out << content;
        if (!out) throw Error("short write: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

inline void write_json_report(const std::filesystem::path& path, const Json& report) {
    write_file_atomic(path, report.dump(2) + "\n");
}

} // namespace did
