/**
 * did — deception-in-depth planning and simulation CLI.
 *
 * Subcommands: validate, eval-tree, simulate, plan, fingerprint.
 * Exit codes: 0 success, 2 input error, 3 numeric divergence,
 * 4 infeasible target.
 *
 * All machine-readable outputs are pure functions of (inputs, seed, tool
 * version); runs with the same seed are byte-identical. The default seed
 * is 0, overridable through the DID_DEFAULT_SEED environment variable.
 */

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "did/did.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitDivergence = 3;
constexpr int kExitInfeasible = 4;

/// Collects files written during a command; unless the command commits,
/// everything written so far is removed again, so failed runs leave no
/// partial output behind.
class OutputDir {
public:
    explicit OutputDir(std::string dir) : dir_(std::move(dir)) {}

    ~OutputDir() {
        if (committed_) return;
        for (const auto& path : written_) {
            std::error_code ec;
            fs::remove(path, ec);
        }
    }

    OutputDir(const OutputDir&) = delete;
    OutputDir& operator=(const OutputDir&) = delete;

    bool enabled() const { return !dir_.empty(); }

    void write(const std::string& name, const std::string& content) {
        if (!enabled()) return;
        fs::create_directories(dir_);
        const fs::path path = fs::path(dir_) / name;
        did::write_file_atomic(path, content);
        written_.push_back(path);
    }

    void write_json(const std::string& name, const did::Json& payload) {
        write(name, payload.dump(2) + "\n");
    }

    void commit() { committed_ = true; }

private:
    std::string dir_;
    std::vector<fs::path> written_;
    bool committed_ = false;
};

std::uint64_t default_seed() {
    const char* env = std::getenv("DID_DEFAULT_SEED");
    if (!env || !*env) return 0;
    char* end = nullptr;
    const unsigned long long value = std::strtoull(env, &end, 10);
    if (end == nullptr || *end != '\0')
        throw std::invalid_argument(std::string("DID_DEFAULT_SEED is not an integer: ") + env);
    return static_cast<std::uint64_t>(value);
}

did::ScenarioFile load_validated(const std::string& path) {
    did::ScenarioFile file = did::load_scenario(path);
    const auto violations = did::validate_file(file);
    if (!violations.empty()) {
        std::string msg = path + ": scenario is invalid:";
        for (const auto& v : violations) msg += "\n  [" + v.code + "] " + v.message;
        throw std::invalid_argument(msg);
    }
    return file;
}

std::string file_fingerprint(const did::ScenarioFile& file) {
    return did::scenario_fingerprint(file);
}

/// Deployed deceptions in deterministic order: layer order, then the
/// deployment list order.
std::vector<const did::DeceptionEntry*> deployed_entries(const did::ScenarioFile& file) {
    std::vector<const did::DeceptionEntry*> out;
    for (did::Layer layer : did::kAllLayers) {
        auto it = file.scenario.deployment.find(layer);
        if (it == file.scenario.deployment.end()) continue;
        for (const auto& id : it->second)
            if (const auto* entry = file.find_deception(id)) out.push_back(entry);
    }
    return out;
}

// ---------------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------------

struct ValidateArgs {
    std::string scenario_path;
};

int cmd_validate(const ValidateArgs& args) {
    const did::ScenarioFile file = did::load_scenario(args.scenario_path);
    const auto violations = did::validate_file(file);
    if (violations.empty()) {
        std::cout << args.scenario_path << ": valid ("
                  << file.scenario.techniques.size() << " techniques, "
                  << file.catalog.size() << " catalog entries)\n";
        return kExitOk;
    }
    for (const auto& v : violations)
        std::cout << "[" << v.code << "] " << v.message << "\n";
    std::cerr << args.scenario_path << ": " << violations.size() << " violation(s)\n";
    return kExitInput;
}

// ---------------------------------------------------------------------------
// eval-tree
// ---------------------------------------------------------------------------

struct EvalTreeArgs {
    std::string scenario_path;
    int horizon = 50;
    bool closed_form = false;
    std::string deception_id;
    std::string sweep_param;
    std::string sweep_grid;
    std::string out_dir;
    std::string format = "json";
};

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> grid;
    std::string token;
    std::istringstream in(text);
    while (std::getline(in, token, ',')) {
        if (token.empty()) continue;
        std::size_t used = 0;
        const double value = std::stod(token, &used);
        if (used != token.size())
            throw std::invalid_argument("bad grid value: '" + token + "'");
        grid.push_back(value);
    }
    return grid;
}

int cmd_eval_tree(const EvalTreeArgs& args) {
    const did::ScenarioFile file = load_validated(args.scenario_path);
    OutputDir out(args.out_dir);

    std::vector<const did::DeceptionEntry*> entries = deployed_entries(file);
    if (!args.deception_id.empty()) {
        const auto* entry = file.find_deception(args.deception_id);
        if (!entry)
            throw std::invalid_argument("unknown deception id '" + args.deception_id + "'");
        entries = {entry};
    }
    if (entries.empty())
        throw std::invalid_argument(args.scenario_path + ": no deployed deceptions to evaluate");

    did::Json report = did::report_base("eval-tree", args.scenario_path, file_fingerprint(file));
    report["mode"] = args.closed_form ? "closed_form" : "finite_horizon";
    if (!args.closed_form) report["horizon"] = args.horizon;

    did::Json per_deception = did::Json::array();
    std::string csv = "deception_id,attacker_expected_net,deterrence_prob,proceed_prob,"
                      "exhausted_prob,expected_attempts,expected_attacker_time\n";
    std::cout << "valuation (" << (args.closed_form ? "closed form" : "finite horizon") << ")\n";
    for (const auto* entry : entries) {
        const auto params = did::derive_tree_params(file.profile, *entry, file.costs);
        did::Valuation val;
        if (args.closed_form) {
            val = did::closed_form_excuse_value(params, entry->delay_inflicted);
        } else {
            val = did::evaluate_tree(did::build_false_excuse_tree(params, entry->delay_inflicted),
                                     args.horizon);
        }
        did::Json item = did::valuation_to_json(val);
        item["deception_id"] = entry->id;
        per_deception.push_back(item);
        csv += entry->id + ',' + did::fmt_double(val.attacker_expected_net) + ',' +
               did::fmt_double(val.deterrence_prob) + ',' + did::fmt_double(val.proceed_prob) +
               ',' + did::fmt_double(val.exhausted_prob) + ',' +
               did::fmt_double(val.expected_attempts) + ',' +
               did::fmt_double(val.expected_attacker_time) + '\n';

        std::cout << "  " << entry->id
                  << "  net=" << did::fmt_fixed(val.attacker_expected_net, 4)
                  << "  deterrence_prob=" << did::fmt_fixed(val.deterrence_prob, 4)
                  << "  proceed_prob=" << did::fmt_fixed(val.proceed_prob, 4)
                  << "  attempts=" << did::fmt_fixed(val.expected_attempts, 4) << "\n";
    }
    report["results"] = {{"per_deception", per_deception}};

    if (!args.sweep_param.empty()) {
        const auto grid = parse_grid(args.sweep_grid);
        const auto params = did::derive_tree_params(file.profile, *entries.front(), file.costs);
        const auto points = did::sensitivity(params, args.sweep_param, grid, args.horizon);
        did::Json sweep = did::Json::array();
        for (const auto& point : points) {
            did::Json item;
            item["value"] = point.value;
            if (point.valuation) item["valuation"] = did::valuation_to_json(*point.valuation);
            if (!point.error.empty()) item["error"] = point.error;
            sweep.push_back(item);
        }
        report["results"]["sweep"] = {{"parameter", args.sweep_param}, {"points", sweep}};
        out.write("sweep.csv", did::sweep_to_csv(args.sweep_param, points));
    }

    if (args.format == "csv")
        out.write("eval_tree_report.csv", csv);
    else
        out.write_json("eval_tree_report.json", report);
    out.commit();
    return kExitOk;
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

struct SimulateArgs {
    std::string scenario_path;
    int trials = 1000;
    std::uint64_t seed = 0;
    int threads = 1;
    std::string give_up_scope = "campaign";
    std::string out_dir;
};

int cmd_simulate(const SimulateArgs& args) {
    const did::ScenarioFile file = load_validated(args.scenario_path);
    OutputDir out(args.out_dir);

    did::SimOptions opts;
    opts.threads = args.threads;
    opts.give_up_scope =
        args.give_up_scope == "step" ? did::GiveUpScope::Step : did::GiveUpScope::Campaign;

    std::vector<did::TrialRow> rows;
    const did::SimMetrics metrics =
        did::run_monte_carlo(file, args.trials, args.seed, opts, &rows);

    std::cout << "trials: " << metrics.n_trials << "\n"
              << "deterrence_rate: " << did::fmt_fixed(metrics.deterrence_rate, 4)
              << " (±" << did::fmt_fixed(metrics.deterrence_ci, 4) << ")\n"
              << "exhausted_rate: " << did::fmt_fixed(metrics.exhausted_rate, 4) << "\n"
              << "goal_rate: " << did::fmt_fixed(metrics.goal_rate, 4) << "\n"
              << "mean_steps: " << did::fmt_fixed(metrics.mean_steps, 4) << "\n"
              << "mean_time: " << did::fmt_fixed(metrics.mean_time, 4) << "\n"
              << "mean_attacker_net: " << did::fmt_fixed(metrics.mean_attacker_net, 4) << "\n";

    did::Json report = did::report_base("simulate", args.scenario_path, file_fingerprint(file));
    report["master_seed"] = args.seed;
    report["give_up_scope"] = args.give_up_scope;
    report["results"] = did::sim_metrics_to_json(metrics);
    out.write_json("metrics.json", report);
    out.write("trials.csv", did::trials_to_csv(rows));
    out.write("deterrence_vs_trials.csv", did::deterrence_prefix_csv(rows));
    out.commit();
    return kExitOk;
}

// ---------------------------------------------------------------------------
// plan
// ---------------------------------------------------------------------------

struct PlanArgs {
    std::string scenario_path;
    double budget = 0.0;
    std::string method = "auto";
    double w_deter = 1.0;
    double w_time = 0.0;
    double w_cost = 0.0;
    std::string eval_mode = "analytic";
    int mc_trials = 10000;
    std::uint64_t seed = 0;
    std::string out_dir;
    std::string format = "json";
};

int cmd_plan(const PlanArgs& args) {
    const did::ScenarioFile file = load_validated(args.scenario_path);
    OutputDir out(args.out_dir);

    did::Objective objective;
    objective.w_deter = args.w_deter;
    objective.w_time = args.w_time;
    objective.w_cost = args.w_cost;
    objective.mode = args.eval_mode == "mc" ? did::EvalMode::MonteCarlo : did::EvalMode::Analytic;
    objective.mc_trials = args.mc_trials;
    objective.mc_seed = args.seed;

    std::string method = args.method;
    if (method == "auto") method = file.catalog.size() <= 15 ? "exhaustive" : "greedy";

    std::vector<std::string> warnings;
    const did::DeploymentPlan plan =
        method == "exhaustive" ? did::plan_exhaustive(file, args.budget, objective, &warnings)
                               : did::plan_greedy(file, args.budget, objective, &warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";

    std::cout << "method: " << did::plan_method_name(plan.method) << "\n"
              << "objective_value: " << did::fmt_fixed(plan.objective_value, 6) << "\n"
              << "total_cost: " << did::fmt_fixed(plan.total_cost, 4) << "\n"
              << "chosen:";
    if (plan.chosen.empty()) std::cout << " (none)";
    for (const auto& [id, layer] : plan.chosen) std::cout << " " << id << "@" << did::layer_name(layer);
    std::cout << "\n";

    did::Json report = did::report_base("plan", args.scenario_path, file_fingerprint(file));
    report["budget"] = args.budget;
    report["objective"] = {{"w_deter", objective.w_deter},
                           {"w_time", objective.w_time},
                           {"w_cost", objective.w_cost},
                           {"mode", args.eval_mode}};
    if (objective.mode == did::EvalMode::MonteCarlo) {
        report["master_seed"] = args.seed;
        report["objective"]["mc_trials"] = objective.mc_trials;
    }
    report["results"] = did::plan_to_json(plan);
    if (!warnings.empty()) report["warnings"] = warnings;

    if (args.format == "csv") {
        std::string csv = "id,layer,deploy_cost\n";
        for (const auto& [id, layer] : plan.chosen) {
            const auto* entry = file.find_deception(id);
            csv += id + ',' + did::layer_name(layer) + ',' +
                   did::fmt_double(entry ? entry->deploy_cost : 0.0) + '\n';
        }
        out.write("plan_report.csv", csv);
    } else {
        out.write_json("plan_report.json", report);
    }
    out.commit();
    return kExitOk;
}

// ---------------------------------------------------------------------------
// fingerprint
// ---------------------------------------------------------------------------

struct FingerprintArgs {
    std::string profile_path;
    std::optional<double> target;
    std::optional<double> skill;
    double threshold = did::kHoneyscoreThreshold;
    std::string label;
    std::string out_dir;
    std::string format = "json";
};

int cmd_fingerprint(const FingerprintArgs& args) {
    std::vector<did::SystemProfile> profiles = did::load_system_profiles(args.profile_path);
    if (!args.label.empty()) {
        std::vector<did::SystemProfile> selected;
        for (const auto& p : profiles)
            if (p.label == args.label) selected.push_back(p);
        if (selected.empty())
            throw std::invalid_argument("no system profile labeled '" + args.label + "'");
        profiles = std::move(selected);
    }
    if (profiles.empty())
        throw std::invalid_argument(args.profile_path + ": no system profiles found");
    for (const auto& p : profiles) {
        const auto violations = did::validate_system_profile(p);
        if (!violations.empty())
            throw std::invalid_argument("profile '" + p.label + "': " + violations[0].message);
    }
    OutputDir out(args.out_dir);

    did::Json report = did::report_base("fingerprint", args.profile_path, "");
    report["threshold"] = args.threshold;
    did::Json results = did::Json::array();
    std::string csv = "label,honeyscore,classification\n";

    for (const auto& profile : profiles) {
        const double score = did::honeyscore(profile);
        const auto cls = did::classify(score, args.threshold);
        did::Json item;
        item["label"] = profile.label;
        item["honeyscore"] = score;
        item["classification"] = did::classification_name(cls);
        std::cout << profile.label << ": honeyscore=" << did::fmt_fixed(score, 4) << " ("
                  << did::classification_name(cls) << ")";
        if (args.skill) {
            did::AttackerProfile attacker;
            attacker.skill = *args.skill;
            const double perceived = did::perceived_score(profile, attacker);
            item["perceived_score"] = perceived;
            std::cout << " perceived=" << did::fmt_fixed(perceived, 4);
        }
        if (args.target) {
            const auto raises = did::suggest_clues(profile, *args.target);
            did::Json suggestions = did::Json::array();
            std::cout << " clues_to_add=" << raises.size() << " [";
            for (std::size_t i = 0; i < raises.size(); ++i) {
                suggestions.push_back({{"indicator", did::indicator_name(raises[i].indicator)},
                                       {"new_value", raises[i].new_value}});
                std::cout << (i ? " " : "") << did::indicator_name(raises[i].indicator);
            }
            std::cout << "]";
            item["suggested_clues"] = suggestions;
            item["score_after"] = did::honeyscore(did::apply_clues(profile, raises));
        }
        std::cout << "\n";
        results.push_back(item);
        csv += profile.label + ',' + did::fmt_double(score) + ',' +
               did::classification_name(cls) + '\n';
    }
    report["results"] = results;
    if (args.target) report["target"] = *args.target;

    if (args.format == "csv")
        out.write("fingerprint_report.csv", csv);
    else
        out.write_json("fingerprint_report.json", report);
    out.commit();
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"deception-in-depth planning and simulation toolkit"};
    app.set_version_flag("--version", did::kToolVersion);
    app.require_subcommand(1);

    std::uint64_t seed_default = 0;
    try {
        seed_default = default_seed();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }

    ValidateArgs validate_args;
    auto* validate = app.add_subcommand("validate", "check a scenario file against every invariant");
    validate->add_option("scenario", validate_args.scenario_path, "scenario JSON file")
        ->required();

    EvalTreeArgs eval_args;
    auto* eval = app.add_subcommand("eval-tree", "evaluate false-excuse decision trees");
    eval->add_option("scenario", eval_args.scenario_path, "scenario JSON file")->required();
    eval->add_option("--horizon", eval_args.horizon, "repeat expansions for finite-horizon evaluation")
        ->check(CLI::Range(1, 1000000))
        ->capture_default_str();
    eval->add_flag("--closed-form", eval_args.closed_form, "use the closed-form valuation");
    eval->add_option("--deception", eval_args.deception_id, "evaluate only this deception id");
    eval->add_option("--sweep", eval_args.sweep_param, "sweep one parameter (c_i, c_nw, b_nw, p_n, p_b, p_g, p_r)");
    eval->add_option("--grid", eval_args.sweep_grid, "comma-separated sweep values");
    eval->add_option("--out", eval_args.out_dir, "directory for machine-readable reports");
    eval->add_option("--format", eval_args.format, "report format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();

    SimulateArgs sim_args;
    auto* simulate = app.add_subcommand("simulate", "run seeded Monte Carlo attacker trials");
    simulate->add_option("scenario", sim_args.scenario_path, "scenario JSON file")->required();
    simulate->add_option("--trials", sim_args.trials, "number of trials")
        ->check(CLI::Range(1, 100000000))
        ->capture_default_str();
    simulate->add_option("--seed", sim_args.seed, "master seed")->default_val(seed_default);
    simulate->add_option("--threads", sim_args.threads, "worker threads (never changes results)")
        ->check(CLI::Range(1, 256))
        ->capture_default_str();
    simulate->add_option("--give-up-scope", sim_args.give_up_scope,
                         "what a give-up ends: the campaign or just the technique")
        ->check(CLI::IsMember({"campaign", "step"}))
        ->capture_default_str();
    simulate->add_option("--out", sim_args.out_dir, "directory for metrics JSON and CSVs");

    PlanArgs plan_args;
    auto* plan = app.add_subcommand("plan", "choose a deployment under a budget");
    plan->add_option("scenario", plan_args.scenario_path, "scenario JSON file")->required();
    plan->add_option("--budget", plan_args.budget, "defender budget")
        ->check(CLI::NonNegativeNumber)
        ->required();
    plan->add_option("--method", plan_args.method, "search method")
        ->check(CLI::IsMember({"auto", "exhaustive", "greedy"}))
        ->capture_default_str();
    plan->add_option("--w-deter", plan_args.w_deter, "weight on defender success probability")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    plan->add_option("--w-time", plan_args.w_time, "weight on normalized attacker time")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    plan->add_option("--w-cost", plan_args.w_cost, "weight on cost/budget")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    plan->add_option("--eval", plan_args.eval_mode, "objective evaluation mode")
        ->check(CLI::IsMember({"analytic", "mc"}))
        ->capture_default_str();
    plan->add_option("--mc-trials", plan_args.mc_trials, "trials per Monte Carlo evaluation")
        ->check(CLI::Range(1, 10000000))
        ->capture_default_str();
    plan->add_option("--seed", plan_args.seed, "seed for Monte Carlo evaluation")
        ->default_val(seed_default);
    plan->add_option("--out", plan_args.out_dir, "directory for the plan report");
    plan->add_option("--format", plan_args.format, "report format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();

    FingerprintArgs fp_args;
    auto* fingerprint =
        app.add_subcommand("fingerprint", "score honeypot-likeness and suggest false clues");
    fingerprint->add_option("profiles", fp_args.profile_path,
                            "system-profile JSON (standalone or scenario file)")
        ->required();
    fingerprint->add_option("--target", fp_args.target, "suggest clue raises reaching this score")
        ->check(CLI::Range(0.0, 1.0));
    fingerprint->add_option("--skill", fp_args.skill, "attacker skill for perceived score")
        ->check(CLI::Range(0.0, 1.0));
    fingerprint->add_option("--threshold", fp_args.threshold, "classification threshold")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    fingerprint->add_option("--profile", fp_args.label, "only this profile label");
    fingerprint->add_option("--out", fp_args.out_dir, "directory for the fingerprint report");
    fingerprint->add_option("--format", fp_args.format, "report format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (app.got_subcommand(validate)) return cmd_validate(validate_args);
        if (app.got_subcommand(eval)) return cmd_eval_tree(eval_args);
        if (app.got_subcommand(simulate)) return cmd_simulate(sim_args);
        if (app.got_subcommand(plan)) return cmd_plan(plan_args);
        if (app.got_subcommand(fingerprint)) return cmd_fingerprint(fp_args);
    } catch (const did::DivergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDivergence;
    } catch (const did::InfeasibleError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const did::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitOk;
}
