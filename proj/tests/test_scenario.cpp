#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "did/scenario.hpp"
#include "testutil.hpp"

using namespace did;

namespace {

bool has_code(const std::vector<Violation>& report, const char* code) {
    return std::any_of(report.begin(), report.end(),
                       [code](const Violation& v) { return v.code == code; });
}

std::filesystem::path fixture(const char* name) {
    return std::filesystem::path(DID_SCENARIO_DIR) / name;
}

std::filesystem::path temp_file(const char* name) {
    return std::filesystem::temp_directory_path() / name;
}

} // namespace

TEST_CASE("a well-formed scenario validates cleanly") {
    const auto file = testutil::canonical_file();
    CHECK(validate_file(file).empty());
    CHECK(validate_scenario(file.scenario, file.catalog).empty());
}

TEST_CASE("unknown deployed deception id is reported") {
    auto file = testutil::canonical_file();
    file.scenario.deployment[Layer::Network].push_back("x9");
    const auto report = validate_scenario(file.scenario, file.catalog);
    CHECK(has_code(report, codes::kUnknownDeception));
}

TEST_CASE("threshold zero is reported") {
    auto file = testutil::canonical_file();
    file.scenario.threshold = 0;
    CHECK(has_code(validate_scenario(file.scenario, file.catalog), codes::kBadThreshold));
}

TEST_CASE("validation reports carry codes for every broken invariant") {
    auto file = testutil::canonical_file();
    file.catalog[0].base_notice_prob = 1.4;
    file.catalog[0].deploy_cost = -1.0;
    file.catalog[0].applicable_techniques.clear();
    file.catalog.push_back(file.catalog[0]); // duplicate id
    file.scenario.techniques.push_back(file.scenario.techniques[0]); // duplicate id
    file.scenario.techniques[0].base_duration = -2.0;
    file.scenario.conditional_table.entries[{"a", "b"}] = 0.0;
    file.profile.alertness = 2.0;
    file.scenario.deployment[Layer::Host] = {"net_down"}; // declared network

    const auto report = validate_file(file);
    CHECK(has_code(report, codes::kBadProbability));
    CHECK(has_code(report, codes::kNegativeCost));
    CHECK(has_code(report, codes::kEmptyApplicable));
    CHECK(has_code(report, codes::kDuplicateDeception));
    CHECK(has_code(report, codes::kDuplicateTechnique));
    CHECK(has_code(report, codes::kNegativeDuration));
    CHECK(has_code(report, codes::kBadMultiplier));
    CHECK(has_code(report, codes::kBadAttribute));
    CHECK(has_code(report, codes::kLayerMismatch));
}

TEST_CASE("bundled minimal scenario loads with one technique and one deception") {
    const auto file = load_scenario(fixture("minimal.json").string());
    CHECK(file.scenario.techniques.size() == 1);
    CHECK(file.catalog.size() == 1);
    CHECK(validate_file(file).empty());
}

TEST_CASE("bundled canonical scenario matches the in-code fixture") {
    const auto file = load_scenario(fixture("canonical.json").string());
    CHECK(validate_file(file).empty());
    const auto params = derive_tree_params(file.profile, file.catalog.at(0), file.costs);
    CHECK(params.p_n == doctest::Approx(0.8));
    CHECK(params.p_b == doctest::Approx(0.5));
    CHECK(params.p_g == doctest::Approx(0.5));
    CHECK(params.p_r == doctest::Approx(0.5));
    CHECK(params.max_retries == 5);
}

TEST_CASE("truncated files fail with a parse error") {
    const auto path = temp_file("did_truncated.json");
    {
        std::ofstream out(path);
        out << R"({"catalog": [{"id": "d1", "name")";
    }
    CHECK_THROWS_AS(load_scenario(path.string()), ParseError);
    std::filesystem::remove(path);
}

TEST_CASE("missing files fail with a parse error") {
    CHECK_THROWS_AS(load_scenario("/nonexistent/nowhere.json"), ParseError);
}

TEST_CASE("unknown keys are rejected with the offending path") {
    auto file = testutil::canonical_file();
    Json j = scenario_to_json(file);
    j["surprise"] = 1;
    CHECK_THROWS_WITH_AS(scenario_from_json(j), doctest::Contains("surprise"), ParseError);

    Json j2 = scenario_to_json(file);
    j2["catalog"][0]["extra_field"] = true;
    CHECK_THROWS_WITH_AS(scenario_from_json(j2), doctest::Contains("extra_field"), ParseError);

    Json j3 = scenario_to_json(file);
    j3.erase("threshold");
    CHECK_THROWS_WITH_AS(scenario_from_json(j3), doctest::Contains("threshold"), ParseError);
}

TEST_CASE("wrong field types are rejected") {
    auto file = testutil::canonical_file();
    Json j = scenario_to_json(file);
    j["threshold"] = "two";
    CHECK_THROWS_AS(scenario_from_json(j), ParseError);

    Json j2 = scenario_to_json(file);
    j2["profile"]["alertness"] = "high";
    CHECK_THROWS_AS(scenario_from_json(j2), ParseError);

    Json j3 = scenario_to_json(file);
    j3["catalog"][0]["layer"] = "cloud";
    CHECK_THROWS_AS(scenario_from_json(j3), ParseError);
}

TEST_CASE("save then load is the identity on scenario values") {
    const auto file = testutil::canonical_file();
    const auto path = temp_file("did_roundtrip_one.json");
    save_scenario(file, path.string());
    const auto loaded = load_scenario(path.string());
    CHECK(loaded == file);
    std::filesystem::remove(path);
}

TEST_CASE("property: save/load round-trips 1000 random scenarios") {
    Xoshiro256 rng(20240101);
    int failures = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto file = testutil::random_scenario_file(rng);
        REQUIRE(validate_file(file).empty());
        const auto text = scenario_to_text(file);
        const auto loaded = parse_scenario_text(text);
        if (!(loaded == file)) ++failures;
    }
    CHECK(failures == 0);
}

TEST_CASE("system profiles load from scenario files and standalone documents") {
    const auto from_fixture = load_system_profiles(fixture("profiles.json").string());
    CHECK(from_fixture.size() >= 2);

    auto file = testutil::canonical_file();
    SystemProfile sp;
    sp.label = "bare";
    for (Indicator ind : kAllIndicators) sp.indicators[ind] = 0.0;
    file.system_profiles.push_back(sp);
    const auto path = temp_file("did_profiles_embedded.json");
    save_scenario(file, path.string());
    const auto loaded = load_system_profiles(path.string());
    REQUIRE(loaded.size() == 1);
    CHECK(loaded[0].label == "bare");
    std::filesystem::remove(path);
}

// --- derive_tree_params -----------------------------------------------------

TEST_CASE("full alertness maps to certain notice") {
    auto file = testutil::canonical_file();
    file.profile.alertness = 1.0;
    const auto params = derive_tree_params(file.profile, file.catalog[0], file.costs);
    CHECK(params.p_n == doctest::Approx(1.0));
}

TEST_CASE("trusting attacker against a fully believable excuse gives p_b = 1") {
    auto file = testutil::canonical_file();
    file.profile.suspiciousness = 0.0;
    file.catalog[0].base_believe_prob = 1.0;
    const auto params = derive_tree_params(file.profile, file.catalog[0], file.costs);
    CHECK(params.p_b == doctest::Approx(1.0));
}

TEST_CASE("adaptability and patience map to retry behavior") {
    auto file = testutil::canonical_file();
    file.profile.adaptability = 0.3;
    file.profile.patience = 0.5;
    const auto params = derive_tree_params(file.profile, file.catalog[0], file.costs);
    CHECK(params.p_r == doctest::Approx(0.3));
    CHECK(params.p_g == doctest::Approx(0.7));
    CHECK(params.max_retries == 2);
}

TEST_CASE("costs pass through the derivation") {
    const auto file = testutil::canonical_file();
    const auto params = derive_tree_params(file.profile, file.catalog[0], file.costs);
    CHECK(params.c_i == file.costs.c_i);
    CHECK(params.c_nw == file.costs.c_nw);
    CHECK(params.b_nw == file.costs.b_nw);
}

TEST_CASE("property: derived probabilities are valid and complementary") {
    Xoshiro256 rng(77);
    auto base_file = testutil::canonical_file();
    for (int i = 0; i < 500; ++i) {
        AttackerProfile profile{rng.uniform01(), rng.uniform01(), rng.uniform01(),
                                rng.uniform01(), rng.uniform01()};
        DeceptionEntry entry = base_file.catalog[0];
        entry.base_believe_prob = rng.uniform01();
        const auto params = derive_tree_params(profile, entry, base_file.costs);
        CHECK(in_unit_interval(params.p_n));
        CHECK(in_unit_interval(params.p_b));
        CHECK(in_unit_interval(params.p_g));
        CHECK(in_unit_interval(params.p_r));
        CHECK(params.p_g + params.p_r == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(params.max_retries >= 0);
        CHECK(params.max_retries <= kRetryCapScale);
    }
}

TEST_CASE("property: the derivation is monotone in each attribute") {
    Xoshiro256 rng(78);
    auto base_file = testutil::canonical_file();
    for (int i = 0; i < 300; ++i) {
        AttackerProfile profile{rng.uniform01(), rng.uniform01(), rng.uniform01(),
                                rng.uniform01(), rng.uniform01()};
        DeceptionEntry entry = base_file.catalog[0];
        entry.base_believe_prob = rng.uniform01();
        const auto params = derive_tree_params(profile, entry, base_file.costs);

        AttackerProfile hi = profile;
        hi.alertness = profile.alertness + (1.0 - profile.alertness) * rng.uniform01();
        CHECK(derive_tree_params(hi, entry, base_file.costs).p_n >= params.p_n);

        AttackerProfile sus = profile;
        sus.suspiciousness =
            profile.suspiciousness + (1.0 - profile.suspiciousness) * rng.uniform01();
        CHECK(derive_tree_params(sus, entry, base_file.costs).p_b <= params.p_b);

        AttackerProfile pat = profile;
        pat.patience = profile.patience + (1.0 - profile.patience) * rng.uniform01();
        CHECK(derive_tree_params(pat, entry, base_file.costs).max_retries >=
              params.max_retries);
    }
}

TEST_CASE("scenario fingerprints are stable and content-sensitive") {
    const auto file = testutil::canonical_file();
    const auto fp1 = scenario_fingerprint(file);
    const auto fp2 = scenario_fingerprint(file);
    CHECK(fp1 == fp2);
    auto other = file;
    other.costs.c_i += 1.0;
    CHECK(scenario_fingerprint(other) != fp1);
}
