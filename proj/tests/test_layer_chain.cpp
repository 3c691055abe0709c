#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "did/layer_chain.hpp"
#include "did/rng.hpp"
#include "oracles.hpp"
#include "testutil.hpp"

using namespace did;

TEST_CASE("effective probability: independence, scaling, clamping") {
    ConditionalTable table;
    ExposureState empty = make_exposure_state(2);
    CHECK(effective_probability(0.5, "b", empty, table) == doctest::Approx(0.5));

    table.entries[{"a", "b"}] = 0.8;
    ExposureState after_a = record_notice(empty, "a");
    CHECK(effective_probability(0.5, "b", after_a, table) == doctest::Approx(0.4));

    ConditionalTable boost;
    boost.entries[{"a", "c"}] = 2.0;
    boost.entries[{"b", "c"}] = 1.5;
    ExposureState both = record_notice(after_a, "b");
    CHECK(effective_probability(0.9, "c", both, boost) == doctest::Approx(1.0)); // clamped
}

TEST_CASE("record_notice reaches the threshold and is idempotent") {
    ExposureState state = make_exposure_state(2);
    CHECK_FALSE(state.alerted);

    state = record_notice(state, "a");
    CHECK(state.suspicion_count == 1);
    CHECK_FALSE(state.alerted);

    state = record_notice(state, "b");
    CHECK(state.suspicion_count == 2);
    CHECK(state.alerted);

    const ExposureState again = record_notice(state, "a");
    CHECK(again == state);
}

TEST_CASE("threshold of 1 alerts on the first notice") {
    ExposureState state = make_exposure_state(1);
    CHECK_FALSE(state.alerted);
    state = record_notice(state, "x");
    CHECK(state.alerted);
}

TEST_CASE("alerted profile bumps alertness and suspiciousness, clamped") {
    AttackerProfile p;
    p.alertness = 0.5;
    p.suspiciousness = 0.5;
    const AttackerProfile bumped = alerted_profile(p);
    CHECK(bumped.alertness == doctest::Approx(0.75));
    CHECK(bumped.suspiciousness == doctest::Approx(0.75));

    AttackerProfile high;
    high.alertness = 0.9;
    CHECK(alerted_profile(high).alertness == doctest::Approx(1.0));

    AttackerProfile any;
    any.patience = 0.33;
    any.adaptability = 0.77;
    any.skill = 0.11;
    const AttackerProfile out = alerted_profile(any);
    CHECK(out.patience == any.patience);
    CHECK(out.adaptability == any.adaptability);
    CHECK(out.skill == any.skill);
}

TEST_CASE("default table: any-notice probability is 1 - prod(1 - base_k)") {
    Xoshiro256 rng(11);
    ConditionalTable defaults;
    for (int trial = 0; trial < 40; ++trial) {
        const int k = testutil::rand_int(rng, 1, 10);
        std::vector<std::string> ids;
        std::vector<double> bases;
        double product = 1.0;
        for (int i = 0; i < k; ++i) {
            ids.push_back("d" + std::to_string(i));
            bases.push_back(rng.uniform01());
            product *= 1.0 - bases.back();
        }
        const double enumerated = oracle::any_notice_probability(ids, bases, defaults);
        CHECK(enumerated == doctest::Approx(1.0 - product).epsilon(1e-10));
    }
}

TEST_CASE("fuzz: effective probability is always in [0,1]") {
    Xoshiro256 rng(42);
    for (int i = 0; i < 2000; ++i) {
        ConditionalTable table;
        ExposureState state = make_exposure_state(3);
        const int priors = testutil::rand_int(rng, 0, 6);
        for (int j = 0; j < priors; ++j) {
            const std::string id = "p" + std::to_string(j);
            state = record_notice(state, id);
            table.entries[{id, "target"}] = testutil::rand_range(rng, 0.0001, 50.0);
        }
        const double out = effective_probability(rng.uniform01(), "target", state, table);
        CHECK(out >= 0.0);
        CHECK(out <= 1.0);
    }
}

TEST_CASE("suspicion count is order-insensitive and alerted is monotone") {
    Xoshiro256 rng(5);
    for (int i = 0; i < 100; ++i) {
        std::vector<std::string> ids = {"a", "b", "c", "d"};
        std::vector<std::string> shuffled = ids;
        for (std::size_t j = shuffled.size(); j > 1; --j)
            std::swap(shuffled[j - 1], shuffled[rng.next() % j]);

        ExposureState forward = make_exposure_state(3);
        ExposureState backward = make_exposure_state(3);
        bool was_alerted = false;
        for (std::size_t j = 0; j < ids.size(); ++j) {
            forward = record_notice(forward, ids[j]);
            backward = record_notice(backward, shuffled[j]);
            if (was_alerted) CHECK(forward.alerted); // never un-alerts
            was_alerted = forward.alerted;
        }
        CHECK(forward.suspicion_count == backward.suspicion_count);
        CHECK(forward.alerted == backward.alerted);
    }
}
