#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "staircase/construction.hpp"
#include "staircase/errors.hpp"

using namespace staircase;

TEST_CASE("power-law schedule clamps small stages to two cuts") {
    CHECK(build_schedule(0.15, 3).r == std::vector<int>{2, 2, 2});
    CHECK(build_schedule(0.15, 1).r == std::vector<int>{2});
    CHECK_THROWS_AS(build_schedule(0.25, 10), DomainError);
    CHECK_THROWS_AS(build_schedule(0.0, 10), DomainError);
    CHECK_THROWS_AS(build_schedule(0.1, 0), PreconditionError);
}

TEST_CASE("power-law cuts hit exact integer powers") {
    // 1024^0.1 == 2 and 59049^0.1 == 3 exactly.
    CHECK(power_law_cuts(1024, 0.1) == 2);
    CHECK(power_law_cuts(1023, 0.1) == 2);
    CHECK(power_law_cuts(59049, 0.1) == 3);
    CHECK(power_law_cuts(59048, 0.1) == 2);
    const auto s = build_schedule(0.19, 2000);
    for (int j = 2; j <= s.j_max; ++j) CHECK(s.cuts(j) >= s.cuts(j - 1));
}

TEST_CASE("explicit schedules are validated") {
    CHECK(explicit_schedule({2, 2, 3, 3}).j_max == 4);
    CHECK_THROWS_AS(explicit_schedule({2, 1}), PreconditionError);
    CHECK_THROWS_AS(explicit_schedule({3, 2}), PreconditionError);
    CHECK_THROWS_AS(explicit_schedule({}), PreconditionError);
}

TEST_CASE("spacer vectors follow the staircase") {
    CHECK(staircase_spacers(2) == std::vector<int>{1, 0});
    CHECK(staircase_spacers(5) == std::vector<int>{1, 2, 3, 4, 0});
    for (int r = 2; r < 40; ++r) {
        const auto s = staircase_spacers(r);
        long sum = 0;
        for (int v : s) sum += v;
        CHECK(sum == r * (r - 1) / 2);
    }
}

TEST_CASE("ledger: hand-evaluated first stages") {
    const auto ledger = build_ledger(explicit_schedule({2, 2}));
    CHECK(ledger.last_stage() == 3);
    CHECK(ledger.height(2) == 3);
    CHECK(ledger.base_measure(2) == Rational(1, 2));
    CHECK(ledger.stage(1).offsets == std::vector<BigInt>{0, 2});
    CHECK(ledger.height(3) == 7);
    CHECK(ledger.base_measure(3) == Rational(1, 4));
    CHECK(ledger.stage(2).tower_measure - ledger.stage(1).tower_measure == Rational(1, 2));
    CHECK(ledger.stage(2).offsets == std::vector<BigInt>{0, 4});
}

TEST_CASE("ledger invariants on random schedules") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<int> r;
        int cur = 2;
        const int len = 1 + static_cast<int>(rng() % 25);
        for (int i = 0; i < len; ++i) {
            cur += static_cast<int>(rng() % 3 == 0);
            r.push_back(cur);
        }
        const auto ledger = build_ledger(explicit_schedule(r));
        for (int j = 1; j < ledger.last_stage(); ++j) {
            const Stage& st = ledger.stage(j);
            const Stage& nx = ledger.stage(j + 1);
            const int c = st.cuts;
            CHECK(nx.height == BigInt(c) * st.height + c * (c - 1) / 2);
            CHECK(nx.base_measure == st.base_measure / c);
            CHECK(st.offsets.front() == 0);
            for (std::size_t i = 1; i < st.offsets.size(); ++i) {
                CHECK(st.offsets[i] == st.offsets[i - 1] + st.height + st.spacers[i - 1]);
                CHECK(st.offsets[i] >= st.offsets[i - 1] + st.height);  // disjoint columns
            }
            CHECK(st.offsets.back() + st.height <= nx.height);
        }
        for (const Stage& st : ledger.stages()) CHECK(st.tower_measure == st.base_measure * Rational(st.height));
    }
}

TEST_CASE("ledger heights agree with literal stacking") {
    const std::vector<int> cuts{2, 3, 3, 4};
    const auto ledger = build_ledger(explicit_schedule(cuts));
    for (int K = 1; K <= ledger.last_stage(); ++K)
        CHECK(BigInt(oracle::stack_tower(cuts, 1, 0, K).size()) == ledger.height(K));
}

TEST_CASE("scaling the seed scales measures only") {
    const auto s = explicit_schedule({2, 3, 3, 5});
    const auto base = build_ledger(s);
    const auto scaled = build_ledger(s, 1, Rational(7, 3));
    for (int j = 1; j <= base.last_stage(); ++j) {
        CHECK(scaled.height(j) == base.height(j));
        CHECK(scaled.stage(j).offsets == base.stage(j).offsets);
        CHECK(scaled.base_measure(j) == base.base_measure(j) * Rational(7, 3));
        CHECK(scaled.stage(j).tower_measure == base.stage(j).tower_measure * Rational(7, 3));
    }
    CHECK_THROWS_AS(build_ledger(s, 0), PreconditionError);
    CHECK_THROWS_AS(build_ledger(s, 1, Rational(0)), PreconditionError);
}

TEST_CASE("parameter sets") {
    const auto s = explicit_schedule({2, 2, 3, 3, 3, 3, 3, 4});
    const auto J2 = parameter_set(s, 2);
    REQUIRE(J2.j_r);
    CHECK(*J2.j_r == 7);
    CHECK(J2.members == std::vector<int>{3, 4});

    const auto J9 = parameter_set(s, 9);
    CHECK_FALSE(J9.j_r);
    CHECK(J9.empty());

    const auto lone = parameter_set(explicit_schedule({3}), 2);
    REQUIRE(lone.j_r);
    CHECK(*lone.j_r == 1);
    CHECK(lone.empty());
}

TEST_CASE("cardinality report") {
    const auto s = build_schedule(0.15, 30);
    const auto rep = check_cardinality_condition(s, 1);
    CHECK(rep.target == 1);
    CHECK(rep.size == 28);
    CHECK(rep.satisfied);
    CHECK(rep.exponent == doctest::Approx(17.0 / 3.0));
    CHECK(check_cardinality_condition(build_schedule(0.1, 5), 1).exponent == doctest::Approx(9.0));
    const auto far = check_cardinality_condition(s, 2);
    CHECK(far.size == 0);
    CHECK(far.target == 16);
    CHECK(far.deficit == 17);
    CHECK_THROWS_AS(check_cardinality_condition(explicit_schedule({2, 2}), 1), PreconditionError);
}

TEST_CASE("extension continues the rule") {
    const auto s = build_schedule(0.15, 100).extended(5);
    CHECK(s.j_max == 105);
    CHECK(s.cuts(105) == power_law_cuts(105, 0.15));
    const auto e = explicit_schedule({2, 3}).extended(2);
    CHECK(e.r == std::vector<int>{2, 3, 3, 3});
    CHECK(e.prefix(2).r == std::vector<int>{2, 3});
}

TEST_CASE("ledger JSON uses strings for exact values") {
    const auto j = to_json(build_ledger(explicit_schedule({2, 2})));
    CHECK(j["stages"].size() == 3);
    CHECK(j["stages"][2]["h"] == "7");
    CHECK(j["stages"][2]["mu_E"]["den"] == "4");
    CHECK(j["stages"][0]["offsets"][1] == "2");
    CHECK(j["stages"][2]["r_j"].is_null());
}
