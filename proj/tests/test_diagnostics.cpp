#include <doctest.h>

#include <cmath>
#include <unordered_set>

#include "oracles.hpp"
#include "staircase/diagnostics.hpp"
#include "staircase/errors.hpp"

using namespace staircase;

namespace {

std::shared_ptr<const StageLedger> ledger_of(const ConstructionSchedule& s, const Rational& mu = 1) {
    return std::make_shared<const StageLedger>(build_ledger(s, 1, mu));
}

}  // namespace

TEST_CASE("tri-state decisions") {
    CHECK(decide_less_than(Enclosure(Rational(1), Rational(2)), Rational(3)) == Verdict::kTrue);
    CHECK(decide_less_than(Enclosure(Rational(3), Rational(4)), Rational(3)) == Verdict::kFalse);
    CHECK(decide_less_than(Enclosure(Rational(2), Rational(4)), Rational(3)) == Verdict::kUndecided);
    CHECK(decide_less_than(Enclosure(Rational(1), Rational(3)), Rational(3)) == Verdict::kUndecided);
}

TEST_CASE("lemma gap: r = 1 is trivially true") {
    const auto s = explicit_schedule({2, 2, 2, 2, 2, 2});
    CorrelationOracle kernel(ledger_of(s));
    const auto J = parameter_set(s, 1);
    for (int j : J.members) {
        const auto rep = lemma_gap(kernel, J, j, kernel.k_cap());
        CHECK(rep.in_parameter_set);
        CHECK(rep.bound == Rational(2) / Rational(kernel.ledger().height(j)) + 2);
        CHECK(rep.holds == Verdict::kTrue);
    }
}

TEST_CASE("lemma gap at h_j = 3, r = 2") {
    const auto s = explicit_schedule({2, 2, 2, 2, 2});
    CorrelationOracle kernel(ledger_of(s));
    const auto J = parameter_set(s, 2);
    CHECK(J.empty());
    CHECK_THROWS_AS(lemma_gap(kernel, J, 2, 2), PrecisionError);
    for (int K = 4; K <= kernel.k_cap(); ++K) {
        const auto rep = lemma_gap(kernel, J, 2, K);
        CHECK_FALSE(rep.in_parameter_set);
        CHECK(rep.bound == Rational(11, 6));
        CHECK(rep.holds == Verdict::kTrue);
    }
}

TEST_CASE("verdicts never flip as K grows") {
    const auto s = explicit_schedule({2, 3, 3, 3, 4, 4, 4, 5});
    CorrelationOracle kernel(ledger_of(s.extended(3)));
    for (int r = 1; r <= 4; ++r) {
        const auto J = parameter_set(s, r);
        for (int j = 1; j <= 5; ++j) {
            std::optional<Verdict> decided;
            for (int K = lemma_min_stage(kernel, j, r); K <= kernel.k_cap(); ++K) {
                const auto rep = lemma_gap(kernel, J, j, K);
                if (decided) CHECK(rep.holds == *decided);
                if (rep.holds != Verdict::kUndecided) decided = rep.holds;
            }
        }
    }
}

TEST_CASE("projection inequality with a single member") {
    const auto s = explicit_schedule({3, 3, 3, 3});
    CorrelationOracle kernel(ledger_of(s.extended(2)));
    const auto J = parameter_set(s, 2);
    REQUIRE(J.members == std::vector<int>{1});
    const auto rep = inequality_two(kernel, J, kernel.k_cap());
    CHECK(rep.rhs == 2);
    CHECK(rep.holds == Verdict::kTrue);
    CHECK(rep.diagonal_share == Enclosure(Rational(1)));
    CHECK_THROWS_AS(inequality_two(kernel, parameter_set(s, 5), kernel.k_cap()), PreconditionError);
}

TEST_CASE("projection inequality agrees with a direct bilinear expansion") {
    // |J_2| = 3 on r = (3,3,3,3,3,3).
    const auto s = explicit_schedule({3, 3, 3, 3, 3, 3});
    const auto ledger = ledger_of(s.extended(3));
    CorrelationOracle kernel(ledger);
    const auto J = parameter_set(s, 2);
    REQUIRE(J.members == std::vector<int>{1, 2, 3});
    const int r = 2;
    const long n = 3;

    for (int K : {inequality_two_min_stage(kernel, J), kernel.k_cap()}) {
        const auto rep = inequality_two(kernel, J, K);

        // Independent gamma: materialize f's levels at stage K and count pairs at each lag.
        const auto levels = oracle::marked_levels(oracle::stack_tower(s.extended(3).r, 1, 0, K));
        const std::unordered_set<std::int64_t> in_f(levels.begin(), levels.end());
        const Rational mu = ledger->base_measure(K);
        auto gamma = [&](std::int64_t a) {
            a = std::abs(a);
            long cnt = 0;
            for (std::int64_t l : levels) cnt += in_f.count(l + a) ? 1 : 0;
            Rational lo = Rational(cnt) * mu;
            Rational hi = lo + Rational(a) * mu;
            if (hi > 1) hi = 1;
            return Enclosure(lo, hi);
        };

        // Elementary tensors: r^2 terms T^{-i}f (x) T^{-i'}f with weight 1/r^2 and |J| terms
        // T^{h_j}f (x) T^{h_j}f with weight -1/|J|.
        struct Term { std::int64_t p, q; Rational w; };
        std::vector<Term> terms;
        for (int i = 0; i < r; ++i)
            for (int k = 0; k < r; ++k) terms.push_back({-i, -k, Rational(1, r * r)});
        for (int j : J.members) {
            const auto h = ledger->height(j).convert_to<std::int64_t>();
            terms.push_back({h, h, Rational(-1, n)});
        }
        Enclosure direct(Rational(0));
        for (const auto& x : terms)
            for (const auto& y : terms) direct += gamma(x.p - y.p) * gamma(x.q - y.q) * (x.w * y.w);

        // Both are sound enclosures of the same norm, so they must overlap.
        CHECK(direct.hi() >= rep.lhs.lo());
        CHECK(rep.lhs.hi() >= direct.lo());
        CHECK(rep.diagonal == Enclosure(Rational(n)));
    }
}

TEST_CASE("cross-term decay fit") {
    const auto s = explicit_schedule({3, 3, 3, 3, 3, 3, 3});
    CorrelationOracle kernel(ledger_of(s.extended(3)));
    const auto J = parameter_set(s, 2);
    REQUIRE(J.size() >= 2);
    const auto fit = cross_term_decay(kernel, J, kernel.k_cap());
    const Enclosure a = square(q_norm2(kernel, 2, kernel.k_cap()));
    for (const auto& p : fit.pairs) {
        CHECK(p.slack >= 0);
        if (p.p == 0) {
            CHECK(p.ratio == 1);
            CHECK(p.gap == abs(Enclosure(Rational(1)) - a).midpoint());
        }
        CHECK(p.ratio * ipow(BigInt(3), static_cast<unsigned>(p.p)) <= 1);
    }
    CHECK(fit.weak_form_holds);
    CHECK_THROWS_AS(cross_term_decay(kernel, parameter_set(explicit_schedule({3, 3, 3, 3}), 2), 5),
                    PreconditionError);
}

TEST_CASE("cyclic distance: membership and closed forms") {
    const auto s = build_schedule(0.15, 20);
    CorrelationOracle kernel(ledger_of(s));
    const int K = kernel.k_cap();

    const auto zero = cyclic_distance(kernel, 0, 3, K, 1e-16);
    CHECK(std::abs(zero.rho2) < 1e-9);

    for (int r : {1, 2, 5}) {
        const auto rep = cyclic_distance(kernel, r, 0, K, 1e-3);
        const double g = to_double(kernel.normalized_correlation(r, K).midpoint());
        const double u2 = 2 + 2 * g * g;
        const double v0 = 2 * g;
        const double c = v0 / (1 + 1e-3);
        CHECK(rep.rho2 == doctest::Approx(u2 - 2 * v0 * c + c * c).epsilon(1e-12));
    }
    CHECK_THROWS_AS(cyclic_distance(kernel, 1, -1, K), PreconditionError);
}

TEST_CASE("cyclic distance: projection properties") {
    const auto s = explicit_schedule({2, 3, 3, 4, 4, 5, 5, 6, 6});
    CorrelationOracle kernel(ledger_of(s));
    const int K = kernel.k_cap();
    for (int r : {1, 2, 3}) {
        double prev = INFINITY;
        for (int N : {0, 1, 2, 4, 8, 16}) {
            const auto rep = cyclic_distance(kernel, r, N, K);
            REQUIRE(rep.solver_ok);
            const double tol = 1e-9 * rep.target_norm2;
            CHECK(rep.rho2 >= -tol);
            CHECK(rep.rho2 <= prev + tol);
            CHECK(rep.min_eigenvalue >= -tol);
            for (std::size_t x = 0; x < rep.gram.size(); ++x)
                for (std::size_t y = 0; y < rep.gram.size(); ++y) CHECK(rep.gram[x][y] == rep.gram[y][x]);
            prev = rep.rho2;
        }
    }
}

TEST_CASE("mixing profile") {
    const auto s = explicit_schedule({2, 3, 3, 4, 4, 5});
    CorrelationOracle kernel(ledger_of(s));
    const int K = kernel.k_cap();
    const auto grid = log_lag_grid(kernel.ledger().height(K), 24);
    const auto rows = mixing_profile(kernel, K, grid);
    CHECK(rows.size() == grid.size());
    CHECK(rows.front().value == 1.0);
    const auto below = mixing_profile(kernel, K, {kernel.ledger().height(K - 1)});
    CHECK(below.front().value < 1.0);
    for (std::size_t i = 1; i < grid.size(); ++i) CHECK(grid[i] > grid[i - 1]);
}

TEST_CASE("rescaling the seed leaves normalized verdicts unchanged") {
    const auto s = explicit_schedule({3, 3, 3, 3, 3, 3});
    CorrelationOracle unit(ledger_of(s.extended(2)));
    CorrelationOracle scaled(ledger_of(s.extended(2), Rational(3, 7)));
    const int K = unit.k_cap();
    CHECK(scaled.correlation(5, K) == unit.correlation(5, K) * Rational(3, 7));
    CHECK(scaled.tensor_inner(5, 1, 0, 0, K) == unit.tensor_inner(5, 1, 0, 0, K) * Rational(9, 49));
    const auto J = parameter_set(s, 2);
    const auto a = inequality_two(unit, J, K);
    const auto b = inequality_two(scaled, J, K);
    CHECK(a.lhs == b.lhs);
    CHECK(a.holds == b.holds);
    const auto la = lemma_gap(unit, J, 1, K);
    const auto lb = lemma_gap(scaled, J, 1, K);
    CHECK(la.gap == lb.gap);
}
