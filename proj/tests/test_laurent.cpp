#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "staircase/errors.hpp"
#include "staircase/laurent.hpp"

using namespace staircase;

namespace {

LaurentPoly2 random_poly(std::mt19937& rng) {
    LaurentPoly2 p;
    const int terms = static_cast<int>(rng() % 6);
    for (int t = 0; t < terms; ++t) {
        const auto e1 = static_cast<std::int64_t>(rng() % 9) - 4;
        const auto e2 = static_cast<std::int64_t>(rng() % 9) - 4;
        p += LaurentPoly2::monomial(e1, e2, BigInt(static_cast<int>(rng() % 11) - 5));
    }
    return p;
}

LaurentPoly2 from_map(const std::map<std::pair<long, long>, long>& m) {
    LaurentPoly2 p;
    for (const auto& [e, c] : m) p += LaurentPoly2::monomial(e.first, e.second, c);
    return p;
}

}  // namespace

TEST_CASE("ring axioms on random polynomials") {
    std::mt19937 rng(5);
    for (int t = 0; t < 300; ++t) {
        const auto a = random_poly(rng), b = random_poly(rng), c = random_poly(rng);
        CHECK(a * b == b * a);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK((a + b) + c == a + (b + c));
        CHECK((a - a).is_zero());
        CHECK(a * LaurentPoly2::monomial(0, 0) == a);
    }
}

TEST_CASE("no stored zero coefficients") {
    auto p = LaurentPoly2::monomial(1, 2, 3) + LaurentPoly2::monomial(1, 2, -3);
    CHECK(p.is_zero());
    CHECK(p.size() == 0);
    CHECK((LaurentPoly2::monomial(0, 0, 0)).is_zero());
}

TEST_CASE("q_polynomial") {
    CHECK(q_polynomial(1, 0) == LaurentPoly2::monomial(0, 0));
    CHECK(q_polynomial(3, 0) ==
          LaurentPoly2::monomial(0, 0) + LaurentPoly2::monomial(-1, 0) + LaurentPoly2::monomial(-2, 0));
    CHECK(q_polynomial(2, 1) == LaurentPoly2::monomial(1, 0) + LaurentPoly2::monomial(0, 0));
    CHECK(q_polynomial(2, 0, Slot::kSecond) == LaurentPoly2::monomial(0, 0) + LaurentPoly2::monomial(0, -1));
    CHECK_THROWS_AS(q_polynomial(0, 0), PreconditionError);
}

TEST_CASE("averaging identity right side against a direct expansion") {
    for (int r : {3, 4, 5}) {
        for (int sign : {+1, -1}) {
            std::map<std::pair<long, long>, long> acc;
            oracle::add_square(acc, r, 0, +1);
            oracle::add_square(acc, r - 2, sign, +1);
            oracle::add_square(acc, r - 1, 0, -1);
            oracle::add_square(acc, r - 1, sign, -1);
            CHECK(identity_one_rhs(r, sign) == from_map(oracle::drop_zeros(acc)));
        }
    }
}

TEST_CASE("averaging identity residual for r = 3") {
    const auto res = identity_one_residual(3);
    CHECK(res.is_zero);
    CHECK(res.residual.is_zero());
    CHECK(res.best.m == 2);
    CHECK(res.best.shift_sign == -1);
    CHECK(res.best.lhs_sign == -1);
    CHECK_FALSE(res.literal_shift_vanishes);
    int zeros = 0;
    for (const auto& c : res.candidates) zeros += c.is_zero;
    CHECK(zeros == 1);
    CHECK(res.candidates.size() == 16);
}

TEST_CASE("averaging identity alignment is r-independent and mass is two") {
    for (int r = 3; r <= 100; ++r) {
        const auto res = identity_one_residual(r);
        CHECK(res.is_zero);
        CHECK(res.best.m == r - 1);
        CHECK(res.best.shift_sign == -1);
        CHECK(res.rhs_coefficient_sum == 2);
        CHECK(identity_one_rhs(r, -1).coefficient_sum() == r * r + (r - 2) * (r - 2) - 2 * (r - 1) * (r - 1));
    }
    CHECK_THROWS_AS(identity_one_residual(2), PreconditionError);
}

TEST_CASE("apply_to_f") {
    auto ledger = std::make_shared<const StageLedger>(build_ledger(explicit_schedule({2, 3, 3, 4})));
    CorrelationOracle kernel(ledger);
    const int K = ledger->last_stage();
    CHECK(apply_to_f(LaurentPoly2{}, kernel, K) == Enclosure(Rational(0)));
    CHECK(apply_to_f(LaurentPoly2::monomial(0, 0), kernel, K) == Enclosure(Rational(1)));

    for (int r = 3; r <= 6; ++r) {
        const auto res = identity_one_residual(r);
        CHECK(apply_to_f(res.residual, kernel, K).contains(Rational(0)));
        // The aligned right side and left side are the same vector, so their difference has norm 0;
        // the literal orientation leaves a vector of positive norm.
        const auto literal = identity_one_rhs(r, +1) -
                             (LaurentPoly2::monomial(-(r - 1), 0) + LaurentPoly2::monomial(0, -(r - 1)));
        CHECK(apply_to_f(literal, kernel, K).lo() > 0);
    }
}
