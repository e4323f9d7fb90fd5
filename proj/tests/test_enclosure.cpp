#include <doctest.h>

#include "staircase/enclosure.hpp"
#include "staircase/errors.hpp"

using namespace staircase;

TEST_CASE("interval arithmetic") {
    const Enclosure a(Rational(1, 2), Rational(1));
    const Enclosure b(Rational(-1), Rational(2));
    CHECK(a + b == Enclosure(Rational(-1, 2), Rational(3)));
    CHECK(a - b == Enclosure(Rational(-3, 2), Rational(2)));
    CHECK(a * b == Enclosure(Rational(-1), Rational(2)));
    CHECK(a * Rational(-2) == Enclosure(Rational(-2), Rational(-1)));
    CHECK(abs(b) == Enclosure(Rational(0), Rational(2)));
    CHECK(square(b) == Enclosure(Rational(0), Rational(4)));
    CHECK(abs(Enclosure(Rational(-3), Rational(-1))) == Enclosure(Rational(1), Rational(3)));
    CHECK(a.midpoint() == Rational(3, 4));
    CHECK(a.contains(Rational(1)));
    CHECK_FALSE(a.contains(Rational(0)));
    CHECK_THROWS_AS(Enclosure(Rational(1), Rational(0)), PreconditionError);
    CHECK_THROWS_AS(a / Rational(0), PreconditionError);
    CHECK(to_string(a) == "[1/2, 1/1]");
}
