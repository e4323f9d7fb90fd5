#pragma once

#include <string>

#include "staircase/numeric.hpp"

namespace staircase {

/// Closed interval [lo, hi] with exact rational endpoints, guaranteed to contain a true value.
class Enclosure {
public:
    Enclosure() = default;
    explicit Enclosure(Rational exact) : lo_(exact), hi_(exact) {}
    Enclosure(Rational lo, Rational hi);

    const Rational& lo() const { return lo_; }
    const Rational& hi() const { return hi_; }
    Rational width() const { return hi_ - lo_; }
    Rational midpoint() const { return (lo_ + hi_) / 2; }
    bool is_exact() const { return lo_ == hi_; }

    bool contains(const Rational& x) const { return lo_ <= x && x <= hi_; }
    bool contains(const Enclosure& other) const { return lo_ <= other.lo_ && other.hi_ <= hi_; }

    /// Intersection with [lo, hi] clipped to [floor, ceiling]; sound when the true value is known to lie there.
    Enclosure clipped(const Rational& floor, const Rational& ceiling) const;

    Enclosure& operator+=(const Enclosure& rhs);
    Enclosure& operator-=(const Enclosure& rhs);
    Enclosure& operator*=(const Enclosure& rhs);
    Enclosure& operator*=(const Rational& k);
    Enclosure& operator/=(const Rational& k);

    friend Enclosure operator+(Enclosure a, const Enclosure& b) { return a += b; }
    friend Enclosure operator-(Enclosure a, const Enclosure& b) { return a -= b; }
    friend Enclosure operator*(Enclosure a, const Enclosure& b) { return a *= b; }
    friend Enclosure operator*(Enclosure a, const Rational& k) { return a *= k; }
    friend Enclosure operator*(const Rational& k, Enclosure a) { return a *= k; }
    friend Enclosure operator/(Enclosure a, const Rational& k) { return a /= k; }
    friend bool operator==(const Enclosure&, const Enclosure&) = default;

private:
    Rational lo_{0};
    Rational hi_{0};
};

Enclosure abs(const Enclosure& x);
Enclosure square(const Enclosure& x);

std::string to_string(const Enclosure& x);

}  // namespace staircase
