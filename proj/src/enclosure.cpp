#include "staircase/enclosure.hpp"

#include <algorithm>

#include "staircase/errors.hpp"

namespace staircase {

Enclosure::Enclosure(Rational lo, Rational hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
    if (hi_ < lo_) throw PreconditionError("enclosure with lo > hi");
}

Enclosure Enclosure::clipped(const Rational& floor, const Rational& ceiling) const {
    Enclosure out = *this;
    if (out.lo_ < floor) out.lo_ = floor;
    if (out.hi_ > ceiling) out.hi_ = ceiling;
    if (out.hi_ < out.lo_) out.hi_ = out.lo_;
    return out;
}

Enclosure& Enclosure::operator+=(const Enclosure& rhs) {
    lo_ += rhs.lo_;
    hi_ += rhs.hi_;
    return *this;
}

Enclosure& Enclosure::operator-=(const Enclosure& rhs) {
    Rational lo = lo_ - rhs.hi_;
    hi_ -= rhs.lo_;
    lo_ = std::move(lo);
    return *this;
}

Enclosure& Enclosure::operator*=(const Enclosure& rhs) {
    if (lo_ >= 0 && rhs.lo_ >= 0) {
        lo_ *= rhs.lo_;
        hi_ *= rhs.hi_;
        return *this;
    }
    const Rational p[4] = {lo_ * rhs.lo_, lo_ * rhs.hi_, hi_ * rhs.lo_, hi_ * rhs.hi_};
    lo_ = *std::min_element(p, p + 4);
    hi_ = *std::max_element(p, p + 4);
    return *this;
}

Enclosure& Enclosure::operator*=(const Rational& k) {
    lo_ *= k;
    hi_ *= k;
    if (k < 0) std::swap(lo_, hi_);
    return *this;
}

Enclosure& Enclosure::operator/=(const Rational& k) {
    if (k == 0) throw PreconditionError("enclosure divided by zero");
    return *this *= Rational(1) / k;
}

Enclosure abs(const Enclosure& x) {
    if (x.lo() >= 0) return x;
    if (x.hi() <= 0) return Enclosure(-x.hi(), -x.lo());
    return Enclosure(Rational(0), std::max(-x.lo(), x.hi()));
}

Enclosure square(const Enclosure& x) {
    const Enclosure m = abs(x);
    return Enclosure(m.lo() * m.lo(), m.hi() * m.hi());
}

std::string to_string(const Enclosure& x) {
    return "[" + to_fraction(x.lo()) + ", " + to_fraction(x.hi()) + "]";
}

}  // namespace staircase
