#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "staircase/correlation.hpp"

namespace staircase {

/// Sparse integer combination of monomials X^p Y^q with (p, q) in Z^2.
/// X acts on the first tensor slot, Y on the second; X^p Y^q stands for T^p f (x) T^q f.
class LaurentPoly2 {
public:
    using Exponent = std::pair<std::int64_t, std::int64_t>;
    using Terms = std::map<Exponent, BigInt>;

    LaurentPoly2() = default;

    static LaurentPoly2 monomial(std::int64_t p, std::int64_t q, BigInt coeff = 1);

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    BigInt coefficient(std::int64_t p, std::int64_t q) const;

    /// Sum of all coefficients (the image under X, Y -> 1).
    BigInt coefficient_sum() const;
    /// Sum of absolute values of the coefficients.
    BigInt l1_norm() const;

    LaurentPoly2& operator+=(const LaurentPoly2& rhs);
    LaurentPoly2& operator-=(const LaurentPoly2& rhs);
    LaurentPoly2& operator*=(const BigInt& k);

    friend LaurentPoly2 operator+(LaurentPoly2 a, const LaurentPoly2& b) { return a += b; }
    friend LaurentPoly2 operator-(LaurentPoly2 a, const LaurentPoly2& b) { return a -= b; }
    friend LaurentPoly2 operator*(LaurentPoly2 a, const BigInt& k) { return a *= k; }
    friend LaurentPoly2 operator*(const LaurentPoly2& a, const LaurentPoly2& b);
    friend bool operator==(const LaurentPoly2&, const LaurentPoly2&) = default;

private:
    void add_term(const Exponent& e, const BigInt& c);

    Terms terms_;
};

enum class Slot { kFirst, kSecond };

/// n Q_n with an optional power of T in front: sum_{i=0}^{n-1} Z^{shift - i}, where Z is X or Y
/// according to `slot`.
LaurentPoly2 q_polynomial(int n, int shift, Slot slot = Slot::kFirst);

/// Orientation under which the averaging identity's right-hand side is expanded.
struct IdentityAlignment {
    int shift_sign = +1;  // the T in "Q_{r-2} T f" taken as T^{shift_sign}
    int lhs_sign = -1;    // candidate left side X^{lhs_sign m} + Y^{lhs_sign m}
    int m = 0;
};

struct IdentityCandidate {
    IdentityAlignment alignment;
    BigInt residual_l1;
    bool is_zero = false;
};

struct IdentityResidual {
    int r = 0;
    IdentityAlignment best;
    LaurentPoly2 residual;  // residual at `best`
    bool is_zero = false;
    /// True when some candidate with the shift as written (T, shift_sign = +1) vanishes.
    bool literal_shift_vanishes = false;
    std::vector<IdentityCandidate> candidates;
    BigInt rhs_coefficient_sum;
};

/// r^2 Q_r f(x)Q_r f + (r-2)^2 Q_{r-2}Sf (x) Q_{r-2}Sf - (r-1)^2 Q_{r-1}f (x) Q_{r-1}f
///   - (r-1)^2 Q_{r-1}Sf (x) Q_{r-1}Sf  with S = T^{shift_sign}, all premultiplied out.
LaurentPoly2 identity_one_rhs(int r, int shift_sign);

/// Sweeps shift_sign in {+1, -1}, lhs_sign in {-1, +1} and m in {r-2, r-1, r, r+1}; the best
/// candidate is the first zero residual, otherwise the smallest l1 residual.
IdentityResidual identity_one_residual(int r);

/// ||poly . (f (x) f)||^2 as an enclosure, via gamma(p - p') gamma(q - q') over all term pairs.
Enclosure apply_to_f(const LaurentPoly2& poly, CorrelationOracle& oracle, int K);

nlohmann::json to_json(const LaurentPoly2& poly);
nlohmann::json to_json(const IdentityResidual& res);

}  // namespace staircase
