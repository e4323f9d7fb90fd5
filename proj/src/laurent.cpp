#include "staircase/laurent.hpp"

#include <string>

#include "staircase/errors.hpp"

namespace staircase {

LaurentPoly2 LaurentPoly2::monomial(std::int64_t p, std::int64_t q, BigInt coeff) {
    LaurentPoly2 out;
    out.add_term({p, q}, coeff);
    return out;
}

void LaurentPoly2::add_term(const Exponent& e, const BigInt& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (inserted) return;
    it->second += c;
    if (it->second == 0) terms_.erase(it);
}

BigInt LaurentPoly2::coefficient(std::int64_t p, std::int64_t q) const {
    auto it = terms_.find({p, q});
    return it == terms_.end() ? BigInt(0) : it->second;
}

BigInt LaurentPoly2::coefficient_sum() const {
    BigInt s = 0;
    for (const auto& [e, c] : terms_) s += c;
    return s;
}

BigInt LaurentPoly2::l1_norm() const {
    BigInt s = 0;
    for (const auto& [e, c] : terms_) s += c < 0 ? BigInt(-c) : c;
    return s;
}

LaurentPoly2& LaurentPoly2::operator+=(const LaurentPoly2& rhs) {
    for (const auto& [e, c] : rhs.terms_) add_term(e, c);
    return *this;
}

LaurentPoly2& LaurentPoly2::operator-=(const LaurentPoly2& rhs) {
    for (const auto& [e, c] : rhs.terms_) add_term(e, -c);
    return *this;
}

LaurentPoly2& LaurentPoly2::operator*=(const BigInt& k) {
    if (k == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [e, c] : terms_) c *= k;
    return *this;
}

LaurentPoly2 operator*(const LaurentPoly2& a, const LaurentPoly2& b) {
    LaurentPoly2 out;
    for (const auto& [ea, ca] : a.terms_)
        for (const auto& [eb, cb] : b.terms_)
            out.add_term({ea.first + eb.first, ea.second + eb.second}, ca * cb);
    return out;
}

LaurentPoly2 q_polynomial(int n, int shift, Slot slot) {
    if (n <= 0) throw PreconditionError("Q_n needs n >= 1, got " + std::to_string(n));
    LaurentPoly2 out;
    for (int i = 0; i < n; ++i) {
        const std::int64_t e = static_cast<std::int64_t>(shift) - i;
        out += slot == Slot::kFirst ? LaurentPoly2::monomial(e, 0) : LaurentPoly2::monomial(0, e);
    }
    return out;
}

namespace {

// n^2 Q_n S^k f (x) Q_n S^k f, with the n^2 absorbed by the integer-coefficient Q factors.
LaurentPoly2 square_term(int n, int shift) {
    return q_polynomial(n, shift, Slot::kFirst) * q_polynomial(n, shift, Slot::kSecond);
}

}  // namespace

LaurentPoly2 identity_one_rhs(int r, int shift_sign) {
    if (r < 3) throw PreconditionError("averaging identity needs r >= 3 (Q_{r-2} undefined), got " +
                                       std::to_string(r));
    if (shift_sign != 1 && shift_sign != -1) throw PreconditionError("shift sign must be +1 or -1");
    LaurentPoly2 rhs = square_term(r, 0);
    rhs += square_term(r - 2, shift_sign);
    rhs -= square_term(r - 1, 0);
    rhs -= square_term(r - 1, shift_sign);
    return rhs;
}

IdentityResidual identity_one_residual(int r) {
    IdentityResidual out;
    out.r = r;
    bool have_best = false;
    for (int shift_sign : {+1, -1}) {
        const LaurentPoly2 rhs = identity_one_rhs(r, shift_sign);
        if (shift_sign == +1) out.rhs_coefficient_sum = rhs.coefficient_sum();
        for (int lhs_sign : {-1, +1}) {
            for (int m = r - 2; m <= r + 1; ++m) {
                const std::int64_t e = static_cast<std::int64_t>(lhs_sign) * m;
                const LaurentPoly2 lhs = LaurentPoly2::monomial(e, 0) + LaurentPoly2::monomial(0, e);
                LaurentPoly2 residual = rhs - lhs;
                IdentityCandidate cand{{shift_sign, lhs_sign, m}, residual.l1_norm(), residual.is_zero()};
                if (cand.is_zero && shift_sign == +1) out.literal_shift_vanishes = true;
                const bool better = !have_best || (cand.is_zero && !out.is_zero) ||
                                    (!out.is_zero && cand.residual_l1 < out.residual.l1_norm());
                if (better) {
                    have_best = true;
                    out.best = cand.alignment;
                    out.is_zero = cand.is_zero;
                    out.residual = std::move(residual);
                }
                out.candidates.push_back(std::move(cand));
            }
        }
    }
    return out;
}

Enclosure apply_to_f(const LaurentPoly2& poly, CorrelationOracle& oracle, int K) {
    Enclosure total(Rational(0));
    for (const auto& [e1, c1] : poly.terms()) {
        for (const auto& [e2, c2] : poly.terms()) {
            const Enclosure g = oracle.correlation(BigInt(e1.first - e2.first), K) *
                                oracle.correlation(BigInt(e1.second - e2.second), K);
            total += g * Rational(c1 * c2);
        }
    }
    // A squared norm is nonnegative.
    return total.clipped(Rational(0), total.hi() < 0 ? Rational(0) : total.hi());
}

nlohmann::json to_json(const LaurentPoly2& poly) {
    auto arr = nlohmann::json::array();
    for (const auto& [e, c] : poly.terms()) arr.push_back({{"p", e.first}, {"q", e.second}, {"coeff", c.str()}});
    return arr;
}

nlohmann::json to_json(const IdentityResidual& res) {
    nlohmann::json j;
    j["r"] = res.r;
    j["best_m"] = res.best.m;
    j["best_shift_sign"] = res.best.shift_sign;
    j["best_lhs_sign"] = res.best.lhs_sign;
    j["residual_terms"] = to_json(res.residual);
    j["is_zero"] = res.is_zero;
    j["literal_shift_vanishes"] = res.literal_shift_vanishes;
    j["rhs_coefficient_sum"] = res.rhs_coefficient_sum.str();
    auto& cands = j["candidates"] = nlohmann::json::array();
    for (const auto& c : res.candidates) {
        cands.push_back({{"shift_sign", c.alignment.shift_sign},
                         {"lhs_sign", c.alignment.lhs_sign},
                         {"m", c.alignment.m},
                         {"residual_l1", c.residual_l1.str()},
                         {"is_zero", c.is_zero}});
    }
    return j;
}

}  // namespace staircase
