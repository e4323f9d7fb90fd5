#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <vector>

#include "staircase/construction.hpp"
#include "staircase/enclosure.hpp"

namespace staircase {

/// Indicator of one level of one stage's tower.
struct LevelIndicator {
    int stage = 1;
    BigInt level = 0;
};

inline constexpr std::size_t kDefaultMaterializeCap = 10'000'000;

/// Stage-K level indices whose union is f, via L_{m+1} = U_i (L_m + o_m(i)). Brute-force path;
/// throws CapExceededError when the list would exceed `cap` entries.
std::vector<BigInt> decompose_levels(const StageLedger& ledger, const LevelIndicator& f, int K,
                                     std::size_t cap = kDefaultMaterializeCap);

/// Exact correlation engine for gamma(a) = <T^a f, f>.
///
/// N_K(a) counts pairs (l, l + a) inside f's stage-K decomposition. It satisfies
///   N_{m+1}(a) = sum_{i,i'} N_m(a + o_m(i) - o_m(i')),  N_{j_f}(a) = [a == 0],
/// where only terms with |a + o_m(i) - o_m(i')| < h_m survive. Because column offsets are
/// at least h_m apart, each i pairs with at most two i', so the recursion stays narrow and the
/// (stage, |shift|) memo absorbs the repetition.
///
/// gamma(a) is then enclosed by [N_K(a) mu_K, (N_K(a) + |a|) mu_K]: the only mass not seen at
/// stage K is what crosses the top of the tower within |a| steps.
///
/// Not thread-safe until seal() is called; afterwards the memo is read-only and concurrent
/// queries are safe (misses are evaluated in per-call scratch space).
class CorrelationOracle {
public:
    explicit CorrelationOracle(std::shared_ptr<const StageLedger> ledger, LevelIndicator f = {});

    const StageLedger& ledger() const { return *ledger_; }
    const LevelIndicator& indicator() const { return f_; }
    int k_cap() const { return ledger_->last_stage(); }

    /// <f, f> = mu(E_{j_f}).
    const Rational& norm2() const { return ledger_->base_measure(f_.stage); }

    BigInt count(int K, const BigInt& a);
    Enclosure correlation(const BigInt& a, int K);
    Enclosure normalized_correlation(const BigInt& a, int K);

    /// <T^a f (x) T^b f, T^c f (x) T^d f> = gamma(a - c) gamma(b - d).
    Enclosure tensor_inner(const BigInt& a, const BigInt& b, const BigInt& c, const BigInt& d,
                           int K);

    void seal() { sealed_ = true; }
    bool sealed() const { return sealed_; }
    std::size_t memo_size() const;

private:
    using StageMemo = std::map<BigInt, BigInt>;

    void check_stage(int K) const;
    BigInt count_at(int m, const BigInt& shift, std::vector<StageMemo>& scratch);
    const BigInt* lookup(int m, const BigInt& shift, const std::vector<StageMemo>& scratch) const;

    std::shared_ptr<const StageLedger> ledger_;
    LevelIndicator f_;
    std::vector<StageMemo> memo_;  // indexed by stage
    bool sealed_ = false;
};

}  // namespace staircase
