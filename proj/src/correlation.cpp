#include "staircase/correlation.hpp"

#include <algorithm>
#include <string>

#include "staircase/errors.hpp"

namespace staircase {

std::vector<BigInt> decompose_levels(const StageLedger& ledger, const LevelIndicator& f, int K,
                                     std::size_t cap) {
    if (K < f.stage || K > ledger.last_stage())
        throw PreconditionError("decomposition stage " + std::to_string(K) + " out of range");
    if (f.level < 0 || f.level >= ledger.height(f.stage))
        throw PreconditionError("level index outside the tower of its stage");

    std::size_t size = 1;
    for (int m = f.stage; m < K; ++m) {
        const auto cuts = static_cast<std::size_t>(ledger.stage(m).cuts);
        if (size > cap / cuts)
            throw CapExceededError("materializing stage " + std::to_string(K) +
                                   " levels exceeds the cap of " + std::to_string(cap) +
                                   "; use CorrelationOracle::count instead");
        size *= cuts;
    }

    std::vector<BigInt> levels{f.level};
    for (int m = f.stage; m < K; ++m) {
        const auto& offsets = ledger.stage(m).offsets;
        std::vector<BigInt> next;
        next.reserve(levels.size() * offsets.size());
        // Column copies are disjoint and increasing, so the result stays sorted.
        for (const BigInt& o : offsets)
            for (const BigInt& l : levels) next.push_back(l + o);
        levels = std::move(next);
    }
    return levels;
}

CorrelationOracle::CorrelationOracle(std::shared_ptr<const StageLedger> ledger, LevelIndicator f)
    : ledger_(std::move(ledger)), f_(std::move(f)) {
    if (!ledger_) throw PreconditionError("correlation oracle needs a ledger");
    if (f_.stage < 1 || f_.stage > ledger_->last_stage())
        throw PreconditionError("indicator stage not in ledger");
    if (f_.level < 0 || f_.level >= ledger_->height(f_.stage))
        throw PreconditionError("indicator level outside the tower of its stage");
    memo_.resize(static_cast<std::size_t>(ledger_->last_stage()) + 1);
}

void CorrelationOracle::check_stage(int K) const {
    if (K < f_.stage || K > k_cap())
        throw PreconditionError("evaluation stage " + std::to_string(K) + " outside [" +
                                std::to_string(f_.stage) + ", " + std::to_string(k_cap()) + "]");
}

std::size_t CorrelationOracle::memo_size() const {
    std::size_t n = 0;
    for (const auto& m : memo_) n += m.size();
    return n;
}

const BigInt* CorrelationOracle::lookup(int m, const BigInt& shift,
                                        const std::vector<StageMemo>& scratch) const {
    const auto& stage_memo = memo_[static_cast<std::size_t>(m)];
    if (auto it = stage_memo.find(shift); it != stage_memo.end()) return &it->second;
    if (!scratch.empty()) {
        const auto& s = scratch[static_cast<std::size_t>(m)];
        if (auto it = s.find(shift); it != s.end()) return &it->second;
    }
    return nullptr;
}

BigInt CorrelationOracle::count_at(int m, const BigInt& shift, std::vector<StageMemo>& scratch) {
    // shift >= 0 here; N is even in the shift.
    if (shift >= ledger_->height(m)) return 0;
    if (m == f_.stage) return shift == 0 ? 1 : 0;
    if (const BigInt* hit = lookup(m, shift, scratch)) return *hit;

    const Stage& below = ledger_->stage(m - 1);
    const auto& offsets = below.offsets;
    const BigInt& h = below.height;

    BigInt total = 0;
    for (const BigInt& oi : offsets) {
        // Need |shift + oi - oj| < h, i.e. oj in (shift + oi - h, shift + oi + h).
        const BigInt centre = shift + oi;
        const BigInt low = centre - h;
        auto it = std::upper_bound(offsets.begin(), offsets.end(), low);
        for (; it != offsets.end() && *it < centre + h; ++it) {
            BigInt child = centre - *it;
            if (child < 0) child = -child;
            total += count_at(m - 1, child, scratch);
        }
    }

    auto& target = sealed_ ? scratch[static_cast<std::size_t>(m)] : memo_[static_cast<std::size_t>(m)];
    target.emplace(shift, total);
    return total;
}

BigInt CorrelationOracle::count(int K, const BigInt& a) {
    check_stage(K);
    std::vector<StageMemo> scratch;
    if (sealed_) scratch.resize(memo_.size());
    return count_at(K, a < 0 ? BigInt(-a) : a, scratch);
}

Enclosure CorrelationOracle::correlation(const BigInt& a, int K) {
    check_stage(K);
    const BigInt lag = a < 0 ? BigInt(-a) : a;
    if (lag >= ledger_->height(K))
        throw PrecisionError("lag " + lag.str() + " does not fit below h_" + std::to_string(K) +
                             " = " + ledger_->height(K).str() + "; raise K");
    const Rational& mu = ledger_->base_measure(K);
    const BigInt n = count(K, lag);
    Rational lo = mu * Rational(n);
    Rational hi = lo + mu * Rational(lag);
    if (hi > norm2()) hi = norm2();
    return Enclosure(std::move(lo), std::move(hi));
}

Enclosure CorrelationOracle::normalized_correlation(const BigInt& a, int K) {
    return correlation(a, K) / norm2();
}

Enclosure CorrelationOracle::tensor_inner(const BigInt& a, const BigInt& b, const BigInt& c,
                                          const BigInt& d, int K) {
    return correlation(a - c, K) * correlation(b - d, K);
}

}  // namespace staircase
