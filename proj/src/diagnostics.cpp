#include "staircase/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "staircase/errors.hpp"

namespace staircase {

namespace {

using MatrixL = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using VectorL = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

int first_stage_above(const CorrelationOracle& oracle, const BigInt& max_lag) {
    const StageLedger& ledger = oracle.ledger();
    for (int K = oracle.indicator().stage; K <= ledger.last_stage(); ++K)
        if (ledger.height(K) > max_lag) return K;
    return ledger.last_stage() + 1;
}

void require_fits(const CorrelationOracle& oracle, const BigInt& max_lag, int K) {
    const BigInt& h = oracle.ledger().height(K);
    if (max_lag >= h)
        throw PrecisionError("lag " + max_lag.str() + " does not fit below h_" + std::to_string(K) +
                             " = " + h.str() + "; raise K");
}

}  // namespace

Verdict decide_less_than(const Enclosure& value, const Rational& bound) {
    if (value.hi() < bound) return Verdict::kTrue;
    if (value.lo() >= bound) return Verdict::kFalse;
    return Verdict::kUndecided;
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::kTrue: return "TRUE";
        case Verdict::kFalse: return "FALSE";
        case Verdict::kUndecided: return "UNDECIDED";
    }
    return "UNDECIDED";
}

Enclosure q_norm2(CorrelationOracle& oracle, int r, int K) {
    if (r < 1) throw PreconditionError("Q_r needs r >= 1");
    // sum_{i,i'} gamma(i' - i) = r gamma(0) + 2 sum_{k=1}^{r-1} (r - k) gamma(k)
    Enclosure sum = oracle.correlation(0, K) * Rational(r);
    for (int k = 1; k < r; ++k) sum += oracle.correlation(k, K) * Rational(2 * (r - k));
    return sum / (Rational(r) * r * oracle.norm2());
}

Enclosure averaged_pairing(CorrelationOracle& oracle, int j, int r, int K) {
    if (r < 1) throw PreconditionError("Q_r needs r >= 1");
    const BigInt& h = oracle.ledger().height(j);
    Enclosure sum(Rational(0));
    for (int i = 0; i < r; ++i) sum += oracle.correlation(h + i, K);
    return sum / (Rational(r) * oracle.norm2());
}

AveragedVectors averaged_vectors(CorrelationOracle& oracle, const ParameterSet& set, int K) {
    AveragedVectors out;
    out.r = set.r;
    out.K = K;
    out.q_norm2 = q_norm2(oracle, set.r, K);
    out.p_defined = !set.empty();
    for (int j : set.members) {
        out.stages.push_back(j);
        out.pairings.push_back(averaged_pairing(oracle, j, set.r, K));
    }
    return out;
}

int lemma_min_stage(const CorrelationOracle& oracle, int j, int r) {
    return first_stage_above(oracle, oracle.ledger().height(j) + (r - 1));
}

LemmaGapReport lemma_gap(CorrelationOracle& oracle, const ParameterSet& set, int j, int K) {
    const int r = set.r;
    const BigInt& h = oracle.ledger().height(j);
    require_fits(oracle, h + (r - 1), K);

    LemmaGapReport rep;
    rep.j = j;
    rep.r = r;
    rep.K = K;
    rep.in_parameter_set = set.contains(j);
    rep.pairing = averaged_pairing(oracle, j, r, K);
    rep.q_norm2 = q_norm2(oracle, r, K);
    rep.gap = abs(rep.pairing - rep.q_norm2);
    rep.bound = Rational(2 * r) / Rational(h) + Rational(BigInt(2), ipow(BigInt(r), static_cast<unsigned>(r)));
    rep.holds = decide_less_than(rep.gap, rep.bound);
    return rep;
}

int inequality_two_min_stage(const CorrelationOracle& oracle, const ParameterSet& set) {
    if (set.empty()) return oracle.indicator().stage;
    const StageLedger& ledger = oracle.ledger();
    const BigInt& h_max = ledger.height(set.members.back());
    const BigInt& h_min = ledger.height(set.members.front());
    BigInt lag = h_max + (set.r - 1);
    if (h_max - h_min > lag) lag = h_max - h_min;
    return first_stage_above(oracle, lag);
}

InequalityTwoReport inequality_two(CorrelationOracle& oracle, const ParameterSet& set, int K) {
    if (set.empty())
        throw PreconditionError("projection inequality needs a nonempty parameter set (r = " +
                                std::to_string(set.r) + ")");
    const StageLedger& ledger = oracle.ledger();
    {
        const BigInt& h_max = ledger.height(set.members.back());
        require_fits(oracle, h_max + (set.r - 1), K);
    }

    InequalityTwoReport rep;
    rep.r = set.r;
    rep.K = K;
    rep.size = set.size();
    const Rational n(static_cast<long long>(rep.size));

    const AveragedVectors av = averaged_vectors(oracle, set, K);
    rep.term_a = square(av.q_norm2);
    rep.term_b = Enclosure(Rational(0));
    for (const Enclosure& p : av.pairings) rep.term_b += square(p);

    rep.diagonal = Enclosure(n);  // gamma(0) / <f,f> = 1 exactly
    Enclosure off(Rational(0));
    for (std::size_t a = 0; a < set.members.size(); ++a) {
        for (std::size_t b = a + 1; b < set.members.size(); ++b) {
            const BigInt lag = ledger.height(set.members[b]) - ledger.height(set.members[a]);
            off += square(oracle.normalized_correlation(lag, K));
        }
    }
    rep.term_c = rep.diagonal + off * Rational(2);

    Enclosure lhs = rep.term_a - rep.term_b * (Rational(2) / n) + rep.term_c / (n * n);
    rep.lhs = lhs.clipped(Rational(0), lhs.hi() < 0 ? Rational(0) : lhs.hi());
    rep.rhs = Rational(2) / n;
    rep.holds = decide_less_than(rep.lhs, rep.rhs);
    rep.diagonal_share = rep.diagonal / (n * n);
    rep.diagonal_share_below_rhs = rep.diagonal_share.lo() <= rep.rhs;
    return rep;
}

DecayFit cross_term_decay(CorrelationOracle& oracle, const ParameterSet& set, int K) {
    if (set.size() < 2)
        throw PreconditionError("cross-term decay needs at least two parameter-set members");
    const StageLedger& ledger = oracle.ledger();
    DecayFit fit;
    fit.r = set.r;
    fit.K = K;
    const Enclosure a_term = square(q_norm2(oracle, set.r, K));

    for (std::size_t x = 0; x < set.members.size(); ++x) {
        for (std::size_t y = x; y < set.members.size(); ++y) {
            const int j = set.members[x];
            const int k = set.members[y];
            const BigInt lag = ledger.height(k) - ledger.height(j);
            const Enclosure gap =
                abs(square(oracle.normalized_correlation(lag, K)) - a_term);
            DecayPair pair;
            pair.j = j;
            pair.p = k - j;
            pair.gap = gap.midpoint();
            pair.gap_width = gap.width();
            pair.ratio = Rational(ledger.height(j)) / Rational(ledger.height(k));
            const Rational needed = pair.gap / pair.ratio;
            if (needed > fit.constant) fit.constant = needed;
            fit.pairs.push_back(std::move(pair));
        }
    }
    fit.weak_form_holds = true;
    for (DecayPair& pair : fit.pairs) {
        pair.slack = fit.constant * pair.ratio - pair.gap;
        const Rational weak = fit.constant /
                              Rational(ipow(BigInt(set.r), static_cast<unsigned>(pair.p)));
        pair.weak_slack = weak - pair.gap;
        if (pair.weak_slack < 0) fit.weak_form_holds = false;
    }
    return fit;
}

ProjectionReport cyclic_distance(CorrelationOracle& oracle, int r, int N, int K,
                                 std::optional<double> lambda) {
    if (N < 0) throw PreconditionError("cyclic span half-width N must be nonnegative");
    if (r < 0) throw PreconditionError("target shift r must be nonnegative");
    const int max_lag = std::max(2 * N, r + N);
    require_fits(oracle, BigInt(max_lag), K);

    ProjectionReport rep;
    rep.r = r;
    rep.N = N;
    rep.K = K;

    // gamma midpoints for lags 0..max_lag, normalized.
    std::vector<long double> g(static_cast<std::size_t>(max_lag) + 1);
    for (int a = 0; a <= max_lag; ++a) {
        const Enclosure e = oracle.normalized_correlation(a, K);
        g[static_cast<std::size_t>(a)] = to_long_double(e.midpoint());
        rep.max_enclosure_width = std::max(rep.max_enclosure_width, to_double(e.width()));
    }
    auto gamma = [&](int a) { return g[static_cast<std::size_t>(a < 0 ? -a : a)]; };

    const int dim = 2 * N + 1;
    MatrixL G(dim, dim);
    VectorL v(dim);
    for (int x = 0; x < dim; ++x) {
        const int n = x - N;
        for (int y = 0; y < dim; ++y) {
            const long double c = gamma(n - (y - N));
            G(x, y) = c * c;
        }
        v(x) = 2.0L * gamma(n) * gamma(n - r);
    }
    const long double u2 = 2.0L + 2.0L * gamma(r) * gamma(r);

    const long double lam =
        lambda ? static_cast<long double>(*lambda)
               : static_cast<long double>(kDefaultRelativeRegularization) * G.trace() / dim;
    rep.regularization = static_cast<double>(lam);
    rep.target_norm2 = static_cast<double>(u2);

    Eigen::SelfAdjointEigenSolver<MatrixL> eig(G, Eigen::EigenvaluesOnly);
    if (eig.info() == Eigen::Success) {
        const long double lo = eig.eigenvalues().minCoeff();
        const long double hi = eig.eigenvalues().maxCoeff();
        rep.min_eigenvalue = static_cast<double>(lo);
        rep.condition_estimate =
            lo > 0 ? static_cast<double>(hi / lo) : std::numeric_limits<double>::infinity();
    } else {
        rep.condition_estimate = std::numeric_limits<double>::quiet_NaN();
    }

    MatrixL A = G;
    A.diagonal().array() += lam;
    Eigen::LDLT<MatrixL> ldlt(A);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
        rep.solver_ok = false;
        rep.solver_message = "regularized Gram matrix not positive definite";
        rep.rho2 = std::numeric_limits<double>::quiet_NaN();
    } else {
        const VectorL c = ldlt.solve(v);
        const long double rho2 = u2 - 2.0L * v.dot(c) + c.dot(G * c);
        rep.rho2 = static_cast<double>(rho2);
        rep.solver_ok = std::isfinite(rep.rho2);
        rep.solver_message = rep.solver_ok ? "ok" : "non-finite residual";
    }

    rep.gram.assign(static_cast<std::size_t>(dim), std::vector<double>(static_cast<std::size_t>(dim)));
    rep.rhs.resize(static_cast<std::size_t>(dim));
    for (int x = 0; x < dim; ++x) {
        for (int y = 0; y < dim; ++y)
            rep.gram[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] = static_cast<double>(G(x, y));
        rep.rhs[static_cast<std::size_t>(x)] = static_cast<double>(v(x));
    }
    return rep;
}

std::vector<BigInt> log_lag_grid(const BigInt& h_max, std::size_t points) {
    std::vector<BigInt> lags{0};
    if (points <= 1 || h_max <= 1) return lags;
    const double top = std::log((h_max - 1).convert_to<double>());
    const std::size_t steps = points - 1;
    for (std::size_t i = 0; i < steps; ++i) {
        const double t = steps == 1 ? top : top * static_cast<double>(i) / static_cast<double>(steps - 1);
        BigInt lag(std::max(1.0, std::floor(std::exp(t) + 0.5)));
        if (lag >= h_max) lag = h_max - 1;
        if (lag > lags.back()) lags.push_back(std::move(lag));
    }
    return lags;
}

std::vector<MixingRow> mixing_profile(CorrelationOracle& oracle, int K, const std::vector<BigInt>& lags) {
    std::vector<MixingRow> rows;
    rows.reserve(lags.size());
    for (const BigInt& a : lags) {
        const Enclosure e = oracle.normalized_correlation(a, K);
        rows.push_back({a, to_double(e.midpoint()), to_double(e.width())});
    }
    return rows;
}

nlohmann::json to_json(const Enclosure& e) {
    return {{"lo", to_fraction(e.lo())},
            {"hi", to_fraction(e.hi())},
            {"lo_approx", to_double(e.lo())},
            {"hi_approx", to_double(e.hi())},
            {"width_approx", to_double(e.width())}};
}

nlohmann::json to_json(const LemmaGapReport& rep) {
    return {{"j", rep.j},
            {"r", rep.r},
            {"K", rep.K},
            {"in_parameter_set", rep.in_parameter_set},
            {"pairing", to_json(rep.pairing)},
            {"q_norm2", to_json(rep.q_norm2)},
            {"gap", to_json(rep.gap)},
            {"bound", to_fraction(rep.bound)},
            {"bound_approx", to_double(rep.bound)},
            {"holds", to_string(rep.holds)}};
}

nlohmann::json to_json(const InequalityTwoReport& rep) {
    return {{"r", rep.r},
            {"K", rep.K},
            {"size", rep.size},
            {"term_a", to_json(rep.term_a)},
            {"term_b", to_json(rep.term_b)},
            {"term_c", to_json(rep.term_c)},
            {"diagonal", to_json(rep.diagonal)},
            {"diagonal_share", to_json(rep.diagonal_share)},
            {"diagonal_share_below_rhs", rep.diagonal_share_below_rhs},
            {"lhs", to_json(rep.lhs)},
            {"rhs", to_fraction(rep.rhs)},
            {"rhs_approx", to_double(rep.rhs)},
            {"holds", to_string(rep.holds)}};
}

nlohmann::json to_json(const DecayFit& fit) {
    nlohmann::json pairs = nlohmann::json::array();
    for (const auto& p : fit.pairs) {
        pairs.push_back({{"j", p.j},
                         {"p", p.p},
                         {"gap", to_double(p.gap)},
                         {"gap_width", to_double(p.gap_width)},
                         {"ratio", to_double(p.ratio)},
                         {"slack", to_double(p.slack)},
                         {"weak_slack", to_double(p.weak_slack)}});
    }
    return {{"r", fit.r},
            {"K", fit.K},
            {"C", to_double(fit.constant)},
            {"C_exact", to_fraction(fit.constant)},
            {"weak_form_holds", fit.weak_form_holds},
            {"pairs", std::move(pairs)}};
}

nlohmann::json to_json(const ProjectionReport& rep, bool include_matrices) {
    nlohmann::json j = {{"r", rep.r},
                        {"N", rep.N},
                        {"K", rep.K},
                        {"rho2", rep.rho2},
                        {"target_norm2", rep.target_norm2},
                        {"condition_estimate", rep.condition_estimate},
                        {"min_eigenvalue", rep.min_eigenvalue},
                        {"lambda", rep.regularization},
                        {"max_enclosure_width", rep.max_enclosure_width},
                        {"solver_ok", rep.solver_ok},
                        {"solver_message", rep.solver_message}};
    if (include_matrices) {
        j["gram"] = rep.gram;
        j["rhs"] = rep.rhs;
    }
    return j;
}

}  // namespace staircase
