#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "staircase/construction.hpp"
#include "staircase/correlation.hpp"

namespace staircase {

enum class Verdict { kTrue, kFalse, kUndecided };

/// TRUE if value.hi < bound, FALSE if value.lo >= bound, UNDECIDED otherwise.
Verdict decide_less_than(const Enclosure& value, const Rational& bound);
std::string to_string(Verdict v);

// All verdict-bearing quantities below are normalized so that <f, f> = 1; the raw (unnormalized)
// values equal the normalized ones times <f,f> for scalar correlations and <f,f>^2 for tensor ones.

/// <Q_r f, Q_r f> / <f,f> = (1/r^2) sum_{i,i'} gamma(i' - i) / <f,f>.
Enclosure q_norm2(CorrelationOracle& oracle, int r, int K);

/// <T^{h_j} f, Q_r f> / <f,f> = (1/r) sum_{i<r} gamma(h_j + i) / <f,f>.
Enclosure averaged_pairing(CorrelationOracle& oracle, int j, int r, int K);

struct AveragedVectors {
    int r = 0;
    int K = 0;
    Enclosure q_norm2;
    bool p_defined = false;
    std::vector<int> stages;
    std::vector<Enclosure> pairings;  // <T^{h_j} f, Q_r f>, same order as `stages`
};

AveragedVectors averaged_vectors(CorrelationOracle& oracle, const ParameterSet& set, int K);

struct LemmaGapReport {
    int j = 0;
    int r = 0;
    int K = 0;
    bool in_parameter_set = false;
    Enclosure pairing;
    Enclosure q_norm2;
    Enclosure gap;
    Rational bound;  // 2r/h_j + 2 r^{-r}
    Verdict holds = Verdict::kUndecided;
};

/// Smallest stage whose tower fits every lag lemma_gap needs (or k_cap + 1 if none does).
int lemma_min_stage(const CorrelationOracle& oracle, int j, int r);

LemmaGapReport lemma_gap(CorrelationOracle& oracle, const ParameterSet& set, int j, int K);

struct InequalityTwoReport {
    int r = 0;
    int K = 0;
    std::size_t size = 0;
    Enclosure term_a;        // <Q(f(x)f), Q(f(x)f)> = <Q_r f, Q_r f>^2
    Enclosure term_b;        // sum_j <Q_r f, T^{h_j} f>^2
    Enclosure term_c;        // sum_{j,k} gamma(h_j - h_k)^2
    Enclosure diagonal;      // p = 0 part of term_c, |J_r| gamma(0)^2
    Enclosure lhs;           // A - 2B/|J| + C/|J|^2, clipped at 0
    Enclosure diagonal_share;  // diagonal / |J|^2
    Rational rhs;            // 2 / |J_r|
    Verdict holds = Verdict::kUndecided;
    bool diagonal_share_below_rhs = false;
};

int inequality_two_min_stage(const CorrelationOracle& oracle, const ParameterSet& set);

InequalityTwoReport inequality_two(CorrelationOracle& oracle, const ParameterSet& set, int K);

struct DecayPair {
    int j = 0;
    int p = 0;
    Rational gap;        // midpoint of |gamma(h_j - h_{j+p})^2 - <Q_r f,Q_r f>^2|
    Rational gap_width;
    Rational ratio;      // h_j / h_{j+p}
    Rational slack;      // C ratio - gap
    Rational weak_slack; // C r^{-p} - gap
};

struct DecayFit {
    int r = 0;
    int K = 0;
    std::vector<DecayPair> pairs;
    Rational constant;  // smallest C with gap <= C h_j / h_{j+p} over all pairs
    bool weak_form_holds = false;
};

DecayFit cross_term_decay(CorrelationOracle& oracle, const ParameterSet& set, int K);

struct ProjectionReport {
    int r = 0;
    int N = 0;
    int K = 0;
    std::vector<std::vector<double>> gram;  // gamma(n - m)^2, n, m in [-N, N]
    std::vector<double> rhs;                // 2 gamma(n) gamma(n - r)
    double target_norm2 = 0;                // 2 + 2 gamma(r)^2
    double rho2 = 0;
    double condition_estimate = 0;
    double min_eigenvalue = 0;
    double regularization = 0;
    double max_enclosure_width = 0;  // widest gamma enclosure used, normalized
    bool solver_ok = false;
    std::string solver_message;
};

/// Default regularization 1e-10 trace(G) / (2N + 1).
inline constexpr double kDefaultRelativeRegularization = 1e-10;

/// Distance^2 from T^r f(x)f + f(x)T^r f to span{T^n f (x) T^n f : |n| <= N}, normalized by
/// <f,f>^2. Gram entries come from enclosure midpoints; the solve runs in long double.
ProjectionReport cyclic_distance(CorrelationOracle& oracle, int r, int N, int K,
                                 std::optional<double> lambda = std::nullopt);

struct MixingRow {
    BigInt lag;
    double value = 0;  // gamma(lag) / <f,f>, midpoint
    double width = 0;
};

std::vector<BigInt> log_lag_grid(const BigInt& h_max, std::size_t points);
std::vector<MixingRow> mixing_profile(CorrelationOracle& oracle, int K,
                                      const std::vector<BigInt>& lags);

nlohmann::json to_json(const Enclosure& e);
nlohmann::json to_json(const LemmaGapReport& rep);
nlohmann::json to_json(const InequalityTwoReport& rep);
nlohmann::json to_json(const DecayFit& fit);
nlohmann::json to_json(const ProjectionReport& rep, bool include_matrices = false);

}  // namespace staircase
