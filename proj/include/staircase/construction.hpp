#pragma once

#include <memory>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "staircase/numeric.hpp"

namespace staircase {

enum class ScheduleRule { kPowerLaw, kExplicitList };

/// Cut counts r_1..r_{j_max} of a staircase construction. Stages are 1-based.
struct ConstructionSchedule {
    std::optional<double> d;  // exponent; set only for the power-law rule
    int j_max = 0;
    ScheduleRule rule = ScheduleRule::kExplicitList;
    std::vector<int> r;  // r[j - 1] is the cut count at stage j

    int cuts(int j) const;

    /// Same construction continued for `extra` more stages. Power-law schedules keep following
    /// max(2, floor(j^d)); explicit lists repeat their last entry.
    ConstructionSchedule extended(int extra) const;

    /// The first `j_max` stages only.
    ConstructionSchedule prefix(int j_max) const;
};

/// r_j = max(2, floor(j^d)) for j = 1..j_max. Requires 0 < d < 0.2.
ConstructionSchedule build_schedule(double d, int j_max);

/// Validated explicit cut list: every entry >= 2 and the list nondecreasing.
ConstructionSchedule explicit_schedule(std::vector<int> r);

/// Number of spacer levels put on top of each column: (1, 2, ..., cuts-1, 0).
std::vector<int> staircase_spacers(int cuts);

/// floor(j^d) clamped below at 2.
int power_law_cuts(int j, double d);

struct Stage {
    int j = 0;
    int cuts = 0;  // 0 for the top (not yet cut) stage
    std::vector<int> spacers;
    BigInt height;
    Rational base_measure;
    Rational tower_measure;
    std::vector<BigInt> offsets;  // start level of column i's copy inside the stage j+1 tower
};

/// Exact per-stage bookkeeping of a built construction: stages 1..j_max+1.
class StageLedger {
public:
    StageLedger(ConstructionSchedule schedule, std::vector<Stage> stages);

    const ConstructionSchedule& schedule() const { return schedule_; }
    const std::vector<Stage>& stages() const { return stages_; }
    const Stage& stage(int j) const;
    int first_stage() const { return 1; }
    int last_stage() const { return static_cast<int>(stages_.size()); }

    const BigInt& height(int j) const { return stage(j).height; }
    const Rational& base_measure(int j) const { return stage(j).base_measure; }

    /// Measure of everything built so far, mu(X_{j_max+1}); divide by it to get probabilities.
    const Rational& normalization() const { return stages_.back().tower_measure; }

private:
    ConstructionSchedule schedule_;
    std::vector<Stage> stages_;
};

StageLedger build_ledger(const ConstructionSchedule& schedule, const BigInt& h_init = 1,
                         const Rational& mu_init = 1);

/// The stages j with r_j = r+1 and j < j_r - r, where j_r is the last stage of the built
/// prefix carrying cut count r+1. Relative to the prefix, not the infinite sequence.
struct ParameterSet {
    int r = 0;
    std::optional<int> j_r;
    std::vector<int> members;

    bool empty() const { return members.empty(); }
    std::size_t size() const { return members.size(); }
    bool contains(int j) const;
};

ParameterSet parameter_set(const ConstructionSchedule& schedule, int r);

struct CardinalityReport {
    int r = 0;
    std::size_t size = 0;
    BigInt target;     // r^4
    double exponent;   // D = (1 - d) / d
    bool satisfied;    // |J_r| > r^4 on the built prefix
    BigInt deficit;    // members still missing before |J_r| > r^4
};

CardinalityReport check_cardinality_condition(const ConstructionSchedule& schedule, int r);

nlohmann::json to_json(const ConstructionSchedule& schedule);
nlohmann::json to_json(const StageLedger& ledger);
nlohmann::json to_json(const ParameterSet& set);
nlohmann::json to_json(const CardinalityReport& report);

}  // namespace staircase
