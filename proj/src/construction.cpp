#include "staircase/construction.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "staircase/errors.hpp"

namespace staircase {

namespace {

void validate_cut_list(const std::vector<int>& r) {
    if (r.empty()) throw PreconditionError("schedule needs at least one stage");
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (r[i] < 2)
            throw PreconditionError("cut count r_" + std::to_string(i + 1) + " = " +
                                    std::to_string(r[i]) + " is below 2");
        if (i > 0 && r[i] < r[i - 1])
            throw PreconditionError("cut counts must be nondecreasing (r_" + std::to_string(i + 1) +
                                    " < r_" + std::to_string(i) + ")");
    }
}

}  // namespace

int power_law_cuts(int j, double d) {
    // Nudge so exact integer powers (e.g. 1024^0.1) are not lost to rounding.
    const double v = std::pow(static_cast<double>(j), d);
    const auto k = static_cast<int>(std::floor(v * (1.0 + 1e-12)));
    return std::max(2, k);
}

int ConstructionSchedule::cuts(int j) const {
    if (j < 1 || j > j_max) throw PreconditionError("stage " + std::to_string(j) + " outside schedule");
    return r[static_cast<std::size_t>(j - 1)];
}

ConstructionSchedule ConstructionSchedule::extended(int extra) const {
    if (extra < 0) throw PreconditionError("negative extension");
    ConstructionSchedule out = *this;
    for (int j = j_max + 1; j <= j_max + extra; ++j) {
        out.r.push_back(rule == ScheduleRule::kPowerLaw ? power_law_cuts(j, *d) : r.back());
    }
    out.j_max = j_max + extra;
    return out;
}

ConstructionSchedule ConstructionSchedule::prefix(int new_j_max) const {
    if (new_j_max < 1 || new_j_max > j_max) throw PreconditionError("prefix length out of range");
    ConstructionSchedule out = *this;
    out.r.resize(static_cast<std::size_t>(new_j_max));
    out.j_max = new_j_max;
    return out;
}

ConstructionSchedule build_schedule(double d, int j_max) {
    if (!(d > 0.0 && d < 0.2))
        throw DomainError("exponent d = " + std::to_string(d) + " outside (0, 0.2)");
    if (j_max < 1) throw PreconditionError("j_max must be at least 1");
    ConstructionSchedule s;
    s.d = d;
    s.j_max = j_max;
    s.rule = ScheduleRule::kPowerLaw;
    s.r.reserve(static_cast<std::size_t>(j_max));
    for (int j = 1; j <= j_max; ++j) s.r.push_back(power_law_cuts(j, d));
    return s;
}

ConstructionSchedule explicit_schedule(std::vector<int> r) {
    validate_cut_list(r);
    ConstructionSchedule s;
    s.j_max = static_cast<int>(r.size());
    s.rule = ScheduleRule::kExplicitList;
    s.r = std::move(r);
    return s;
}

std::vector<int> staircase_spacers(int cuts) {
    if (cuts < 1) throw PreconditionError("cut count must be positive");
    std::vector<int> s(static_cast<std::size_t>(cuts));
    std::iota(s.begin(), s.end() - 1, 1);
    s.back() = 0;
    return s;
}

StageLedger::StageLedger(ConstructionSchedule schedule, std::vector<Stage> stages)
    : schedule_(std::move(schedule)), stages_(std::move(stages)) {}

const Stage& StageLedger::stage(int j) const {
    if (j < 1 || j > last_stage())
        throw PreconditionError("stage " + std::to_string(j) + " not in ledger (1.." +
                                std::to_string(last_stage()) + ")");
    return stages_[static_cast<std::size_t>(j - 1)];
}

StageLedger build_ledger(const ConstructionSchedule& schedule, const BigInt& h_init,
                         const Rational& mu_init) {
    if (h_init < 1) throw PreconditionError("initial height must be at least 1");
    if (mu_init <= 0) throw PreconditionError("initial base measure must be positive");
    validate_cut_list(schedule.r);
    if (static_cast<int>(schedule.r.size()) != schedule.j_max)
        throw PreconditionError("schedule length disagrees with j_max");

    std::vector<Stage> stages;
    stages.reserve(static_cast<std::size_t>(schedule.j_max) + 1);

    Stage first;
    first.j = 1;
    first.height = h_init;
    first.base_measure = mu_init;
    first.tower_measure = mu_init * Rational(h_init);
    stages.push_back(std::move(first));

    for (int j = 1; j <= schedule.j_max; ++j) {
        Stage& cur = stages.back();
        cur.cuts = schedule.cuts(j);
        cur.spacers = staircase_spacers(cur.cuts);

        BigInt offset = 0;
        cur.offsets.reserve(cur.spacers.size());
        for (int s : cur.spacers) {
            cur.offsets.push_back(offset);
            offset += cur.height + s;
        }
        const long long spacer_total =
            std::accumulate(cur.spacers.begin(), cur.spacers.end(), 0LL);

        Stage next;
        next.j = j + 1;
        next.height = offset;
        next.base_measure = cur.base_measure / cur.cuts;
        next.tower_measure = cur.tower_measure + next.base_measure * spacer_total;
        stages.push_back(std::move(next));
    }
    return StageLedger(schedule, std::move(stages));
}

bool ParameterSet::contains(int j) const {
    return std::binary_search(members.begin(), members.end(), j);
}

ParameterSet parameter_set(const ConstructionSchedule& schedule, int r) {
    if (r < 1) throw PreconditionError("parameter set index r must be at least 1");
    ParameterSet out;
    out.r = r;
    for (int j = schedule.j_max; j >= 1; --j) {
        if (schedule.cuts(j) == r + 1) {
            out.j_r = j;
            break;
        }
    }
    if (!out.j_r) return out;
    for (int j = 1; j < *out.j_r - r; ++j) {
        if (schedule.cuts(j) == r + 1) out.members.push_back(j);
    }
    return out;
}

CardinalityReport check_cardinality_condition(const ConstructionSchedule& schedule, int r) {
    if (schedule.rule != ScheduleRule::kPowerLaw || !schedule.d)
        throw PreconditionError("cardinality condition needs a power-law schedule");
    const ParameterSet set = parameter_set(schedule, r);
    CardinalityReport rep;
    rep.r = r;
    rep.size = set.size();
    rep.target = ipow(BigInt(r), 4);
    rep.exponent = (1.0 - *schedule.d) / *schedule.d;
    rep.satisfied = BigInt(rep.size) > rep.target;
    rep.deficit = rep.satisfied ? BigInt(0) : rep.target + 1 - BigInt(rep.size);
    return rep;
}

namespace {

nlohmann::json fraction_json(const Rational& q) {
    return {{"num", numerator_of(q).str()}, {"den", denominator_of(q).str()}};
}

}  // namespace

nlohmann::json to_json(const ConstructionSchedule& schedule) {
    nlohmann::json j;
    j["d"] = schedule.d ? nlohmann::json(*schedule.d) : nlohmann::json(nullptr);
    j["j_max"] = schedule.j_max;
    j["rule"] = schedule.rule == ScheduleRule::kPowerLaw ? "staircase-power-law" : "explicit-list";
    j["r"] = schedule.r;
    return j;
}

nlohmann::json to_json(const StageLedger& ledger) {
    const auto& sched = ledger.schedule();
    nlohmann::json j;
    j["d"] = sched.d ? nlohmann::json(*sched.d) : nlohmann::json(nullptr);
    j["j_max"] = sched.j_max;
    j["rule"] = sched.rule == ScheduleRule::kPowerLaw ? "staircase-power-law" : "explicit-list";
    j["normalization"] = fraction_json(ledger.normalization());
    auto& stages = j["stages"] = nlohmann::json::array();
    for (const Stage& st : ledger.stages()) {
        nlohmann::json row;
        row["j"] = st.j;
        row["r_j"] = st.cuts > 0 ? nlohmann::json(st.cuts) : nlohmann::json(nullptr);
        row["s"] = st.spacers;
        row["h"] = st.height.str();
        row["mu_E"] = fraction_json(st.base_measure);
        row["mu_X"] = fraction_json(st.tower_measure);
        auto& offs = row["offsets"] = nlohmann::json::array();
        for (const BigInt& o : st.offsets) offs.push_back(o.str());
        stages.push_back(std::move(row));
    }
    return j;
}

nlohmann::json to_json(const ParameterSet& set) {
    nlohmann::json j;
    j["r"] = set.r;
    j["j_r"] = set.j_r ? nlohmann::json(*set.j_r) : nlohmann::json(nullptr);
    j["members"] = set.members;
    j["size"] = set.size();
    j["prefix_relative"] = true;
    return j;
}

nlohmann::json to_json(const CardinalityReport& report) {
    return {{"r", report.r},
            {"size", report.size},
            {"target_r4", report.target.str()},
            {"D", report.exponent},
            {"satisfied", report.satisfied},
            {"deficit", report.deficit.str()}};
}

}  // namespace staircase
