#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "staircase/construction.hpp"
#include "staircase/correlation.hpp"

namespace staircase {

/// Everything needed to reproduce a run. Fully deterministic; there is no seed.
struct ExperimentConfig {
    std::optional<double> d = 0.15;
    int j_max = 30;
    std::optional<std::vector<int>> schedule_override;  // explicit r_j list; wins over d
    int f_stage = 1;
    std::string f_level = "0";
    std::optional<int> K;  // nullopt means "auto"
    std::vector<int> r_list{1, 2, 3};
    std::vector<int> N_list{1, 2, 4, 8, 16};
    std::optional<double> lambda;
    std::string format = "json";
    int identity_r_max = 50;
    int depth_extra = 4;  // stages built past j_max for evaluation; auto-K ceiling is j_max + depth_extra
};

nlohmann::json to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const nlohmann::json& j);

std::string sha256_hex(const std::string& bytes);
std::string config_hash(const ExperimentConfig& cfg);

/// The built objects behind a config: the j_max prefix (which defines J_r) and a ledger that
/// continues the same construction for depth_extra more stages.
struct Experiment {
    ExperimentConfig config;
    ConstructionSchedule prefix;
    std::shared_ptr<const StageLedger> ledger;
    std::unique_ptr<CorrelationOracle> oracle;

    int k_ceiling() const;
};

Experiment make_experiment(const ExperimentConfig& cfg);

/// Adds tool/version/config/hash metadata plus a timestamp; report_hash covers everything except
/// the timestamp.
nlohmann::json wrap_report(const ExperimentConfig& cfg, const std::string& command, nlohmann::json body);

nlohmann::json cmd_build(const ExperimentConfig& cfg);
std::string build_csv(const ExperimentConfig& cfg);

struct VerifyOutcome {
    nlohmann::json report;
    int exit_code = 0;
};

VerifyOutcome cmd_verify(const ExperimentConfig& cfg);

nlohmann::json cmd_rho(const ExperimentConfig& cfg);
std::string rho_csv(const ExperimentConfig& cfg);

nlohmann::json cmd_identity(const ExperimentConfig& cfg, int r_min, int r_max);

/// a, lo_num, lo_den, hi_num, hi_den, K rows.
std::string correlation_csv(const ExperimentConfig& cfg, const std::vector<BigInt>& lags);
nlohmann::json cmd_mixing(const ExperimentConfig& cfg, std::size_t points);

std::string csv_field(const std::string& s);

}  // namespace staircase
