// Batch runner for staircase constructions: build ledgers, verify the correlation inequalities,
// and tabulate cyclic-space distances.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "staircase/errors.hpp"
#include "staircase/experiment.hpp"

namespace {

using staircase::ExperimentConfig;

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty()) continue;
        std::size_t pos = 0;
        const int v = std::stoi(item, &pos);
        if (pos != item.size()) throw staircase::PreconditionError("not an integer: '" + item + "'");
        out.push_back(v);
    }
    return out;
}

struct CommonFlags {
    std::string config_path;
    std::optional<double> d;
    std::optional<int> j_max;
    std::string r_schedule;
    std::optional<int> f_stage;
    std::string f_level;
    std::string K;
    std::string r_values;
    std::string N_values;
    std::optional<double> lambda;
    std::string format;
    std::string out_path;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "JSON config file (flags override it)");
    cmd->add_option("--d", flags.d, "power-law exponent, 0 < d < 0.2");
    cmd->add_option("--jmax", flags.j_max, "last cut stage");
    cmd->add_option("--r-list", flags.r_schedule, "explicit cut counts, e.g. 2,2,3,3");
    cmd->add_option("--f-stage", flags.f_stage, "stage of the level indicator f");
    cmd->add_option("--f-level", flags.f_level, "level of the indicator f");
    cmd->add_option("--K", flags.K, "evaluation stage or 'auto'");
    cmd->add_option("--r", flags.r_values, "comma-separated r values");
    cmd->add_option("--N", flags.N_values, "comma-separated cyclic span half-widths");
    cmd->add_option("--lambda", flags.lambda, "Gram regularization (default 1e-10 tr(G)/dim)");
    cmd->add_option("--format", flags.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--out", flags.out_path, "output file (default stdout)");
}

ExperimentConfig resolve(const CommonFlags& flags) {
    ExperimentConfig cfg;
    if (!flags.config_path.empty()) {
        std::ifstream in(flags.config_path);
        if (!in) throw staircase::PreconditionError("cannot read config " + flags.config_path);
        cfg = staircase::config_from_json(nlohmann::json::parse(in));
    }
    if (flags.d) {
        cfg.d = *flags.d;
        cfg.schedule_override.reset();
    }
    if (flags.j_max) cfg.j_max = *flags.j_max;
    if (!flags.r_schedule.empty()) cfg.schedule_override = parse_int_list(flags.r_schedule);
    if (flags.f_stage) cfg.f_stage = *flags.f_stage;
    if (!flags.f_level.empty()) cfg.f_level = flags.f_level;
    if (!flags.K.empty()) {
        if (flags.K == "auto") cfg.K.reset();
        else cfg.K = std::stoi(flags.K);
    }
    if (!flags.r_values.empty()) cfg.r_list = parse_int_list(flags.r_values);
    if (!flags.N_values.empty()) cfg.N_list = parse_int_list(flags.N_values);
    if (flags.lambda) cfg.lambda = *flags.lambda;
    if (!flags.format.empty()) cfg.format = flags.format;
    return cfg;
}

void emit(const CommonFlags& flags, const std::string& text) {
    if (flags.out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(flags.out_path, std::ios::binary);
    if (!out) throw staircase::PreconditionError("cannot write " + flags.out_path);
    out << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Staircase rank-one constructions: exact ledgers and correlation diagnostics"};
    app.require_subcommand(1);

    CommonFlags flags;
    auto* build = app.add_subcommand("build", "Build the stage ledger");
    auto* verify = app.add_subcommand("verify", "Run identity, lemma and inequality checks");
    auto* rho = app.add_subcommand("rho", "Cyclic-space distance grid over (r, N)");
    auto* corr = app.add_subcommand("corr", "Dump correlation enclosures");
    auto* identity = app.add_subcommand("identity", "Symbolic residual of the averaging identity");
    auto* mixing = app.add_subcommand("mixing", "Normalized correlations on a log lag grid");
    for (auto* cmd : {build, verify, rho, corr, identity, mixing}) add_common(cmd, flags);

    std::string lags;
    int lag_max = -1;
    corr->add_option("--a", lags, "comma-separated lags (decimal, may be large)");
    corr->add_option("--a-max", lag_max, "dump every lag 0..a_max");
    int r_min = 3, r_max = 100;
    identity->add_option("--r-min", r_min);
    identity->add_option("--r-max", r_max);
    std::size_t points = 32;
    mixing->add_option("--points", points, "grid size");
    bool write_config = false;
    verify->add_flag("--print-config", write_config, "print the resolved config and exit");

    CLI11_PARSE(app, argc, argv);

    try {
        const ExperimentConfig cfg = resolve(flags);
        if (*build) {
            emit(flags, cfg.format == "csv" ? staircase::build_csv(cfg) : staircase::cmd_build(cfg).dump(2) + "\n");
        } else if (*verify) {
            if (write_config) {
                emit(flags, staircase::to_json(cfg).dump(2) + "\n");
                return 0;
            }
            const auto outcome = staircase::cmd_verify(cfg);
            emit(flags, outcome.report.dump(2) + "\n");
            return outcome.exit_code;
        } else if (*rho) {
            emit(flags, cfg.format == "json" && !flags.format.empty() ? staircase::cmd_rho(cfg).dump(2) + "\n"
                                                                      : staircase::rho_csv(cfg));
        } else if (*corr) {
            std::vector<staircase::BigInt> values;
            if (lag_max >= 0)
                for (int a = 0; a <= lag_max; ++a) values.emplace_back(a);
            std::stringstream in(lags);
            std::string item;
            while (std::getline(in, item, ','))
                if (!item.empty()) values.push_back(staircase::parse_bigint(item));
            if (values.empty()) values.emplace_back(0);
            emit(flags, staircase::correlation_csv(cfg, values));
        } else if (*identity) {
            emit(flags, staircase::cmd_identity(cfg, r_min, r_max).dump(2) + "\n");
        } else if (*mixing) {
            emit(flags, staircase::cmd_mixing(cfg, points).dump(2) + "\n");
        }
    } catch (const staircase::DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
