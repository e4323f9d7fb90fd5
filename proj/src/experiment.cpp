#include "staircase/experiment.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <iomanip>
#include <sstream>

#include <openssl/evp.h>

#include "staircase/diagnostics.hpp"
#include "staircase/errors.hpp"
#include "staircase/laurent.hpp"

namespace staircase {

namespace {

constexpr const char* kTool = "staircase";

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream out;
    out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return out.str();
}

std::string schedule_label(const ExperimentConfig& cfg) {
    std::ostringstream out;
    if (cfg.schedule_override) {
        out << "r=";
        for (std::size_t i = 0; i < cfg.schedule_override->size(); ++i)
            out << (i ? ";" : "") << (*cfg.schedule_override)[i];
    } else {
        out << "d=" << (cfg.d ? *cfg.d : 0.0) << ";jmax=" << cfg.j_max;
    }
    return out.str();
}

// K for a verdict-bearing query: start at `start`, raise until decided or the ceiling is hit.
template <typename Eval, typename Decided>
auto with_auto_stage(const Experiment& ex, int start, Eval eval, Decided decided) {
    const ExperimentConfig& cfg = ex.config;
    if (cfg.K) return eval(*cfg.K);
    const int ceiling = ex.k_ceiling();
    int K = std::min(start, ceiling);
    auto rep = eval(K);
    while (!decided(rep) && K < ceiling) rep = eval(++K);
    return rep;
}

}  // namespace

nlohmann::json to_json(const ExperimentConfig& cfg) {
    nlohmann::json j;
    j["d"] = cfg.d ? nlohmann::json(*cfg.d) : nlohmann::json(nullptr);
    j["j_max"] = cfg.j_max;
    j["schedule_override"] =
        cfg.schedule_override ? nlohmann::json(*cfg.schedule_override) : nlohmann::json(nullptr);
    j["f"] = {{"stage", cfg.f_stage}, {"level", cfg.f_level}};
    j["K"] = cfg.K ? nlohmann::json(*cfg.K) : nlohmann::json("auto");
    j["r_list"] = cfg.r_list;
    j["N_list"] = cfg.N_list;
    j["lambda"] = cfg.lambda ? nlohmann::json(*cfg.lambda) : nlohmann::json(nullptr);
    j["format"] = cfg.format;
    j["identity_r_max"] = cfg.identity_r_max;
    j["depth_extra"] = cfg.depth_extra;
    return j;
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
    ExperimentConfig cfg;
    try {
        if (j.contains("d")) cfg.d = j["d"].is_null() ? std::nullopt : std::optional<double>(j["d"].get<double>());
        if (j.contains("j_max")) cfg.j_max = j["j_max"].get<int>();
        if (j.contains("schedule_override") && !j["schedule_override"].is_null())
            cfg.schedule_override = j["schedule_override"].get<std::vector<int>>();
        if (j.contains("f")) {
            cfg.f_stage = j["f"].value("stage", 1);
            const auto& level = j["f"]["level"];
            cfg.f_level = level.is_string() ? level.get<std::string>() : std::to_string(level.get<long long>());
        }
        if (j.contains("K")) {
            if (j["K"].is_string()) {
                if (j["K"].get<std::string>() != "auto") throw PreconditionError("K must be an integer or \"auto\"");
                cfg.K.reset();
            } else {
                cfg.K = j["K"].get<int>();
            }
        }
        if (j.contains("r_list")) cfg.r_list = j["r_list"].get<std::vector<int>>();
        if (j.contains("N_list")) cfg.N_list = j["N_list"].get<std::vector<int>>();
        if (j.contains("lambda"))
            cfg.lambda = j["lambda"].is_null() ? std::nullopt : std::optional<double>(j["lambda"].get<double>());
        if (j.contains("format")) cfg.format = j["format"].get<std::string>();
        if (j.contains("identity_r_max")) cfg.identity_r_max = j["identity_r_max"].get<int>();
        if (j.contains("depth_extra")) cfg.depth_extra = j["depth_extra"].get<int>();
    } catch (const nlohmann::json::exception& e) {
        throw PreconditionError(std::string("bad config: ") + e.what());
    }
    return cfg;
}

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256 failed");
    std::ostringstream out;
    for (unsigned int i = 0; i < len; ++i)
        out << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
    return out.str();
}

std::string config_hash(const ExperimentConfig& cfg) { return sha256_hex(to_json(cfg).dump()); }

int Experiment::k_ceiling() const {
    return std::min(config.j_max + config.depth_extra, oracle->k_cap());
}

Experiment make_experiment(const ExperimentConfig& cfg) {
    if (cfg.depth_extra < 0) throw PreconditionError("depth_extra must be nonnegative");
    Experiment ex;
    ex.config = cfg;
    if (cfg.schedule_override) {
        ex.prefix = explicit_schedule(*cfg.schedule_override);
        ex.config.j_max = ex.prefix.j_max;
        ex.config.d.reset();
    } else {
        if (!cfg.d) throw PreconditionError("config needs either d or schedule_override");
        ex.prefix = build_schedule(*cfg.d, cfg.j_max);
    }
    ex.ledger = std::make_shared<const StageLedger>(build_ledger(ex.prefix.extended(cfg.depth_extra)));
    LevelIndicator f;
    f.stage = cfg.f_stage;
    f.level = parse_bigint(cfg.f_level);
    ex.oracle = std::make_unique<CorrelationOracle>(ex.ledger, f);
    if (cfg.K && (*cfg.K < f.stage || *cfg.K > ex.oracle->k_cap()))
        throw PreconditionError("K = " + std::to_string(*cfg.K) + " outside [" + std::to_string(f.stage) +
                                ", " + std::to_string(ex.oracle->k_cap()) + "]");
    return ex;
}

nlohmann::json wrap_report(const ExperimentConfig& cfg, const std::string& command, nlohmann::json body) {
    nlohmann::json rep;
    rep["tool"] = kTool;
    rep["version"] = STAIRCASE_VERSION;
    rep["command"] = command;
    rep["config"] = to_json(cfg);
    rep["config_hash"] = config_hash(cfg);
    rep["result"] = std::move(body);
    rep["report_hash"] = sha256_hex(rep.dump());
    rep["timestamp"] = utc_timestamp();
    return rep;
}

nlohmann::json cmd_build(const ExperimentConfig& cfg) {
    Experiment ex = make_experiment(cfg);
    nlohmann::json body = to_json(build_ledger(ex.prefix));
    return wrap_report(ex.config, "build", std::move(body));
}

std::string build_csv(const ExperimentConfig& cfg) {
    Experiment ex = make_experiment(cfg);
    const StageLedger ledger = build_ledger(ex.prefix);
    std::ostringstream out;
    out << "j,r_j,h,mu_E_num,mu_E_den,mu_X_num,mu_X_den,config_hash,version\r\n";
    const std::string hash = config_hash(ex.config);
    for (const Stage& st : ledger.stages()) {
        out << st.j << ',' << (st.cuts ? std::to_string(st.cuts) : std::string()) << ',' << st.height.str()
            << ',' << numerator_of(st.base_measure).str() << ',' << denominator_of(st.base_measure).str()
            << ',' << numerator_of(st.tower_measure).str() << ',' << denominator_of(st.tower_measure).str()
            << ',' << hash << ',' << STAIRCASE_VERSION << "\r\n";
    }
    return out.str();
}

namespace {

nlohmann::json identity_sweep(int r_min, int r_max) {
    nlohmann::json rows = nlohmann::json::array();
    bool all_zero = true;
    bool mass_ok = true;
    int literal_vanishes = 0;
    std::optional<std::pair<int, int>> common;  // (shift_sign, lhs_sign) with m - r fixed
    std::optional<int> common_offset;
    bool alignment_common = true;
    for (int r = r_min; r <= r_max; ++r) {
        const IdentityResidual res = identity_one_residual(r);
        all_zero = all_zero && res.is_zero;
        mass_ok = mass_ok && res.rhs_coefficient_sum == 2;
        if (res.literal_shift_vanishes) ++literal_vanishes;
        const std::pair<int, int> signs{res.best.shift_sign, res.best.lhs_sign};
        const int offset = res.best.m - r;
        if (!common) {
            common = signs;
            common_offset = offset;
        } else if (*common != signs || *common_offset != offset) {
            alignment_common = false;
        }
        rows.push_back({{"r", r},
                        {"best_m", res.best.m},
                        {"best_shift_sign", res.best.shift_sign},
                        {"best_lhs_sign", res.best.lhs_sign},
                        {"is_zero", res.is_zero},
                        {"residual_l1", res.residual.l1_norm().str()},
                        {"literal_shift_vanishes", res.literal_shift_vanishes}});
    }
    nlohmann::json out;
    out["r_min"] = r_min;
    out["r_max"] = r_max;
    out["all_zero"] = all_zero;
    out["coefficient_mass_is_two"] = mass_ok;
    out["common_alignment"] = alignment_common && common
                                  ? nlohmann::json{{"shift_sign", common->first},
                                                   {"lhs_sign", common->second},
                                                   {"m_minus_r", *common_offset}}
                                  : nlohmann::json(nullptr);
    out["literal_shift_vanishing_count"] = literal_vanishes;
    out["rows"] = std::move(rows);
    return out;
}

}  // namespace

nlohmann::json cmd_identity(const ExperimentConfig& cfg, int r_min, int r_max) {
    if (r_min < 3 || r_max < r_min) throw PreconditionError("identity range needs 3 <= r_min <= r_max");
    return wrap_report(cfg, "identity", identity_sweep(r_min, r_max));
}

VerifyOutcome cmd_verify(const ExperimentConfig& cfg) {
    Experiment ex = make_experiment(cfg);
    CorrelationOracle& oracle = *ex.oracle;
    nlohmann::json body;

    if (ex.config.identity_r_max >= 3) body["identity"] = identity_sweep(3, ex.config.identity_r_max);

    int n_true = 0, n_false = 0, n_undecided = 0;
    auto tally = [&](Verdict v) {
        if (v == Verdict::kTrue) ++n_true;
        else if (v == Verdict::kFalse) ++n_false;
        else ++n_undecided;
    };

    int max_cut = 2;
    for (int c : ex.prefix.r) max_cut = std::max(max_cut, c);

    nlohmann::json lemma_rows = nlohmann::json::array();
    nlohmann::json ineq_rows = nlohmann::json::array();
    nlohmann::json decay_rows = nlohmann::json::array();
    nlohmann::json card_rows = nlohmann::json::array();
    nlohmann::json sets = nlohmann::json::array();
    std::vector<int> skipped;

    for (int r = 1; r < max_cut; ++r) {
        const ParameterSet set = parameter_set(ex.prefix, r);
        sets.push_back(to_json(set));
        if (ex.prefix.rule == ScheduleRule::kPowerLaw) card_rows.push_back(to_json(check_cardinality_condition(ex.prefix, r)));
        if (set.empty()) {
            skipped.push_back(r);
            continue;
        }
        for (int j : set.members) {
            const int start = std::max(*set.j_r + 2, lemma_min_stage(oracle, j, r));
            const LemmaGapReport rep = with_auto_stage(
                ex, start, [&](int K) { return lemma_gap(oracle, set, j, K); },
                [](const LemmaGapReport& x) { return x.holds != Verdict::kUndecided; });
            tally(rep.holds);
            lemma_rows.push_back(to_json(rep));
        }
        const int start = std::max(*set.j_r + 2, inequality_two_min_stage(oracle, set));
        const InequalityTwoReport ineq = with_auto_stage(
            ex, start, [&](int K) { return inequality_two(oracle, set, K); },
            [](const InequalityTwoReport& x) { return x.holds != Verdict::kUndecided; });
        tally(ineq.holds);
        ineq_rows.push_back(to_json(ineq));
        if (set.size() >= 2) decay_rows.push_back(to_json(cross_term_decay(oracle, set, ineq.K)));
    }

    body["normalization"] = "verdicts use f scaled to <f,f> = 1; raw values = normalized * <f,f>^k";
    body["f_norm2"] = to_fraction(oracle.norm2());
    body["space_measure"] = to_fraction(build_ledger(ex.prefix).normalization());
    body["parameter_sets"] = std::move(sets);
    body["cardinality"] = std::move(card_rows);
    body["lemma"] = std::move(lemma_rows);
    body["inequality_two"] = std::move(ineq_rows);
    body["cross_term_decay"] = std::move(decay_rows);
    body["skipped_r"] = skipped;
    body["verdicts"] = {{"true", n_true}, {"false", n_false}, {"undecided", n_undecided}};

    VerifyOutcome out;
    out.exit_code = n_false > 0 ? 1 : 0;
    body["exit_status"] = out.exit_code;
    out.report = wrap_report(ex.config, "verify", std::move(body));
    return out;
}

namespace {

struct RhoCell {
    int r;
    int N;
    int K;
    std::optional<ProjectionReport> report;
    std::string error;
};

std::vector<RhoCell> rho_cells(Experiment& ex) {
    std::vector<RhoCell> cells;
    const int K = ex.config.K ? *ex.config.K : ex.k_ceiling();
    for (int r : ex.config.r_list) {
        for (int N : ex.config.N_list) {
            RhoCell cell{r, N, K, std::nullopt, {}};
            try {
                cell.report = cyclic_distance(*ex.oracle, r, N, K, ex.config.lambda);
                if (!cell.report->solver_ok) cell.error = cell.report->solver_message;
            } catch (const std::exception& e) {
                cell.error = e.what();
            }
            cells.push_back(std::move(cell));
        }
    }
    return cells;
}

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

nlohmann::json cmd_rho(const ExperimentConfig& cfg) {
    Experiment ex = make_experiment(cfg);
    nlohmann::json cells = nlohmann::json::array();
    for (const RhoCell& c : rho_cells(ex)) {
        nlohmann::json row = c.report ? to_json(*c.report) : nlohmann::json{{"r", c.r}, {"N", c.N}, {"K", c.K}};
        row["error"] = c.error.empty() ? nlohmann::json(nullptr) : nlohmann::json(c.error);
        cells.push_back(std::move(row));
    }
    nlohmann::json body;
    body["normalization"] = "f scaled to <f,f> = 1";
    body["rows"] = ex.config.r_list.size();
    body["cols"] = ex.config.N_list.size();
    body["cells"] = std::move(cells);
    return wrap_report(ex.config, "rho", std::move(body));
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string rho_csv(const ExperimentConfig& cfg) {
    Experiment ex = make_experiment(cfg);
    const std::string hash = config_hash(ex.config);
    const std::string sched = schedule_label(ex.config);
    std::ostringstream out;
    out << "r,N,K,lambda,rho2,condition_estimate,min_eigenvalue,solver_ok,error,f_stage,f_level,schedule,"
           "config_hash,version\r\n";
    for (const RhoCell& c : rho_cells(ex)) {
        out << c.r << ',' << c.N << ',' << c.K << ',';
        if (c.report) {
            out << fmt_double(c.report->regularization) << ',' << fmt_double(c.report->rho2) << ','
                << fmt_double(c.report->condition_estimate) << ',' << fmt_double(c.report->min_eigenvalue) << ','
                << (c.report->solver_ok ? "true" : "false");
        } else {
            out << ",,,,false";
        }
        out << ',' << csv_field(c.error) << ',' << ex.config.f_stage << ',' << ex.config.f_level << ','
            << csv_field(sched) << ',' << hash << ',' << STAIRCASE_VERSION << "\r\n";
    }
    return out.str();
}

std::string correlation_csv(const ExperimentConfig& cfg, const std::vector<BigInt>& lags) {
    Experiment ex = make_experiment(cfg);
    const int K = ex.config.K ? *ex.config.K : ex.oracle->k_cap();
    std::ostringstream out;
    out << "a,lo_num,lo_den,hi_num,hi_den,K\r\n";
    for (const BigInt& a : lags) {
        const Enclosure e = ex.oracle->correlation(a, K);
        out << a.str() << ',' << numerator_of(e.lo()).str() << ',' << denominator_of(e.lo()).str() << ','
            << numerator_of(e.hi()).str() << ',' << denominator_of(e.hi()).str() << ',' << K << "\r\n";
    }
    return out.str();
}

nlohmann::json cmd_mixing(const ExperimentConfig& cfg, std::size_t points) {
    Experiment ex = make_experiment(cfg);
    const int K = ex.config.K ? *ex.config.K : ex.oracle->k_cap();
    const auto rows = mixing_profile(*ex.oracle, K, log_lag_grid(ex.ledger->height(K), points));
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& row : rows) arr.push_back({{"a", row.lag.str()}, {"value", row.value}, {"width", row.width}});
    return wrap_report(ex.config, "mixing", {{"K", K}, {"normalization", "gamma(a) / <f,f>"}, {"profile", arr}});
}

}  // namespace staircase
