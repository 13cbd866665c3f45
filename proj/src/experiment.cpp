#include "dppost/experiment.hpp"

#include "dppost/constraints.hpp"
#include "dppost/csv_io.hpp"
#include "dppost/diagnostics.hpp"
#include "dppost/errors.hpp"
#include "dppost/format.hpp"
#include "dppost/mechanisms.hpp"
#include "dppost/random.hpp"
#include "dppost/serialization.hpp"

#include "parallel.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace dppost {

using nlohmann::json;

RunMode parse_mode(const std::string& name) {
    std::string key;
    for (char c : name) {
        if (c != '-' && c != '_') {
            key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        }
    }
    if (key == "simulate") {
        return RunMode::Simulate;
    }
    if (key == "postprocess") {
        return RunMode::PostProcess;
    }
    throw ConfigError("unknown mode '" + name + "' (expected simulate or postprocess)");
}

MechanismSpec ExperimentConfig::mechanism() const {
    try {
        if (scale) {
            return MechanismSpec(family, *scale, "explicit scale");
        }
        return mechanism_from_moe(family, moe, moe_level);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("mechanism: ") + e.what());
    }
}

ConstraintSystem ExperimentConfig::constraints() const {
    if (constraints_path.empty()) {
        try {
            return ph5_system(kappa);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    }
    ConstraintSystem cs = load_constraint_system(constraints_path);
    if (cs.dimension() != 3) {
        throw ConfigError("constraint file must describe (Y18-, Y18+, YFHH): expected 3 columns, found " +
                          std::to_string(cs.dimension()));
    }
    return cs;
}

void ExperimentConfig::validate() const {
    if (!(interval_level > 0.0 && interval_level < 1.0)) {
        throw ConfigError("interval_level must lie in (0, 1)");
    }
    if (kappa < 2) {
        throw ConfigError("kappa must be at least 2");
    }
    if (chain.n_draws < 1 || chain.thin < 1) {
        throw ConfigError("chain: draws and thin must be at least 1");
    }
    if (refresh_sweeps < 1) {
        throw ConfigError("refresh_sweeps must be at least 1");
    }
    (void)mechanism();
}

namespace {

template <typename T>
void read_opt(const json& j, const char* name, T& dst) {
    const auto it = j.find(name);
    if (it == j.end()) {
        return;
    }
    try {
        dst = it->get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config field '") + name + "': " + e.what());
    }
}

}  // namespace

ExperimentConfig config_from_json(const json& j) {
    if (!j.is_object()) {
        throw ConfigError("config must be a JSON object");
    }
    static const std::set<std::string> known{"mode",  "mechanism", "scale",          "moe",     "level",
                                             "interval_level", "kappa", "chain", "refresh_sweeps",
                                             "constraints", "truth", "nm", "out", "seed", "threads"};
    for (const auto& [key, _] : j.items()) {
        if (!known.count(key)) {
            throw ConfigError("unknown config field '" + key + "'");
        }
    }
    ExperimentConfig cfg;
    std::string text;
    if (j.contains("mode")) {
        read_opt(j, "mode", text);
        cfg.mode = parse_mode(text);
    }
    if (j.contains("mechanism")) {
        read_opt(j, "mechanism", text);
        try {
            cfg.family = parse_family(text);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    }
    if (j.contains("scale")) {
        double s = 0.0;
        read_opt(j, "scale", s);
        cfg.scale = s;
    }
    read_opt(j, "moe", cfg.moe);
    read_opt(j, "level", cfg.moe_level);
    read_opt(j, "interval_level", cfg.interval_level);
    read_opt(j, "kappa", cfg.kappa);
    if (const auto it = j.find("chain"); it != j.end()) {
        if (!it->is_object()) {
            throw ConfigError("config field 'chain' must be an object");
        }
        read_opt(*it, "draws", cfg.chain.n_draws);
        read_opt(*it, "burn_in", cfg.chain.burn_in);
        read_opt(*it, "thin", cfg.chain.thin);
    }
    read_opt(j, "refresh_sweeps", cfg.refresh_sweeps);
    read_opt(j, "constraints", cfg.constraints_path);
    read_opt(j, "truth", cfg.truth_path);
    read_opt(j, "nm", cfg.nm_path);
    read_opt(j, "out", cfg.out_dir);
    read_opt(j, "seed", cfg.master_seed);
    read_opt(j, "threads", cfg.threads);
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config '" + path + "'");
    }
    try {
        return config_from_json(json::parse(in));
    } catch (const json::parse_error& e) {
        throw ConfigError("config '" + path + "': " + e.what());
    }
}

std::uint64_t stratum_noise_seed(std::uint64_t master, const Stratum& stratum) {
    return derive_seed(derive_seed(master, stratum), "noise");
}

std::uint64_t stratum_chain_seed(std::uint64_t master, const Stratum& stratum) {
    return derive_seed(derive_seed(master, stratum), "chain");
}

namespace {

template <typename T>
void require_unique_keys(const std::vector<T>& rows) {
    std::set<Stratum> seen;
    for (const auto& r : rows) {
        if (!seen.insert(r.stratum()).second) {
            throw SchemaError("duplicate stratum key '" + r.stratum() + "'");
        }
    }
}

// Posterior summary for one noisy measurement; fills the MB part of the outcome.
void estimate_stratum(const NoisyMeasurement& z, const ConstraintSystem& cs, const ExperimentConfig& cfg,
                      StratumOutcome& out) {
    ChainConfig chain = cfg.chain;
    chain.seed = stratum_chain_seed(cfg.master_seed, z.stratum());
    const PosteriorDraws draws = sample_posterior(z, cs, chain, cfg.refresh_sweeps);

    StratumEstimate est;
    est.stratum = z.stratum();
    if (out.truth) {
        est.truth = *out.truth;
    }
    est.noisy = out.noisy;
    if (z.mechanism().family() == MechanismFamily::Gaussian) {
        est.nm_intervals = fieller_ratio_intervals(z, cfg.interval_level);
    }
    est.mb = posterior_ratio_summary(draws, cfg.interval_level);

    out.acceptance_rate = draws.acceptance_rate();
    if (draws.size() >= 10) {
        double min_ess = static_cast<double>(draws.size());
        for (std::size_t j = 0; j < draws.dimension(); ++j) {
            min_ess = std::min(min_ess, effective_sample_size(draws, j));
        }
        out.min_ess = min_ess;
    } else {
        out.min_ess = static_cast<double>(draws.size());
    }
    out.estimate = std::move(est);
    out.ok = true;
}

void finish_report(ExperimentReport& report, const ConstraintSystem& cs, bool with_truth) {
    double acc = 0.0;
    std::vector<StratumEstimate> ok;
    for (const auto& s : report.strata) {
        if (!s.ok) {
            ++report.failures;
            continue;
        }
        acc += s.acceptance_rate;
        if (with_truth) {
            ok.push_back(*s.estimate);
        }
    }
    const std::size_t n_ok = report.strata.size() - report.failures;
    report.mean_acceptance = n_ok ? acc / static_cast<double>(n_ok) : 0.0;
    if (with_truth && !ok.empty()) {
        report.rows = evaluate(ok, cs);
    }
}

std::string clean_message(std::string msg) {
    for (char& c : msg) {
        if (c == ',' || c == '\n' || c == '\r') {
            c = ';';
        }
    }
    return msg;
}

const char* mechanism_label(MechanismFamily family) {
    return family == MechanismFamily::Gaussian ? "Gauss" : "Laplace";
}

class CsvLine {
public:
    CsvLine& add(const std::string& s) {
        if (!first_) {
            line_ += ',';
        }
        first_ = false;
        line_ += s;
        return *this;
    }
    CsvLine& num(double v) { return add(format_number(v)); }
    std::string str() const { return line_ + '\n'; }

private:
    std::string line_;
    bool first_ = true;
};

const char* const kRatioNames[] = {"under18", "over18", "total"};

}  // namespace

ExperimentReport simulate(const std::vector<Tabulation>& truth, const ExperimentConfig& cfg) {
    cfg.validate();
    require_unique_keys(truth);
    const MechanismSpec spec = cfg.mechanism();
    const ConstraintSystem cs = cfg.constraints();

    ExperimentReport report{spec, std::nullopt, std::vector<StratumOutcome>(truth.size()), 0, 0.0};
    detail::parallel_for(truth.size(), cfg.threads, [&](std::size_t i) {
        const Tabulation& tab = truth[i];
        StratumOutcome& out = report.strata[i];
        out.stratum = tab.stratum();
        out.truth.emplace(tab.values().begin(), tab.values().end());
        try {
            validate_dimensions(tab, cs);
            RandomStream noise(stratum_noise_seed(cfg.master_seed, tab.stratum()));
            const NoisyMeasurement z = add_noise(tab, spec, noise);
            out.noisy.assign(z.values().begin(), z.values().end());
            out.nm_feasible = is_feasible(out.noisy, cs);
            estimate_stratum(z, cs, cfg, out);
        } catch (const std::exception& e) {
            out.ok = false;
            out.message = clean_message(e.what());
        }
    });
    finish_report(report, cs, true);
    return report;
}

ExperimentReport postprocess(const std::vector<NoisyMeasurement>& nm, const ExperimentConfig& cfg) {
    cfg.validate();
    require_unique_keys(nm);
    const ConstraintSystem cs = cfg.constraints();
    const MechanismSpec spec = cfg.mechanism();

    ExperimentReport report{spec, std::nullopt, std::vector<StratumOutcome>(nm.size()), 0, 0.0};
    detail::parallel_for(nm.size(), cfg.threads, [&](std::size_t i) {
        const NoisyMeasurement& z = nm[i];
        StratumOutcome& out = report.strata[i];
        out.stratum = z.stratum();
        out.noisy.assign(z.values().begin(), z.values().end());
        try {
            validate_dimensions(z.size(), cs);
            out.nm_feasible = is_feasible(out.noisy, cs);
            estimate_stratum(z, cs, cfg, out);
        } catch (const std::exception& e) {
            out.ok = false;
            out.message = clean_message(e.what());
        }
    });
    finish_report(report, cs, false);
    return report;
}

std::string report_csv(const ExperimentReport& report) {
    std::string out = metrics_csv_header() + '\n';
    if (report.rows) {
        const std::string mech = mechanism_label(report.mechanism.family());
        out += metrics_csv_row(mech, "NM", report.rows->nm) + '\n';
        out += metrics_csv_row(mech, "MB", report.rows->mb) + '\n';
    }
    return out;
}

namespace {

void add_mb_header(CsvLine& h) {
    for (const char* c : kTruthColumns) {
        h.add(std::string("mb_") + c);
    }
    for (const char* r : kRatioNames) {
        h.add(std::string("mb_") + r);
    }
    for (const char* r : kRatioNames) {
        h.add(std::string("mb_rom_") + r);
    }
    for (const char* r : kRatioNames) {
        h.add(std::string("mb_lo_") + r).add(std::string("mb_hi_") + r);
    }
    h.add("acceptance_rate").add("min_ess");
}

void add_mb_fields(CsvLine& line, const StratumOutcome& s) {
    if (!s.ok) {
        for (int i = 0; i < 17; ++i) {
            line.add("NA");
        }
        return;
    }
    const auto& mb = s.estimate->mb;
    for (double v : mb.mean_counts) {
        line.num(v);
    }
    for (std::size_t k = 0; k < 3; ++k) {
        line.num(mb.point[k]);
    }
    for (std::size_t k = 0; k < 3; ++k) {
        line.num(mb.ratio_of_means[k]);
    }
    for (const auto& iv : mb.intervals) {
        line.num(iv.low).num(iv.high);
    }
    line.num(s.acceptance_rate).num(s.min_ess);
}

}  // namespace

std::string detail_csv(const ExperimentReport& report) {
    CsvLine header;
    header.add("stratum").add("status");
    for (const char* c : kTruthColumns) {
        header.add(c);
    }
    for (const char* c : kNoisyColumns) {
        header.add(c);
    }
    header.add("nm_feasible").add("nm_blowup");
    for (const char* r : kRatioNames) {
        header.add(std::string("nm_") + r);
    }
    for (const char* r : kRatioNames) {
        header.add(std::string("nm_lo_") + r).add(std::string("nm_hi_") + r).add(std::string("nm_shape_") + r);
    }
    add_mb_header(header);
    header.add("message");
    std::string out = header.str();

    for (const auto& s : report.strata) {
        CsvLine line;
        line.add(s.stratum).add(s.ok ? "ok" : "failed");
        for (std::size_t k = 0; k < 3; ++k) {
            line.num(s.truth ? (*s.truth)[k] : kInf);
        }
        for (std::size_t k = 0; k < 3; ++k) {
            line.num(s.noisy.size() == 3 ? s.noisy[k] : kInf);
        }
        if (s.noisy.size() == 3) {
            const RatioTriple r = ratio_triple(s.noisy);
            line.add(s.nm_feasible ? "1" : "0");
            line.add(r.blown_up ? "1" : "0");
            for (std::size_t k = 0; k < 3; ++k) {
                line.num(r[k]);
            }
        } else {
            for (int i = 0; i < 5; ++i) {
                line.add("NA");
            }
        }
        if (s.ok && s.estimate->nm_intervals) {
            for (const auto& iv : *s.estimate->nm_intervals) {
                line.num(iv.low).num(iv.high).add(to_string(iv.shape));
            }
        } else {
            for (int i = 0; i < 9; ++i) {
                line.add("NA");
            }
        }
        add_mb_fields(line, s);
        line.add(s.message);
        out += line.str();
    }
    return out;
}

std::string estimates_csv(const ExperimentReport& report) {
    CsvLine header;
    header.add("stratum").add("status");
    for (const char* c : kNoisyColumns) {
        header.add(c);
    }
    add_mb_header(header);
    header.add("message");
    std::string out = header.str();
    for (const auto& s : report.strata) {
        CsvLine line;
        line.add(s.stratum).add(s.ok ? "ok" : "failed");
        for (std::size_t k = 0; k < 3; ++k) {
            line.num(s.noisy.size() == 3 ? s.noisy[k] : kInf);
        }
        add_mb_fields(line, s);
        line.add(s.message);
        out += line.str();
    }
    return out;
}

namespace {

void ensure_out_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw std::runtime_error("cannot create output directory '" + dir + "': " + ec.message());
    }
}

std::string join(const std::string& dir, const char* name) {
    return (std::filesystem::path(dir) / name).string();
}

}  // namespace

ExperimentReport run_simulate(const ExperimentConfig& cfg) {
    if (cfg.truth_path.empty()) {
        throw ConfigError("simulate mode requires a truth file");
    }
    cfg.validate();
    const auto truth = read_truth_csv(cfg.truth_path);
    ExperimentReport report = simulate(truth, cfg);
    if (!cfg.out_dir.empty()) {
        ensure_out_dir(cfg.out_dir);
        write_text_file(join(cfg.out_dir, "report.csv"), report_csv(report));
        write_text_file(join(cfg.out_dir, "detail.csv"), detail_csv(report));
        std::vector<NoisyMeasurement> nm;
        for (const auto& s : report.strata) {
            if (s.noisy.size() == 3) {
                nm.emplace_back(s.noisy, report.mechanism, s.stratum);
            }
        }
        std::ostringstream os;
        write_noisy_csv(os, nm);
        write_text_file(join(cfg.out_dir, "noisy.csv"), os.str());
    }
    return report;
}

ExperimentReport run_postprocess(const ExperimentConfig& cfg) {
    if (cfg.nm_path.empty()) {
        throw ConfigError("postprocess mode requires a noisy-measurement file");
    }
    cfg.validate();
    const auto nm = read_noisy_csv(cfg.nm_path, cfg.mechanism());
    ExperimentReport report = postprocess(nm, cfg);
    if (!cfg.out_dir.empty()) {
        ensure_out_dir(cfg.out_dir);
        write_text_file(join(cfg.out_dir, "estimates.csv"), estimates_csv(report));
    }
    return report;
}

}  // namespace dppost
