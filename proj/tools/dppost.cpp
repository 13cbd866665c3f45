// dppost: constrained posterior post-processing of noisy PH5 measurements.
//
//   dppost run --mode simulate --truth truth.csv --out results/
//   dppost run --mode postprocess --nm noisy.csv --mechanism laplace --out results/
//   dppost generate --geos 51 --iterations 10 --seed 7 --out truth.csv
//
// Exit codes: 0 success, 2 config error, 3 data-schema error, 4 all strata failed.

#include "dppost/csv_io.hpp"
#include "dppost/errors.hpp"
#include "dppost/experiment.hpp"
#include "dppost/synthetic.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitSchema = 3;
constexpr int kExitAllFailed = 4;

struct RunFlags {
    std::string config;
    std::string mode;
    std::string mechanism;
    double scale = 0.0;
    double moe = 0.0;
    double level = 0.0;
    double interval_level = 0.0;
    int kappa = 0;
    std::size_t draws = 0;
    std::size_t burn_in = 0;
    std::size_t thin = 0;
    std::size_t refresh = 0;
    std::uint64_t seed = 0;
    unsigned threads = 0;
    std::string truth;
    std::string nm;
    std::string constraints;
    std::string out;
};

template <typename T>
void override_if(const CLI::App& app, const char* flag, const T& value, T& dst) {
    if (app.count(flag) > 0) {
        dst = value;
    }
}

dppost::ExperimentConfig build_config(const CLI::App& app, const RunFlags& f) {
    dppost::ExperimentConfig cfg = f.config.empty() ? dppost::ExperimentConfig{} : dppost::load_config(f.config);
    if (app.count("--mode") > 0) {
        cfg.mode = dppost::parse_mode(f.mode);
    }
    if (app.count("--mechanism") > 0) {
        try {
            cfg.family = dppost::parse_family(f.mechanism);
        } catch (const std::invalid_argument& e) {
            throw dppost::ConfigError(e.what());
        }
    }
    if (app.count("--scale") > 0) {
        cfg.scale = f.scale;
    }
    override_if(app, "--moe", f.moe, cfg.moe);
    override_if(app, "--level", f.level, cfg.moe_level);
    override_if(app, "--interval-level", f.interval_level, cfg.interval_level);
    override_if(app, "--kappa", f.kappa, cfg.kappa);
    override_if(app, "--draws", f.draws, cfg.chain.n_draws);
    override_if(app, "--burn-in", f.burn_in, cfg.chain.burn_in);
    override_if(app, "--thin", f.thin, cfg.chain.thin);
    override_if(app, "--refresh-sweeps", f.refresh, cfg.refresh_sweeps);
    override_if(app, "--seed", f.seed, cfg.master_seed);
    override_if(app, "--threads", f.threads, cfg.threads);
    override_if(app, "--truth", f.truth, cfg.truth_path);
    override_if(app, "--nm", f.nm, cfg.nm_path);
    override_if(app, "--constraints", f.constraints, cfg.constraints_path);
    override_if(app, "--out", f.out, cfg.out_dir);
    return cfg;
}

int run(const CLI::App& app, const RunFlags& flags) {
    const dppost::ExperimentConfig cfg = build_config(app, flags);
    const dppost::ExperimentReport report =
        cfg.mode == dppost::RunMode::Simulate ? dppost::run_simulate(cfg) : dppost::run_postprocess(cfg);

    if (cfg.out_dir.empty()) {
        std::cout << (cfg.mode == dppost::RunMode::Simulate ? dppost::report_csv(report)
                                                            : dppost::estimates_csv(report));
    } else if (report.rows) {
        std::cout << dppost::report_csv(report);
    }
    std::cerr << report.strata.size() << " strata, " << report.failures << " failed, mean acceptance "
              << report.mean_acceptance << "\n";
    if (!report.strata.empty() && report.failures == report.strata.size()) {
        return kExitAllFailed;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Constraint-respecting posterior estimates from differentially private noisy measurements"};
    app.require_subcommand(1);

    RunFlags flags;
    auto* run_cmd = app.add_subcommand("run", "Simulate an experiment or post-process noisy measurements");
    run_cmd->add_option("--config", flags.config, "JSON config file; flags override its fields");
    run_cmd->add_option("--mode", flags.mode, "simulate | postprocess");
    run_cmd->add_option("--mechanism", flags.mechanism, "gaussian | laplace");
    run_cmd->add_option("--scale", flags.scale, "Explicit noise scale (sigma or lambda)");
    run_cmd->add_option("--moe", flags.moe, "Margin of error used to derive the scale (default 200)");
    run_cmd->add_option("--level", flags.level, "Level of the margin of error (default 0.90)");
    run_cmd->add_option("--interval-level", flags.interval_level, "Interval level (default 0.90)");
    run_cmd->add_option("--kappa", flags.kappa, "Truncation level of the PH5 system (default 10)");
    run_cmd->add_option("--draws", flags.draws, "Retained posterior draws per stratum (default 10000)");
    run_cmd->add_option("--burn-in", flags.burn_in, "Discarded initial sweeps (default 500)");
    run_cmd->add_option("--thin", flags.thin, "Thinning interval (default 1)");
    run_cmd->add_option("--refresh-sweeps", flags.refresh, "Gibbs sweeps per MH proposal (default 25)");
    run_cmd->add_option("--seed", flags.seed, "Master seed");
    run_cmd->add_option("--threads", flags.threads, "Worker threads (0: all cores)");
    run_cmd->add_option("--truth", flags.truth, "Truth CSV: stratum,Y18minus,Y18plus,YFHH");
    run_cmd->add_option("--nm", flags.nm, "Noisy CSV: stratum,Z18minus,Z18plus,ZFHH");
    run_cmd->add_option("--constraints", flags.constraints, "Constraint system JSON (default: built-in PH5)");
    run_cmd->add_option("--out", flags.out, "Output directory");

    std::size_t geos = 51;
    std::size_t iterations = 10;
    std::uint64_t gen_seed = 1;
    std::string profile = "census-like";
    int gen_kappa = 10;
    std::string gen_out;
    dppost::SyntheticParams params;
    auto* gen_cmd = app.add_subcommand("generate", "Write a synthetic truth CSV");
    gen_cmd->add_option("--geos", geos, "Number of geographies");
    gen_cmd->add_option("--iterations", iterations, "Race/ethnicity iterations per geography");
    gen_cmd->add_option("--seed", gen_seed, "Generator seed");
    gen_cmd->add_option("--profile", profile, "census-like | uniform");
    gen_cmd->add_option("--kappa", gen_kappa, "Truncation level");
    gen_cmd->add_option("--tail-fraction", params.tail_fraction, "Share of small-count strata (census-like)");
    gen_cmd->add_option("--tail-min", params.tail_min_fhh, "Lower YFHH bound of the small-count tail");
    gen_cmd->add_option("--tail-max", params.tail_max_fhh, "Upper YFHH bound of the small-count tail");
    gen_cmd->add_option("--bulk-min", params.bulk_min_fhh, "Lower YFHH bound of the bulk");
    gen_cmd->add_option("--bulk-max", params.bulk_max_fhh, "Upper YFHH bound of the bulk");
    gen_cmd->add_option("--out", gen_out, "Output CSV (stdout when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    try {
        if (run_cmd->parsed()) {
            return run(*run_cmd, flags);
        }
        const auto truth = dppost::generate_synthetic_truth(geos, iterations, gen_seed,
                                                            dppost::parse_profile(profile), gen_kappa, params);
        if (gen_out.empty()) {
            dppost::write_truth_csv(std::cout, truth);
        } else {
            std::ofstream out(gen_out);
            if (!out) {
                throw dppost::ConfigError("cannot write '" + gen_out + "'");
            }
            dppost::write_truth_csv(out, truth);
        }
        return 0;
    } catch (const dppost::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const dppost::SchemaError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitSchema;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
