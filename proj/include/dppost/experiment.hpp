#pragma once

#include "dppost/metrics.hpp"
#include "dppost/samplers.hpp"
#include "dppost/synthetic.hpp"
#include "dppost/types.hpp"

#include "json.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dppost {

enum class RunMode { Simulate, PostProcess };

RunMode parse_mode(const std::string& name);

struct ExperimentConfig {
    RunMode mode = RunMode::Simulate;
    MechanismFamily family = MechanismFamily::Gaussian;
    // Explicit noise scale; when absent it is derived from moe at moe_level.
    std::optional<double> scale;
    double moe = 200.0;
    double moe_level = 0.90;
    double interval_level = 0.90;
    int kappa = 10;
    ChainConfig chain;
    std::size_t refresh_sweeps = kDefaultRefreshSweeps;
    // JSON constraint file; the built-in PH5 system when empty.
    std::string constraints_path;
    std::string truth_path;
    std::string nm_path;
    std::string out_dir;
    std::uint64_t master_seed = 20100401;
    unsigned threads = 0;  // 0: hardware concurrency

    MechanismSpec mechanism() const;
    ConstraintSystem constraints() const;
    // Throws ConfigError.
    void validate() const;
};

// Fields mirror ExperimentConfig; the chain block is {"draws", "burn_in", "thin"}.
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

// Per-stratum seeds: s = derive_seed(master, stratum); noise uses
// derive_seed(s, "noise") and the sampler derive_seed(s, "chain").
std::uint64_t stratum_noise_seed(std::uint64_t master, const Stratum& stratum);
std::uint64_t stratum_chain_seed(std::uint64_t master, const Stratum& stratum);

struct StratumOutcome {
    Stratum stratum;
    bool ok = false;
    std::string message;
    std::optional<std::vector<double>> truth;
    std::vector<double> noisy;
    bool nm_feasible = false;
    std::optional<StratumEstimate> estimate;  // set when ok
    double acceptance_rate = 0.0;
    double min_ess = 0.0;
};

struct ExperimentReport {
    MechanismSpec mechanism;
    std::optional<EvaluationRows> rows;  // absent in post-processing mode or when every stratum failed
    std::vector<StratumOutcome> strata;  // input order
    std::size_t failures = 0;
    double mean_acceptance = 0.0;
};

// Core of simulate mode, without file I/O.
ExperimentReport simulate(const std::vector<Tabulation>& truth, const ExperimentConfig& cfg);

// Core of post-processing mode: a function of the noisy measurements and public parameters only.
ExperimentReport postprocess(const std::vector<NoisyMeasurement>& nm, const ExperimentConfig& cfg);

std::string report_csv(const ExperimentReport& report);
std::string detail_csv(const ExperimentReport& report);
std::string estimates_csv(const ExperimentReport& report);

// Read inputs, run, and write report.csv + detail.csv (simulate) or
// estimates.csv (post-process) under cfg.out_dir when it is set.
ExperimentReport run_simulate(const ExperimentConfig& cfg);
ExperimentReport run_postprocess(const ExperimentConfig& cfg);

}  // namespace dppost
