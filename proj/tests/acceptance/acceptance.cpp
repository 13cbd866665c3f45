// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "dppost/constraints.hpp"
#include "dppost/diagnostics.hpp"
#include "dppost/experiment.hpp"
#include "dppost/mechanisms.hpp"
#include "dppost/samplers.hpp"
#include "dppost/synthetic.hpp"
#include "dppost/truncated_normal.hpp"

#include "../stat_oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace dppost;

namespace {

constexpr std::uint64_t kMasterSeed = 20100401;
constexpr std::uint64_t kTruthSeed = 20100401;

struct Outcome {
    bool pass;
    std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const std::function<Outcome()>& check) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = check();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] %d %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
}

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

ExperimentConfig paper_config(MechanismFamily family) {
    ExperimentConfig cfg;
    cfg.family = family;
    cfg.master_seed = kMasterSeed;
    return cfg;
}

// The 510-stratum experiment, shared by criteria 2, 4, 5 and 7.
struct SyntheticRuns {
    ExperimentReport gauss;
    ExperimentReport laplace;
};

const SyntheticRuns& synthetic_runs() {
    static const SyntheticRuns runs = [] {
        const auto truth = generate_synthetic_truth(51, 10, kTruthSeed, TruthProfile::CensusLike);
        return SyntheticRuns{simulate(truth, paper_config(MechanismFamily::Gaussian)),
                             simulate(truth, paper_config(MechanismFamily::Laplace))};
    }();
    return runs;
}

Outcome calibration() {
    const double s2 = std::pow(gaussian_sigma_from_moe(200, 0.90), 2);
    const double lambda = laplace_lambda_from_moe(200, 0.90);
    const double kl = kl_matched_gaussian_variance(86.86);
    const double kl_rel = std::abs(kl / (std::numbers::pi * 86.86 * 86.86 / 2) - 1);
    const bool ok = s2 >= 14775 && s2 <= 14790 && std::abs(lambda - 86.8589) <= 0.01 && kl_rel <= 1e-9;
    return {ok, fmt("sigma^2=%.2f", s2) + fmt(" lambda=%.5f", lambda) + fmt(" kl_rel_err=%.2e", kl_rel)};
}

Outcome sampler_support() {
    const auto& r = synthetic_runs();
    bool ok = true;
    std::string d;
    for (const auto* rep : {&r.gauss, &r.laplace}) {
        const bool rows = rep->rows.has_value() && rep->failures == 0;
        const double bad = rows ? rep->rows->mb.bad_pct : 100.0;
        ok = ok && rows && bad == 0.0;
        d += std::string(to_string(rep->mechanism.family())) + fmt(" MB BAD%%=%.3f ", bad) +
             fmt("failed=%.0f; ", static_cast<double>(rep->failures));
    }
    return {ok, d};
}

struct Regime {
    std::string name;
    std::vector<double> z;
};

Outcome oracle_equivalence() {
    const auto cs = ph5_system(10);
    const std::vector<Regime> regimes = {
        {"high", {3000, 5000, 2000}}, {"medium", {500, 800, 400}}, {"low", {-50, 300, 100}}};
    bool ok = true;
    std::ostringstream d;
    double min_p = 1.0;
    std::uint64_t seed = 1;
    for (auto family : {MechanismFamily::Gaussian, MechanismFamily::Laplace}) {
        const MechanismSpec spec = mechanism_from_moe(family, 200, 0.90);
        for (const auto& reg : regimes) {
            const NoisyMeasurement z(reg.z, spec, reg.name);
            ChainConfig cfg;
            cfg.seed = seed++;
            const auto mcmc = sample_posterior(z, cs, cfg);
            ChainConfig oc;
            oc.n_draws = 10000;
            oc.burn_in = 0;
            oc.seed = seed++;
            const auto exact = rejection_sample(z, cs, oc, 50000000);
            for (std::size_t j = 0; j < 3; ++j) {
                const auto a = mcmc.column(j);
                const auto b = exact.column(j);
                const double ess = effective_sample_size(a);
                const auto step = static_cast<std::size_t>(std::ceil(static_cast<double>(a.size()) / ess));
                const auto ks = oracle::ks_two_sample(oracle::every(a, step), b);
                const double se = std::hypot(std::sqrt(oracle::variance(a) / ess),
                                             std::sqrt(oracle::variance(b) / static_cast<double>(b.size())));
                const double gap = std::abs(oracle::mean(a) - oracle::mean(b)) / se;
                min_p = std::min(min_p, ks.p_value);
                if (ks.p_value <= 0.001 || gap >= 3.0) {
                    ok = false;
                    d << to_string(family) << "/" << reg.name << "/y" << j << " p=" << ks.p_value << " gap=" << gap
                      << "SE; ";
                }
            }
            d << to_string(family) << "/" << reg.name << " oracle-acc=" << fmt("%.3f", exact.acceptance_rate())
              << " ";
        }
    }
    d << "min KS p=" << fmt("%.4f", min_p);
    return {ok, d.str()};
}

Outcome utility_ordering() {
    const auto& r = synthetic_runs();
    const auto& g = *r.gauss.rows;
    const auto& l = *r.laplace.rows;
    const double ratio_g = g.mb.rmse / g.nm.rmse;
    const double ratio_l = l.mb.rmse / l.nm.rmse;
    const bool ok = ratio_g < 0.8 && ratio_l < 0.8 && g.mb.len && g.nm.len && *g.mb.len < *g.nm.len;
    return {ok, fmt("RMSE MB/NM gauss=%.3f", ratio_g) + fmt(" laplace=%.3f", ratio_l) +
                    fmt("; LEN MB=%.3f", g.mb.len.value_or(NAN)) + fmt(" Fieller=%.3f", g.nm.len.value_or(NAN))};
}

Outcome violation_existence() {
    const auto& r = synthetic_runs();
    bool ok = true;
    std::string d;
    for (const auto* rep : {&r.gauss, &r.laplace}) {
        const auto& nm = rep->rows->nm;
        ok = ok && nm.bad_pct > 0 && (nm.min < 0 || nm.max > 10);
        d += std::string(to_string(rep->mechanism.family())) + fmt(" NM BAD%%=%.2f", nm.bad_pct) +
             fmt(" MIN=%.2f", nm.min) + fmt(" MAX=%.2f; ", nm.max);
    }
    return {ok, d};
}

Outcome coverage() {
    // 10^4 replicate strata with truths well inside the polytope relative to sigma.
    SyntheticParams params;
    params.bulk_min_fhh = 2000;
    params.bulk_max_fhh = 20000;
    const auto truth = generate_synthetic_truth(100, 100, kTruthSeed + 6, TruthProfile::Uniform, 10, params);
    auto cfg = paper_config(MechanismFamily::Gaussian);
    cfg.chain.n_draws = 4000;
    cfg.chain.burn_in = 200;
    const auto rep = simulate(truth, cfg);
    const double mb = rep.rows->mb.cov.value_or(NAN);
    const double nm = rep.rows->nm.cov.value_or(NAN);
    const bool ok = rep.failures == 0 && mb >= 84 && mb <= 95 && nm >= 84 && nm <= 95;
    return {ok, fmt("replicates=%.0f", static_cast<double>(truth.size())) + fmt(" MB COV=%.2f", mb) +
                    fmt(" Fieller COV=%.2f", nm)};
}

Outcome mh_health() {
    const auto& l = synthetic_runs().laplace;
    const double cov = l.rows->mb.cov.value_or(NAN);
    double min_acc = 1.0;
    for (const auto& s : l.strata) {
        min_acc = std::min(min_acc, s.acceptance_rate);
    }
    const bool ok = l.mean_acceptance > 0.5 && cov >= 82 && cov <= 95;
    return {ok, fmt("mean acceptance=%.3f", l.mean_acceptance) + fmt(" (min %.3f)", min_acc) +
                    fmt("; Laplace MB COV=%.2f", cov)};
}

Outcome micro_checks() {
    RandomStream rng(8);
    double s = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        s += sample_truncated_std_normal(0, kInf, rng);
    }
    const double half = s / n;
    const double half_err = std::abs(half - std::sqrt(2 / std::numbers::pi));

    bool in_bounds = true;
    double m1 = 0;
    double m2 = 0;
    for (int i = 0; i < n; ++i) {
        const double x = sample_truncated_std_normal(8, 9, rng);
        in_bounds = in_bounds && std::isfinite(x) && x >= 8 && x <= 9;
        m1 += x;
        m2 += x * x;
    }
    m1 /= n;
    m2 /= n;
    auto phi = [](double t) { return std::exp(-0.5 * t * t); };
    const double zc = oracle::simpson(phi, 8, 9);
    const double e1 = oracle::simpson([&](double t) { return t * phi(t); }, 8, 9) / zc;
    const double e2 = oracle::simpson([&](double t) { return t * t * phi(t); }, 8, 9) / zc;
    const double r1 = std::abs(m1 / e1 - 1);
    const double r2 = std::abs(m2 / e2 - 1);
    const bool ok = half_err <= 0.01 && in_bounds && r1 <= 0.01 && r2 <= 0.01;
    return {ok, fmt("half-normal mean=%.5f", half) + fmt(" (err %.5f)", half_err) + fmt("; [8,9] moment errs %.2e", r1) +
                    fmt(" / %.2e", r2) + (in_bounds ? " in-bounds" : " OUT-OF-BOUNDS")};
}

Outcome determinism() {
    const auto truth = generate_synthetic_truth(51, 10, kTruthSeed, TruthProfile::CensusLike);
    const std::vector<Tabulation> subset(truth.begin(), truth.begin() + 60);
    bool ok = true;
    std::string d;
    for (auto family : {MechanismFamily::Gaussian, MechanismFamily::Laplace}) {
        auto cfg = paper_config(family);
        cfg.chain.n_draws = 2000;
        cfg.threads = 1;
        const auto a = simulate(subset, cfg);
        const auto b = simulate(subset, cfg);
        cfg.threads = 4;
        const auto c = simulate(subset, cfg);
        const bool same = report_csv(a) == report_csv(b) && detail_csv(a) == detail_csv(b) &&
                          report_csv(a) == report_csv(c) && detail_csv(a) == detail_csv(c);
        ok = ok && same;
        d += std::string(to_string(family)) + (same ? " identical; " : " DIFFER; ");
    }
    return {ok, d + "60 strata, runs at 1, 1 and 4 threads"};
}

}  // namespace

int main() {
    report(1, "calibration", calibration);
    report(2, "sampler support (510 strata, both mechanisms)", sampler_support);
    report(3, "oracle equivalence (KS + means, 3 regimes)", oracle_equivalence);
    report(4, "utility ordering", utility_ordering);
    report(5, "violation existence", violation_existence);
    report(6, "coverage (Gaussian MB and Fieller)", coverage);
    report(7, "MH health", mh_health);
    report(8, "closed-form micro-checks", micro_checks);
    report(9, "determinism", determinism);
    std::printf("%d of 9 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
