#pragma once

#include "dppost/random.hpp"
#include "dppost/types.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace dppost {

struct ChainConfig {
    std::size_t n_draws = 10000;
    std::size_t burn_in = 500;
    std::size_t thin = 1;
    std::uint64_t seed = 0;

    void validate() const;
};

// Sweeps of the internal Gibbs chain between consecutive MH proposals.
inline constexpr std::size_t kDefaultRefreshSweeps = 25;

// Systematic-scan Gibbs for N(center, sd^2 I) truncated to a polytope. Each
// coordinate is redrawn from its univariate conditional on coordinate_interval.
// Updates keep the state feasible with zero tolerance: draws on a finite
// endpoint move inward by 1e-12 of the interval width, and a draw that still
// breaks a row through rounding is bisected back toward the previous value.
class TruncatedGaussianGibbs {
public:
    TruncatedGaussianGibbs(std::span<const double> center, double sd, const ConstraintSystem& cs);

    void sweep(std::vector<double>& y, RandomStream& rng) const;

private:
    void update(std::size_t j, std::vector<double>& y, RandomStream& rng) const;
    bool rows_hold(std::size_t j, std::span<const double> y) const;

    std::vector<double> center_;
    double sd_;
    ConstraintSystem cs_;
    std::vector<std::vector<std::size_t>> rows_by_column_;
};

// Exact Gibbs sampler for the Gaussian-mechanism posterior. acceptance_rate is 1.
PosteriorDraws gibbs_tmvn(const NoisyMeasurement& z, const ConstraintSystem& cs, double sigma,
                          const ChainConfig& cfg);

// i.i.d. draws Y = z + noise kept when feasible; works for either family.
// Throws AcceptanceTooLow when max_attempts run out before n_draws are kept.
PosteriorDraws rejection_sample(const NoisyMeasurement& z, const ConstraintSystem& cs, const ChainConfig& cfg,
                                std::size_t max_attempts);

// log of [target(y') proposal(y)] / [target(y) proposal(y')].
double log_acceptance_ratio(double log_target_proposed, double log_proposal_proposed, double log_target_current,
                            double log_proposal_current) noexcept;

struct IndependenceMhOptions {
    MechanismFamily target_family = MechanismFamily::Laplace;
    double target_scale = 1.0;
    double proposal_sd = 1.0;
    std::size_t refresh_sweeps = kDefaultRefreshSweeps;
};

// Independence Metropolis-Hastings with a truncated Gaussian proposal centred
// at z. Proposals come from a Gibbs chain advanced refresh_sweeps sweeps per
// proposal; both densities share the polytope as support, so the truncation
// constants cancel and only the untruncated kernels enter the ratio.
PosteriorDraws mh_independence(const NoisyMeasurement& z, const ConstraintSystem& cs,
                               const IndependenceMhOptions& options, const ChainConfig& cfg);

// Laplace-mechanism posterior with the KL-matched proposal variance pi * lambda^2 / 2.
PosteriorDraws mh_laplace(const NoisyMeasurement& z, const ConstraintSystem& cs, double lambda,
                          const ChainConfig& cfg, std::size_t refresh_sweeps = kDefaultRefreshSweeps);

// Dispatches on the mechanism family: Gibbs for Gaussian, MH for Laplace.
PosteriorDraws sample_posterior(const NoisyMeasurement& z, const ConstraintSystem& cs, const ChainConfig& cfg,
                                std::size_t refresh_sweeps = kDefaultRefreshSweeps);

}  // namespace dppost
