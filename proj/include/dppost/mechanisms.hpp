#pragma once

#include "dppost/random.hpp"
#include "dppost/types.hpp"

#include <span>

namespace dppost {

// Z = Y + e with e_i i.i.d. from the mechanism family; coordinate i consumes
// the i-th variate of the stream.
NoisyMeasurement add_noise(const Tabulation& tab, const MechanismSpec& spec, RandomStream& rng);

// sigma such that P(|e| <= moe) = level for e ~ N(0, sigma^2).
double gaussian_sigma_from_moe(double moe, double level);

// lambda such that P(|e| <= moe) = 1 - exp(-moe / lambda) = level.
double laplace_lambda_from_moe(double moe, double level);

double gaussian_moe_from_sigma(double sigma, double level);
double laplace_moe_from_lambda(double lambda, double level);

// Variance of the Gaussian closest in KL divergence to Laplace(0, lambda): pi * lambda^2 / 2.
double kl_matched_gaussian_variance(double lambda);

// MechanismSpec for a margin of error, recording the derivation as provenance.
MechanismSpec mechanism_from_moe(MechanismFamily family, double moe, double level);

// log f(z - y) up to a constant fixed by (family, scale).
double log_kernel(MechanismFamily family, double scale, double z, double y);

// Sum of log_kernel over coordinates: the log likelihood of Z given Y.
double log_likelihood(MechanismFamily family, double scale, std::span<const double> z,
                      std::span<const double> y);

}  // namespace dppost
