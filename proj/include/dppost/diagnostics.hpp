#pragma once

#include "dppost/types.hpp"

#include <span>

namespace dppost {

// Geyer's initial positive sequence estimate of the effective sample size.
// The result is clamped to [1, n]: a constant chain reports 1, and
// antithetic chains whose autocorrelation sum would give ESS > n report n.
// Requires n >= 10.
double effective_sample_size(std::span<const double> chain);
double effective_sample_size(const PosteriorDraws& draws, std::size_t coordinate);

}  // namespace dppost
