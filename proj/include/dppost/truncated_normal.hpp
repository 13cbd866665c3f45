#pragma once

#include "dppost/random.hpp"

namespace dppost {

// Standardized bound beyond which the tail samplers take over from inversion.
inline constexpr double kTailThreshold = 4.0;

// One exact draw from N(mean, sd^2) conditioned on [low, high].
//
// Let a, b be the standardized bounds. When a > 4 (or b < -4, by reflection)
// the draw comes from rejection sampling: a uniform proposal on [a, b] for
// narrow intervals, otherwise Robert's translated-exponential proposal with
// rate (a + sqrt(a^2 + 4)) / 2. Everything else is inverted through Phi on
// the side of zero that keeps the tail probabilities well conditioned.
// low == high returns that point; low > high throws EmptyInterval.
double sample_truncated_normal(double mean, double sd, double low, double high, RandomStream& rng);

// Standard-normal version on standardized bounds.
double sample_truncated_std_normal(double a, double b, RandomStream& rng);

}  // namespace dppost
