#pragma once

namespace dppost {

// Standard normal CDF, Phi(x).
double normal_cdf(double x);

// Upper tail 1 - Phi(x), accurate far into the tail.
double normal_sf(double x);

// Phi^{-1}(p) for p in (0, 1).
double normal_quantile(double p);

double normal_log_pdf(double x);

}  // namespace dppost
