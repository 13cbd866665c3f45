#pragma once

#include "dppost/types.hpp"

#include <array>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace dppost {

enum class IntervalMethod { PosteriorPercentile, Fieller };

// Finite: [low, high]. Exclusive: the complement of (low, high).
// Unbounded: the whole real line (low/high are -inf/+inf).
enum class IntervalShape { Finite, Unbounded, Exclusive };

const char* to_string(IntervalShape shape) noexcept;

struct IntervalEstimate {
    double low = 0.0;
    double high = 0.0;
    double level = 0.9;
    IntervalMethod method = IntervalMethod::PosteriorPercentile;
    IntervalShape shape = IntervalShape::Finite;

    bool is_finite() const noexcept { return shape == IntervalShape::Finite; }
    // Only finite intervals count as covering.
    bool covers(double value) const noexcept { return is_finite() && low <= value && value <= high; }
    double length() const noexcept { return high - low; }
};

struct MetricsRow {
    double min = 0.0;
    double max = 0.0;
    double bad_pct = 0.0;
    double rmse = 0.0;
    std::optional<double> cov;  // percent
    std::optional<double> len;

    std::size_t strata = 0;
    std::size_t blown_up = 0;    // zero-denominator ratio triples, left out of MIN/MAX/RMSE
    std::size_t intervals = 0;   // intervals scored for COV
    std::size_t unbounded = 0;   // Fieller outcomes counted as non-covering, excluded from LEN
    std::size_t exclusive = 0;
};

// (y0 / y2, y1 / y2, (y0 + y1) / y2) for y ordered (Y18-, Y18+, YFHH).
RatioTriple ratio_triple(std::span<const double> y);

// Linear-interpolation quantile (the R type 7 / NumPy default) of sorted data.
double sorted_quantile(std::span<const double> sorted, double p);

struct PosteriorRatioSummary {
    RatioTriple point;           // mean of the per-draw ratios (headline estimate)
    RatioTriple ratio_of_means;  // ratios of the posterior-mean counts
    std::vector<double> mean_counts;
    std::array<IntervalEstimate, 3> intervals;
};

// Percentile intervals at ((1 - level) / 2, (1 + level) / 2) of each ratio's draws.
PosteriorRatioSummary posterior_ratio_summary(const PosteriorDraws& draws, double level);

// Fieller confidence set for num/den, both Gaussian and independent with
// variances var_num and var_den: the roots of
// (den^2 - q^2 var_den) r^2 - 2 num den r + (num^2 - q^2 var_num) = 0, q = Phi^{-1}((1 + level) / 2).
IntervalEstimate fieller_interval(double num, double den, double var_num, double var_den, double level);

// Common-variance form.
IntervalEstimate fieller_interval(double num, double den, double sigma2, double level);

// Fieller sets for the three PH5 ratios of a Gaussian measurement; the total
// ratio's numerator carries variance 2 sigma^2. Laplace measurements are refused.
std::array<IntervalEstimate, 3> fieller_ratio_intervals(const NoisyMeasurement& z, double level);

// Everything evaluate() needs from one stratum.
struct StratumEstimate {
    Stratum stratum;
    std::vector<double> truth;
    std::vector<double> noisy;
    std::optional<std::array<IntervalEstimate, 3>> nm_intervals;  // absent for Laplace
    PosteriorRatioSummary mb;
};

struct EvaluationRows {
    MetricsRow nm;
    MetricsRow mb;
};

// Table 2 metrics over strata. Aggregation runs in stratum-key order, so the
// result does not depend on the input order.
EvaluationRows evaluate(const std::vector<StratumEstimate>& strata, const ConstraintSystem& cs);

// Aligns the three lists by stratum key (KeyMismatch otherwise) and evaluates.
EvaluationRows evaluate(const std::vector<Tabulation>& truth, const std::vector<NoisyMeasurement>& nm,
                        const std::vector<PosteriorDraws>& mb, const ConstraintSystem& cs, double level);

std::string metrics_csv_header();
std::string metrics_csv_row(const std::string& mechanism, const std::string& estimate, const MetricsRow& row);

}  // namespace dppost
