#pragma once

#include "dppost/types.hpp"

#include <optional>
#include <span>
#include <vector>

namespace dppost {

// Per-row slack used when no explicit tolerance is given: 1e-9 * (1 + |row value|).
inline constexpr double kRelativeFeasibilityTol = 1e-9;

// lower[k] - tol <= (D y)[k] <= upper[k] + tol for every row.
bool is_feasible(std::span<const double> y, const ConstraintSystem& cs, double tol);

// As above with the relative-absolute default tolerance.
bool is_feasible(std::span<const double> y, const ConstraintSystem& cs);

// Coordinate order is (Y18-, Y18+, YFHH).
ConstraintSystem ph5_system(int kappa);

// kappa if cs is exactly ph5_system(kappa) for some kappa >= 2.
std::optional<int> ph5_kappa(const ConstraintSystem& cs);

struct Interval {
    double low;
    double high;

    bool contains(double v) const noexcept { return low <= v && v <= high; }
    double width() const noexcept { return high - low; }
};

// Largest interval of values for y[j] that keeps y feasible with the other
// coordinates held fixed. y must be feasible under the default tolerance.
Interval coordinate_interval(std::size_t j, std::span<const double> y, const ConstraintSystem& cs);

// Same computation without the feasibility precondition; used by the samplers'
// hot loop, where the state is feasible by construction.
Interval coordinate_interval_unchecked(std::size_t j, std::span<const double> y, const ConstraintSystem& cs);

// A point with is_feasible(y, cs, 0) true, found by box clipping, then cyclic
// midpoint repair, then cyclic projection onto the violated half-spaces; PH5
// systems finally fall back to an analytic seed. Throws NoFeasiblePoint.
std::vector<double> find_feasible_start(std::span<const double> z, const ConstraintSystem& cs,
                                        std::size_t max_iter = 100);

}  // namespace dppost
