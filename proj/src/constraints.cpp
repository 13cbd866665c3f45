#include "dppost/constraints.hpp"

#include "dppost/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace dppost {

bool is_feasible(std::span<const double> y, const ConstraintSystem& cs, double tol) {
    validate_dimensions(y.size(), cs);
    for (std::size_t k = 0; k < cs.rows(); ++k) {
        const double v = cs.row_value(k, y);
        if (!(v >= cs.lower()[k] - tol && v <= cs.upper()[k] + tol)) {
            return false;
        }
    }
    return true;
}

bool is_feasible(std::span<const double> y, const ConstraintSystem& cs) {
    validate_dimensions(y.size(), cs);
    for (std::size_t k = 0; k < cs.rows(); ++k) {
        const double v = cs.row_value(k, y);
        const double tol = kRelativeFeasibilityTol * (1.0 + std::fabs(v));
        if (!(v >= cs.lower()[k] - tol && v <= cs.upper()[k] + tol)) {
            return false;
        }
    }
    return true;
}

ConstraintSystem ph5_system(int kappa) {
    if (kappa < 2) {
        throw std::invalid_argument("ph5_system: kappa must be at least 2");
    }
    const double k = static_cast<double>(kappa);
    return ConstraintSystem({0.0, 0.0, 1.0, 0.0, 0.0}, {kInf, kInf, kInf, kInf, kInf},
                            Matrix::from_rows({{1.0, 0.0, 0.0},
                                               {0.0, 1.0, 0.0},
                                               {0.0, 0.0, 1.0},
                                               {1.0, 1.0, -2.0},
                                               {-1.0, -1.0, k}}));
}

std::optional<int> ph5_kappa(const ConstraintSystem& cs) {
    if (cs.rows() != 5 || cs.dimension() != 3) {
        return std::nullopt;
    }
    const double k = cs.matrix()(4, 2);
    if (!(k >= 2.0) || k != std::floor(k) || k > 1e9) {
        return std::nullopt;
    }
    const int kappa = static_cast<int>(k);
    if (cs == ph5_system(kappa)) {
        return kappa;
    }
    return std::nullopt;
}

namespace {

// Feasible range of y[j] implied by row k alone (d = D[k, j] != 0).
Interval row_interval(std::size_t k, std::size_t j, std::span<const double> y, const ConstraintSystem& cs) {
    const auto row = cs.matrix().row(k);
    double rest = 0.0;
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i != j) {
            rest += row[i] * y[i];
        }
    }
    const double d = row[j];
    double lo = (cs.lower()[k] - rest) / d;
    double hi = (cs.upper()[k] - rest) / d;
    if (d < 0.0) {
        std::swap(lo, hi);
    }
    return {lo, hi};
}

double interior_point(const Interval& iv) {
    const bool lo_finite = std::isfinite(iv.low);
    const bool hi_finite = std::isfinite(iv.high);
    if (lo_finite && hi_finite) {
        return iv.low + 0.5 * (iv.high - iv.low);
    }
    if (lo_finite) {
        return iv.low + 1.0 + 0.5 * std::fabs(iv.low);
    }
    if (hi_finite) {
        return iv.high - 1.0 - 0.5 * std::fabs(iv.high);
    }
    return 0.0;
}

}  // namespace

Interval coordinate_interval_unchecked(std::size_t j, std::span<const double> y, const ConstraintSystem& cs) {
    Interval out{-kInf, kInf};
    for (std::size_t k = 0; k < cs.rows(); ++k) {
        if (cs.matrix()(k, j) == 0.0) {
            continue;
        }
        const Interval r = row_interval(k, j, y, cs);
        out.low = std::max(out.low, r.low);
        out.high = std::min(out.high, r.high);
    }
    // Rounding in the row sums can shave the current value off a face it sits on.
    out.low = std::min(out.low, y[j]);
    out.high = std::max(out.high, y[j]);
    return out;
}

Interval coordinate_interval(std::size_t j, std::span<const double> y, const ConstraintSystem& cs) {
    validate_dimensions(y.size(), cs);
    if (j >= cs.dimension()) {
        throw std::out_of_range("coordinate_interval: coordinate index out of range");
    }
    if (!is_feasible(y, cs)) {
        throw InfeasibleState("coordinate_interval: state violates the constraint system");
    }
    return coordinate_interval_unchecked(j, y, cs);
}

namespace {

std::optional<std::vector<double>> project_cyclic(std::vector<double> y, const ConstraintSystem& cs, double margin,
                                                  std::size_t sweeps) {
    for (std::size_t it = 0; it < sweeps; ++it) {
        for (std::size_t k = 0; k < cs.rows(); ++k) {
            const auto row = cs.matrix().row(k);
            const double norm2 = std::inner_product(row.begin(), row.end(), row.begin(), 0.0);
            const double v = cs.row_value(k, y);
            const double l = cs.lower()[k];
            const double u = cs.upper()[k];
            const double lo = std::isfinite(l) ? l + margin * (1.0 + std::abs(l)) : l;
            const double hi = std::isfinite(u) ? u - margin * (1.0 + std::abs(u)) : u;
            double shift = 0.0;
            if (v < lo) {
                shift = (lo - v) / norm2;
            } else if (v > hi) {
                shift = (hi - v) / norm2;
            }
            for (std::size_t j = 0; j < y.size(); ++j) {
                y[j] += shift * row[j];
            }
        }
        if (is_feasible(y, cs, 0.0)) {
            return y;
        }
    }
    return std::nullopt;
}

}  // namespace

std::vector<double> find_feasible_start(std::span<const double> z, const ConstraintSystem& cs,
                                        std::size_t max_iter) {
    validate_dimensions(z.size(), cs);
    const std::size_t m = cs.dimension();
    std::vector<double> y(z.begin(), z.end());

    // Clip to single-coordinate (box) rows.
    for (std::size_t k = 0; k < cs.rows(); ++k) {
        const auto row = cs.matrix().row(k);
        const auto nz = std::count_if(row.begin(), row.end(), [](double v) { return v != 0.0; });
        if (nz != 1) {
            continue;
        }
        const std::size_t j = static_cast<std::size_t>(
            std::find_if(row.begin(), row.end(), [](double v) { return v != 0.0; }) - row.begin());
        double lo = cs.lower()[k] / row[j];
        double hi = cs.upper()[k] / row[j];
        if (row[j] < 0.0) {
            std::swap(lo, hi);
        }
        y[j] = std::clamp(y[j], lo, std::max(lo, hi));
    }
    if (is_feasible(y, cs, 0.0)) {
        return y;
    }

    for (std::size_t iter = 0; iter < max_iter; ++iter) {
        for (std::size_t j = 0; j < m; ++j) {
            // Relaxed interval: rows that would empty the intersection are skipped.
            Interval iv{-kInf, kInf};
            for (std::size_t k = 0; k < cs.rows(); ++k) {
                if (cs.matrix()(k, j) == 0.0) {
                    continue;
                }
                const Interval r = row_interval(k, j, y, cs);
                const Interval next{std::max(iv.low, r.low), std::min(iv.high, r.high)};
                if (next.low <= next.high) {
                    iv = next;
                }
            }
            if (!(iv.low < y[j] && y[j] < iv.high)) {
                y[j] = interior_point(iv);
            }
        }
        if (is_feasible(y, cs, 0.0)) {
            return y;
        }
    }

    // Coordinate repair can stall where no single coordinate can fix a row
    // without breaking another; cyclic projection onto the half-spaces moves
    // all coordinates at once. Bounds are first shifted inward so the limit is
    // strictly feasible, then used as-is for polytopes thinner than the shift.
    for (double margin : {1e-7, 0.0}) {
        if (const auto p = project_cyclic(y, cs, margin, 20 * max_iter)) {
            return *p;
        }
    }

    if (const auto kappa = ph5_kappa(cs)) {
        const double fhh = std::max(1.0, z[2]);
        std::vector<double> seed{fhh, fhh, fhh};
        if (is_feasible(seed, cs, 0.0)) {
            return seed;
        }
    }
    throw NoFeasiblePoint("find_feasible_start: no feasible point found after " + std::to_string(max_iter) +
                          " repair cycles");
}

}  // namespace dppost
