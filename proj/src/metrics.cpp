#include "dppost/metrics.hpp"

#include "dppost/constraints.hpp"
#include "dppost/errors.hpp"
#include "dppost/format.hpp"
#include "dppost/normal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

namespace dppost {

const char* to_string(IntervalShape shape) noexcept {
    switch (shape) {
        case IntervalShape::Finite: return "finite";
        case IntervalShape::Unbounded: return "unbounded";
        case IntervalShape::Exclusive: return "exclusive";
    }
    return "unknown";
}

RatioTriple ratio_triple(std::span<const double> y) {
    if (y.size() != 3) {
        throw DimensionMismatch(3, y.size());
    }
    if (y[2] == 0.0) {
        constexpr double nan = std::numeric_limits<double>::quiet_NaN();
        return {nan, nan, nan, true};
    }
    return {y[0] / y[2], y[1] / y[2], (y[0] + y[1]) / y[2], false};
}

double sorted_quantile(std::span<const double> sorted, double p) {
    if (sorted.empty()) {
        throw std::invalid_argument("sorted_quantile: empty sample");
    }
    const double h = static_cast<double>(sorted.size() - 1) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= sorted.size()) {
        return sorted.back();
    }
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

PosteriorRatioSummary posterior_ratio_summary(const PosteriorDraws& draws, double level) {
    if (!(level > 0.0 && level < 1.0)) {
        throw std::domain_error("posterior_ratio_summary: level must lie in (0, 1)");
    }
    if (draws.dimension() != 3) {
        throw DimensionMismatch(3, draws.dimension());
    }
    const std::size_t n = draws.size();
    std::array<std::vector<double>, 3> ratios;
    for (auto& r : ratios) {
        r.reserve(n);
    }
    bool blown = false;
    for (std::size_t i = 0; i < n; ++i) {
        const RatioTriple t = ratio_triple(draws.row(i));
        blown = blown || t.blown_up;
        for (std::size_t k = 0; k < 3; ++k) {
            ratios[k].push_back(t[k]);
        }
    }

    PosteriorRatioSummary out;
    out.mean_counts = draws.column_means();
    out.ratio_of_means = ratio_triple(out.mean_counts);
    std::array<double, 3> mean{};
    for (std::size_t k = 0; k < 3; ++k) {
        mean[k] = std::accumulate(ratios[k].begin(), ratios[k].end(), 0.0) / static_cast<double>(n);
    }
    out.point = {mean[0], mean[1], mean[2], blown};

    const double p_lo = 0.5 * (1.0 - level);
    const double p_hi = 0.5 * (1.0 + level);
    for (std::size_t k = 0; k < 3; ++k) {
        auto& r = ratios[k];
        std::sort(r.begin(), r.end());
        out.intervals[k] = IntervalEstimate{sorted_quantile(r, p_lo), sorted_quantile(r, p_hi), level,
                                            IntervalMethod::PosteriorPercentile, IntervalShape::Finite};
    }
    return out;
}

IntervalEstimate fieller_interval(double num, double den, double var_num, double var_den, double level) {
    if (!(level > 0.0 && level < 1.0)) {
        throw std::domain_error("fieller_interval: level must lie in (0, 1)");
    }
    if (!(var_num >= 0.0) || !(var_den >= 0.0)) {
        throw std::domain_error("fieller_interval: variances must be non-negative");
    }
    const double q = normal_quantile(0.5 * (1.0 + level));
    const double q2 = q * q;
    const double a = den * den - q2 * var_den;
    // Quarter discriminant of a r^2 - 2 num den r + c.
    const double disc = q2 * (var_den * num * num + var_num * den * den - q2 * var_num * var_den);
    IntervalEstimate out;
    out.level = level;
    out.method = IntervalMethod::Fieller;
    if (a > 0.0) {
        const double root = std::sqrt(std::max(disc, 0.0));
        out.low = (num * den - root) / a;
        out.high = (num * den + root) / a;
        out.shape = IntervalShape::Finite;
        return out;
    }
    if (a < 0.0 && disc >= 0.0) {
        const double root = std::sqrt(disc);
        const double r1 = (num * den - root) / a;
        const double r2 = (num * den + root) / a;
        out.low = std::min(r1, r2);
        out.high = std::max(r1, r2);
        out.shape = IntervalShape::Exclusive;
        return out;
    }
    out.low = -kInf;
    out.high = kInf;
    out.shape = IntervalShape::Unbounded;
    return out;
}

IntervalEstimate fieller_interval(double num, double den, double sigma2, double level) {
    return fieller_interval(num, den, sigma2, sigma2, level);
}

std::array<IntervalEstimate, 3> fieller_ratio_intervals(const NoisyMeasurement& z, double level) {
    if (z.mechanism().family() != MechanismFamily::Gaussian) {
        throw std::invalid_argument("Fieller intervals require a Gaussian mechanism");
    }
    if (z.size() != 3) {
        throw DimensionMismatch(3, z.size());
    }
    const auto v = z.values();
    const double s2 = z.mechanism().scale() * z.mechanism().scale();
    return {fieller_interval(v[0], v[2], s2, s2, level), fieller_interval(v[1], v[2], s2, s2, level),
            fieller_interval(v[0] + v[1], v[2], 2.0 * s2, s2, level)};
}

namespace {

struct Accumulator {
    double min = kInf;
    double max = -kInf;
    std::size_t bad = 0;
    double sq_err = 0.0;
    std::size_t scored = 0;
    std::size_t covered = 0;
    std::size_t intervals = 0;
    double len_sum = 0.0;
    std::size_t finite_intervals = 0;
    std::size_t unbounded = 0;
    std::size_t exclusive = 0;
    std::size_t blown_up = 0;

    void add_point(const RatioTriple& est, const RatioTriple& truth) {
        if (est.blown_up) {
            ++blown_up;
            return;
        }
        for (std::size_t k = 0; k < 3; ++k) {
            min = std::min(min, est[k]);
            max = std::max(max, est[k]);
            const double e = est[k] - truth[k];
            sq_err += e * e;
            ++scored;
        }
    }

    void add_intervals(const std::array<IntervalEstimate, 3>& ivs, const RatioTriple& truth) {
        for (std::size_t k = 0; k < 3; ++k) {
            const auto& iv = ivs[k];
            ++intervals;
            covered += iv.covers(truth[k]) ? 1 : 0;
            switch (iv.shape) {
                case IntervalShape::Finite:
                    len_sum += iv.length();
                    ++finite_intervals;
                    break;
                case IntervalShape::Unbounded: ++unbounded; break;
                case IntervalShape::Exclusive: ++exclusive; break;
            }
        }
    }

    MetricsRow finish(std::size_t strata, bool with_intervals) const {
        MetricsRow row;
        row.strata = strata;
        row.min = scored ? min : std::numeric_limits<double>::quiet_NaN();
        row.max = scored ? max : std::numeric_limits<double>::quiet_NaN();
        row.bad_pct = strata ? 100.0 * static_cast<double>(bad) / static_cast<double>(strata) : 0.0;
        row.rmse = scored ? std::sqrt(sq_err / static_cast<double>(scored)) : 0.0;
        row.blown_up = blown_up;
        if (with_intervals && intervals > 0) {
            row.cov = 100.0 * static_cast<double>(covered) / static_cast<double>(intervals);
            if (finite_intervals > 0) {
                row.len = len_sum / static_cast<double>(finite_intervals);
            }
            row.intervals = intervals;
            row.unbounded = unbounded;
            row.exclusive = exclusive;
        }
        return row;
    }
};

}  // namespace

EvaluationRows evaluate(const std::vector<StratumEstimate>& strata, const ConstraintSystem& cs) {
    std::vector<std::size_t> order(strata.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return strata[a].stratum < strata[b].stratum; });
    for (std::size_t i = 1; i < order.size(); ++i) {
        if (strata[order[i]].stratum == strata[order[i - 1]].stratum) {
            throw KeyMismatch("evaluate: duplicate stratum '" + strata[order[i]].stratum + "'");
        }
    }

    Accumulator nm;
    Accumulator mb;
    bool nm_intervals = !strata.empty();
    for (std::size_t idx : order) {
        const auto& s = strata[idx];
        validate_dimensions(s.noisy.size(), cs);
        const RatioTriple truth = ratio_triple(s.truth);

        nm.add_point(ratio_triple(s.noisy), truth);
        nm.bad += is_feasible(s.noisy, cs) ? 0 : 1;
        if (s.nm_intervals) {
            nm.add_intervals(*s.nm_intervals, truth);
        } else {
            nm_intervals = false;
        }

        mb.add_point(s.mb.point, truth);
        mb.bad += is_feasible(s.mb.mean_counts, cs) ? 0 : 1;
        mb.add_intervals(s.mb.intervals, truth);
    }
    return {nm.finish(strata.size(), nm_intervals), mb.finish(strata.size(), true)};
}

EvaluationRows evaluate(const std::vector<Tabulation>& truth, const std::vector<NoisyMeasurement>& nm,
                        const std::vector<PosteriorDraws>& mb, const ConstraintSystem& cs, double level) {
    std::map<Stratum, std::size_t> nm_index;
    std::map<Stratum, std::size_t> mb_index;
    for (std::size_t i = 0; i < nm.size(); ++i) {
        if (!nm_index.emplace(nm[i].stratum(), i).second) {
            throw KeyMismatch("evaluate: duplicate noisy-measurement stratum '" + nm[i].stratum() + "'");
        }
    }
    for (std::size_t i = 0; i < mb.size(); ++i) {
        if (!mb_index.emplace(mb[i].stratum(), i).second) {
            throw KeyMismatch("evaluate: duplicate posterior stratum '" + mb[i].stratum() + "'");
        }
    }
    if (nm.size() != truth.size() || mb.size() != truth.size()) {
        throw KeyMismatch("evaluate: truth, noisy and posterior lists differ in length");
    }

    std::vector<StratumEstimate> strata;
    strata.reserve(truth.size());
    for (const auto& t : truth) {
        const auto n_it = nm_index.find(t.stratum());
        const auto m_it = mb_index.find(t.stratum());
        if (n_it == nm_index.end() || m_it == mb_index.end()) {
            throw KeyMismatch("evaluate: stratum '" + t.stratum() + "' is not present in every list");
        }
        const NoisyMeasurement& z = nm[n_it->second];
        StratumEstimate s;
        s.stratum = t.stratum();
        s.truth.assign(t.values().begin(), t.values().end());
        s.noisy.assign(z.values().begin(), z.values().end());
        if (z.mechanism().family() == MechanismFamily::Gaussian) {
            s.nm_intervals = fieller_ratio_intervals(z, level);
        }
        s.mb = posterior_ratio_summary(mb[m_it->second], level);
        strata.push_back(std::move(s));
    }
    return evaluate(strata, cs);
}

std::string metrics_csv_header() { return "Mechanism,Estimate,MIN,MAX,BAD%,RMSE,COV,LEN"; }

std::string metrics_csv_row(const std::string& mechanism, const std::string& estimate, const MetricsRow& row) {
    return mechanism + "," + estimate + "," + format_number(row.min) + "," + format_number(row.max) + "," +
           format_number(row.bad_pct) + "," + format_number(row.rmse) + "," + format_number(row.cov) + "," +
           format_number(row.len);
}

}  // namespace dppost
