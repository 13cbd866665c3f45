#include "dppost/constraints.hpp"
#include "dppost/errors.hpp"
#include "dppost/mechanisms.hpp"
#include "dppost/metrics.hpp"
#include "dppost/random.hpp"

#include "stat_oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

using namespace dppost;

namespace {

using Vec = std::vector<double>;
const std::vector<std::string> kLabels = {"Y18minus", "Y18plus", "YFHH"};
const double kSigma2 = 14782.0;
const double kQ90 = 1.6448536269514722;

PosteriorDraws draws_of(const std::vector<Vec>& rows, const std::string& stratum = {}) {
    Vec flat;
    for (const auto& r : rows) {
        flat.insert(flat.end(), r.begin(), r.end());
    }
    return PosteriorDraws(rows.size(), rows.front().size(), flat, 0, 1.0, 0, stratum);
}

// Fieller's pivot at r: (num - r den)^2 / (var_num + r^2 var_den).
double pivot(double num, double den, double vn, double vd, double r) {
    return (num - r * den) * (num - r * den) / (vn + r * r * vd);
}

}  // namespace

TEST(RatioTriple, Examples) {
    const auto t = ratio_triple(Vec{87, 214, 100});
    EXPECT_DOUBLE_EQ(t.under18, 0.87);
    EXPECT_DOUBLE_EQ(t.over18, 2.14);
    EXPECT_DOUBLE_EQ(t.total, 3.01);
    EXPECT_FALSE(t.blown_up);

    const auto neg = ratio_triple(Vec{10, 10, -2});
    EXPECT_EQ(neg.under18, -5.0);
    EXPECT_EQ(neg.over18, -5.0);
    EXPECT_EQ(neg.total, -10.0);
}

TEST(RatioTriple, ZeroDenominatorIsFlagged) {
    const auto t = ratio_triple(Vec{3, 4, 0});
    EXPECT_TRUE(t.blown_up);
    EXPECT_TRUE(std::isnan(t.total));
    EXPECT_THROW(ratio_triple(Vec{1, 2}), DimensionMismatch);
}

TEST(RatioTriple, PublishedReferenceRow) {
    // A published state row rounds to (0.87, 2.14, 3.02); the total is the sum of
    // the two components up to the publication rounding.
    const double under = 0.87;
    const double over = 2.14;
    const double total = 3.02;
    EXPECT_NEAR(under + over, total, 0.01 + 1e-12);
    // Any count vector that rounds to the row is feasible under PH5.
    const Vec y{8700, 21450, 10000};
    const auto t = ratio_triple(y);
    EXPECT_NEAR(t.under18, under, 0.005);
    EXPECT_NEAR(t.over18, over, 0.005);
    EXPECT_NEAR(t.total, total, 0.005);
    EXPECT_TRUE(is_feasible(y, ph5_system(10)));
}

TEST(SortedQuantile, LinearInterpolation) {
    const Vec x{1, 2, 3, 4, 5};
    EXPECT_EQ(sorted_quantile(x, 0.0), 1.0);
    EXPECT_EQ(sorted_quantile(x, 1.0), 5.0);
    EXPECT_DOUBLE_EQ(sorted_quantile(x, 0.5), 3.0);
    EXPECT_DOUBLE_EQ(sorted_quantile(x, 0.1), 1.4);
    EXPECT_THROW(sorted_quantile(Vec{}, 0.5), std::invalid_argument);
}

TEST(PosteriorRatioSummary, SingleDraw) {
    const auto s = posterior_ratio_summary(draws_of({{87, 214, 100}}), 0.9);
    EXPECT_DOUBLE_EQ(s.point.total, 3.01);
    for (const auto& iv : s.intervals) {
        EXPECT_EQ(iv.low, iv.high);
    }
    EXPECT_DOUBLE_EQ(s.intervals[0].low, 0.87);
}

TEST(PosteriorRatioSummary, DrawsOnFaceGiveTotalTwo) {
    std::vector<Vec> rows;
    RandomStream rng(3);
    for (int i = 0; i < 500; ++i) {
        const double fhh = 1 + 100 * rng.uniform();
        const double under = 2 * fhh * rng.uniform();
        rows.push_back({under, 2 * fhh - under, fhh});
    }
    const auto s = posterior_ratio_summary(draws_of(rows), 0.9);
    EXPECT_NEAR(s.point.total, 2.0, 1e-12);
    EXPECT_NEAR(s.intervals[2].low, 2.0, 1e-12);
    EXPECT_NEAR(s.intervals[2].high, 2.0, 1e-12);
}

TEST(PosteriorRatioSummary, EndpointsMatchSortOracle) {
    // Ratios y0 / 1 are symmetric about zero; with n = 10^4 and level 0.9 the
    // type-7 positions are 0.05 (n - 1) = 499.95 and 0.95 (n - 1) = 9499.05.
    RandomStream rng(4);
    std::vector<Vec> rows;
    Vec r;
    for (int i = 0; i < 10000; ++i) {
        const double v = rng.normal();
        rows.push_back({v, 1.0, 1.0});
        r.push_back(v);
    }
    std::sort(r.begin(), r.end());
    const double lo = r[499] + 0.95 * (r[500] - r[499]);
    const double hi = r[9499] + 0.05 * (r[9500] - r[9499]);
    const auto s = posterior_ratio_summary(draws_of(rows), 0.9);
    EXPECT_DOUBLE_EQ(s.intervals[0].low, lo);
    EXPECT_DOUBLE_EQ(s.intervals[0].high, hi);
}

TEST(PosteriorRatioSummary, IntervalsNest) {
    RandomStream rng(5);
    std::vector<Vec> rows;
    for (int i = 0; i < 2000; ++i) {
        rows.push_back({50 + 10 * rng.normal(), 100 + 20 * rng.normal(), 40 + 2 * rng.uniform()});
    }
    const auto d = draws_of(rows);
    const auto wide = posterior_ratio_summary(d, 0.9);
    const auto narrow = posterior_ratio_summary(d, 0.5);
    for (std::size_t k = 0; k < 3; ++k) {
        EXPECT_LE(wide.intervals[k].low, narrow.intervals[k].low);
        EXPECT_GE(wide.intervals[k].high, narrow.intervals[k].high);
    }
}

TEST(PosteriorRatioSummary, ReportsBothPointEstimates) {
    const auto s = posterior_ratio_summary(draws_of({{10, 10, 10}, {30, 30, 10}}), 0.9);
    EXPECT_DOUBLE_EQ(s.point.under18, 2.0);
    EXPECT_DOUBLE_EQ(s.ratio_of_means.under18, 2.0);
    EXPECT_EQ(s.mean_counts, (Vec{20, 20, 10}));
    const auto t = posterior_ratio_summary(draws_of({{10, 10, 5}, {10, 10, 20}}), 0.9);
    EXPECT_DOUBLE_EQ(t.point.under18, (2.0 + 0.5) / 2);
    EXPECT_DOUBLE_EQ(t.ratio_of_means.under18, 10.0 / 12.5);
}

TEST(Fieller, BoundariesSolveThePivot) {
    const auto iv = fieller_interval(1000, 500, kSigma2, 0.9);
    ASSERT_EQ(iv.shape, IntervalShape::Finite);
    EXPECT_TRUE(iv.covers(2.0));
    EXPECT_NEAR(pivot(1000, 500, kSigma2, kSigma2, iv.low), kQ90 * kQ90, 1e-9);
    EXPECT_NEAR(pivot(1000, 500, kSigma2, kSigma2, iv.high), kQ90 * kQ90, 1e-9);
    const auto total = fieller_interval(1000, 500, 2 * kSigma2, kSigma2, 0.9);
    EXPECT_NEAR(pivot(1000, 500, 2 * kSigma2, kSigma2, total.low), kQ90 * kQ90, 1e-9);
    EXPECT_GT(total.length(), iv.length());
}

TEST(Fieller, CoverageAtNominalLevel) {
    RandomStream rng(6);
    const double sd = std::sqrt(kSigma2);
    int covered = 0;
    int covered_total = 0;
    const int reps = 10000;
    for (int i = 0; i < reps; ++i) {
        const double num = 1000 + sd * rng.normal();
        const double den = 500 + sd * rng.normal();
        covered += fieller_interval(num, den, kSigma2, 0.9).covers(2.0) ? 1 : 0;
        const double num2 = 1000 + std::sqrt(2.0) * sd * rng.normal();
        covered_total += fieller_interval(num2, den, 2 * kSigma2, kSigma2, 0.9).covers(2.0) ? 1 : 0;
    }
    EXPECT_GE(100.0 * covered / reps, 88.5);
    EXPECT_LE(100.0 * covered / reps, 91.5);
    EXPECT_GE(100.0 * covered_total / reps, 88.5);
    EXPECT_LE(100.0 * covered_total / reps, 91.5);
}

TEST(Fieller, VanishingVarianceCollapsesToRatio) {
    const auto iv = fieller_interval(1000, 400, 1e-12, 0.9);
    EXPECT_NEAR(iv.low, 2.5, 1e-6);
    EXPECT_NEAR(iv.high, 2.5, 1e-6);
}

TEST(Fieller, DegenerateShapes) {
    EXPECT_EQ(fieller_interval(0, 0, kSigma2, 0.9).shape, IntervalShape::Unbounded);
    const auto ex = fieller_interval(1000, 50, kSigma2, 0.9);
    EXPECT_EQ(ex.shape, IntervalShape::Exclusive);
    EXPECT_FALSE(ex.covers(20.0));
    // The excluded gap holds the ratios the data reject.
    EXPECT_GT(pivot(1000, 50, kSigma2, kSigma2, 0.5 * (ex.low + ex.high)), kQ90 * kQ90);
    EXPECT_EQ(fieller_interval(10, 50, kSigma2, 0.9).shape, IntervalShape::Unbounded);
}

TEST(Fieller, FiniteIntervalsContainPointRatio) {
    RandomStream rng(7);
    for (int i = 0; i < 5000; ++i) {
        const double num = 2000 * rng.normal();
        const double den = 2000 * rng.normal();
        const auto iv = fieller_interval(num, den, kSigma2, 0.9);
        if (iv.is_finite()) {
            ASSERT_TRUE(iv.covers(num / den)) << num << "/" << den;
        }
    }
}

TEST(Fieller, RatioIntervalsRefuseLaplace) {
    const NoisyMeasurement z({1, 2, 3}, MechanismSpec(MechanismFamily::Laplace, 86.86));
    EXPECT_THROW(fieller_ratio_intervals(z, 0.9), std::invalid_argument);
    const NoisyMeasurement g({1000, 1500, 500}, MechanismSpec(MechanismFamily::Gaussian, std::sqrt(kSigma2)));
    const auto ivs = fieller_ratio_intervals(g, 0.9);
    EXPECT_TRUE(ivs[2].covers(5.0));
    EXPECT_NEAR(pivot(2500, 500, 2 * kSigma2, kSigma2, ivs[2].high), kQ90 * kQ90, 1e-9);
}

namespace {

struct Fixture {
    std::vector<Tabulation> truth;
    std::vector<NoisyMeasurement> nm;
    std::vector<PosteriorDraws> mb;
};

Fixture identity_fixture() {
    const MechanismSpec mech(MechanismFamily::Gaussian, std::sqrt(kSigma2));
    Fixture f;
    const std::vector<Vec> values = {{87, 214, 100}, {500, 800, 400}, {3000, 5000, 2000}};
    for (std::size_t i = 0; i < values.size(); ++i) {
        const std::string key = "s" + std::to_string(i);
        f.truth.emplace_back(values[i], kLabels, key);
        f.nm.emplace_back(values[i], mech, key);
        f.mb.push_back(draws_of({values[i]}, key));
    }
    return f;
}

}  // namespace

TEST(Evaluate, EstimatesEqualToTruth) {
    const auto f = identity_fixture();
    const auto rows = evaluate(f.truth, f.nm, f.mb, ph5_system(10), 0.9);
    EXPECT_EQ(rows.nm.rmse, 0.0);
    EXPECT_EQ(rows.mb.rmse, 0.0);
    EXPECT_EQ(rows.nm.bad_pct, 0.0);
    EXPECT_EQ(rows.mb.bad_pct, 0.0);
    EXPECT_DOUBLE_EQ(rows.mb.min, 0.87);
    EXPECT_DOUBLE_EQ(rows.mb.max, 4.0);
    EXPECT_EQ(rows.mb.cov, 100.0);
    EXPECT_EQ(rows.mb.len, 0.0);
    ASSERT_TRUE(rows.nm.cov.has_value());
    EXPECT_EQ(rows.nm.intervals, 9u);
}

TEST(Evaluate, HalfInfeasibleGivesFiftyPercent) {
    const MechanismSpec mech(MechanismFamily::Gaussian, std::sqrt(kSigma2));
    const std::vector<Tabulation> truth = {Tabulation({5, 10, 5}, kLabels, "a"), Tabulation({5, 10, 5}, kLabels, "b")};
    const std::vector<NoisyMeasurement> nm = {NoisyMeasurement({5, 10, 5}, mech, "a"),
                                              NoisyMeasurement({0, 1, 1}, mech, "b")};
    const std::vector<PosteriorDraws> mb = {draws_of({{5, 10, 5}}, "a"), draws_of({{5, 10, 5}}, "b")};
    EXPECT_DOUBLE_EQ(evaluate(truth, nm, mb, ph5_system(10), 0.9).nm.bad_pct, 50.0);
}

TEST(Evaluate, PooledRmseOverComponents) {
    const MechanismSpec mech(MechanismFamily::Laplace, 86.86);
    const std::vector<Tabulation> truth = {Tabulation({100, 200, 100}, kLabels, "a")};
    const std::vector<NoisyMeasurement> nm = {NoisyMeasurement({110, 200, 100}, mech, "a")};
    const std::vector<PosteriorDraws> mb = {draws_of({{100, 200, 100}}, "a")};
    const auto rows = evaluate(truth, nm, mb, ph5_system(10), 0.9);
    // Errors (0.1, 0, 0.1) pooled: sqrt(0.02 / 3).
    EXPECT_NEAR(rows.nm.rmse, std::sqrt(0.02 / 3), 1e-12);
    EXPECT_FALSE(rows.nm.cov.has_value());
    EXPECT_FALSE(rows.nm.len.has_value());
}

TEST(Evaluate, PermutationInvariant) {
    auto f = identity_fixture();
    // Perturb so the metrics are non-trivial.
    const MechanismSpec mech(MechanismFamily::Gaussian, std::sqrt(kSigma2));
    f.nm[0] = NoisyMeasurement({-20, 230, 90}, mech, "s0");
    f.nm[2] = NoisyMeasurement({3300, 4800, 2100}, mech, "s2");
    const auto a = evaluate(f.truth, f.nm, f.mb, ph5_system(10), 0.9);
    std::reverse(f.truth.begin(), f.truth.end());
    std::rotate(f.nm.begin(), f.nm.begin() + 1, f.nm.end());
    const auto b = evaluate(f.truth, f.nm, f.mb, ph5_system(10), 0.9);
    EXPECT_EQ(metrics_csv_row("Gauss", "NM", a.nm), metrics_csv_row("Gauss", "NM", b.nm));
    EXPECT_EQ(metrics_csv_row("Gauss", "MB", a.mb), metrics_csv_row("Gauss", "MB", b.mb));
    EXPECT_EQ(a.nm.rmse, b.nm.rmse);
}

TEST(Evaluate, UnalignedKeysAreRejected) {
    auto f = identity_fixture();
    f.mb[1] = draws_of({{500, 800, 400}}, "other");
    EXPECT_THROW(evaluate(f.truth, f.nm, f.mb, ph5_system(10), 0.9), KeyMismatch);
    f = identity_fixture();
    f.nm.pop_back();
    EXPECT_THROW(evaluate(f.truth, f.nm, f.mb, ph5_system(10), 0.9), KeyMismatch);
}

TEST(MetricsCsv, HeaderAndRow) {
    EXPECT_EQ(metrics_csv_header(), "Mechanism,Estimate,MIN,MAX,BAD%,RMSE,COV,LEN");
    MetricsRow row;
    row.min = 0.5;
    row.max = 4;
    row.bad_pct = 0;
    row.rmse = 0.25;
    EXPECT_EQ(metrics_csv_row("Laplace", "NM", row), "Laplace,NM,0.5,4,0,0.25,NA,NA");
}
