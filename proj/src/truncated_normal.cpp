#include "dppost/truncated_normal.hpp"

#include "dppost/errors.hpp"
#include "dppost/normal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace dppost {

namespace {

// a > kTailThreshold, a < b (b may be +inf).
double upper_tail(double a, double b, RandomStream& rng) {
    if (b - a < 1.0 / a) {
        // Uniform proposal, acceptance >= exp(-(b - a)(b + a) / 2) > 0.35.
        for (;;) {
            const double z = a + (b - a) * rng.uniform();
            if (rng.uniform() <= std::exp(0.5 * (a - z) * (a + z))) {
                return z;
            }
        }
    }
    const double alpha = 0.5 * (a + std::sqrt(a * a + 4.0));
    for (;;) {
        const double z = a + rng.exponential() / alpha;
        const double d = z - alpha;
        if (rng.uniform() <= std::exp(-0.5 * d * d) && z <= b) {
            return z;
        }
    }
}

double clamp_open_unit(double u) {
    return std::clamp(u, std::numeric_limits<double>::min(), std::nextafter(1.0, 0.0));
}

}  // namespace

double sample_truncated_std_normal(double a, double b, RandomStream& rng) {
    if (std::isnan(a) || std::isnan(b) || a > b) {
        throw EmptyInterval("truncated normal: empty interval [" + std::to_string(a) + ", " +
                            std::to_string(b) + "]");
    }
    if (a == b) {
        return a;
    }
    if (a > kTailThreshold) {
        return upper_tail(a, b, rng);
    }
    if (b < -kTailThreshold) {
        return -upper_tail(-b, -a, rng);
    }
    if (a < -10.0 && b > 10.0) {
        return std::clamp(rng.normal(), a, b);
    }
    double x;
    if (a >= 0.0) {
        const double pa = normal_sf(a);
        const double pb = normal_sf(b);
        x = -normal_quantile(clamp_open_unit(pb + rng.uniform() * (pa - pb)));
    } else {
        const double pa = normal_cdf(a);
        const double pb = normal_cdf(b);
        x = normal_quantile(clamp_open_unit(pa + rng.uniform() * (pb - pa)));
    }
    return std::clamp(x, a, b);
}

double sample_truncated_normal(double mean, double sd, double low, double high, RandomStream& rng) {
    if (!(sd > 0.0) || !std::isfinite(sd) || !std::isfinite(mean)) {
        throw std::invalid_argument("truncated normal: need finite mean and positive finite sd");
    }
    if (std::isnan(low) || std::isnan(high) || low > high) {
        throw EmptyInterval("truncated normal: empty interval [" + std::to_string(low) + ", " +
                            std::to_string(high) + "]");
    }
    if (low == high) {
        return low;
    }
    const double a = (low - mean) / sd;
    const double b = (high - mean) / sd;
    const double x = sample_truncated_std_normal(a, std::max(a, b), rng);
    return std::clamp(mean + sd * x, low, high);
}

}  // namespace dppost
