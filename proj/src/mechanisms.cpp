#include "dppost/mechanisms.hpp"

#include "dppost/errors.hpp"
#include "dppost/normal.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

namespace dppost {

namespace {

void check_level(double level) {
    if (!(level > 0.0 && level < 1.0)) {
        throw std::domain_error("confidence level must lie in (0, 1)");
    }
}

void check_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw std::domain_error(std::string(what) + " must be positive and finite");
    }
}

}  // namespace

NoisyMeasurement add_noise(const Tabulation& tab, const MechanismSpec& spec, RandomStream& rng) {
    std::vector<double> z(tab.values().begin(), tab.values().end());
    const double scale = spec.scale();
    for (double& v : z) {
        v += spec.family() == MechanismFamily::Gaussian ? scale * rng.normal() : rng.laplace(scale);
    }
    return NoisyMeasurement(std::move(z), spec, tab.stratum());
}

double gaussian_sigma_from_moe(double moe, double level) {
    check_level(level);
    check_positive(moe, "margin of error");
    return moe / normal_quantile(0.5 * (1.0 + level));
}

double laplace_lambda_from_moe(double moe, double level) {
    check_level(level);
    check_positive(moe, "margin of error");
    return moe / -std::log1p(-level);
}

double gaussian_moe_from_sigma(double sigma, double level) {
    check_level(level);
    check_positive(sigma, "sigma");
    return sigma * normal_quantile(0.5 * (1.0 + level));
}

double laplace_moe_from_lambda(double lambda, double level) {
    check_level(level);
    check_positive(lambda, "lambda");
    return lambda * -std::log1p(-level);
}

double kl_matched_gaussian_variance(double lambda) {
    check_positive(lambda, "lambda");
    return std::numbers::pi * lambda * lambda / 2.0;
}

MechanismSpec mechanism_from_moe(MechanismFamily family, double moe, double level) {
    const double scale = family == MechanismFamily::Gaussian ? gaussian_sigma_from_moe(moe, level)
                                                             : laplace_lambda_from_moe(moe, level);
    char buf[128];
    std::snprintf(buf, sizeof buf, "moe %.10g at level %.10g", moe, level);
    return MechanismSpec(family, scale, buf);
}

double log_kernel(MechanismFamily family, double scale, double z, double y) {
    const double r = (z - y) / scale;
    if (family == MechanismFamily::Gaussian) {
        return -0.5 * r * r;
    }
    return -std::fabs(r);
}

double log_likelihood(MechanismFamily family, double scale, std::span<const double> z,
                      std::span<const double> y) {
    if (z.size() != y.size()) {
        throw DimensionMismatch(z.size(), y.size());
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        acc += log_kernel(family, scale, z[i], y[i]);
    }
    return acc;
}

}  // namespace dppost
