#include "dppost/diagnostics.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace dppost {

namespace {

double autocovariance(std::span<const double> x, double mean, std::size_t lag) {
    const std::size_t n = x.size();
    double acc = 0.0;
    for (std::size_t t = 0; t + lag < n; ++t) {
        acc += (x[t] - mean) * (x[t + lag] - mean);
    }
    return acc / static_cast<double>(n);
}

}  // namespace

double effective_sample_size(std::span<const double> chain) {
    const std::size_t n = chain.size();
    if (n < 10) {
        throw std::invalid_argument("effective_sample_size: need at least 10 draws");
    }
    double mean = 0.0;
    for (double v : chain) {
        mean += v;
    }
    mean /= static_cast<double>(n);

    const double gamma0 = autocovariance(chain, mean, 0);
    const auto [lo, hi] = std::minmax_element(chain.begin(), chain.end());
    if (*lo == *hi || !(gamma0 > 0.0)) {
        return 1.0;
    }
    // tau = -1 + 2 * sum_m (rho_{2m} + rho_{2m+1}) over the initial positive pairs.
    double pair_sum = 0.0;
    for (std::size_t lag = 0; lag + 1 < n; lag += 2) {
        const double pair = autocovariance(chain, mean, lag) + autocovariance(chain, mean, lag + 1);
        if (!(pair > 0.0)) {
            break;
        }
        pair_sum += pair;
    }
    const double tau = -1.0 + 2.0 * pair_sum / gamma0;
    const double ess = tau > 0.0 ? static_cast<double>(n) / tau : static_cast<double>(n);
    return std::clamp(ess, 1.0, static_cast<double>(n));
}

double effective_sample_size(const PosteriorDraws& draws, std::size_t coordinate) {
    if (coordinate >= draws.dimension()) {
        throw std::out_of_range("effective_sample_size: coordinate out of range");
    }
    const std::vector<double> col = draws.column(coordinate);
    return effective_sample_size(col);
}

}  // namespace dppost
