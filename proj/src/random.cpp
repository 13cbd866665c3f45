#include "dppost/random.hpp"

#include "dppost/normal.hpp"

#include <cmath>

namespace dppost {

double RandomStream::uniform() {
    // (k + 0.5) / 2^53 for k in [0, 2^53): never 0, never 1.
    const std::uint64_t k = engine_() >> 11;
    return (static_cast<double>(k) + 0.5) * 0x1.0p-53;
}

double RandomStream::normal() { return normal_quantile(uniform()); }

double RandomStream::exponential() { return -std::log(uniform()); }

double RandomStream::laplace(double scale) {
    const double u = uniform() - 0.5;
    // Inverse CDF: -scale * sgn(u) * ln(1 - 2|u|).
    const double magnitude = -scale * std::log1p(-2.0 * std::fabs(u));
    return u < 0.0 ? -magnitude : magnitude;
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view key) noexcept {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : key) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

std::uint64_t derive_seed(std::uint64_t master, std::string_view key) noexcept {
    return splitmix64(master ^ splitmix64(fnv1a64(key)));
}

}  // namespace dppost
