#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace dppost {

// The single source of randomness. Every variate is derived from the raw
// 64-bit output of std::mt19937_64, whose sequence the standard fixes, through
// transforms implemented here, so a seed reproduces bit-identical streams on
// any conforming platform (std:: distributions are not portable and are unused).
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed), seed_(seed) {}

    std::uint64_t seed() const noexcept { return seed_; }

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on the open interval (0, 1) with 53-bit resolution.
    double uniform();

    // Standard normal by inversion of uniform().
    double normal();

    // Standard exponential by inversion.
    double exponential();

    // Laplace(0, scale) by inversion.
    double laplace(double scale);

private:
    std::mt19937_64 engine_;
    std::uint64_t seed_;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

// 64-bit FNV-1a over the key bytes.
std::uint64_t fnv1a64(std::string_view key) noexcept;

// Sub-seed for a named work unit: splitmix64(master ^ splitmix64(fnv1a64(key))).
// Depends only on (master, key), so adding strata never perturbs other strata.
std::uint64_t derive_seed(std::uint64_t master, std::string_view key) noexcept;

}  // namespace dppost
