#include "dppost/synthetic.hpp"

#include "dppost/csv_io.hpp"
#include "dppost/random.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace dppost {

TruthProfile parse_profile(const std::string& name) {
    std::string key;
    for (char c : name) {
        if (c != '-' && c != '_') {
            key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        }
    }
    if (key == "uniform") {
        return TruthProfile::Uniform;
    }
    if (key == "censuslike") {
        return TruthProfile::CensusLike;
    }
    throw std::invalid_argument("unknown truth profile '" + name + "'");
}

const char* to_string(TruthProfile profile) noexcept {
    return profile == TruthProfile::Uniform ? "uniform" : "census-like";
}

namespace {

double uniform_between(RandomStream& rng, double lo, double hi) { return lo + (hi - lo) * rng.uniform(); }

double log_uniform_between(RandomStream& rng, double lo, double hi) {
    return std::exp(uniform_between(rng, std::log(lo), std::log(hi)));
}

void check_params(const SyntheticParams& p, int kappa) {
    if (kappa < 2) {
        throw std::invalid_argument("synthetic truth: kappa must be at least 2");
    }
    if (!(p.tail_fraction >= 0.0 && p.tail_fraction <= 1.0)) {
        throw std::invalid_argument("synthetic truth: tail_fraction must lie in [0, 1]");
    }
    if (!(p.tail_min_fhh >= 1.0 && p.tail_max_fhh > p.tail_min_fhh && p.bulk_min_fhh >= 1.0 && p.bulk_max_fhh >= p.bulk_min_fhh)) {
        throw std::invalid_argument("synthetic truth: inconsistent household ranges");
    }
    if (!(p.min_family_size >= 2.0 && p.max_family_size >= p.min_family_size)) {
        throw std::invalid_argument("synthetic truth: family size range must start at 2 or above");
    }
    if (!(p.min_child_share >= 0.0 && p.max_child_share <= 1.0 && p.max_child_share >= p.min_child_share)) {
        throw std::invalid_argument("synthetic truth: child share range must lie in [0, 1]");
    }
}

}  // namespace

std::vector<Tabulation> generate_synthetic_truth(std::size_t n_geo, std::size_t n_iter, std::uint64_t seed,
                                                 TruthProfile profile, int kappa, const SyntheticParams& params) {
    check_params(params, kappa);
    const std::size_t n = n_geo * n_iter;
    RandomStream rng(seed);

    std::vector<bool> tail(n, false);
    if (profile == TruthProfile::CensusLike && n > 0) {
        std::vector<std::size_t> order(n);
        for (std::size_t i = 0; i < n; ++i) {
            order[i] = i;
        }
        for (std::size_t i = n - 1; i > 0; --i) {
            const auto j = static_cast<std::size_t>(rng.uniform() * static_cast<double>(i + 1));
            std::swap(order[i], order[std::min(j, i)]);
        }
        const auto n_tail = static_cast<std::size_t>(std::ceil(params.tail_fraction * static_cast<double>(n)));
        for (std::size_t i = 0; i < std::min(n_tail, n); ++i) {
            tail[order[i]] = true;
        }
    }

    const std::vector<std::string> labels(std::begin(kTruthColumns), std::end(kTruthColumns));
    std::vector<Tabulation> out;
    out.reserve(n);
    const double k = static_cast<double>(kappa);
    for (std::size_t g = 0; g < n_geo; ++g) {
        for (std::size_t it = 0; it < n_iter; ++it) {
            const std::size_t idx = g * n_iter + it;
            double fhh;
            if (profile == TruthProfile::Uniform) {
                fhh = uniform_between(rng, params.bulk_min_fhh, params.bulk_max_fhh);
            } else if (tail[idx]) {
                fhh = log_uniform_between(rng, params.tail_min_fhh, params.tail_max_fhh);
            } else {
                fhh = log_uniform_between(rng, params.bulk_min_fhh, params.bulk_max_fhh);
            }
            fhh = std::max(1.0, std::round(fhh));
            const double size = uniform_between(rng, params.min_family_size, params.max_family_size);
            const double persons = std::clamp(std::round(size * fhh), 2.0 * fhh, k * fhh);
            const double share = uniform_between(rng, params.min_child_share, params.max_child_share);
            const double under = std::round(share * persons);
            const double over = persons - under;

            char key[64];
            std::snprintf(key, sizeof key, "geo%02zu_iter%02zu", g + 1, it + 1);
            out.emplace_back(std::vector<double>{under, over, fhh}, labels, key);
        }
    }
    return out;
}

}  // namespace dppost
