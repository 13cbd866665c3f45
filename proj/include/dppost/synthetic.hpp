#pragma once

#include "dppost/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace dppost {

enum class TruthProfile { Uniform, CensusLike };

TruthProfile parse_profile(const std::string& name);
const char* to_string(TruthProfile profile) noexcept;

// Knobs of the synthetic truth generator.
//
// CensusLike: ceil(tail_fraction * n) strata, chosen by a seeded shuffle, get
// YFHH log-uniform on [tail_min_fhh, tail_max_fhh); the rest are log-uniform on
// [bulk_min_fhh, bulk_max_fhh]. Uniform: every stratum is uniform on
// [bulk_min_fhh, bulk_max_fhh]. In both, persons = round(size * YFHH) with
// size uniform on [min_family_size, max_family_size], clamped to
// [2 YFHH, kappa YFHH]; Y18- = round(share * persons) with share uniform on
// [min_child_share, max_child_share]; Y18+ = persons - Y18-. Counts are integers.
struct SyntheticParams {
    double tail_fraction = 0.10;
    double tail_min_fhh = 50.0;
    double tail_max_fhh = 200.0;
    double bulk_min_fhh = 200.0;
    double bulk_max_fhh = 1e6;
    double min_family_size = 2.3;
    double max_family_size = 4.0;
    double min_child_share = 0.2;
    double max_child_share = 0.4;
};

// n_geo * n_iter strata keyed "geoGG_iterII", each feasible under ph5_system(kappa).
std::vector<Tabulation> generate_synthetic_truth(std::size_t n_geo, std::size_t n_iter, std::uint64_t seed,
                                                 TruthProfile profile, int kappa = 10,
                                                 const SyntheticParams& params = {});

}  // namespace dppost
