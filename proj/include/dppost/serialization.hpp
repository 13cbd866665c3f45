#pragma once

#include "dppost/types.hpp"

#include "json.hpp"

#include <string>

namespace dppost {

// Reals are JSON numbers except +inf / -inf, which are the strings "inf" and
// "-inf", and NaN, which is null. Finite doubles round-trip bit-exactly.
nlohmann::json encode_real(double v);
double decode_real(const nlohmann::json& j);

nlohmann::json to_json(const Tabulation& tab);
nlohmann::json to_json(const MechanismSpec& spec);
nlohmann::json to_json(const NoisyMeasurement& nm);
nlohmann::json to_json(const ConstraintSystem& cs);
nlohmann::json to_json(const PosteriorDraws& draws);
nlohmann::json to_json(const RatioTriple& ratios);

// Decoders throw SchemaError on missing or mistyped fields.
Tabulation tabulation_from_json(const nlohmann::json& j);
MechanismSpec mechanism_from_json(const nlohmann::json& j);
NoisyMeasurement noisy_measurement_from_json(const nlohmann::json& j);
ConstraintSystem constraint_system_from_json(const nlohmann::json& j);
PosteriorDraws posterior_draws_from_json(const nlohmann::json& j);
RatioTriple ratio_triple_from_json(const nlohmann::json& j);

// {"lower": [...], "upper": [...], "matrix": [[...], ...]}
ConstraintSystem load_constraint_system(const std::string& path);

}  // namespace dppost
