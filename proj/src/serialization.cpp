#include "dppost/serialization.hpp"

#include "dppost/errors.hpp"

#include <cmath>
#include <fstream>
#include <limits>

namespace dppost {

using nlohmann::json;

namespace {

const json& field(const json& j, const char* name) {
    if (!j.is_object()) {
        throw SchemaError(std::string("expected a JSON object holding '") + name + "'");
    }
    const auto it = j.find(name);
    if (it == j.end()) {
        throw SchemaError(std::string("missing field '") + name + "'");
    }
    return *it;
}

json encode_reals(std::span<const double> values) {
    json out = json::array();
    for (double v : values) {
        out.push_back(encode_real(v));
    }
    return out;
}

std::vector<double> decode_reals(const json& j, const char* what) {
    if (!j.is_array()) {
        throw SchemaError(std::string("'") + what + "' must be an array");
    }
    std::vector<double> out;
    out.reserve(j.size());
    for (const auto& v : j) {
        out.push_back(decode_real(v));
    }
    return out;
}

template <typename T>
T get_as(const json& j, const char* name) {
    try {
        return field(j, name).get<T>();
    } catch (const json::exception& e) {
        throw SchemaError(std::string("field '") + name + "': " + e.what());
    }
}

}  // namespace

json encode_real(double v) {
    if (std::isnan(v)) {
        return nullptr;
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    return v;
}

double decode_real(const json& j) {
    if (j.is_number()) {
        return j.get<double>();
    }
    if (j.is_null()) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    if (j.is_string()) {
        const auto& s = j.get_ref<const std::string&>();
        if (s == "inf" || s == "+inf") {
            return kInf;
        }
        if (s == "-inf") {
            return -kInf;
        }
    }
    throw SchemaError("expected a number or \"inf\" / \"-inf\", got " + j.dump());
}

json to_json(const Tabulation& tab) {
    return {{"values", encode_reals(tab.values())}, {"labels", tab.labels()}, {"stratum", tab.stratum()}};
}

json to_json(const MechanismSpec& spec) {
    return {{"family", to_string(spec.family())}, {"scale", encode_real(spec.scale())},
            {"provenance", spec.provenance()}};
}

json to_json(const NoisyMeasurement& nm) {
    return {{"values", encode_reals(nm.values())}, {"mechanism", to_json(nm.mechanism())},
            {"stratum", nm.stratum()}};
}

json to_json(const ConstraintSystem& cs) {
    json matrix = json::array();
    for (std::size_t k = 0; k < cs.rows(); ++k) {
        matrix.push_back(encode_reals(cs.matrix().row(k)));
    }
    return {{"lower", encode_reals(cs.lower())}, {"upper", encode_reals(cs.upper())}, {"matrix", matrix}};
}

json to_json(const PosteriorDraws& draws) {
    return {{"n", draws.size()},
            {"m", draws.dimension()},
            {"draws", encode_reals(draws.data())},
            {"burn_in", draws.burn_in()},
            {"acceptance_rate", encode_real(draws.acceptance_rate())},
            {"seed", draws.seed()},
            {"stratum", draws.stratum()}};
}

json to_json(const RatioTriple& r) {
    return {{"under18", encode_real(r.under18)},
            {"over18", encode_real(r.over18)},
            {"total", encode_real(r.total)},
            {"blown_up", r.blown_up}};
}

Tabulation tabulation_from_json(const json& j) {
    return Tabulation(decode_reals(field(j, "values"), "values"), get_as<std::vector<std::string>>(j, "labels"),
                      get_as<std::string>(j, "stratum"));
}

MechanismSpec mechanism_from_json(const json& j) {
    try {
        return MechanismSpec(parse_family(get_as<std::string>(j, "family")), decode_real(field(j, "scale")),
                             get_as<std::string>(j, "provenance"));
    } catch (const std::invalid_argument& e) {
        throw SchemaError(std::string("mechanism: ") + e.what());
    }
}

NoisyMeasurement noisy_measurement_from_json(const json& j) {
    return NoisyMeasurement(decode_reals(field(j, "values"), "values"), mechanism_from_json(field(j, "mechanism")),
                            get_as<std::string>(j, "stratum"));
}

ConstraintSystem constraint_system_from_json(const json& j) {
    const auto& rows = field(j, "matrix");
    if (!rows.is_array()) {
        throw SchemaError("'matrix' must be an array of rows");
    }
    std::vector<std::vector<double>> matrix;
    for (const auto& r : rows) {
        matrix.push_back(decode_reals(r, "matrix row"));
    }
    try {
        return ConstraintSystem(decode_reals(field(j, "lower"), "lower"), decode_reals(field(j, "upper"), "upper"),
                                Matrix::from_rows(matrix));
    } catch (const SchemaError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw SchemaError(std::string("constraint system: ") + e.what());
    }
}

PosteriorDraws posterior_draws_from_json(const json& j) {
    return PosteriorDraws(get_as<std::size_t>(j, "n"), get_as<std::size_t>(j, "m"),
                          decode_reals(field(j, "draws"), "draws"), get_as<std::size_t>(j, "burn_in"),
                          decode_real(field(j, "acceptance_rate")), get_as<std::uint64_t>(j, "seed"),
                          get_as<std::string>(j, "stratum"));
}

RatioTriple ratio_triple_from_json(const json& j) {
    return {decode_real(field(j, "under18")), decode_real(field(j, "over18")), decode_real(field(j, "total")),
            get_as<bool>(j, "blown_up")};
}

ConstraintSystem load_constraint_system(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw SchemaError("cannot open constraint file '" + path + "'");
    }
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw SchemaError("constraint file '" + path + "': " + e.what());
    }
    return constraint_system_from_json(j);
}

}  // namespace dppost
