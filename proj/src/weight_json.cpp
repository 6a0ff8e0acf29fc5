#include "todacft/weight_json.hpp"

#include <cmath>

#include "todacft/errors.hpp"

namespace toda {

const char* basis_name(WeightBasis b) {
    switch (b) {
        case WeightBasis::Omega: return "omega";
        case WeightBasis::Root: return "root";
        case WeightBasis::Euclid: return "euclid";
    }
    return "omega";
}

nlohmann::json weight_to_json(const WeightVector& v, WeightBasis basis) {
    std::array<double, 2> c{v.x, v.y};
    if (basis == WeightBasis::Omega) c = v.omega_coords();
    if (basis == WeightBasis::Root) c = v.root_coords();
    return {{"basis", basis_name(basis)}, {"coords", {c[0], c[1]}}};
}

WeightVector weight_from_json(const nlohmann::json& j) {
    auto fail = [](const std::string& why) { throw Error(ErrorCode::InvalidArgument, "weight JSON: " + why); };
    if (!j.is_object()) fail("expected an object");
    if (!j.contains("basis") || !j["basis"].is_string()) fail("missing string field \"basis\"");
    if (!j.contains("coords") || !j["coords"].is_array() || j["coords"].size() != 2) fail("\"coords\" must be [x, y]");
    for (const auto& c : j["coords"]) {
        if (!c.is_number()) fail("coordinates must be numbers");
    }
    const double a = j["coords"][0].get<double>(), b = j["coords"][1].get<double>();
    if (!std::isfinite(a) || !std::isfinite(b)) fail("coordinates must be finite");
    const std::string basis = j["basis"].get<std::string>();
    if (basis == "omega") return WeightVector::from_omegas(a, b);
    if (basis == "root") return WeightVector::from_roots(a, b);
    if (basis == "euclid") return {a, b};
    fail("unknown basis \"" + basis + "\"");
    return {};
}

WeightVector weight_from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::InvalidArgument, std::string("weight JSON: ") + e.what());
    }
    return weight_from_json(j);
}

}  // namespace toda
