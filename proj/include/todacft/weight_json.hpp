#pragma once

#include <string>

#include <json.hpp>

#include "todacft/root_system.hpp"

namespace toda {

enum class WeightBasis { Omega, Root, Euclid };

// {"basis": "omega" | "root" | "euclid", "coords": [x, y]}
nlohmann::json weight_to_json(const WeightVector& v, WeightBasis basis = WeightBasis::Omega);
// Throws Error(InvalidArgument) on a malformed document.
WeightVector weight_from_json(const nlohmann::json& j);
WeightVector weight_from_json_text(const std::string& text);

const char* basis_name(WeightBasis b);

}  // namespace toda
