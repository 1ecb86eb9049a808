#pragma once

#include <string>

#include <json.hpp>

#include "capdim/core_model.hpp"
#include "capdim/dims.hpp"

namespace capdim {

/// {"C": int, "M": "num/den", "points": [..], "functions": [{"name", "values": [[..] per point]}]}.
/// Rationals may be "a/b" strings, terminating decimals, or JSON integers.
[[nodiscard]] FiniteFunctionClass class_from_json(const nlohmann::json& doc);
[[nodiscard]] nlohmann::json class_to_json(const FiniteFunctionClass& G);
[[nodiscard]] FiniteFunctionClass load_class(const std::string& path);

[[nodiscard]] Rational rational_from_json(const nlohmann::json& v);

/// Dichotomies print as strings of '+' and '-' in point order.
[[nodiscard]] std::string dichotomy_string(Dichotomy s, std::size_t n);
[[nodiscard]] nlohmann::json certificate_to_json(const ShatterCertificate& cert);

}  // namespace capdim
