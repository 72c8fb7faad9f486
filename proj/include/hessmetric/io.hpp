#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "hessmetric/hessian.hpp"
#include "hessmetric/profile.hpp"

namespace hessmetric::io {

// Writes through a temporary file in the same directory and renames it into place.
void write_file_atomic(const std::string& path, const std::string& contents);
std::string read_file(const std::string& path);

// Shortest decimal form that parses back to the same double.
std::string format_double(double x);

nlohmann::json profile_to_json(const core::RadialProfile& g);
// The coordinate field may be omitted when a fallback is given.
core::RadialProfile profile_from_json(const nlohmann::json& j, const std::string& where = "profile",
                                      std::optional<core::Coordinate> fallback = std::nullopt);

nlohmann::json measure_to_json(const calculus::AtomicMeasure& mu);
calculus::AtomicMeasure measure_from_json(const nlohmann::json& j, const std::string& where = "measure");

// Parses text, reporting syntax errors with line and column.
nlohmann::json parse_json(const std::string& text, const std::string& source);

}  // namespace hessmetric::io
