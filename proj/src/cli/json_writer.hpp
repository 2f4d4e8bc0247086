// json_writer.hpp: byte-stable JSON and CSV text

#pragma once

#include <string>

#include <json.hpp>

namespace weylchsh::cli {

// Shortest text of the double at 17 significant digits; "null" for non-finite.
std::string format_double(double x);

// Keys in insertion order, doubles through format_double, two-space indent.
std::string write_json(const nlohmann::ordered_json& j);

} // namespace weylchsh::cli
