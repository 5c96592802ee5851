#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "nk/koch.hpp"
#include "nk/symbols.hpp"

namespace nk {

inline constexpr std::string_view kToolName = "nonlocal-koch";
inline constexpr std::string_view kToolVersion = "0.1.0";

// Symbols serialize to flat JSON objects, e.g. {"kind":"stable","alpha":0.5}.
// Compound Poisson carries its jump law: {"kind":"compound_poisson",
// "rate":2.0,"jump":{"law":"exponential","rate":1.0}}.
nlohmann::json symbol_to_json(const BernsteinSymbol& sym);
BernsteinSymbol symbol_from_json(const nlohmann::json& j);

JumpLaw jump_law_from_json(const nlohmann::json& j);

// Domain descriptor consumed by the walker: vertices, walls, metadata.
nlohmann::json domain_to_json(const PrefractalDomain& dom);
PrefractalDomain domain_from_json(const nlohmann::json& j);

// SVG with the viewBox normalized to the bounding box; walls drawn in a
// distinct stroke.
std::string domain_to_svg(const PrefractalDomain& dom);
std::string curve_to_svg(const std::vector<Vec2>& points);
std::string paths_to_svg(const std::vector<std::vector<Vec2>>& traces,
                         const std::vector<Vec2>& boundary,
                         const std::vector<Segment>& walls);

std::uint64_t fnv1a64(std::string_view data);

// "# tool=nonlocal-koch version=... config=<hex hash>" comment line placed
// before the CSV header row.
std::string csv_provenance_line(std::uint64_t config_hash);

std::string format_double(double v);  // shortest round-trip decimal, C locale

}  // namespace nk
