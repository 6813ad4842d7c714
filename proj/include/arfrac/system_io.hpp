#pragma once

// JSON documents describing fractal systems:
//
//   { "space": "int" | "gauss" | "affq" | "projq" | "ec",
//     "dim": n,                     // affq / projq only
//     "curve": ["a1","a2","a3","a4","a6"],   // ec only
//     "maps": [...], "seeds": [...], "label": "..." }
//
// Integers are decimal strings (JSON numbers are accepted too), rationals
// "p/q", Gaussian integers [a, b], polynomials lists of
// {"coeff": "p/q", "exponents": [e1, ..., en]} records. Map records per space:
//   int   {"a": "10", "b": "1"}
//   gauss {"a": [1, 1], "b": [0, 0]}
//   affq  {"components": [poly, ...]}
//   projq {"forms": [poly, ...]}
//   ec    {"n": 2, "translation": ["x", "y"] | "inf"}

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "arfrac/spaces.hpp"

namespace arfrac {

/// Corpus metadata carried alongside a system; absent fields stay empty.
struct SystemMetadata {
  std::optional<double> expected_dimension;
  std::optional<bool> exact;
  std::string notes;
};

struct LoadedSystem {
  FractalSystem system;
  SystemMetadata metadata;
};

/// Throws Error(ConfigParse) on malformed documents.
LoadedSystem system_from_json(const nlohmann::json& doc);
nlohmann::json system_to_json(const FractalSystem& system, const SystemMetadata& metadata = {});

/// Throws Error(MissingFile) or Error(ConfigParse).
LoadedSystem load_system(const std::filesystem::path& path);

nlohmann::json point_to_json(const SpacePoint& p);

}  // namespace arfrac
