#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "arfrac/spaces.hpp"

namespace arfrac {

/// Multiplicative size (|m|, Norm, or Weil height H) kept exact, and
/// log(max(raw, 1)) for the analyses that need a real number.
struct SizeValue {
  Integer raw;
  double log_size = 0.0;
};

struct BagEntry {
  SpacePoint point;
  SizeValue size;
  unsigned depth = 0;
  std::string key;                    // encode(point)
  std::optional<std::size_t> parent;  // index of the point it was first produced from
  std::size_t via_map = 0;            // map that produced it from `parent`
};

/// Finite window of a fractal: canonical, deduplicated points sorted by
/// (raw size, canonical encoding), every size <= bound.
struct PointBag {
  std::string label;
  Integer bound;
  std::vector<BagEntry> points;
  bool truncated = false;

  /// Sorts, remaps parents and rebuilds the key index.
  void finalize();
  std::optional<std::size_t> find(const std::string& key) const;
  std::optional<std::size_t> find(const SpacePoint& p) const { return find(encode(p)); }
  bool contains(const SpacePoint& p) const { return find(p).has_value(); }
  std::size_t size() const noexcept { return points.size(); }

 private:
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace arfrac
