#pragma once

// How closely bag points approach a target relative to their heights:
// chordal distance on P^1(R), |x - t| on Z, hit lists d <= C e^(-delta h)
// and the exponent profile (-log d) / h.

#include <array>
#include <optional>
#include <string_view>
#include <vector>

#include "arfrac/point_bag.hpp"

namespace arfrac {

/// Either an exact rational point (a:b) or a real number known to within
/// `error` (for irrational targets). Real targets stand for (value:1).
struct ApproxTarget {
  std::optional<ProjectivePoint> exact;
  double value = 0.0;
  double error = 0.0;

  static ApproxTarget rational(const ProjectivePoint& p);
  static ApproxTarget real(double value, double error);
  std::string to_string() const;
};

/// "a:b" (components may be rationals "p/q"), "p/q", or "real:V:E".
/// Throws Error(ParseError) / Error(ZeroProjectivePoint).
ApproxTarget parse_target(std::string_view text);

/// |ad - bc| / (sqrt(a^2+b^2) sqrt(c^2+d^2)) from exact integers.
/// Throws Error(ZeroProjectivePoint).
double chordal_distance(const ProjectivePoint& p, const ProjectivePoint& q);

/// Distance to a real target (v:1); exact up to double rounding of v.
double chordal_distance(const ProjectivePoint& p, double value);

/// log of chordal_distance, finite even when the distance underflows.
/// -infinity for equal points.
double log_chordal_distance(const ProjectivePoint& p, const ProjectivePoint& q);

struct ApproxRecord {
  SpacePoint point;
  double h = 0.0;
  double d = 0.0;
  double log_d = 0.0;
  /// Target uncertainty carried into d (0 for exact targets).
  double d_error = 0.0;
  bool exact_hit = false;
  /// (-log d) / h; meaningful only when !exact_hit and h > 0.
  double exponent = 0.0;
  bool has_exponent = false;
};

/// One record per bag point in bag order. Throws Error(UnsupportedSpace)
/// unless the bag lives on P^1(Q) or Z.
std::vector<ApproxRecord> approximation_records(const PointBag& bag, const ApproxTarget& target);

struct ApproximantsReport {
  double delta = 0.0;
  double c = 0.0;
  /// Records with d + d_error <= C e^(-delta h), sorted by h.
  std::vector<ApproxRecord> hits;
  /// Records where the target uncertainty decides the comparison.
  std::vector<ApproxRecord> undecided;
  double h_min = 0.0;
  double h_max = 0.0;
  std::array<std::size_t, 10> decile_hits{};
  /// No hits with h above the midpoint of [h_min, h_max].
  bool stabilized = false;
};

/// Throws Error(InvalidArgument) unless delta > 0 and C > 0.
ApproximantsReport approximants(const PointBag& bag, const ApproxTarget& target, double delta, double c);

struct ExponentLevel {
  double h = 0.0;
  double level_max = 0.0;    // best exponent among points of this height
  double running_max = 0.0;  // best exponent at heights <= h
  double suffix_max = 0.0;   // best exponent at heights >= h
};

struct ExponentProfile {
  double max_exponent = 0.0;
  std::vector<ExponentLevel> levels;
  /// Intercept A of level_max ~ A + B/h fitted over the upper half of the
  /// height range: the exponent with the O(1/h) constant removed.
  double tail_exponent = 0.0;
  double tail_slope = 0.0;
  /// level_max at the largest height.
  double last_level = 0.0;
};

/// Throws Error(InsufficientData) with fewer than 2 heights in the upper half.
ExponentProfile approximation_exponent_profile(const PointBag& bag, const ApproxTarget& target);

}  // namespace arfrac
