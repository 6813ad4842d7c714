#pragma once

// Counting functions N(x) over a size-sorted bag, log-log growth fits and
// the windowed boundedness test for h(x) = x^(-s) N(x).

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "arfrac/point_bag.hpp"

namespace arfrac {

/// How grid values are compared to bag sizes. The first three compare the
/// raw size to floor(x); LogHeight compares it to floor(exp(x)), so the grid
/// lives in log-height units. CanonicalHeight is used by elliptic counts.
enum class SizeKind { Abs, Norm, Height, LogHeight, CanonicalHeight };

std::string_view to_string(SizeKind kind);

/// Abs for Z, Norm for Z[i], LogHeight otherwise.
SizeKind default_size_kind(SpaceKind space);

struct CountTable {
  std::vector<double> grid;
  std::vector<std::uint64_t> counts;
  SizeKind kind = SizeKind::Abs;
};

/// Exact counts by binary search. Throws Error(InvalidArgument) for a grid
/// that is not increasing and Error(GridExceedsBound) past the bag bound.
CountTable counting_function(const PointBag& bag, std::span<const double> grid, SizeKind kind);

struct FitWindow {
  double xmin = 0.0;
  double xmax = 0.0;
};

struct GrowthFit {
  double exponent = 0.0;
  double intercept = 0.0;
  double rmse = 0.0;
  FitWindow window;
  std::size_t points = 0;
};

/// Least squares on (log x, log N) over grid points with N >= 2 and x > 0
/// inside the window. Throws Error(InsufficientData) below 3 points.
GrowthFit fit_growth_exponent(const CountTable& table, std::optional<FitWindow> window = std::nullopt);

/// lo, lo*f, lo*f^2, ... up to hi (hi itself when it is within 1e-9).
std::vector<double> geometric_grid(double lo, double hi, double factor);
std::vector<double> linear_grid(double lo, double hi, std::size_t count);

/// Midpoints between consecutive distinct sizes of the bag (log sizes for
/// LogHeight) inside [lo, hi]. Step counts sampled between the jumps.
std::vector<double> midpoint_grid(const PointBag& bag, SizeKind kind, double lo, double hi);

/// "geometric:F", "linear:N", "midpoints" or a comma-separated list.
/// Throws Error(ParseError).
std::vector<double> parse_grid(std::string_view spec, const PointBag& bag, SizeKind kind, double lo, double hi);

enum class BoundDirection { Upper, Lower };

std::string_view to_string(BoundDirection direction);

struct LemmaThresholds {
  /// Tail extreme allowed relative to the median of the first half.
  double ratio = 2.0;
  /// A monotone tail whose end/start ratio exceeds this is growth, not noise.
  double trend_ratio = 1.25;
};

struct LemmaVerdict {
  double s = 0.0;
  BoundDirection direction = BoundDirection::Upper;
  std::vector<double> h_sequence;
  double head_median = 0.0;
  double tail_extreme = 0.0;
  /// h(last) / h(first tail point); > 1 means the tail is rising.
  double monotone_tail_ratio = 1.0;
  bool tail_monotone = false;
  LemmaThresholds thresholds;
  bool bounded = false;
};

/// h(x) = x^(-s) N(x) along the grid, split into a head (first half) and a
/// tail. Upper: bounded iff max(tail) <= ratio * median(head) and the tail
/// is not a steady climb past trend_ratio. Lower is the mirror image.
/// Throws Error(InvalidArgument) for s <= 0 or fewer than 4 grid points.
LemmaVerdict lemma_bound_check(const CountTable& table, double s, BoundDirection direction,
                               const LemmaThresholds& thresholds = {});

}  // namespace arfrac
