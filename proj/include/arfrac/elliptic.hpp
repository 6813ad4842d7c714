#pragma once

// Neron-Tate height by the doubling limit 4^-m h(x(2^m P)), the
// parallelogram law and rank-1 point counts by canonical height.

#include <cstdint>
#include <vector>

#include "arfrac/elliptic_curve.hpp"
#include "arfrac/growth.hpp"

namespace arfrac {

/// Weil height log max(|num|, |den|) of a rational.
double weil_height(const Rational& x);

/// x(2P) from x(P) alone. Requires 2P != infinity.
Rational double_x(const Curve& curve, const Rational& x);

/// Smallest n in [1, 12] with nP = infinity, or 0 (non-torsion over Q).
unsigned torsion_order(const Curve& curve, const CurvePoint& p);

struct HeightEstimate {
  double value = 0.0;
  /// Doublings used.
  int m = 0;
  /// |estimate(m) - estimate(m-1)|.
  double last_delta = 0.0;
  std::vector<double> estimates;  // estimate(0..m)
  bool torsion = false;
  unsigned torsion_order = 0;
};

inline constexpr int kMaxDoublings = 12;

/// Iterates until two successive deltas between estimates are < tol.
/// Torsion points give value 0 with `torsion` set. Throws
/// Error(PointNotOnCurve) and Error(PrecisionNotReached) when m = 12 does
/// not reach tol.
HeightEstimate canonical_height(const Curve& curve, const CurvePoint& p, double tol = 1e-6);

/// |h(P+Q) + h(P-Q) - 2h(P) - 2h(Q)| with every height at tol/4.
double parallelogram_defect(const Curve& curve, const CurvePoint& p, const CurvePoint& q, double tol = 1e-3);

struct SpotCheck {
  std::int64_t n = 0;
  std::size_t torsion_index = 0;
  double predicted = 0.0;  // n^2 h(P)
  double direct = 0.0;     // limit computed at nP + T
};

struct NeronCount {
  double generator_height = 0.0;
  std::size_t torsion_count = 0;
  CountTable table;
  GrowthFit fit;
  std::vector<SpotCheck> spot_checks;
};

/// Geometric factor-2 grid from h to 2^14 h.
std::vector<double> neron_default_grid(double generator_height);

/// Counts {nP + T : h(nP + T) <= x} for each x using h(nP + T) = n^2 h(P);
/// `torsion` lists the torsion subgroup (infinity is added when missing).
/// Five seeded spot checks recompute the limit directly and must agree
/// within 1e-2, else Error(ValidationFailed). Throws
/// Error(GeneratorIsTorsion) and Error(InvalidArgument) for non-torsion
/// entries in `torsion`.
NeronCount neron_count(const Curve& curve, const CurvePoint& generator, const std::vector<CurvePoint>& torsion,
                       const std::vector<double>& grid, std::uint64_t seed = 1);

}  // namespace arfrac
