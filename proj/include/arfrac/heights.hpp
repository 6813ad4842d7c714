#pragma once

// Exact sizes and Weil heights. Over Q a canonical projective point already
// realizes the product formula: H = max |coordinate|. Logs are taken last.

#include <vector>

#include "arfrac/point_bag.hpp"
#include "arfrac/spaces.hpp"

namespace arfrac {

/// |m| for integers, a^2+b^2 for Gaussian integers, H = max|x_k| for
/// projective points, H(1:x_1:...:x_n) for affine rational points and H(x)
/// for curve points (1 at infinity). `p` must be canonical.
SizeValue size_of(const SpacePoint& p);

/// Residuals h(f_i(p)) - deg_i * h(p) over the bag, for one map.
struct GrowthResidual {
  std::size_t map_index = 0;
  std::size_t samples = 0;
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  double max_abs = 0.0;  // the observed O(1) constant
};

/// Throws Error(SpaceMismatch) when bag points are not in the system space.
std::vector<GrowthResidual> height_growth_audit(const FractalSystem& system, const PointBag& bag);

/// Schanuel's count of points of P^n(Q) with H <= x:
/// 2^(n+1) x^(n+1) / (2 zeta(n+1)).
double schanuel_prediction(unsigned n, double x);

/// Largest bounds accepted by projective_census.
inline constexpr long kCensusMaxBoundP1 = 10'000;
inline constexpr long kCensusMaxBoundP2 = 100;

/// Exact number of points of P^n(Q), n in {1, 2}, with H <= x, by gcd
/// filtering over the integer box; the box is split across `threads`
/// workers. Throws Error(BoundTooLarge) / Error(UnsupportedSpace).
long long projective_census(unsigned n, long x, unsigned threads = 1);

/// Every point of P^n(Q) (n in {1,2}) with H <= x, as a bag of depth-0
/// points. Meant for small windows (x <= 2000 for n = 1, x <= 60 for n = 2).
PointBag projective_window(unsigned n, long x);

}  // namespace arfrac
