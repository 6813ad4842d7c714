#include "arfrac/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "arfrac/error.hpp"

namespace arfrac {

double weil_height(const Rational& x) {
  return log_max1(std::max(Integer(abs(x.get_num())), Integer(x.get_den())));
}

Rational double_x(const Curve& c, const Rational& x) {
  const Rational x2 = x * x;
  const Rational num = x2 * x2 - c.b4() * x2 - 2 * c.b6() * x - c.b8();
  const Rational den = 4 * x2 * x + c.b2() * x2 + 2 * c.b4() * x + c.b6();
  if (den == 0) throw Error("elliptic", ErrorCode::InvalidArgument, "doubling a 2-torsion point");
  return num / den;
}

unsigned torsion_order(const Curve& curve, const CurvePoint& p) {
  if (!on_curve(curve, p)) throw Error("elliptic", ErrorCode::PointNotOnCurve, p.to_string() + " is not on the curve");
  CurvePoint q = p;
  for (unsigned n = 1; n <= 12; ++n) {
    if (q.infinity) return n;
    q = ec_add(curve, q, p);
  }
  return 0;
}

HeightEstimate canonical_height(const Curve& curve, const CurvePoint& p, double tol) {
  HeightEstimate est;
  est.torsion_order = torsion_order(curve, p);
  if (est.torsion_order != 0) {
    est.torsion = true;
    est.estimates = {0.0};
    return est;
  }
  Rational x = p.x;
  double scale = 1.0;
  est.estimates.push_back(weil_height(x));
  for (int m = 1; m <= kMaxDoublings; ++m) {
    x = double_x(curve, x);
    scale *= 0.25;
    est.estimates.push_back(scale * weil_height(x));
    est.m = m;
    est.value = est.estimates.back();
    const double previous = est.last_delta;
    est.last_delta = std::fabs(est.value - est.estimates[est.estimates.size() - 2]);
    // Small integral x-coordinates can repeat a height once by accident.
    if (m >= 2 && est.last_delta < tol && previous < tol) return est;
  }
  throw Error("elliptic", ErrorCode::PrecisionNotReached,
              "successive estimates still differ by " + format_real(est.last_delta) + " after " +
                  std::to_string(kMaxDoublings) + " doublings");
}

double parallelogram_defect(const Curve& curve, const CurvePoint& p, const CurvePoint& q, double tol) {
  const double t = tol / 4;
  const double sum = canonical_height(curve, ec_add(curve, p, q), t).value;
  const double diff = canonical_height(curve, ec_add(curve, p, ec_neg(curve, q)), t).value;
  const double hp = canonical_height(curve, p, t).value;
  const double hq = canonical_height(curve, q, t).value;
  return std::fabs(sum + diff - 2 * hp - 2 * hq);
}

std::vector<double> neron_default_grid(double generator_height) {
  return geometric_grid(generator_height, generator_height * 16384.0, 2.0);
}

NeronCount neron_count(const Curve& curve, const CurvePoint& generator, const std::vector<CurvePoint>& torsion,
                       const std::vector<double>& grid, std::uint64_t seed) {
  const auto gen = canonical_height(curve, generator, 1e-6);
  if (gen.torsion) {
    throw Error("elliptic", ErrorCode::GeneratorIsTorsion,
                generator.to_string() + " has order " + std::to_string(gen.torsion_order));
  }
  std::vector<CurvePoint> group;
  auto add_unique = [&](const CurvePoint& t) {
    if (std::find(group.begin(), group.end(), t) == group.end()) group.push_back(t);
  };
  add_unique(CurvePoint::at_infinity());
  for (const auto& t : torsion) {
    if (torsion_order(curve, t) == 0) {
      throw Error("elliptic", ErrorCode::InvalidArgument, t.to_string() + " is not a torsion point");
    }
    add_unique(t);
  }

  NeronCount out;
  out.generator_height = gen.value;
  out.torsion_count = group.size();
  out.table.kind = SizeKind::CanonicalHeight;
  const double h = gen.value;
  auto largest_multiple = [h](double x) {
    if (x < h) return std::int64_t{0};
    auto n = static_cast<std::int64_t>(std::sqrt(x / h));
    while (static_cast<double>((n + 1) * (n + 1)) * h <= x) ++n;
    while (n > 0 && static_cast<double>(n * n) * h > x) --n;
    return n;
  };
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (i > 0 && !(grid[i] > grid[i - 1])) throw Error("elliptic", ErrorCode::InvalidArgument, "grid must increase");
    const std::int64_t n = largest_multiple(grid[i]);
    out.table.grid.push_back(grid[i]);
    out.table.counts.push_back(static_cast<std::uint64_t>(2 * n + 1) * group.size());
  }
  out.fit = fit_growth_exponent(out.table);

  std::mt19937_64 rng(seed);
  const std::int64_t top = std::clamp<std::int64_t>(grid.empty() ? 1 : largest_multiple(grid.back()), 1, 6);
  std::uniform_int_distribution<std::int64_t> pick_n(1, top);
  std::uniform_int_distribution<std::size_t> pick_t(0, group.size() - 1);
  std::bernoulli_distribution negate(0.5);
  for (int k = 0; k < 5; ++k) {
    SpotCheck c;
    c.n = pick_n(rng) * (negate(rng) ? -1 : 1);
    c.torsion_index = pick_t(rng);
    const CurvePoint q = ec_add(curve, ec_mul(curve, Integer(static_cast<long>(c.n)), generator), group[c.torsion_index]);
    c.predicted = static_cast<double>(c.n * c.n) * h;
    c.direct = canonical_height(curve, q, 1e-4).value;
    if (std::fabs(c.direct - c.predicted) >= 1e-2) {
      throw Error("elliptic", ErrorCode::ValidationFailed,
                  "spot check at n = " + std::to_string(c.n) + ": direct " + format_real(c.direct) +
                      " vs predicted " + format_real(c.predicted));
    }
    out.spot_checks.push_back(c);
  }
  return out;
}

}  // namespace arfrac
