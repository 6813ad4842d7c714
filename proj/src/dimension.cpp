#include "arfrac/dimension.hpp"

#include <algorithm>
#include <cmath>

#include "arfrac/error.hpp"

namespace arfrac {

std::string_view to_string(GaussConvention convention) {
  return convention == GaussConvention::Norm ? "norm" : "abs";
}

WeightSpec::WeightSpec(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw Error("dimension", ErrorCode::NonExpandingWeight, "weight list is empty");
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (!(weights_[i] > 1.0) || !std::isfinite(weights_[i])) {
      throw Error("dimension", ErrorCode::NonExpandingWeight,
                  "weight " + std::to_string(i) + " = " + format_real(weights_[i]) + " is not > 1");
    }
  }
}

WeightSpec WeightSpec::t_module(std::span<const unsigned> degrees, unsigned rank) {
  std::vector<double> w;
  for (unsigned r : degrees) w.push_back(static_cast<double>(r) * rank);
  return WeightSpec(std::move(w));
}

WeightSpec WeightSpec::composed() const {
  std::vector<double> w;
  w.reserve(weights_.size() * weights_.size());
  for (double a : weights_) {
    for (double b : weights_) w.push_back(a * b);
  }
  return WeightSpec(std::move(w));
}

WeightSpec dimension_equation(const FractalSystem& system, GaussConvention convention) {
  std::vector<double> w;
  w.reserve(system.maps.size());
  for (const auto& map : system.maps) {
    if (const auto* m = std::get_if<IntAffine>(&map)) {
      w.push_back(Integer(abs(m->a)).get_d());
    } else if (const auto* m = std::get_if<GaussAffine>(&map)) {
      const double n = m->a.norm().get_d();
      w.push_back(convention == GaussConvention::Norm ? n : std::sqrt(n));
    } else if (const auto* m = std::get_if<EllTranslate>(&map)) {
      w.push_back(Integer(abs(m->multiplier)).get_d());
    } else {
      // Polynomial and projective maps multiply logarithmic height by their degree.
      w.push_back(static_cast<double>(degree(map)));
    }
  }
  return WeightSpec(std::move(w));
}

double evaluate_pressure(const WeightSpec& spec, double s) {
  std::vector<double> sorted = spec.weights();
  std::sort(sorted.begin(), sorted.end());
  long double sum = 0.0L;
  for (double w : sorted) sum += std::pow(static_cast<long double>(w), static_cast<long double>(-s));
  return static_cast<double>(sum);
}

namespace {

long double pressure_slope(const std::vector<double>& sorted, long double s) {
  long double d = 0.0L;
  for (double w : sorted) {
    const long double lw = std::log(static_cast<long double>(w));
    d -= std::exp(-s * lw) * lw;
  }
  return d;
}

long double pressure_ld(const std::vector<double>& sorted, long double s) {
  long double sum = 0.0L;
  for (double w : sorted) sum += std::exp(-s * std::log(static_cast<long double>(w)));
  return sum;
}

}  // namespace

DimensionResult solve_dimension(const WeightSpec& spec, double tol) {
  if (!(tol > 0.0)) throw Error("dimension", ErrorCode::InvalidArgument, "tolerance must be positive");
  std::vector<double> sorted = spec.weights();
  std::sort(sorted.begin(), sorted.end());
  DimensionResult result;
  if (sorted.size() == 1) {
    // w^0 = 1 exactly.
    return result;
  }
  long double lo = 0.0L;
  long double hi = 1.0L;
  while (pressure_ld(sorted, hi) >= 1.0L) {
    lo = hi;
    hi *= 2.0L;
    ++result.iterations;
  }
  while (hi - lo > 1e-3L) {
    const long double mid = 0.5L * (lo + hi);
    if (pressure_ld(sorted, mid) >= 1.0L) lo = mid;
    else hi = mid;
    ++result.iterations;
  }
  long double s = 0.5L * (lo + hi);
  for (int step = 0; step < 200; ++step) {
    ++result.iterations;
    const long double g = pressure_ld(sorted, s) - 1.0L;
    if (g == 0.0L) break;
    if (g > 0.0L) lo = s;
    else hi = s;
    const long double next = s - g / pressure_slope(sorted, s);
    const long double candidate = (next >= lo && next <= hi) ? next : 0.5L * (lo + hi);
    if (std::fabs(static_cast<double>(candidate - s)) <= 1e-18 + 1e-17 * std::fabs(static_cast<double>(s))) {
      s = candidate;
      break;
    }
    s = candidate;
    if (std::fabs(static_cast<double>(g)) < tol * 1e-3) break;
  }
  result.s = static_cast<double>(s);
  result.residual = std::fabs(evaluate_pressure(spec, result.s) - 1.0);
  if (!(result.residual < tol)) {
    throw Error("dimension", ErrorCode::PrecisionNotReached,
                "residual " + format_real(result.residual) + " not below tolerance " + format_real(tol));
  }
  return result;
}

ReciprocalAudit reciprocal_sum_audit(const FractalSystem& system) {
  if (system.space.kind != SpaceKind::Int) {
    throw Error("dimension", ErrorCode::UnsupportedSpace, "reciprocal-sum audit is defined for integer systems");
  }
  // Exact rational sum, compared to 1 exactly.
  Rational sum = 0;
  for (const auto& map : system.maps) {
    const auto& m = std::get<IntAffine>(map);
    sum += Rational(Integer(1), abs(m.a));
  }
  sum.canonicalize();
  return {sum.get_d(), sum >= 1};
}

}  // namespace arfrac
