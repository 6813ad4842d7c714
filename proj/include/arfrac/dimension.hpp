#pragma once

// Generalized Moran equation  sum_i w_i^(-s) = 1  for the expansion weights
// w_i of a fractal system, and its root s (the fractal dimension).

#include <span>
#include <vector>

#include "arfrac/spaces.hpp"

namespace arfrac {

/// How Gaussian sizes are measured. Norm counts by a^2+b^2 and uses weights
/// Norm(a_i), so Z[i] itself has dimension 1; Abs uses |a_i| = sqrt(Norm).
enum class GaussConvention { Norm, Abs };

std::string_view to_string(GaussConvention convention);

/// Nonempty list of weights, each > 1.
class WeightSpec {
 public:
  /// Throws Error(NonExpandingWeight) if empty or any weight <= 1.
  explicit WeightSpec(std::vector<double> weights);

  /// t-module preset: weights r_i * d for polynomial degrees r_i and rank d.
  static WeightSpec t_module(std::span<const unsigned> degrees, unsigned rank);

  const std::vector<double>& weights() const noexcept { return weights_; }
  std::size_t size() const noexcept { return weights_.size(); }

  /// Weights of the composed system {f_i o f_j}: all products w_i * w_j.
  WeightSpec composed() const;

 private:
  std::vector<double> weights_;
};

/// Per-map weights: |a| (integer), Norm(a) or |a| (Gaussian, by convention),
/// total degree (polynomial and projective maps), |n| ([n]+T on curves).
WeightSpec dimension_equation(const FractalSystem& system, GaussConvention convention = GaussConvention::Norm);

struct DimensionResult {
  double s = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

/// Unique root of the pressure equation, with residual < tol. Bisection
/// brackets the root, Newton polishes it.
DimensionResult solve_dimension(const WeightSpec& spec, double tol = 1e-12);

/// sum_i w_i^(-s), summed in a fixed order so the value is independent of
/// the order of the weights.
double evaluate_pressure(const WeightSpec& spec, double s);

/// Integer systems only: sum_i 1/|a_i| and whether it is >= 1.
struct ReciprocalAudit {
  double reciprocal_sum = 0.0;
  bool at_least_one = false;
};

/// Throws Error(UnsupportedSpace) for non-integer systems.
ReciprocalAudit reciprocal_sum_audit(const FractalSystem& system);

}  // namespace arfrac
