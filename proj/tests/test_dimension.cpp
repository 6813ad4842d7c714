#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "arfrac/corpus.hpp"
#include "arfrac/dimension.hpp"
#include "arfrac/error.hpp"

using namespace arfrac;

namespace {

// Plain bisection on sum w^-s = 1 in long double.
double bisect_root(const std::vector<double>& w) {
  long double lo = 0, hi = 64;
  for (int i = 0; i < 200; ++i) {
    const long double mid = (lo + hi) / 2;
    long double f = -1;
    for (double x : w) f += std::pow(static_cast<long double>(x), -mid);
    (f > 0 ? lo : hi) = mid;
  }
  return static_cast<double>((lo + hi) / 2);
}

}  // namespace

TEST(Dimension, ClosedForms) {
  EXPECT_NEAR(solve_dimension(WeightSpec({2, 2})).s, 1.0, 1e-12);
  EXPECT_NEAR(solve_dimension(WeightSpec({10, 10})).s, std::log10(2.0), 1e-12);
  EXPECT_NEAR(solve_dimension(WeightSpec({3, 3, 3, 3, 3, 3, 3, 3, 3})).s, 2.0, 1e-12);
  EXPECT_NEAR(solve_dimension(WeightSpec({2, 3})).s, 0.78788491102587, 1e-12);
  EXPECT_NEAR(solve_dimension(WeightSpec({7})).s, 0.0, 1e-12);
}

TEST(Dimension, CorpusExpectedValues) {
  for (const auto& e : corpus_list()) {
    SCOPED_TRACE(e.name);
    ASSERT_TRUE(e.loaded.metadata.expected_dimension.has_value());
    const auto r = solve_dimension(dimension_equation(e.loaded.system));
    EXPECT_NEAR(r.s, *e.loaded.metadata.expected_dimension, 1e-10);
    EXPECT_LT(r.residual, 1e-12);
  }
}

TEST(Dimension, RejectsNonExpandingWeights) {
  EXPECT_THROW(WeightSpec({}), Error);
  EXPECT_THROW(WeightSpec({2.0, 1.0}), Error);
  try {
    WeightSpec({0.5});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonExpandingWeight);
  }
}

TEST(Dimension, TModulePreset) {
  const std::vector<unsigned> degrees{2, 3};
  const auto spec = WeightSpec::t_module(degrees, 2);
  EXPECT_EQ(spec.weights(), (std::vector<double>{4, 6}));
  EXPECT_NEAR(solve_dimension(spec).s, bisect_root({4, 6}), 1e-12);
}

TEST(Dimension, GaussianConventions) {
  const auto sys = load_corpus("gauss-binary").loaded.system;
  EXPECT_NEAR(solve_dimension(dimension_equation(sys, GaussConvention::Norm)).s, 1.0, 1e-12);
  EXPECT_NEAR(solve_dimension(dimension_equation(sys, GaussConvention::Abs)).s, 2.0, 1e-12);
}

TEST(Dimension, ReciprocalAudit) {
  const auto bin = reciprocal_sum_audit(load_corpus("z-binary").loaded.system);
  EXPECT_DOUBLE_EQ(bin.reciprocal_sum, 1.0);
  EXPECT_TRUE(bin.at_least_one);
  const auto two_three = reciprocal_sum_audit(load_corpus("z-two-three").loaded.system);
  EXPECT_NEAR(two_three.reciprocal_sum, 5.0 / 6.0, 1e-15);
  EXPECT_FALSE(two_three.at_least_one);
  EXPECT_THROW(reciprocal_sum_audit(load_corpus("gauss-binary").loaded.system), Error);
}

TEST(DimensionProperty, MatchesBisectionOracle) {
  std::mt19937_64 rng(314159);
  std::uniform_real_distribution<double> w(1.05, 500.0);
  std::uniform_int_distribution<int> n(1, 12);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<double> ws(n(rng));
    for (auto& x : ws) x = w(rng);
    const auto r = solve_dimension(WeightSpec(ws));
    EXPECT_NEAR(r.s, bisect_root(ws), 1e-9 * std::max(1.0, r.s));
    EXPECT_LT(std::abs(evaluate_pressure(WeightSpec(ws), r.s) - 1.0), 1e-11);
  }
}

TEST(DimensionProperty, OrderIndependentAndCompositionInvariant) {
  std::mt19937_64 rng(2718);
  std::uniform_real_distribution<double> w(1.1, 60.0);
  std::uniform_int_distribution<int> n(1, 8);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> ws(n(rng));
    for (auto& x : ws) x = w(rng);
    const WeightSpec spec(ws);
    const double s = solve_dimension(spec).s;
    std::shuffle(ws.begin(), ws.end(), rng);
    EXPECT_EQ(solve_dimension(WeightSpec(ws)).s, s);
    EXPECT_NEAR(solve_dimension(spec.composed()).s, s, 1e-10);
    EXPECT_EQ(spec.composed().size(), spec.size() * spec.size());
  }
}

TEST(DimensionProperty, MonotoneInWeights) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> w(1.1, 60.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> ws{w(rng), w(rng), w(rng)};
    const double s = solve_dimension(WeightSpec(ws)).s;
    ws[trial % 3] *= 1.5;
    EXPECT_LT(solve_dimension(WeightSpec(ws)).s, s);
    ws.push_back(w(rng));
    EXPECT_GT(solve_dimension(WeightSpec(ws)).s, solve_dimension(WeightSpec({ws[0], ws[1], ws[2]})).s);
  }
}
