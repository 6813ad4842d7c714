#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "arfrac/corpus.hpp"
#include "arfrac/enumeration.hpp"
#include "arfrac/error.hpp"
#include "arfrac/growth.hpp"

using namespace arfrac;

namespace {

PointBag bag_of(std::string_view name, const Integer& bound) { return enumerate(load_corpus(name).loaded.system, bound); }

// Integers in [0, x] whose decimal digits are all 0 or 1.
std::uint64_t binary_digit_count(long x) {
  std::uint64_t n = 0;
  for (long m = 0; m <= x; ++m) {
    long k = m;
    bool ok = true;
    do {
      ok = ok && k % 10 <= 1;
      k /= 10;
    } while (k > 0);
    n += ok;
  }
  return n;
}

}  // namespace

TEST(Counting, SmallTables) {
  const auto digits = bag_of("digits01", Integer(100000));
  const std::vector<double> grid{10, 100, 1000};
  const auto t = counting_function(digits, grid, SizeKind::Abs);
  EXPECT_EQ(t.counts, (std::vector<std::uint64_t>{3, 5, 9}));
  const std::vector<double> seven{7};
  EXPECT_EQ(counting_function(bag_of("z-binary", Integer(100)), seven, SizeKind::Abs).counts,
            (std::vector<std::uint64_t>{8}));
  EXPECT_TRUE(counting_function(digits, std::vector<double>{}, SizeKind::Abs).counts.empty());
  const std::vector<double> at_bound{100000};
  EXPECT_EQ(counting_function(digits, at_bound, SizeKind::Abs).counts[0], digits.size());
}

TEST(Counting, Errors) {
  const auto bag = bag_of("z-binary", Integer(1000));
  try {
    counting_function(bag, std::vector<double>{10, 2000}, SizeKind::Abs);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::GridExceedsBound);
  }
  EXPECT_THROW(counting_function(bag, std::vector<double>{10, 10}, SizeKind::Abs), Error);
  EXPECT_THROW(counting_function(bag, std::vector<double>{50, 10}, SizeKind::Abs), Error);
}

TEST(CountingProperty, MatchesDirectCount) {
  const auto bag = bag_of("digits01", Integer(1000000));
  std::mt19937_64 rng(424242);
  std::uniform_real_distribution<double> x(0.0, 1000000.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> grid(8);
    for (auto& g : grid) g = x(rng);
    std::sort(grid.begin(), grid.end());
    const auto t = counting_function(bag, grid, SizeKind::Abs);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      EXPECT_EQ(t.counts[i], binary_digit_count(static_cast<long>(grid[i])));
      if (i > 0) EXPECT_LE(t.counts[i - 1], t.counts[i]);
    }
  }
}

TEST(Counting, LogHeightGrid) {
  const auto bag = bag_of("p1-doubling", Integer(1) << 20);
  const std::vector<double> grid{0.0, std::log(2.0), 20 * std::log(2.0)};
  const auto t = counting_function(bag, grid, SizeKind::LogHeight);
  // (1:1); then (1:2), (2:1); everything at 2^20.
  EXPECT_EQ(t.counts[0], 1u);
  EXPECT_EQ(t.counts[1], 3u);
  EXPECT_EQ(t.counts[2], bag.size());
  EXPECT_EQ(bag.size(), 41u);
}

TEST(Grids, Builders) {
  EXPECT_EQ(geometric_grid(10, 1e4, 10), (std::vector<double>{10, 100, 1000, 10000}));
  EXPECT_EQ(linear_grid(1, 10, 4), (std::vector<double>{1, 4, 7, 10}));
  const auto bag = bag_of("z-two-three", Integer(100));
  EXPECT_EQ(midpoint_grid(bag, SizeKind::Abs, 1, 10), (std::vector<double>{1.5, 2.5, 3.5, 5, 7, 8.5}));
  EXPECT_EQ(parse_grid("3,5,9", bag, SizeKind::Abs, 1, 100), (std::vector<double>{3, 5, 9}));
  EXPECT_EQ(parse_grid("geometric:10", bag, SizeKind::Abs, 1, 100), (std::vector<double>{1, 10, 100}));
  EXPECT_EQ(parse_grid("linear:3", bag, SizeKind::Abs, 0, 100).size(), 3u);
  EXPECT_THROW(parse_grid("cubic:3", bag, SizeKind::Abs, 1, 100), Error);
  EXPECT_THROW(parse_grid("1,x", bag, SizeKind::Abs, 1, 100), Error);
}

TEST(Fit, ExactPowerLaw) {
  CountTable t;
  for (int k = 1; k <= 12; ++k) {
    t.grid.push_back(std::pow(4.0, k));
    t.counts.push_back(static_cast<std::uint64_t>(std::pow(2.0, k)));
  }
  const auto fit = fit_growth_exponent(t);
  EXPECT_NEAR(fit.exponent, 0.5, 1e-12);
  EXPECT_NEAR(fit.intercept, 0.0, 1e-10);
  EXPECT_LT(fit.rmse, 1e-12);
  EXPECT_EQ(fit.points, 12u);
  const auto windowed = fit_growth_exponent(t, FitWindow{16, 4096});
  EXPECT_EQ(windowed.points, 5u);
  EXPECT_THROW(fit_growth_exponent(t, FitWindow{16, 64}), Error);
}

TEST(Fit, IntegerSystems) {
  const auto z = bag_of("z-binary", Integer(1) << 20);
  const auto grid = geometric_grid(2, std::ldexp(1.0, 20), 2);
  EXPECT_NEAR(fit_growth_exponent(counting_function(z, grid, SizeKind::Abs)).exponent, 1.0, 0.02);

  const Integer billion(1000000000);
  const auto g = geometric_grid(10, 1e9, 10);
  const double d01 = fit_growth_exponent(counting_function(bag_of("digits01", billion), g, SizeKind::Abs)).exponent;
  const double d012 = fit_growth_exponent(counting_function(bag_of("digits012", billion), g, SizeKind::Abs)).exponent;
  EXPECT_NEAR(d01, std::log10(2.0), 0.03);
  EXPECT_NEAR(d012, std::log10(3.0), 0.03);
  EXPECT_LT(d01, d012);
}

TEST(Lemma, DigitVerdicts) {
  const auto bag = bag_of("digits01", Integer(1000000000));
  const auto table = counting_function(bag, geometric_grid(10, 1e9, 10), SizeKind::Abs);
  const auto up35 = lemma_bound_check(table, 0.35, BoundDirection::Upper);
  EXPECT_TRUE(up35.bounded);
  EXPECT_EQ(up35.h_sequence.size(), 9u);
  EXPECT_NEAR(up35.h_sequence[0], 3 * std::pow(10.0, -0.35), 1e-12);
  EXPECT_TRUE(lemma_bound_check(table, 0.25, BoundDirection::Lower).bounded);
  const auto up25 = lemma_bound_check(table, 0.25, BoundDirection::Upper);
  EXPECT_FALSE(up25.bounded);
  EXPECT_GT(up25.monotone_tail_ratio, 1.25);
  EXPECT_FALSE(lemma_bound_check(table, 0.35, BoundDirection::Lower).bounded);
}

TEST(Lemma, Preconditions) {
  CountTable t{{10, 100, 1000}, {3, 5, 9}, SizeKind::Abs};
  EXPECT_THROW(lemma_bound_check(t, 0.3, BoundDirection::Upper), Error);
  t.grid.push_back(10000);
  t.counts.push_back(17);
  EXPECT_THROW(lemma_bound_check(t, 0.0, BoundDirection::Upper), Error);
  EXPECT_NO_THROW(lemma_bound_check(t, 0.3, BoundDirection::Upper));
}

TEST(LemmaProperty, ThresholdAroundTheTrueExponent) {
  // N(x) = c x^d exactly: bounded above for s >= d, below for s <= d.
  std::mt19937_64 rng(8080);
  std::uniform_real_distribution<double> dist(0.2, 1.8), coef(0.5, 5.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double d = dist(rng), c = coef(rng);
    CountTable t;
    for (int k = 1; k <= 10; ++k) {
      const double x = std::pow(10.0, k);
      t.grid.push_back(x);
      t.counts.push_back(static_cast<std::uint64_t>(std::llround(c * std::pow(x, d))));
    }
    EXPECT_TRUE(lemma_bound_check(t, d + 0.05, BoundDirection::Upper).bounded);
    EXPECT_TRUE(lemma_bound_check(t, d - 0.05, BoundDirection::Lower).bounded);
    EXPECT_FALSE(lemma_bound_check(t, d - 0.1, BoundDirection::Upper).bounded);
    EXPECT_FALSE(lemma_bound_check(t, d + 0.1, BoundDirection::Lower).bounded);
  }
}
