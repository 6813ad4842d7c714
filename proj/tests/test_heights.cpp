#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <set>

#include "arfrac/corpus.hpp"
#include "arfrac/enumeration.hpp"
#include "arfrac/error.hpp"
#include "arfrac/heights.hpp"

using namespace arfrac;

namespace {

SpacePoint pt(std::string_view text, SpaceKind kind, std::size_t dim = 1) {
  return parse_point(text, Space{kind, dim, std::nullopt});
}

// Points of P^1(Q) with H <= x as the set of reduced fractions a/b plus 1/0.
long long p1_by_fractions(long x) {
  std::set<std::pair<long, long>> seen;
  for (long b = 1; b <= x; ++b) {
    for (long a = -x; a <= x; ++a) {
      const long g = std::gcd(a, b);
      seen.emplace(a / g, b / g);
    }
  }
  return static_cast<long long>(seen.size()) + 1;
}

long long p1_by_totient(long x) {
  std::vector<long> phi(x + 1);
  std::iota(phi.begin(), phi.end(), 0);
  for (long p = 2; p <= x; ++p) {
    if (phi[p] != p) continue;
    for (long k = p; k <= x; k += p) phi[k] -= phi[k] / p;
  }
  long long sum = 0;
  for (long k = 1; k <= x; ++k) sum += phi[k];
  return 4 * sum;
}

// Primitive triples in the box, halved for the sign.
long long p2_brute(long x) {
  long long n = 0;
  for (long a = -x; a <= x; ++a) {
    for (long b = -x; b <= x; ++b) {
      for (long c = -x; c <= x; ++c) {
        if (std::gcd(std::gcd(a, b), c) == 1) ++n;
      }
    }
  }
  return n / 2;
}

}  // namespace

TEST(Heights, SizeOfEachSpace) {
  EXPECT_EQ(size_of(pt("-17", SpaceKind::Int)).raw, Integer(17));
  EXPECT_EQ(size_of(pt("3-4i", SpaceKind::Gauss)).raw, Integer(25));
  EXPECT_EQ(size_of(pt("(2:-3)", SpaceKind::ProjQ)).raw, Integer(3));
  EXPECT_EQ(size_of(pt("1/2,4", SpaceKind::AffQ, 2)).raw, Integer(8));
  EXPECT_EQ(size_of(pt("3/4,-2/3", SpaceKind::AffQ, 2)).raw, Integer(12));
  const Space ec{SpaceKind::EC, 1, Curve(0, 0, 1, -1, 0)};
  EXPECT_EQ(size_of(parse_point("inf", ec)).raw, Integer(1));
  EXPECT_EQ(size_of(parse_point("6,14", ec)).raw, Integer(6));
  const auto s = size_of(pt("0", SpaceKind::Int));
  EXPECT_EQ(s.raw, Integer(0));
  EXPECT_EQ(s.log_size, 0.0);
  EXPECT_NEAR(size_of(pt("1000", SpaceKind::Int)).log_size, std::log(1000.0), 1e-15);
}

TEST(Heights, SchanuelPrediction) {
  EXPECT_NEAR(schanuel_prediction(1, 100), 20000.0 / (std::numbers::pi * std::numbers::pi / 6), 1e-6);
  EXPECT_NEAR(schanuel_prediction(1, 100), 12158.5, 0.05);
  EXPECT_NEAR(schanuel_prediction(2, 10), 8000.0 / (2 * 1.2020569031595942), 1e-9);
}

TEST(Heights, P1CensusMatchesOracles) {
  for (long x : {1L, 2L, 7L, 50L, 200L}) {
    SCOPED_TRACE(x);
    const auto n = projective_census(1, x);
    EXPECT_EQ(n, p1_by_fractions(x));
    EXPECT_EQ(n, p1_by_totient(x));
    EXPECT_EQ(projective_census(1, x, 4), n);
  }
  EXPECT_EQ(projective_census(1, 100), 12176);
  EXPECT_EQ(projective_census(1, 1000), p1_by_totient(1000));
  EXPECT_EQ(static_cast<long long>(projective_window(1, 60).size()), p1_by_totient(60));
}

TEST(Heights, P2CensusMatchesOracles) {
  for (long x : {1L, 3L, 12L, 25L}) {
    SCOPED_TRACE(x);
    const auto n = projective_census(2, x);
    EXPECT_EQ(n, p2_brute(x));
    EXPECT_EQ(projective_census(2, x, 3), n);
    EXPECT_EQ(static_cast<long long>(projective_window(2, x).size()), n);
  }
  EXPECT_EQ(projective_census(2, 1), 13);
}

TEST(Heights, CensusLimits) {
  EXPECT_THROW(projective_census(1, kCensusMaxBoundP1 + 1), Error);
  EXPECT_THROW(projective_census(2, kCensusMaxBoundP2 + 1), Error);
  EXPECT_THROW(projective_census(3, 5), Error);
  try {
    projective_census(2, 1000);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BoundTooLarge);
  }
}

TEST(Heights, CensusApproachesSchanuel) {
  const double r1 = projective_census(1, 2000) / schanuel_prediction(1, 2000);
  EXPECT_NEAR(r1, 1.0, 2e-3);
  const double r2 = projective_census(2, 60) / schanuel_prediction(2, 60);
  EXPECT_NEAR(r2, 1.0, 0.05);
}

TEST(Heights, GrowthAuditDoublingMap) {
  const auto sys = load_corpus("p1-doubling").loaded.system;
  const auto bag = enumerate(sys, Integer(1) << 30);
  const auto residuals = height_growth_audit(sys, bag);
  ASSERT_EQ(residuals.size(), 2u);
  for (const auto& r : residuals) {
    EXPECT_EQ(r.samples, bag.size());
    EXPECT_LE(r.max_abs, std::log(2.0) + 1e-12);
  }
}

TEST(Heights, GrowthAuditRejectsForeignBag) {
  const auto sys = load_corpus("p1-doubling").loaded.system;
  const auto ints = enumerate(load_corpus("z-binary").loaded.system, Integer(100));
  EXPECT_THROW(height_growth_audit(sys, ints), Error);
}

TEST(HeightsProperty, GrowthAuditResidualsAreBoundedOnWindows) {
  // h(f(P)) - 2h(P) for the squaring map on every point of height <= 300.
  const auto sys = load_corpus("p1-doubling").loaded.system;
  const auto window = projective_window(1, 300);
  const auto residuals = height_growth_audit(sys, window);
  for (const auto& r : residuals) {
    EXPECT_LE(r.max_abs, std::log(2.0) + 1e-12);
    EXPECT_LE(r.min, r.mean);
    EXPECT_LE(r.mean, r.max);
  }
}
