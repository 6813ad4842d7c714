#pragma once

#include <array>
#include <string>

#include "arfrac/numeric.hpp"

namespace arfrac {

/// Long Weierstrass model y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over Q.
class Curve {
 public:
  /// Throws Error(InvalidArgument) when the discriminant vanishes.
  Curve(Rational a1, Rational a2, Rational a3, Rational a4, Rational a6);

  const Rational& a1() const noexcept { return a_[0]; }
  const Rational& a2() const noexcept { return a_[1]; }
  const Rational& a3() const noexcept { return a_[2]; }
  const Rational& a4() const noexcept { return a_[3]; }
  const Rational& a6() const noexcept { return a_[4]; }
  const Rational& b2() const noexcept { return b2_; }
  const Rational& b4() const noexcept { return b4_; }
  const Rational& b6() const noexcept { return b6_; }
  const Rational& b8() const noexcept { return b8_; }
  const Rational& discriminant() const noexcept { return disc_; }

  bool operator==(const Curve& other) const { return a_ == other.a_; }

  std::string to_string() const;

 private:
  std::array<Rational, 5> a_;
  Rational b2_, b4_, b6_, b8_, disc_;
};

/// Affine point with exact rational coordinates, or the point at infinity.
struct CurvePoint {
  bool infinity = true;
  Rational x;
  Rational y;

  static CurvePoint at_infinity() { return {}; }
  static CurvePoint affine(Rational x, Rational y) { return {false, std::move(x), std::move(y)}; }

  bool operator==(const CurvePoint& other) const {
    if (infinity || other.infinity) return infinity == other.infinity;
    return x == other.x && y == other.y;
  }

  std::string to_string() const;
};

bool on_curve(const Curve& curve, const CurvePoint& p);

/// Group law. All three throw Error(PointNotOnCurve) for off-curve input.
CurvePoint ec_neg(const Curve& curve, const CurvePoint& p);
CurvePoint ec_add(const Curve& curve, const CurvePoint& p, const CurvePoint& q);
CurvePoint ec_mul(const Curve& curve, const Integer& n, const CurvePoint& p);

}  // namespace arfrac
