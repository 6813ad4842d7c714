#include "arfrac/elliptic_curve.hpp"

#include "arfrac/error.hpp"

namespace arfrac {

Curve::Curve(Rational a1, Rational a2, Rational a3, Rational a4, Rational a6)
    : a_{std::move(a1), std::move(a2), std::move(a3), std::move(a4), std::move(a6)} {
  const Rational& A1 = a_[0];
  const Rational& A2 = a_[1];
  const Rational& A3 = a_[2];
  const Rational& A4 = a_[3];
  const Rational& A6 = a_[4];
  b2_ = A1 * A1 + 4 * A2;
  b4_ = 2 * A4 + A1 * A3;
  b6_ = A3 * A3 + 4 * A6;
  b8_ = A1 * A1 * A6 + 4 * A2 * A6 - A1 * A3 * A4 + A2 * A3 * A3 - A4 * A4;
  disc_ = -b2_ * b2_ * b8_ - 8 * b4_ * b4_ * b4_ - 27 * b6_ * b6_ + 9 * b2_ * b4_ * b6_;
  if (disc_ == 0) throw Error("elliptic", ErrorCode::InvalidArgument, "singular curve: discriminant is 0");
}

std::string Curve::to_string() const {
  std::string out = "[";
  for (std::size_t k = 0; k < a_.size(); ++k) {
    if (k) out += ",";
    out += a_[k].get_str();
  }
  return out + "]";
}

std::string CurvePoint::to_string() const {
  if (infinity) return "inf";
  return "(" + x.get_str() + "," + y.get_str() + ")";
}

bool on_curve(const Curve& c, const CurvePoint& p) {
  if (p.infinity) return true;
  const Rational lhs = p.y * p.y + c.a1() * p.x * p.y + c.a3() * p.y;
  const Rational rhs = p.x * p.x * p.x + c.a2() * p.x * p.x + c.a4() * p.x + c.a6();
  return lhs == rhs;
}

namespace {

void require_on_curve(const Curve& c, const CurvePoint& p) {
  if (!on_curve(c, p)) {
    throw Error("elliptic", ErrorCode::PointNotOnCurve, "point " + p.to_string() + " is not on " + c.to_string());
  }
}

CurvePoint neg_unchecked(const Curve& c, const CurvePoint& p) {
  if (p.infinity) return p;
  return CurvePoint::affine(p.x, -p.y - c.a1() * p.x - c.a3());
}

CurvePoint add_unchecked(const Curve& c, const CurvePoint& p, const CurvePoint& q) {
  if (p.infinity) return q;
  if (q.infinity) return p;
  Rational slope;
  if (p.x == q.x) {
    // Vertical chord or tangent: P = -Q.
    if (p.y + q.y + c.a1() * q.x + c.a3() == 0) return CurvePoint::at_infinity();
    slope = (3 * p.x * p.x + 2 * c.a2() * p.x + c.a4() - c.a1() * p.y) / (2 * p.y + c.a1() * p.x + c.a3());
  } else {
    slope = (q.y - p.y) / (q.x - p.x);
  }
  const Rational intercept = p.y - slope * p.x;
  Rational x3 = slope * slope + c.a1() * slope - c.a2() - p.x - q.x;
  Rational y3 = -(slope + c.a1()) * x3 - intercept - c.a3();
  return CurvePoint::affine(std::move(x3), std::move(y3));
}

}  // namespace

CurvePoint ec_neg(const Curve& curve, const CurvePoint& p) {
  require_on_curve(curve, p);
  return neg_unchecked(curve, p);
}

CurvePoint ec_add(const Curve& curve, const CurvePoint& p, const CurvePoint& q) {
  require_on_curve(curve, p);
  require_on_curve(curve, q);
  return add_unchecked(curve, p, q);
}

CurvePoint ec_mul(const Curve& curve, const Integer& n, const CurvePoint& p) {
  require_on_curve(curve, p);
  Integer k = abs(n);
  CurvePoint base = n < 0 ? neg_unchecked(curve, p) : p;
  CurvePoint acc = CurvePoint::at_infinity();
  // Left-to-right double-and-add.
  const std::size_t bits = k == 0 ? 0 : mpz_sizeinbase(k.get_mpz_t(), 2);
  for (std::size_t i = bits; i-- > 0;) {
    acc = add_unchecked(curve, acc, acc);
    if (mpz_tstbit(k.get_mpz_t(), i)) acc = add_unchecked(curve, acc, base);
  }
  return acc;
}

}  // namespace arfrac
