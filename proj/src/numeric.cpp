#include "arfrac/numeric.hpp"

#include <cmath>
#include <cstdio>

#include "arfrac/error.hpp"

namespace arfrac {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::SpaceMismatch: return "SpaceMismatch";
    case ErrorCode::UnsupportedMapKind: return "UnsupportedMapKind";
    case ErrorCode::ZeroProjectivePoint: return "ZeroProjectivePoint";
    case ErrorCode::NonExpandingWeight: return "NonExpandingWeight";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::BoundTooLarge: return "BoundTooLarge";
    case ErrorCode::NonTerminating: return "NonTerminating";
    case ErrorCode::GridExceedsBound: return "GridExceedsBound";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::UnsupportedSpace: return "UnsupportedSpace";
    case ErrorCode::PointNotOnCurve: return "PointNotOnCurve";
    case ErrorCode::PrecisionNotReached: return "PrecisionNotReached";
    case ErrorCode::GeneratorIsTorsion: return "GeneratorIsTorsion";
    case ErrorCode::ConfigParse: return "ConfigParse";
    case ErrorCode::MissingFile: return "MissingFile";
    case ErrorCode::ValidationFailed: return "ValidationFailed";
  }
  return "Unknown";
}

namespace {

std::string_view trim(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) text.remove_suffix(1);
  return text;
}

bool is_decimal(std::string_view text) {
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) text.remove_prefix(1);
  if (text.empty()) return false;
  for (char c : text) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

}  // namespace

Integer parse_integer(std::string_view text) {
  text = trim(text);
  if (!is_decimal(text)) {
    throw Error("numeric", ErrorCode::ParseError, "not a decimal integer: '" + std::string(text) + "'");
  }
  if (text.front() == '+') text.remove_prefix(1);
  return Integer(std::string(text), 10);
}

Rational parse_rational(std::string_view text) {
  text = trim(text);
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(text));
  Integer num = parse_integer(text.substr(0, slash));
  Integer den = parse_integer(text.substr(slash + 1));
  if (den == 0) throw Error("numeric", ErrorCode::ParseError, "zero denominator in '" + std::string(text) + "'");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

std::string to_string(const Integer& value) { return value.get_str(10); }

std::string to_string(const Rational& value) { return value.get_str(10); }

double log_abs(const Integer& value) {
  long exponent = 0;
  const double mantissa = mpz_get_d_2exp(&exponent, value.get_mpz_t());
  return std::log(std::fabs(mantissa)) + static_cast<double>(exponent) * std::log(2.0);
}

double log_max1(const Integer& value) {
  if (abs(value) <= 1) return 0.0;
  return log_abs(value);
}

Integer floor_bound(double value) {
  if (!(value >= 0.0) || !std::isfinite(value)) {
    throw Error("numeric", ErrorCode::InvalidArgument, "bound must be a finite nonnegative number");
  }
  const double nearest = std::nearbyint(value);
  if (std::fabs(value - nearest) <= 1e-9 * std::max(1.0, nearest)) value = nearest;
  Integer out;
  mpz_set_d(out.get_mpz_t(), std::floor(value));
  return out;
}

Integer floor_exp_bound(double log_value) { return floor_bound(std::exp(log_value)); }

double ratio_to_double(const Integer& num, const Integer& den) {
  if (num == 0) return 0.0;
  long en = 0, ed = 0;
  const double mn = mpz_get_d_2exp(&en, num.get_mpz_t());
  const double md = mpz_get_d_2exp(&ed, den.get_mpz_t());
  return std::ldexp(mn / md, static_cast<int>(en - ed));
}

std::string format_real(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", value);
  return buf;
}

}  // namespace arfrac
