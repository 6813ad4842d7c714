#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "arfrac/numeric.hpp"

namespace arfrac {

using Exponents = std::vector<unsigned>;

/// A monomial record as it appears in system files: coeff * prod x_k^e_k.
struct Monomial {
  Rational coeff;
  Exponents exponents;
};

/// Sparse multivariate polynomial over the rationals in a fixed number of
/// variables. Zero coefficients are never stored.
class Polynomial {
 public:
  explicit Polynomial(std::size_t variables = 0) : variables_(variables) {}

  static Polynomial from_monomials(std::size_t variables, std::span<const Monomial> monomials);
  static Polynomial constant(std::size_t variables, const Rational& value);
  static Polynomial variable(std::size_t variables, std::size_t index);

  std::size_t variables() const noexcept { return variables_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  const std::map<Exponents, Rational>& terms() const noexcept { return terms_; }
  std::vector<Monomial> monomials() const;

  /// Maximum total degree; -1 for the zero polynomial.
  int total_degree() const;
  bool is_homogeneous() const;
  bool has_integer_coefficients() const;

  Rational evaluate(std::span<const Rational> point) const;
  /// Requires integer coefficients.
  Integer evaluate(std::span<const Integer> point) const;

  Polynomial operator+(const Polynomial& other) const;
  Polynomial operator-(const Polynomial& other) const;
  Polynomial operator*(const Polynomial& other) const;
  Polynomial pow(unsigned exponent) const;
  Polynomial operator-() const;

  bool operator==(const Polynomial& other) const = default;

  /// Human-readable form using x1..xn, e.g. "2*x1^2 + x2 - 6".
  std::string to_string() const;

 private:
  void add_term(const Exponents& exponents, const Rational& coeff);

  std::size_t variables_;
  std::map<Exponents, Rational> terms_;
};

/// Parses expressions over x1..xn with + - * / ^ and parentheses; division
/// only by nonzero rational constants. Throws Error(ParseError).
Polynomial parse_polynomial(std::string_view text, std::size_t variables);

}  // namespace arfrac
