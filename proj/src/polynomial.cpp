#include "arfrac/polynomial.hpp"

#include <cctype>
#include <sstream>

#include "arfrac/error.hpp"

namespace arfrac {

namespace {

[[noreturn]] void parse_fail(const std::string& message) {
  throw Error("polynomial", ErrorCode::ParseError, message);
}

template <typename T>
T power(const T& base, unsigned exponent) {
  T result = 1;
  for (unsigned k = 0; k < exponent; ++k) result *= base;
  return result;
}

}  // namespace

Polynomial Polynomial::from_monomials(std::size_t variables, std::span<const Monomial> monomials) {
  Polynomial p(variables);
  for (const auto& m : monomials) {
    if (m.exponents.size() != variables) {
      throw Error("polynomial", ErrorCode::InvalidArgument,
                  "monomial has " + std::to_string(m.exponents.size()) + " exponents, expected " +
                      std::to_string(variables));
    }
    p.add_term(m.exponents, m.coeff);
  }
  return p;
}

Polynomial Polynomial::constant(std::size_t variables, const Rational& value) {
  Polynomial p(variables);
  p.add_term(Exponents(variables, 0), value);
  return p;
}

Polynomial Polynomial::variable(std::size_t variables, std::size_t index) {
  Polynomial p(variables);
  Exponents e(variables, 0);
  e.at(index) = 1;
  p.add_term(e, Rational(1));
  return p;
}

void Polynomial::add_term(const Exponents& exponents, const Rational& coeff) {
  if (coeff == 0) return;
  auto [it, inserted] = terms_.try_emplace(exponents, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0) terms_.erase(it);
  }
}

std::vector<Monomial> Polynomial::monomials() const {
  std::vector<Monomial> out;
  out.reserve(terms_.size());
  for (const auto& [e, c] : terms_) out.push_back({c, e});
  return out;
}

int Polynomial::total_degree() const {
  int degree = -1;
  for (const auto& [e, c] : terms_) {
    int d = 0;
    for (unsigned k : e) d += static_cast<int>(k);
    degree = std::max(degree, d);
  }
  return degree;
}

bool Polynomial::is_homogeneous() const {
  const int degree = total_degree();
  for (const auto& [e, c] : terms_) {
    int d = 0;
    for (unsigned k : e) d += static_cast<int>(k);
    if (d != degree) return false;
  }
  return true;
}

bool Polynomial::has_integer_coefficients() const {
  for (const auto& [e, c] : terms_) {
    if (c.get_den() != 1) return false;
  }
  return true;
}

Rational Polynomial::evaluate(std::span<const Rational> point) const {
  if (point.size() != variables_) {
    throw Error("polynomial", ErrorCode::InvalidArgument, "point arity does not match polynomial");
  }
  Rational sum = 0;
  for (const auto& [e, c] : terms_) {
    Rational term = c;
    for (std::size_t k = 0; k < variables_; ++k) {
      if (e[k] != 0) term *= power<Rational>(point[k], e[k]);
    }
    sum += term;
  }
  return sum;
}

Integer Polynomial::evaluate(std::span<const Integer> point) const {
  if (point.size() != variables_) {
    throw Error("polynomial", ErrorCode::InvalidArgument, "point arity does not match polynomial");
  }
  Integer sum = 0;
  for (const auto& [e, c] : terms_) {
    if (c.get_den() != 1) {
      throw Error("polynomial", ErrorCode::InvalidArgument, "integer evaluation needs integer coefficients");
    }
    Integer term = c.get_num();
    for (std::size_t k = 0; k < variables_; ++k) {
      if (e[k] != 0) {
        Integer p;
        mpz_pow_ui(p.get_mpz_t(), point[k].get_mpz_t(), e[k]);
        term *= p;
      }
    }
    sum += term;
  }
  return sum;
}

Polynomial Polynomial::operator+(const Polynomial& other) const {
  Polynomial out = *this;
  for (const auto& [e, c] : other.terms_) out.add_term(e, c);
  return out;
}

Polynomial Polynomial::operator-() const {
  Polynomial out(variables_);
  for (const auto& [e, c] : terms_) out.add_term(e, -c);
  return out;
}

Polynomial Polynomial::operator-(const Polynomial& other) const { return *this + (-other); }

Polynomial Polynomial::operator*(const Polynomial& other) const {
  Polynomial out(variables_);
  for (const auto& [ea, ca] : terms_) {
    for (const auto& [eb, cb] : other.terms_) {
      Exponents e(variables_);
      for (std::size_t k = 0; k < variables_; ++k) e[k] = ea[k] + eb[k];
      out.add_term(e, ca * cb);
    }
  }
  return out;
}

Polynomial Polynomial::pow(unsigned exponent) const {
  Polynomial out = constant(variables_, Rational(1));
  for (unsigned k = 0; k < exponent; ++k) out = out * *this;
  return out;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  // Highest total degree first for readability.
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    Rational magnitude = abs(c);
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    bool constant_term = true;
    for (unsigned k : e) constant_term = constant_term && k == 0;
    bool wrote = false;
    if (magnitude != 1 || constant_term) {
      os << magnitude.get_str();
      wrote = true;
    }
    for (std::size_t k = 0; k < e.size(); ++k) {
      if (e[k] == 0) continue;
      if (wrote) os << "*";
      os << "x" << (k + 1);
      if (e[k] > 1) os << "^" << e[k];
      wrote = true;
    }
  }
  return os.str();
}

namespace {

class PolyParser {
 public:
  PolyParser(std::string_view text, std::size_t variables) : text_(text), variables_(variables) {}

  Polynomial parse() {
    Polynomial p = expression();
    skip_space();
    if (pos_ != text_.size()) parse_fail("unexpected '" + std::string(1, text_[pos_]) + "' in polynomial");
    return p;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Polynomial expression() {
    Polynomial p(variables_);
    bool negate = false;
    if (accept('-')) negate = true;
    else accept('+');
    p = term();
    if (negate) p = -p;
    while (true) {
      if (accept('+')) p = p + term();
      else if (accept('-')) p = p - term();
      else return p;
    }
  }

  Polynomial term() {
    Polynomial p = factor();
    while (true) {
      if (accept('*')) {
        p = p * factor();
      } else if (accept('/')) {
        Polynomial d = factor();
        if (d.total_degree() != 0) parse_fail("division only by nonzero constants");
        const Rational c = d.terms().begin()->second;
        p = p * Polynomial::constant(variables_, Rational(1) / c);
      } else {
        return p;
      }
    }
  }

  Polynomial factor() {
    Polynomial base = primary();
    if (accept('^')) {
      skip_space();
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) parse_fail("expected exponent after '^'");
      base = base.pow(static_cast<unsigned>(std::stoul(std::string(text_.substr(start, pos_ - start)))));
    }
    return base;
  }

  Polynomial primary() {
    skip_space();
    if (pos_ >= text_.size()) parse_fail("unexpected end of polynomial");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Polynomial p = expression();
      if (!accept(')')) parse_fail("missing ')'");
      return p;
    }
    if (c == '-') {
      ++pos_;
      return -factor();
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      return Polynomial::constant(variables_, Rational(parse_integer(text_.substr(start, pos_ - start))));
    }
    if (c == 'x') {
      ++pos_;
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      std::size_t index = 1;
      if (start != pos_) index = std::stoul(std::string(text_.substr(start, pos_ - start)));
      else if (variables_ != 1) parse_fail("bare 'x' is only allowed for one variable");
      if (index == 0 || index > variables_) parse_fail("variable x" + std::to_string(index) + " out of range");
      return Polynomial::variable(variables_, index - 1);
    }
    parse_fail("unexpected '" + std::string(1, c) + "' in polynomial");
  }

  std::string_view text_;
  std::size_t variables_;
  std::size_t pos_ = 0;
};

}  // namespace

Polynomial parse_polynomial(std::string_view text, std::size_t variables) {
  return PolyParser(text, variables).parse();
}

}  // namespace arfrac
