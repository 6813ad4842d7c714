#include "arfrac/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "arfrac/error.hpp"

namespace arfrac {

namespace {

[[noreturn]] void mismatch(const std::string& what) {
  throw Error("spaces", ErrorCode::SpaceMismatch, what);
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

ProjectivePoint canonical_projective(std::vector<Integer> coords) {
  Integer g = 0;
  for (const auto& c : coords) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  if (g == 0) throw Error("spaces", ErrorCode::ZeroProjectivePoint, "all projective coordinates are zero");
  const auto lead = std::find_if(coords.begin(), coords.end(), [](const Integer& c) { return c != 0; });
  if (*lead < 0) g = -g;
  if (g != 1) {
    for (auto& c : coords) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
  }
  return ProjectivePoint{std::move(coords)};
}

// Exact k-th root of a rational, if any. Returns the nonnegative root for
// even k (callers add the negative one).
std::optional<Rational> rational_root(const Rational& value, unsigned k) {
  if (k == 1) return value;
  if (value < 0 && k % 2 == 0) return std::nullopt;
  Integer num = abs(value.get_num());
  Integer den = value.get_den();
  Integer rn, rd;
  if (!mpz_root(rn.get_mpz_t(), num.get_mpz_t(), k)) return std::nullopt;
  if (!mpz_root(rd.get_mpz_t(), den.get_mpz_t(), k)) return std::nullopt;
  Rational root(rn, rd);
  root.canonicalize();
  if (value < 0) root = -root;
  return root;
}

struct MonomialComponent {
  Rational coeff;
  unsigned power;
};

// i-th component must be coeff * x_i^power.
std::optional<std::vector<MonomialComponent>> monomial_form(const PolyTupleQ& map) {
  const std::size_t n = map.components.size();
  std::vector<MonomialComponent> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& poly = map.components[i];
    if (poly.variables() != n || poly.terms().size() != 1) return std::nullopt;
    const auto& [exps, coeff] = *poly.terms().begin();
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i && exps[j] != 0) return std::nullopt;
    }
    if (exps[i] == 0) return std::nullopt;
    out.push_back({coeff, exps[i]});
  }
  return out;
}

std::string gaussian_string(const Gaussian& g) {
  if (g.im == 0) return g.re.get_str();
  std::string im;
  if (g.im == 1) im = "i";
  else if (g.im == -1) im = "-i";
  else im = g.im.get_str() + "i";
  if (g.re == 0) return im;
  if (g.im > 0) return g.re.get_str() + "+" + im;
  return g.re.get_str() + im;
}

std::string_view strip(std::string_view text) {
  auto is_pad = [](char c) { return c == ' ' || c == '\t' || c == '(' || c == ')' || c == '[' || c == ']'; };
  while (!text.empty() && is_pad(text.front())) text.remove_prefix(1);
  while (!text.empty() && is_pad(text.back())) text.remove_suffix(1);
  return text;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

Gaussian parse_gaussian(std::string_view text) {
  text = strip(text);
  if (text.find(',') != std::string_view::npos) {
    auto parts = split(text, ',');
    if (parts.size() != 2) throw Error("spaces", ErrorCode::ParseError, "Gaussian integer needs two parts");
    return {parse_integer(parts[0]), parse_integer(parts[1])};
  }
  std::string compact;
  for (char c : text) {
    if (c != ' ') compact += c;
  }
  if (compact.empty() || compact.back() != 'i') return {parse_integer(compact), 0};
  compact.pop_back();
  // Split real and imaginary parts at the last sign that is not leading.
  std::size_t split_at = std::string::npos;
  for (std::size_t k = compact.size(); k-- > 1;) {
    if (compact[k] == '+' || compact[k] == '-') {
      split_at = k;
      break;
    }
  }
  std::string re = split_at == std::string::npos ? "0" : compact.substr(0, split_at);
  std::string im = split_at == std::string::npos ? compact : compact.substr(split_at);
  if (im.empty() || im == "+") im = "1";
  else if (im == "-") im = "-1";
  return {parse_integer(re), parse_integer(im)};
}

}  // namespace

std::string_view to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::Int: return "int";
    case SpaceKind::Gauss: return "gauss";
    case SpaceKind::AffQ: return "affq";
    case SpaceKind::ProjQ: return "projq";
    case SpaceKind::EC: return "ec";
  }
  return "?";
}

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::NoMaps: return "NoMaps";
    case ViolationKind::NoSeeds: return "NoSeeds";
    case ViolationKind::SpaceMismatch: return "SpaceMismatch";
    case ViolationKind::NonExpanding: return "NonExpanding";
    case ViolationKind::DegreeTooLow: return "DegreeTooLow";
    case ViolationKind::WrongArity: return "WrongArity";
    case ViolationKind::NotHomogeneous: return "NotHomogeneous";
    case ViolationKind::NonIntegerCoefficient: return "NonIntegerCoefficient";
    case ViolationKind::CommonZero: return "CommonZero";
    case ViolationKind::NotOnCurve: return "NotOnCurve";
    case ViolationKind::NonCanonicalSeed: return "NonCanonicalSeed";
  }
  return "?";
}

Gaussian operator+(const Gaussian& a, const Gaussian& b) { return {a.re + b.re, a.im + b.im}; }
Gaussian operator-(const Gaussian& a, const Gaussian& b) { return {a.re - b.re, a.im - b.im}; }
Gaussian operator*(const Gaussian& a, const Gaussian& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

std::optional<Gaussian> exact_divide(const Gaussian& dividend, const Gaussian& divisor) {
  const Integer n = divisor.norm();
  if (n == 0) return std::nullopt;
  Gaussian scaled = dividend * divisor.conj();
  if (!mpz_divisible_p(scaled.re.get_mpz_t(), n.get_mpz_t()) ||
      !mpz_divisible_p(scaled.im.get_mpz_t(), n.get_mpz_t())) {
    return std::nullopt;
  }
  mpz_divexact(scaled.re.get_mpz_t(), scaled.re.get_mpz_t(), n.get_mpz_t());
  mpz_divexact(scaled.im.get_mpz_t(), scaled.im.get_mpz_t(), n.get_mpz_t());
  return scaled;
}

SpaceKind kind_of(const SpacePoint& p) { return static_cast<SpaceKind>(p.index()); }

SpaceKind kind_of(const SimilarityMap& map) { return static_cast<SpaceKind>(map.index()); }

bool belongs_to(const SpacePoint& p, const Space& space) {
  if (kind_of(p) != space.kind) return false;
  if (const auto* a = std::get_if<AffinePoint>(&p)) return a->coords.size() == space.dim;
  if (const auto* q = std::get_if<ProjectivePoint>(&p)) return q->coords.size() == space.dim + 1;
  if (const auto* e = std::get_if<CurvePoint>(&p)) return space.curve && on_curve(*space.curve, *e);
  return true;
}

long degree(const SimilarityMap& map) {
  return std::visit(Overloaded{
                        [](const IntAffine&) -> long { return 1; },
                        [](const GaussAffine&) -> long { return 1; },
                        [](const PolyTupleQ& m) -> long {
                          long d = 0;
                          for (const auto& c : m.components) d = std::max<long>(d, c.total_degree());
                          return d;
                        },
                        [](const ProjHomog& m) -> long {
                          long d = 0;
                          for (const auto& f : m.forms) d = std::max<long>(d, f.total_degree());
                          return d;
                        },
                        [](const EllTranslate& m) -> long { return Integer(m.multiplier * m.multiplier).get_si(); },
                    },
                    map);
}

std::string describe(const SimilarityMap& map) {
  return std::visit(Overloaded{
                        [](const IntAffine& m) {
                          return m.a.get_str() + "*x" + (m.b < 0 ? "-" : "+") + Integer(abs(m.b)).get_str();
                        },
                        [](const GaussAffine& m) {
                          return "(" + gaussian_string(m.a) + ")*z+(" + gaussian_string(m.b) + ")";
                        },
                        [](const PolyTupleQ& m) {
                          std::string s = "(";
                          for (std::size_t k = 0; k < m.components.size(); ++k) {
                            s += (k ? ", " : "") + m.components[k].to_string();
                          }
                          return s + ")";
                        },
                        [](const ProjHomog& m) {
                          std::string s = "(";
                          for (std::size_t k = 0; k < m.forms.size(); ++k) {
                            s += (k ? " : " : "") + m.forms[k].to_string();
                          }
                          return s + ")";
                        },
                        [](const EllTranslate& m) {
                          return "[" + m.multiplier.get_str() + "]P + " + m.translation.to_string();
                        },
                    },
                    map);
}

SpacePoint canonicalize(const SpacePoint& p) {
  return std::visit(Overloaded{
                        [](const IntPoint& v) -> SpacePoint { return v; },
                        [](const GaussPoint& v) -> SpacePoint { return v; },
                        [](const AffinePoint& v) -> SpacePoint {
                          AffinePoint out = v;
                          for (auto& c : out.coords) c.canonicalize();
                          return out;
                        },
                        [](const ProjectivePoint& v) -> SpacePoint { return canonical_projective(v.coords); },
                        [](const CurvePoint& v) -> SpacePoint {
                          if (v.infinity) return CurvePoint::at_infinity();
                          CurvePoint out = v;
                          out.x.canonicalize();
                          out.y.canonicalize();
                          return out;
                        },
                    },
                    p);
}

bool is_canonical(const SpacePoint& p) {
  if (const auto* q = std::get_if<ProjectivePoint>(&p)) {
    bool any = false;
    for (const auto& c : q->coords) any = any || c != 0;
    if (!any) return false;
  }
  return canonicalize(p) == p;
}

std::string encode(const SpacePoint& p) {
  return std::visit(Overloaded{
                        [](const IntPoint& v) { return "Z|" + v.value.get_str(); },
                        [](const GaussPoint& v) { return "G|" + v.value.re.get_str() + "|" + v.value.im.get_str(); },
                        [](const AffinePoint& v) {
                          std::string s = "A";
                          for (const auto& c : v.coords) s += "|" + c.get_str();
                          return s;
                        },
                        [](const ProjectivePoint& v) {
                          std::string s = "P";
                          for (const auto& c : v.coords) s += "|" + c.get_str();
                          return s;
                        },
                        [](const CurvePoint& v) -> std::string {
                          if (v.infinity) return "E|inf";
                          return "E|" + v.x.get_str() + "|" + v.y.get_str();
                        },
                    },
                    p);
}

std::string to_string(const SpacePoint& p) {
  return std::visit(Overloaded{
                        [](const IntPoint& v) { return v.value.get_str(); },
                        [](const GaussPoint& v) { return gaussian_string(v.value); },
                        [](const AffinePoint& v) {
                          std::string s = "(";
                          for (std::size_t k = 0; k < v.coords.size(); ++k) s += (k ? "," : "") + v.coords[k].get_str();
                          return s + ")";
                        },
                        [](const ProjectivePoint& v) {
                          std::string s = "(";
                          for (std::size_t k = 0; k < v.coords.size(); ++k) s += (k ? ":" : "") + v.coords[k].get_str();
                          return s + ")";
                        },
                        [](const CurvePoint& v) { return v.to_string(); },
                    },
                    p);
}

SpacePoint parse_point(std::string_view text, const Space& space) {
  const std::string_view body = strip(text);
  SpacePoint out;
  switch (space.kind) {
    case SpaceKind::Int:
      out = IntPoint{parse_integer(body)};
      break;
    case SpaceKind::Gauss:
      out = GaussPoint{parse_gaussian(body)};
      break;
    case SpaceKind::AffQ: {
      AffinePoint a;
      for (auto part : split(body, ',')) a.coords.push_back(parse_rational(part));
      out = std::move(a);
      break;
    }
    case SpaceKind::ProjQ: {
      // Rational homogeneous coordinates are accepted and cleared.
      std::vector<Rational> rs;
      for (auto part : split(body, body.find(':') != std::string_view::npos ? ':' : ',')) {
        rs.push_back(parse_rational(part));
      }
      Integer l = 1;
      for (const auto& r : rs) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), r.get_den_mpz_t());
      std::vector<Integer> coords;
      for (const auto& r : rs) coords.push_back(r.get_num() * (l / r.get_den()));
      out = ProjectivePoint{std::move(coords)};
      break;
    }
    case SpaceKind::EC: {
      if (body == "inf" || body == "O" || body == "oo") {
        out = CurvePoint::at_infinity();
      } else {
        auto parts = split(body, ',');
        if (parts.size() != 2) throw Error("spaces", ErrorCode::ParseError, "curve point needs 'x,y' or 'inf'");
        out = CurvePoint::affine(parse_rational(parts[0]), parse_rational(parts[1]));
      }
      break;
    }
  }
  out = canonicalize(out);
  if (!belongs_to(out, space)) {
    throw Error("spaces", ErrorCode::SpaceMismatch,
                "point '" + std::string(text) + "' does not belong to the " + std::string(to_string(space.kind)) +
                    " space");
  }
  return out;
}

SpacePoint parse_point_any(std::string_view text) {
  const std::string_view body = strip(text);
  Space space;
  if (body.find(':') != std::string_view::npos) {
    space.kind = SpaceKind::ProjQ;
    space.dim = split(body, ':').size() - 1;
  } else if (body.find('i') != std::string_view::npos) {
    space.kind = SpaceKind::Gauss;
  } else if (body.find(',') != std::string_view::npos) {
    space.kind = SpaceKind::AffQ;
    space.dim = split(body, ',').size();
  }
  return parse_point(body, space);
}

namespace {

void check_map(const SimilarityMap& map, std::size_t index, const Space& space, int grid,
               std::vector<Violation>& out) {
  auto add = [&](ViolationKind kind, std::string detail) {
    out.push_back({kind, "map", index, std::move(detail)});
  };
  if (kind_of(map) != space.kind) {
    add(ViolationKind::SpaceMismatch,
        std::string(to_string(kind_of(map))) + " map in a " + std::string(to_string(space.kind)) + " system");
    return;
  }
  std::visit(
      Overloaded{
          [&](const IntAffine& m) {
            if (abs(m.a) <= 1) add(ViolationKind::NonExpanding, "|a| = " + Integer(abs(m.a)).get_str() + " <= 1");
          },
          [&](const GaussAffine& m) {
            if (m.a.norm() <= 1) add(ViolationKind::NonExpanding, "Norm(a) = " + m.a.norm().get_str() + " <= 1");
          },
          [&](const PolyTupleQ& m) {
            if (m.components.size() != space.dim) {
              add(ViolationKind::WrongArity, std::to_string(m.components.size()) + " components for Q^" +
                                                 std::to_string(space.dim));
            }
            for (std::size_t k = 0; k < m.components.size(); ++k) {
              if (m.components[k].variables() != space.dim) {
                add(ViolationKind::WrongArity, "component " + std::to_string(k) + " has wrong variable count");
              } else if (m.components[k].total_degree() < 1) {
                add(ViolationKind::DegreeTooLow, "component " + std::to_string(k) + " is constant");
              }
            }
          },
          [&](const ProjHomog& m) {
            const std::size_t n1 = space.dim + 1;
            if (m.forms.size() != n1) {
              add(ViolationKind::WrongArity, std::to_string(m.forms.size()) + " forms for P^" + std::to_string(space.dim));
              return;
            }
            int common = -2;
            bool arity_ok = true;
            for (std::size_t k = 0; k < n1; ++k) {
              const auto& f = m.forms[k];
              if (f.variables() != n1) {
                add(ViolationKind::WrongArity, "form " + std::to_string(k) + " has wrong variable count");
                arity_ok = false;
                continue;
              }
              if (!f.has_integer_coefficients()) {
                add(ViolationKind::NonIntegerCoefficient, "form " + std::to_string(k));
              }
              if (f.is_zero() || !f.is_homogeneous() || (common != -2 && f.total_degree() != common)) {
                add(ViolationKind::NotHomogeneous, "form " + std::to_string(k));
              }
              if (common == -2) common = f.total_degree();
            }
            if (common >= 0 && common <= 1) add(ViolationKind::DegreeTooLow, "degree " + std::to_string(common) + " <= 1");
            if (!arity_ok) return;
            // Common zeros on the canonical grid [-grid, grid]^(n+1).
            int half = grid;
            while (half > 1 && std::pow(2.0 * half + 1, static_cast<double>(n1)) > 2e5) --half;
            std::vector<Integer> coords(n1, -half);
            while (true) {
              bool nonzero = false;
              for (const auto& c : coords) nonzero = nonzero || c != 0;
              if (nonzero) {
                const ProjectivePoint cp = canonical_projective(coords);
                if (cp.coords == coords) {
                  bool all_zero = true;
                  for (const auto& f : m.forms) {
                    if (f.has_integer_coefficients() && f.evaluate(std::span<const Integer>(coords)) != 0) {
                      all_zero = false;
                      break;
                    }
                  }
                  if (all_zero) {
                    add(ViolationKind::CommonZero, "forms vanish at " + to_string(SpacePoint{cp}));
                    return;
                  }
                }
              }
              std::size_t k = 0;
              while (k < n1 && coords[k] == half) coords[k++] = -half;
              if (k == n1) break;
              coords[k] += 1;
            }
          },
          [&](const EllTranslate& m) {
            if (!space.curve || !(m.curve == *space.curve)) add(ViolationKind::SpaceMismatch, "map curve differs");
            if (abs(m.multiplier) < 2) add(ViolationKind::NonExpanding, "|n| = " + Integer(abs(m.multiplier)).get_str() + " < 2");
            if (!on_curve(m.curve, m.translation)) add(ViolationKind::NotOnCurve, "translation point");
          },
      },
      map);
}

}  // namespace

ValidationReport validate_system(const FractalSystem& system, int common_zero_grid) {
  ValidationReport report;
  auto& out = report.violations;
  if (system.maps.empty()) out.push_back({ViolationKind::NoMaps, "system", 0, "at least one map required"});
  if (system.seeds.empty()) out.push_back({ViolationKind::NoSeeds, "system", 0, "at least one seed required"});
  for (std::size_t i = 0; i < system.maps.size(); ++i) check_map(system.maps[i], i, system.space, common_zero_grid, out);
  for (std::size_t i = 0; i < system.seeds.size(); ++i) {
    const auto& s = system.seeds[i];
    if (kind_of(s) != system.space.kind) {
      out.push_back({ViolationKind::SpaceMismatch, "seed", i, "seed is not in the system space"});
      continue;
    }
    if (const auto* e = std::get_if<CurvePoint>(&s)) {
      if (!system.space.curve || !on_curve(*system.space.curve, *e)) {
        out.push_back({ViolationKind::NotOnCurve, "seed", i, e->to_string()});
      }
      continue;
    }
    if (!belongs_to(s, system.space)) {
      out.push_back({ViolationKind::WrongArity, "seed", i, "seed has the wrong number of coordinates"});
      continue;
    }
    if (!is_canonical(s)) out.push_back({ViolationKind::NonCanonicalSeed, "seed", i, to_string(s)});
  }
  return report;
}

SpacePoint apply(const SimilarityMap& map, const SpacePoint& p) {
  return std::visit(
      Overloaded{
          [&](const IntAffine& m) -> SpacePoint {
            const auto* v = std::get_if<IntPoint>(&p);
            if (!v) mismatch("integer map applied to " + std::string(to_string(kind_of(p))) + " point");
            return IntPoint{m.a * v->value + m.b};
          },
          [&](const GaussAffine& m) -> SpacePoint {
            const auto* v = std::get_if<GaussPoint>(&p);
            if (!v) mismatch("Gaussian map applied to " + std::string(to_string(kind_of(p))) + " point");
            return GaussPoint{m.a * v->value + m.b};
          },
          [&](const PolyTupleQ& m) -> SpacePoint {
            const auto* v = std::get_if<AffinePoint>(&p);
            if (!v || v->coords.size() != m.components.size()) mismatch("polynomial map arity mismatch");
            AffinePoint out;
            out.coords.reserve(m.components.size());
            for (const auto& c : m.components) out.coords.push_back(c.evaluate(std::span<const Rational>(v->coords)));
            return out;
          },
          [&](const ProjHomog& m) -> SpacePoint {
            const auto* v = std::get_if<ProjectivePoint>(&p);
            if (!v || v->coords.size() != m.forms.size()) mismatch("projective map arity mismatch");
            std::vector<Integer> coords;
            coords.reserve(m.forms.size());
            for (const auto& f : m.forms) coords.push_back(f.evaluate(std::span<const Integer>(v->coords)));
            return canonical_projective(std::move(coords));
          },
          [&](const EllTranslate& m) -> SpacePoint {
            const auto* v = std::get_if<CurvePoint>(&p);
            if (!v) mismatch("curve map applied to " + std::string(to_string(kind_of(p))) + " point");
            return canonicalize(ec_add(m.curve, ec_mul(m.curve, m.multiplier, *v), m.translation));
          },
      },
      map);
}

bool supports_preimage(const SimilarityMap& map) {
  if (std::holds_alternative<IntAffine>(map) || std::holds_alternative<GaussAffine>(map)) return true;
  if (const auto* m = std::get_if<PolyTupleQ>(&map)) return monomial_form(*m).has_value();
  return false;
}

std::vector<SpacePoint> preimages(const SimilarityMap& map, const SpacePoint& p) {
  if (!supports_preimage(map)) {
    throw Error("spaces", ErrorCode::UnsupportedMapKind, "no exact inverse for map " + describe(map));
  }
  std::vector<SpacePoint> out;
  if (const auto* m = std::get_if<IntAffine>(&map)) {
    const auto* v = std::get_if<IntPoint>(&p);
    if (!v) mismatch("integer map, non-integer point");
    Integer diff = v->value - m->b;
    if (mpz_divisible_p(diff.get_mpz_t(), m->a.get_mpz_t())) {
      mpz_divexact(diff.get_mpz_t(), diff.get_mpz_t(), m->a.get_mpz_t());
      out.push_back(IntPoint{std::move(diff)});
    }
    return out;
  }
  if (const auto* m = std::get_if<GaussAffine>(&map)) {
    const auto* v = std::get_if<GaussPoint>(&p);
    if (!v) mismatch("Gaussian map, non-Gaussian point");
    if (auto q = exact_divide(v->value - m->b, m->a)) out.push_back(GaussPoint{std::move(*q)});
    return out;
  }
  const auto& poly = std::get<PolyTupleQ>(map);
  const auto* v = std::get_if<AffinePoint>(&p);
  if (!v || v->coords.size() != poly.components.size()) mismatch("polynomial map arity mismatch");
  const auto form = *monomial_form(poly);
  std::vector<std::vector<Rational>> options(form.size());
  for (std::size_t i = 0; i < form.size(); ++i) {
    const Rational scaled = v->coords[i] / form[i].coeff;
    auto root = rational_root(scaled, form[i].power);
    if (!root) return out;
    options[i].push_back(*root);
    if (form[i].power % 2 == 0 && *root != 0) options[i].push_back(-*root);
  }
  // Cartesian product, principal (nonnegative) choices first.
  std::vector<std::size_t> pick(form.size(), 0);
  while (true) {
    AffinePoint q;
    for (std::size_t i = 0; i < form.size(); ++i) q.coords.push_back(options[i][pick[i]]);
    out.push_back(std::move(q));
    std::size_t k = form.size();
    while (k-- > 0) {
      if (++pick[k] < options[k].size()) break;
      pick[k] = 0;
    }
    if (k == static_cast<std::size_t>(-1)) break;
  }
  return out;
}

std::optional<SpacePoint> preimage(const SimilarityMap& map, const SpacePoint& p) {
  auto all = preimages(map, p);
  if (all.empty()) return std::nullopt;
  return std::move(all.front());
}

}  // namespace arfrac
