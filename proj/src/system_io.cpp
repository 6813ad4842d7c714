#include "arfrac/system_io.hpp"

#include <fstream>

#include "arfrac/error.hpp"

namespace arfrac {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& message) { throw Error("io", ErrorCode::ConfigParse, message); }

std::string scalar_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  bad("expected an integer or rational string, got " + v.dump());
}

Integer as_integer(const json& v) { return parse_integer(scalar_text(v)); }
Rational as_rational(const json& v) { return parse_rational(scalar_text(v)); }

Gaussian as_gaussian(const json& v) {
  if (!v.is_array() || v.size() != 2) bad("Gaussian integers are [re, im] pairs, got " + v.dump());
  return {as_integer(v[0]), as_integer(v[1])};
}

Polynomial as_polynomial(const json& v, std::size_t variables) {
  if (v.is_string()) return parse_polynomial(v.get<std::string>(), variables);
  if (!v.is_array()) bad("polynomial must be a list of monomial records or a string");
  std::vector<Monomial> monomials;
  for (const auto& m : v) {
    if (!m.contains("coeff") || !m.contains("exponents")) bad("monomial needs coeff and exponents");
    monomials.push_back({as_rational(m.at("coeff")), m.at("exponents").get<std::vector<unsigned>>()});
  }
  return Polynomial::from_monomials(variables, monomials);
}

json polynomial_json(const Polynomial& p) {
  json out = json::array();
  for (const auto& m : p.monomials()) out.push_back({{"coeff", m.coeff.get_str()}, {"exponents", m.exponents}});
  return out;
}

SpaceKind parse_space(const std::string& name) {
  if (name == "int") return SpaceKind::Int;
  if (name == "gauss") return SpaceKind::Gauss;
  if (name == "affq") return SpaceKind::AffQ;
  if (name == "projq") return SpaceKind::ProjQ;
  if (name == "ec") return SpaceKind::EC;
  bad("unknown space '" + name + "'");
}

CurvePoint as_curve_point(const json& v) {
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "O") return CurvePoint::at_infinity();
    bad("curve point must be [x, y] or \"inf\"");
  }
  if (!v.is_array() || v.size() != 2) bad("curve point must be [x, y] or \"inf\"");
  return CurvePoint::affine(as_rational(v[0]), as_rational(v[1]));
}

SpacePoint as_point(const json& v, const Space& space) {
  switch (space.kind) {
    case SpaceKind::Int: return IntPoint{as_integer(v)};
    case SpaceKind::Gauss: return GaussPoint{as_gaussian(v)};
    case SpaceKind::AffQ: {
      AffinePoint p;
      for (const auto& c : v) p.coords.push_back(as_rational(c));
      return canonicalize(p);
    }
    case SpaceKind::ProjQ: {
      ProjectivePoint p;
      for (const auto& c : v) p.coords.push_back(as_integer(c));
      return canonicalize(p);
    }
    case SpaceKind::EC: return canonicalize(as_curve_point(v));
  }
  bad("unreachable");
}

SimilarityMap as_map(const json& v, const Space& space) {
  switch (space.kind) {
    case SpaceKind::Int: return IntAffine{as_integer(v.at("a")), as_integer(v.value("b", json("0")))};
    case SpaceKind::Gauss: return GaussAffine{as_gaussian(v.at("a")), as_gaussian(v.value("b", json::array({0, 0})))};
    case SpaceKind::AffQ: {
      PolyTupleQ m;
      for (const auto& c : v.at("components")) m.components.push_back(as_polynomial(c, space.dim));
      return m;
    }
    case SpaceKind::ProjQ: {
      ProjHomog m;
      for (const auto& f : v.at("forms")) m.forms.push_back(as_polynomial(f, space.dim + 1));
      return m;
    }
    case SpaceKind::EC: {
      CurvePoint t = v.contains("translation") ? as_curve_point(v.at("translation")) : CurvePoint::at_infinity();
      return EllTranslate{*space.curve, as_integer(v.at("n")), std::get<CurvePoint>(canonicalize(SpacePoint{t}))};
    }
  }
  bad("unreachable");
}

json gaussian_json(const Gaussian& g) { return json::array({g.re.get_str(), g.im.get_str()}); }

json curve_point_json(const CurvePoint& p) {
  if (p.infinity) return "inf";
  return json::array({p.x.get_str(), p.y.get_str()});
}

}  // namespace

json point_to_json(const SpacePoint& p) {
  switch (kind_of(p)) {
    case SpaceKind::Int: return std::get<IntPoint>(p).value.get_str();
    case SpaceKind::Gauss: return gaussian_json(std::get<GaussPoint>(p).value);
    case SpaceKind::AffQ: {
      json out = json::array();
      for (const auto& c : std::get<AffinePoint>(p).coords) out.push_back(c.get_str());
      return out;
    }
    case SpaceKind::ProjQ: {
      json out = json::array();
      for (const auto& c : std::get<ProjectivePoint>(p).coords) out.push_back(c.get_str());
      return out;
    }
    case SpaceKind::EC: return curve_point_json(std::get<CurvePoint>(p));
  }
  return nullptr;
}

LoadedSystem system_from_json(const json& doc) {
  try {
    LoadedSystem out;
    auto& sys = out.system;
    sys.space.kind = parse_space(doc.at("space").get<std::string>());
    if (sys.space.kind == SpaceKind::AffQ || sys.space.kind == SpaceKind::ProjQ) {
      sys.space.dim = doc.at("dim").get<std::size_t>();
      if (sys.space.dim == 0) bad("dim must be positive");
    }
    if (sys.space.kind == SpaceKind::EC) {
      const auto& c = doc.at("curve");
      if (!c.is_array() || c.size() != 5) bad("curve must list a1,a2,a3,a4,a6");
      sys.space.curve.emplace(as_rational(c[0]), as_rational(c[1]), as_rational(c[2]), as_rational(c[3]),
                              as_rational(c[4]));
    }
    for (const auto& m : doc.at("maps")) sys.maps.push_back(as_map(m, sys.space));
    for (const auto& s : doc.at("seeds")) sys.seeds.push_back(as_point(s, sys.space));
    sys.label = doc.value("label", std::string{});
    if (doc.contains("expected_dimension")) out.metadata.expected_dimension = doc.at("expected_dimension").get<double>();
    if (doc.contains("exact")) out.metadata.exact = doc.at("exact").get<bool>();
    out.metadata.notes = doc.value("notes", std::string{});
    return out;
  } catch (const json::exception& e) {
    bad(std::string("malformed system document: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigParse) throw;
    bad(e.qualified_code() + ": " + e.what());
  }
}

json system_to_json(const FractalSystem& system, const SystemMetadata& metadata) {
  json doc;
  doc["space"] = std::string(to_string(system.space.kind));
  if (system.space.kind == SpaceKind::AffQ || system.space.kind == SpaceKind::ProjQ) doc["dim"] = system.space.dim;
  if (system.space.curve) {
    const auto& c = *system.space.curve;
    doc["curve"] = {c.a1().get_str(), c.a2().get_str(), c.a3().get_str(), c.a4().get_str(), c.a6().get_str()};
  }
  json maps = json::array();
  for (const auto& m : system.maps) {
    if (const auto* v = std::get_if<IntAffine>(&m)) {
      maps.push_back({{"a", v->a.get_str()}, {"b", v->b.get_str()}});
    } else if (const auto* v = std::get_if<GaussAffine>(&m)) {
      maps.push_back({{"a", gaussian_json(v->a)}, {"b", gaussian_json(v->b)}});
    } else if (const auto* v = std::get_if<PolyTupleQ>(&m)) {
      json comps = json::array();
      for (const auto& c : v->components) comps.push_back(polynomial_json(c));
      maps.push_back({{"components", comps}});
    } else if (const auto* v = std::get_if<ProjHomog>(&m)) {
      json forms = json::array();
      for (const auto& f : v->forms) forms.push_back(polynomial_json(f));
      maps.push_back({{"forms", forms}});
    } else if (const auto* v = std::get_if<EllTranslate>(&m)) {
      maps.push_back({{"n", v->multiplier.get_str()}, {"translation", curve_point_json(v->translation)}});
    }
  }
  doc["maps"] = maps;
  json seeds = json::array();
  for (const auto& s : system.seeds) seeds.push_back(point_to_json(s));
  doc["seeds"] = seeds;
  doc["label"] = system.label;
  if (metadata.expected_dimension) doc["expected_dimension"] = *metadata.expected_dimension;
  if (metadata.exact) doc["exact"] = *metadata.exact;
  if (!metadata.notes.empty()) doc["notes"] = metadata.notes;
  return doc;
}

LoadedSystem load_system(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("io", ErrorCode::MissingFile, "cannot open system file '" + path.string() + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    bad("'" + path.string() + "' is not valid JSON: " + e.what());
  }
  return system_from_json(doc);
}

}  // namespace arfrac
