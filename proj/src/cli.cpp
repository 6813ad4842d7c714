#include "arfrac/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "arfrac/approximation.hpp"
#include "arfrac/corpus.hpp"
#include "arfrac/dimension.hpp"
#include "arfrac/elliptic.hpp"
#include "arfrac/enumeration.hpp"
#include "arfrac/error.hpp"
#include "arfrac/growth.hpp"
#include "arfrac/heights.hpp"
#include "arfrac/system_io.hpp"

namespace arfrac::cli {

namespace fs = std::filesystem;
using nlohmann::json;

Integer parse_bound(std::string_view text) {
  const std::string s(text);
  auto fail = [&]() -> Integer { throw Error("cli", ErrorCode::ParseError, "cannot parse bound '" + s + "'"); };
  if (s.empty() || s.front() == '-') return fail();
  if (const auto caret = s.find('^'); caret != std::string::npos) {
    const Integer base = parse_integer(s.substr(0, caret));
    const Integer exp = parse_integer(s.substr(caret + 1));
    if (exp < 0 || !exp.fits_ulong_p()) return fail();
    Integer out;
    mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exp.get_ui());
    return out;
  }
  if (const auto e = s.find_first_of("eE"); e != std::string::npos) {
    const std::string mantissa = s.substr(0, e);
    const Integer exp = parse_integer(s.substr(e + 1));
    if (exp < 0 || !exp.fits_ulong_p()) return fail();
    // Mantissa as an exact decimal fraction.
    const auto dot = mantissa.find('.');
    const std::string digits = dot == std::string::npos ? mantissa : mantissa.substr(0, dot) + mantissa.substr(dot + 1);
    const unsigned long frac = dot == std::string::npos ? 0 : mantissa.size() - dot - 1;
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, exp.get_ui());
    Integer den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac);
    Integer num = parse_integer(digits.empty() ? "0" : digits) * scale;
    mpz_fdiv_q(num.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    return num;
  }
  return parse_integer(s);
}

namespace {

struct Session {
  std::vector<std::string> args;
  std::string out_dir = "arfrac-out";
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  std::optional<double> tol;
  std::ostream* out = nullptr;
  std::vector<std::string> outputs;
  json parameters = json::object();
  json inputs = json::object();

  void write(const std::string& name, const std::string& content) {
    fs::create_directories(out_dir);
    const fs::path path = fs::path(out_dir) / name;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cli", ErrorCode::MissingFile, "cannot write '" + path.string() + "'");
    f << content;
    outputs.push_back(name);
  }

  void write_json(const std::string& name, const json& doc) { write(name, doc.dump(2) + "\n"); }

  LoadedSystem load(const std::string& path) {
    LoadedSystem loaded = load_system(path);
    inputs[path] = system_to_json(loaded.system, loaded.metadata);
    return loaded;
  }

  void manifest(const std::string& name) {
    json m;
    m["tool"] = "arfrac";
    m["version"] = std::string(kVersion);
    m["subcommand"] = name;
    m["argv"] = args;
    m["parameters"] = parameters;
    m["inputs"] = inputs;
    m["outputs"] = outputs;
    m["deterministic"] = true;
    fs::create_directories(out_dir);
    std::ofstream(fs::path(out_dir) / (name + ".manifest.json"), std::ios::binary) << m.dump(2) << "\n";
  }
};

std::string num(double v) { return format_real(v); }

json num_json(double v) { return std::isfinite(v) ? json::parse(format_real(v)) : json(nullptr); }

std::string csv_field(std::string s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void require_valid(const FractalSystem& system, std::ostream& out) {
  const auto report = validate_system(system);
  if (report.valid()) return;
  for (const auto& v : report.violations) {
    out << "violation: " << to_string(v.kind) << " at " << v.subject << " " << v.index << ": " << v.detail << "\n";
  }
  throw Error("cli", ErrorCode::ValidationFailed,
              "system '" + system.label + "' violates " + std::to_string(report.violations.size()) + " invariant(s)");
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> parse_reals(const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split(text, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw Error("cli", ErrorCode::ParseError, "cannot parse number '" + item + "'");
    }
  }
  return out;
}

Curve parse_curve(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 5) throw Error("cli", ErrorCode::ParseError, "curve needs a1,a2,a3,a4,a6");
  return Curve(parse_rational(parts[0]), parse_rational(parts[1]), parse_rational(parts[2]), parse_rational(parts[3]),
               parse_rational(parts[4]));
}

CurvePoint parse_curve_point(const std::string& text, const Curve& curve) {
  Space space{SpaceKind::EC, 1, curve};
  return std::get<CurvePoint>(parse_point(text, space));
}

json verdict_json(const LemmaVerdict& v) {
  json j;
  j["s"] = num_json(v.s);
  j["direction"] = std::string(to_string(v.direction));
  j["bounded"] = v.bounded;
  j["head_median"] = num_json(v.head_median);
  j["tail_extreme"] = num_json(v.tail_extreme);
  j["monotone_tail_ratio"] = num_json(v.monotone_tail_ratio);
  j["tail_monotone"] = v.tail_monotone;
  j["ratio"] = num_json(v.thresholds.ratio);
  j["trend_ratio"] = num_json(v.thresholds.trend_ratio);
  return j;
}

json fit_json(const GrowthFit& f) {
  return {{"exponent", num_json(f.exponent)},
          {"intercept", num_json(f.intercept)},
          {"rmse", num_json(f.rmse)},
          {"xmin", num_json(f.window.xmin)},
          {"xmax", num_json(f.window.xmax)},
          {"points", f.points}};
}

// ---- subcommands -----------------------------------------------------------

struct DimOptions {
  std::string system;
  std::string weights;
  std::string t_module;
  unsigned rank = 1;
  std::string convention = "norm";
};

void cmd_dim(Session& s, const DimOptions& o) {
  auto& out = *s.out;
  const GaussConvention conv = o.convention == "abs" ? GaussConvention::Abs : GaussConvention::Norm;
  if (o.convention != "abs" && o.convention != "norm") {
    throw Error("cli", ErrorCode::ParseError, "convention must be norm or abs");
  }
  std::optional<LoadedSystem> loaded;
  std::optional<WeightSpec> spec;
  if (!o.system.empty()) {
    loaded = s.load(o.system);
    require_valid(loaded->system, out);
    spec = dimension_equation(loaded->system, conv);
  } else if (!o.weights.empty()) {
    spec = WeightSpec(parse_reals(o.weights));
  } else if (!o.t_module.empty()) {
    std::vector<unsigned> degrees;
    for (double d : parse_reals(o.t_module)) degrees.push_back(static_cast<unsigned>(d));
    spec = WeightSpec::t_module(degrees, o.rank);
  } else {
    throw Error("cli", ErrorCode::InvalidArgument, "dim needs a system file, --weights or --t-module");
  }
  const double tol = s.tol.value_or(1e-12);
  const auto r = solve_dimension(*spec, tol);
  json doc;
  json weights = json::array();
  for (double w : spec->weights()) weights.push_back(num_json(w));
  doc["weights"] = weights;
  doc["s"] = num_json(r.s);
  doc["residual"] = num_json(r.residual);
  doc["iterations"] = r.iterations;
  doc["tol"] = num_json(tol);
  out << "weights:";
  for (double w : spec->weights()) out << " " << num(w);
  out << "\ns = " << num(r.s) << "\nresidual = " << num(r.residual) << " (tol " << num(tol) << ")\n";
  if (loaded) {
    doc["system"] = loaded->system.label;
    doc["convention"] = std::string(to_string(conv));
    if (loaded->metadata.expected_dimension) {
      const double e = *loaded->metadata.expected_dimension;
      out << "expected = " << num(e) << ", |s - expected| = " << num(std::fabs(r.s - e)) << "\n";
      doc["expected_dimension"] = num_json(e);
    }
    if (loaded->system.space.kind == SpaceKind::Int) {
      const auto a = reciprocal_sum_audit(loaded->system);
      out << "sum 1/|a_i| = " << num(a.reciprocal_sum) << (a.at_least_one ? " >= 1" : " < 1") << "\n";
      doc["reciprocal_sum"] = num_json(a.reciprocal_sum);
      doc["reciprocal_sum_at_least_one"] = a.at_least_one;
    }
  }
  s.parameters = {{"convention", o.convention}, {"tol", num_json(tol)}};
  s.write_json("dim.json", doc);
}

struct EnumOptions {
  std::string system;
  std::string bound;
  std::size_t max_points = 5'000'000;
  unsigned max_depth = 100'000;
};

void cmd_enumerate(Session& s, const EnumOptions& o) {
  auto loaded = s.load(o.system);
  require_valid(loaded.system, *s.out);
  const Integer bound = parse_bound(o.bound);
  const auto bag = enumerate(loaded.system, bound, {o.max_points, o.max_depth, s.threads});
  std::ostringstream csv;
  csv << "index,point,size,log_size,depth,parent,map\n";
  for (std::size_t i = 0; i < bag.size(); ++i) {
    const auto& e = bag.points[i];
    csv << i << "," << csv_field(to_string(e.point)) << "," << e.size.raw.get_str() << "," << num(e.size.log_size)
        << "," << e.depth << "," << (e.parent ? std::to_string(*e.parent) : "") << ","
        << (e.parent ? std::to_string(e.via_map) : "") << "\n";
  }
  s.write("enumerate.csv", csv.str());
  *s.out << "points = " << bag.size() << "\nbound = " << bound.get_str() << "\ntruncated = "
         << (bag.truncated ? "yes" : "no") << "\n";
  s.parameters = {{"bound", bound.get_str()}, {"max_points", o.max_points}, {"max_depth", o.max_depth}};
  s.write_json("enumerate.json", {{"points", bag.size()}, {"bound", bound.get_str()}, {"truncated", bag.truncated}});
}

struct MemberOptions {
  std::string system;
  std::string point;
  std::size_t depth_limit = 10'000;
};

void cmd_member(Session& s, const MemberOptions& o) {
  auto loaded = s.load(o.system);
  require_valid(loaded.system, *s.out);
  const SpacePoint p = parse_point(o.point, loaded.system.space);
  const auto r = is_member(loaded.system, p, o.depth_limit);
  auto& out = *s.out;
  const char* status = r.status == MemberStatus::Member ? "yes" : r.status == MemberStatus::NotMember ? "no" : "undecided";
  out << "point = " << to_string(p) << "\nmember = " << status << "\n";
  json doc{{"point", to_string(p)}, {"member", status}, {"fallback_used", r.fallback_used}};
  if (r.certificate) {
    const bool ok = encode(replay(loaded.system, *r.certificate)) == encode(canonicalize(p));
    out << "certificate: seed " << r.certificate->seed_index << ", maps";
    for (auto m : r.certificate->maps) out << " " << m;
    out << "\nreplay = " << (ok ? "ok" : "FAILED") << "\n";
    doc["certificate"] = {{"seed_index", r.certificate->seed_index}, {"maps", r.certificate->maps}};
    doc["replay_ok"] = ok;
  }
  if (r.fallback_used) out << "decided by enumeration (no exact inverse for some map)\n";
  s.parameters = {{"point", o.point}, {"depth_limit", o.depth_limit}};
  s.write_json("member.json", doc);
}

struct AuditOptions {
  std::string system;
  std::string bound;
  unsigned window = 0;
  std::size_t allowance = 0;
  std::size_t list = 20;
};

void cmd_audit(Session& s, const AuditOptions& o) {
  auto loaded = s.load(o.system);
  require_valid(loaded.system, *s.out);
  const Integer bound = parse_bound(o.bound);
  PointBag bag;
  if (o.window > 0) {
    if (!bound.fits_slong_p()) throw Error("cli", ErrorCode::BoundTooLarge, "window bound too large");
    bag = projective_window(o.window, bound.get_si());
  } else {
    bag = enumerate(loaded.system, bound, {5'000'000, 100'000, s.threads});
  }
  const auto rep = audit_bag(loaded.system, bag);
  auto& out = *s.out;
  out << "candidate set = " << (o.window > 0 ? "P^" + std::to_string(o.window) + "(Q) window" : "enumerated window")
      << "\npoints = " << rep.point_count << "\ncovered = " << rep.covered_count << "\noverlaps = " << rep.overlaps.size()
      << "\nuncovered = " << rep.uncovered.size() << "\nexact = " << (rep.exact(o.allowance) ? "yes" : "no") << "\n";
  json overlaps = json::array();
  for (std::size_t i = 0; i < rep.overlaps.size() && i < o.list; ++i) {
    json w = json::array();
    for (const auto& x : rep.overlaps[i].witnesses) w.push_back({{"map", x.map_index}, {"preimage", to_string(x.preimage)}});
    overlaps.push_back({{"point", to_string(rep.overlaps[i].point)}, {"witnesses", w}});
    out << "overlap " << to_string(rep.overlaps[i].point) << ":";
    for (const auto& x : rep.overlaps[i].witnesses) out << " f" << x.map_index << "(" << to_string(x.preimage) << ")";
    out << "\n";
  }
  json uncovered = json::array();
  for (std::size_t i = 0; i < rep.uncovered.size() && i < o.list; ++i) uncovered.push_back(to_string(rep.uncovered[i]));
  s.parameters = {{"bound", bound.get_str()}, {"window", o.window}, {"allowance", o.allowance}};
  s.write_json("audit.json", {{"points", rep.point_count},
                              {"covered", rep.covered_count},
                              {"overlap_count", rep.overlaps.size()},
                              {"uncovered_count", rep.uncovered.size()},
                              {"overlaps", overlaps},
                              {"uncovered", uncovered},
                              {"seed_covered", rep.seed_covered},
                              {"exact", rep.exact(o.allowance)}});
}

struct GrowthOptions {
  std::string system;
  std::string bound;
  std::string grid;
  double lo = 0.0;
  bool fit = false;
  std::string lemmas;
  double ratio = 2.0;
  double trend_ratio = 1.25;
};

std::vector<double> lemma_exponents(const std::string& text, double sdim) {
  std::vector<double> out;
  for (const auto& item : split(text, ',')) {
    if (item.rfind("sdim", 0) == 0) {
      const std::string rest = item.substr(4);
      if (rest.empty()) {
        out.push_back(sdim);
      } else if (rest.rfind("±", 0) == 0 || rest.rfind("+-", 0) == 0) {
        const double d = parse_reals(rest.substr(rest.rfind("±", 0) == 0 ? std::string("±").size() : 2)).at(0);
        out.push_back(sdim - d);
        out.push_back(sdim + d);
      } else {
        out.push_back(sdim + parse_reals(rest).at(0));
      }
    } else {
      out.push_back(parse_reals(item).at(0));
    }
  }
  return out;
}

void cmd_growth(Session& s, const GrowthOptions& o) {
  auto loaded = s.load(o.system);
  require_valid(loaded.system, *s.out);
  const Integer bound = parse_bound(o.bound);
  const auto bag = enumerate(loaded.system, bound, {5'000'000, 100'000, s.threads});
  const SizeKind kind = default_size_kind(loaded.system.space.kind);
  const double hi = kind == SizeKind::LogHeight ? log_max1(bound) : bound.get_d();
  double lo = o.lo;
  std::string grid_spec = o.grid;
  if (grid_spec.empty()) grid_spec = kind == SizeKind::Abs ? "geometric:10" : "geometric:2";
  if (lo <= 0.0) lo = kind == SizeKind::Abs ? 10.0 : kind == SizeKind::Norm ? 4.0 : std::log(2.0);
  const auto grid = parse_grid(grid_spec, bag, kind, lo, hi);
  const auto table = counting_function(bag, grid, kind);
  const double sdim = solve_dimension(dimension_equation(loaded.system)).s;
  const auto exponents = o.lemmas.empty() ? std::vector<double>{} : lemma_exponents(o.lemmas, sdim);

  std::ostringstream csv;
  csv << "x,N";
  for (double e : exponents) csv << ",h_s=" << num(e);
  csv << "\n";
  for (std::size_t i = 0; i < table.grid.size(); ++i) {
    csv << num(table.grid[i]) << "," << table.counts[i];
    for (double e : exponents) {
      csv << "," << num(static_cast<double>(table.counts[i]) * std::pow(table.grid[i], -e));
    }
    csv << "\n";
  }
  s.write("growth.csv", csv.str());

  auto& out = *s.out;
  json doc{{"system", loaded.system.label},
           {"size_kind", std::string(to_string(kind))},
           {"grid", grid_spec},
           {"points", bag.size()},
           {"dimension", num_json(sdim)}};
  out << "points = " << bag.size() << "\nsize kind = " << to_string(kind) << "\ndimension s = " << num(sdim) << "\n";
  if (o.fit) {
    const auto f = fit_growth_exponent(table);
    out << "fitted exponent = " << num(f.exponent) << " (rmse " << num(f.rmse) << ", " << f.points << " points)\n";
    doc["fit"] = fit_json(f);
  }
  json verdicts = json::array();
  const LemmaThresholds th{o.ratio, o.trend_ratio};
  for (double e : exponents) {
    for (auto dir : {BoundDirection::Upper, BoundDirection::Lower}) {
      const auto v = lemma_bound_check(table, e, dir, th);
      out << "lemma s=" << num(e) << " " << to_string(dir) << ": " << (v.bounded ? "bounded" : "unbounded")
          << " (pressure " << num(evaluate_pressure(dimension_equation(loaded.system), e)) << ")\n";
      verdicts.push_back(verdict_json(v));
    }
  }
  doc["lemmas"] = verdicts;
  s.parameters = {{"bound", bound.get_str()}, {"grid", grid_spec}, {"lo", num_json(lo)}, {"fit", o.fit},
                  {"lemmas", o.lemmas}, {"ratio", num_json(o.ratio)}, {"trend_ratio", num_json(o.trend_ratio)}};
  s.write_json("growth.json", doc);
}

struct CensusOptions {
  unsigned n = 1;
  long bound = 100;
};

void cmd_census(Session& s, const CensusOptions& o) {
  const long long count = projective_census(o.n, o.bound, s.threads);
  const double pred = schanuel_prediction(o.n, static_cast<double>(o.bound));
  *s.out << "count = " << count << "\nprediction = " << num(pred) << "\nratio = " << num(static_cast<double>(count) / pred)
         << "\n";
  s.parameters = {{"n", o.n}, {"bound", o.bound}};
  s.write_json("census.json", {{"n", o.n},
                               {"bound", o.bound},
                               {"count", count},
                               {"prediction", num_json(pred)},
                               {"ratio", num_json(static_cast<double>(count) / pred)}});
}

struct HeightOptions {
  std::string system;
  std::string bound;
  std::string point;
};

void cmd_height(Session& s, const HeightOptions& o) {
  auto loaded = s.load(o.system);
  auto& out = *s.out;
  json doc = json::object();
  if (!o.point.empty()) {
    const auto p = parse_point(o.point, loaded.system.space);
    const auto sz = size_of(p);
    out << "point = " << to_string(p) << "\nsize = " << sz.raw.get_str() << "\nlog size = " << num(sz.log_size) << "\n";
    doc["point"] = {{"point", to_string(p)}, {"size", sz.raw.get_str()}, {"log_size", num_json(sz.log_size)}};
  }
  if (!o.bound.empty()) {
    require_valid(loaded.system, out);
    const Integer bound = parse_bound(o.bound);
    const auto bag = enumerate(loaded.system, bound, {5'000'000, 100'000, s.threads});
    std::ostringstream csv;
    csv << "map,degree,samples,min,max,mean,max_abs\n";
    json maps = json::array();
    for (const auto& r : height_growth_audit(loaded.system, bag)) {
      const long deg = degree(loaded.system.maps[r.map_index]);
      csv << r.map_index << "," << deg << "," << r.samples << "," << num(r.min) << "," << num(r.max) << ","
          << num(r.mean) << "," << num(r.max_abs) << "\n";
      out << "map " << r.map_index << " (degree " << deg << "): residual in [" << num(r.min) << ", " << num(r.max)
          << "], max |residual| = " << num(r.max_abs) << "\n";
      maps.push_back({{"map", r.map_index}, {"degree", deg}, {"samples", r.samples}, {"max_abs", num_json(r.max_abs)}});
    }
    s.write("height.csv", csv.str());
    doc["growth_audit"] = maps;
    doc["points"] = bag.size();
    s.parameters["bound"] = bound.get_str();
  }
  if (o.point.empty() && o.bound.empty()) throw Error("cli", ErrorCode::InvalidArgument, "height needs --point or --bound");
  s.parameters["point"] = o.point;
  s.write_json("height.json", doc);
}

struct ApproxOptions {
  std::string system;
  std::string target;
  double delta = 0.5;
  double c = 1.0;
  std::string bound;
  std::string hits_file = "hits.csv";
};

void cmd_approx(Session& s, const ApproxOptions& o) {
  auto loaded = s.load(o.system);
  require_valid(loaded.system, *s.out);
  const Integer bound = parse_bound(o.bound);
  const auto bag = enumerate(loaded.system, bound, {5'000'000, 100'000, s.threads});
  const auto target = parse_target(o.target);
  const auto rep = approximants(bag, target, o.delta, o.c);
  std::ostringstream csv;
  csv << "point,h,d,exponent,exact_hit\n";
  for (const auto& r : rep.hits) {
    csv << csv_field(to_string(r.point)) << "," << num(r.h) << "," << num(r.d) << ","
        << (r.has_exponent ? num(r.exponent) : "") << "," << (r.exact_hit ? 1 : 0) << "\n";
  }
  s.write(o.hits_file, csv.str());
  auto& out = *s.out;
  out << "target = " << target.to_string() << "\nhits = " << rep.hits.size() << " (undecided " << rep.undecided.size()
      << ")\ndecile hits:";
  for (auto c : rep.decile_hits) out << " " << c;
  out << "\n";
  json doc{{"target", target.to_string()},
           {"delta", num_json(o.delta)},
           {"C", num_json(o.c)},
           {"hits", rep.hits.size()},
           {"undecided", rep.undecided.size()},
           {"decile_hits", rep.decile_hits},
           {"stabilized", rep.stabilized}};
  try {
    const auto prof = approximation_exponent_profile(bag, target);
    std::ostringstream pcsv;
    pcsv << "h,level_max,running_max,suffix_max\n";
    for (const auto& l : prof.levels) {
      pcsv << num(l.h) << "," << num(l.level_max) << "," << num(l.running_max) << "," << num(l.suffix_max) << "\n";
    }
    s.write("profile.csv", pcsv.str());
    out << "max exponent = " << num(prof.max_exponent) << "\ntail exponent = " << num(prof.tail_exponent)
        << "\nexponent at largest height = " << num(prof.last_level) << "\n";
    doc["profile"] = {{"max_exponent", num_json(prof.max_exponent)},
                      {"tail_exponent", num_json(prof.tail_exponent)},
                      {"tail_slope", num_json(prof.tail_slope)},
                      {"last_level", num_json(prof.last_level)}};
  } catch (const Error& e) {
    if (e.code() != ErrorCode::InsufficientData) throw;
    out << "exponent profile: " << e.what() << "\n";
  }
  out << "verdict: " << (rep.stabilized ? "stabilized (no hits in the upper half of the height range)"
                                        : "not stabilized (hits in the upper half of the height range)")
      << "\n";
  s.parameters = {{"target", o.target}, {"delta", num_json(o.delta)}, {"C", num_json(o.c)}, {"bound", bound.get_str()}};
  s.write_json("approx.json", doc);
}

struct IntersectOptions {
  std::string system;
  std::string curve;
  std::string bounds;
};

void cmd_intersect(Session& s, const IntersectOptions& o) {
  auto loaded = s.load(o.system);
  require_valid(loaded.system, *s.out);
  const Polynomial curve = parse_polynomial(o.curve, loaded.system.space.dim);
  std::vector<Integer> bounds;
  for (const auto& b : split(o.bounds, ',')) bounds.push_back(parse_bound(b));
  const auto rep = curve_intersection_probe(loaded.system, curve, bounds, {5'000'000, 100'000, s.threads});
  auto& out = *s.out;
  json levels = json::array();
  for (const auto& l : rep.levels) {
    json pts = json::array();
    out << "bound " << l.bound.get_str() << ": " << l.points.size() << " point(s)";
    for (const auto& p : l.points) {
      out << " " << to_string(p);
      pts.push_back(to_string(p));
    }
    out << "\n";
    levels.push_back({{"bound", l.bound.get_str()}, {"points", pts}});
  }
  out << "stabilized = " << (rep.stabilized ? "yes" : "no") << "\n";
  s.parameters = {{"curve", o.curve}, {"bounds", o.bounds}};
  s.write_json("intersect.json", {{"curve", curve.to_string()}, {"levels", levels}, {"stabilized", rep.stabilized}});
}

struct EcOptions {
  std::string curve;
  std::string point;
  std::string gen;
  std::string torsion;
  std::string grid = "geometric:2:16384";
  std::uint64_t seed = 1;
};

void cmd_ec_height(Session& s, const EcOptions& o) {
  const Curve curve = parse_curve(o.curve);
  const CurvePoint p = parse_curve_point(o.point, curve);
  const double tol = s.tol.value_or(1e-6);
  const auto h = canonical_height(curve, p, tol);
  auto& out = *s.out;
  if (h.torsion) {
    out << "torsion point of order " << h.torsion_order << "; canonical height = 0\n";
  } else {
    out << "canonical height = " << num(h.value) << "\ndoublings = " << h.m << "\nlast delta = " << num(h.last_delta)
        << "\n";
  }
  json est = json::array();
  for (double e : h.estimates) est.push_back(num_json(e));
  s.parameters = {{"curve", o.curve}, {"point", o.point}, {"tol", num_json(tol)}};
  s.write_json("ec-height.json", {{"height", num_json(h.value)},
                                  {"m", h.m},
                                  {"last_delta", num_json(h.last_delta)},
                                  {"torsion", h.torsion},
                                  {"torsion_order", h.torsion_order},
                                  {"estimates", est}});
}

// Grid in multiples of h(P): "geometric:F:K" (1, F, F^2, ... <= K),
// "linear:K" (1, 2, ..., K) or a comma-separated list.
std::vector<double> neron_multiples(const std::string& text) {
  const auto parts = split(text, ':');
  if (!parts.empty() && parts[0] == "geometric") {
    if (parts.size() != 3) throw Error("cli", ErrorCode::ParseError, "geometric grid is geometric:F:K");
    return geometric_grid(1.0, parse_reals(parts[2]).at(0), parse_reals(parts[1]).at(0));
  }
  if (!parts.empty() && parts[0] == "linear") {
    if (parts.size() != 2) throw Error("cli", ErrorCode::ParseError, "linear grid is linear:K");
    const double k = parse_reals(parts[1]).at(0);
    std::vector<double> out;
    for (double x = 1; x <= k; x += 1) out.push_back(x);
    return out;
  }
  return parse_reals(text);
}

void cmd_ec_neron(Session& s, const EcOptions& o) {
  const Curve curve = parse_curve(o.curve);
  const CurvePoint gen = parse_curve_point(o.gen, curve);
  std::vector<CurvePoint> torsion;
  for (const auto& t : split(o.torsion, ';')) torsion.push_back(parse_curve_point(t, curve));
  const double h = canonical_height(curve, gen, 1e-6).value;
  std::vector<double> grid;
  for (double k : neron_multiples(o.grid)) grid.push_back(k * h);
  const auto r = neron_count(curve, gen, torsion, grid, o.seed);
  std::ostringstream csv;
  csv << "x,x_over_h,N\n";
  for (std::size_t i = 0; i < r.table.grid.size(); ++i) {
    csv << num(r.table.grid[i]) << "," << num(r.table.grid[i] / r.generator_height) << "," << r.table.counts[i] << "\n";
  }
  s.write("neron.csv", csv.str());
  auto& out = *s.out;
  out << "generator height = " << num(r.generator_height) << "\ntorsion points = " << r.torsion_count
      << "\nfitted exponent = " << num(r.fit.exponent) << " (rmse " << num(r.fit.rmse) << ")\n";
  json checks = json::array();
  for (const auto& c : r.spot_checks) {
    out << "spot check n=" << c.n << " T#" << c.torsion_index << ": direct " << num(c.direct) << ", n^2 h = "
        << num(c.predicted) << "\n";
    checks.push_back({{"n", c.n}, {"torsion_index", c.torsion_index}, {"direct", num_json(c.direct)},
                      {"predicted", num_json(c.predicted)}});
  }
  s.parameters = {{"curve", o.curve}, {"gen", o.gen}, {"torsion", o.torsion}, {"grid", o.grid}, {"seed", o.seed}};
  s.write_json("neron.json", {{"generator_height", num_json(r.generator_height)},
                              {"torsion_count", r.torsion_count},
                              {"fit", fit_json(r.fit)},
                              {"spot_checks", checks}});
}

void cmd_corpus(Session& s) {
  auto& out = *s.out;
  std::ostringstream csv;
  csv << "name,space,maps,seeds,expected_dimension,computed_dimension,exact\n";
  for (const auto& e : corpus_list()) {
    const auto& sys = e.loaded.system;
    const double sdim = solve_dimension(dimension_equation(sys)).s;
    const auto& md = e.loaded.metadata;
    const std::string expected = md.expected_dimension ? num(*md.expected_dimension) : "";
    const std::string exact = md.exact ? (*md.exact ? "yes" : "no") : "";
    csv << e.name << "," << to_string(sys.space.kind) << "," << sys.maps.size() << "," << sys.seeds.size() << ","
        << expected << "," << num(sdim) << "," << exact << "\n";
    out << e.name << "  space=" << to_string(sys.space.kind) << "  maps=" << sys.maps.size() << "  s=" << num(sdim)
        << "  expected=" << expected << "  exact=" << exact << "\n";
  }
  s.write("corpus.csv", csv.str());
}

int error_exit(const Error& e) {
  switch (e.code()) {
    case ErrorCode::ValidationFailed:
    case ErrorCode::MissingFile:
    case ErrorCode::ConfigParse:
    case ErrorCode::ParseError: return kExitInvalid;
    default: return kExitAnalysis;
  }
}

std::vector<std::string> replay_args(const std::string& manifest_path, const std::string& out_dir) {
  std::ifstream in(manifest_path);
  if (!in) throw Error("cli", ErrorCode::MissingFile, "cannot open manifest '" + manifest_path + "'");
  json m;
  try {
    in >> m;
  } catch (const json::exception& e) {
    throw Error("cli", ErrorCode::ConfigParse, std::string("manifest is not valid JSON: ") + e.what());
  }
  if (!m.contains("argv") || !m["argv"].is_array()) throw Error("cli", ErrorCode::ConfigParse, "manifest has no argv");
  std::vector<std::string> args;
  const auto old = m["argv"].get<std::vector<std::string>>();
  for (std::size_t i = 0; i < old.size(); ++i) {
    if (old[i] == "--out-dir") {
      ++i;
      continue;
    }
    if (old[i].rfind("--out-dir=", 0) == 0) continue;
    args.push_back(old[i]);
  }
  if (!args.empty() && args.front() == "replay") throw Error("cli", ErrorCode::ConfigParse, "manifest replays itself");
  args.push_back("--out-dir");
  args.push_back(out_dir);
  return args;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Session session;
  session.args = args;
  session.out = &out;

  CLI::App app{"Arithmetic fractals: dimensions, windows, heights and approximation experiments", "arfrac"};
  app.fallthrough();
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  app.add_option("--out-dir", session.out_dir, "Directory for CSV/JSON outputs and the run manifest");
  app.add_option("--threads", session.threads, "Worker threads for inner loops")->check(CLI::PositiveNumber);
  app.add_option("--tol", session.tol, "Numerical tolerance (dim residual, ec height delta)");
  app.set_version_flag("--version", std::string(kVersion));

  DimOptions dim;
  auto* dim_cmd = app.add_subcommand("dim", "Solve the Moran equation for a system or weight list");
  dim_cmd->add_option("system", dim.system, "System JSON");
  dim_cmd->add_option("--weights", dim.weights, "Comma-separated weights instead of a system");
  dim_cmd->add_option("--t-module", dim.t_module, "Comma-separated t-module degrees r_i");
  dim_cmd->add_option("--rank", dim.rank, "t-module rank d");
  dim_cmd->add_option("--convention", dim.convention, "Gaussian size convention: norm or abs");

  EnumOptions en;
  auto* en_cmd = app.add_subcommand("enumerate", "Enumerate the window of points of size <= bound");
  en_cmd->add_option("system", en.system)->required();
  en_cmd->add_option("--bound", en.bound)->required();
  en_cmd->add_option("--max-points", en.max_points);
  en_cmd->add_option("--max-depth", en.max_depth);

  MemberOptions mem;
  auto* mem_cmd = app.add_subcommand("member", "Decide membership with a replayable certificate");
  mem_cmd->add_option("system", mem.system)->required();
  mem_cmd->add_option("point", mem.point)->required();
  mem_cmd->add_option("--depth-limit", mem.depth_limit);

  AuditOptions au;
  auto* au_cmd = app.add_subcommand("audit", "Check F = disjoint union of f_i(F) on a bounded window");
  au_cmd->add_option("system", au.system)->required();
  au_cmd->add_option("--bound", au.bound)->required();
  au_cmd->add_option("--window", au.window, "Audit all of P^n(Q) with H <= bound instead of the orbit");
  au_cmd->add_option("--allowance", au.allowance, "Overlapping points tolerated");
  au_cmd->add_option("--list", au.list, "Examples listed per category");

  GrowthOptions gr;
  auto* gr_cmd = app.add_subcommand("growth", "Counting function, growth fit and boundedness checks");
  gr_cmd->add_option("system", gr.system)->required();
  gr_cmd->add_option("--bound", gr.bound)->required();
  gr_cmd->add_option("--grid", gr.grid, "geometric:F, linear:N, midpoints or a list");
  gr_cmd->add_option("--lo", gr.lo, "Smallest grid value");
  gr_cmd->add_flag("--fit", gr.fit);
  gr_cmd->add_option("--check-lemmas", gr.lemmas, "Exponents to test, e.g. sdim±0.05 or 0.25,0.35");
  gr_cmd->add_option("--ratio", gr.ratio);
  gr_cmd->add_option("--trend-ratio", gr.trend_ratio);

  CensusOptions ce;
  auto* ce_cmd = app.add_subcommand("census", "Exact count of P^n(Q) points with H <= bound");
  ce_cmd->add_option("--n", ce.n)->check(CLI::Range(1, 2));
  ce_cmd->add_option("--bound", ce.bound);

  HeightOptions he;
  auto* he_cmd = app.add_subcommand("height", "Sizes of points and the height-growth audit of a system");
  he_cmd->add_option("system", he.system)->required();
  he_cmd->add_option("--bound", he.bound);
  he_cmd->add_option("--point", he.point);

  ApproxOptions ap;
  auto* ap_cmd = app.add_subcommand("approx", "Approximants of a target and the exponent profile");
  ap_cmd->add_option("system", ap.system)->required();
  ap_cmd->add_option("--target", ap.target)->required();
  ap_cmd->add_option("--delta", ap.delta);
  ap_cmd->add_option("--C", ap.c);
  ap_cmd->add_option("--bound", ap.bound)->required();
  ap_cmd->add_option("--out", ap.hits_file, "Hits CSV name inside the output directory");

  IntersectOptions in;
  auto* in_cmd = app.add_subcommand("intersect", "Exact curve intersections across nested windows");
  in_cmd->add_option("system", in.system)->required();
  in_cmd->add_option("--curve", in.curve)->required();
  in_cmd->add_option("--bounds", in.bounds)->required();

  EcOptions ec;
  auto* ec_cmd = app.add_subcommand("ec", "Elliptic-curve heights and point counts");
  ec_cmd->require_subcommand(1);
  auto* ech_cmd = ec_cmd->add_subcommand("height", "Canonical height by the doubling limit");
  ech_cmd->add_option("--curve", ec.curve)->required();
  ech_cmd->add_option("--point", ec.point)->required();
  auto* ecn_cmd = ec_cmd->add_subcommand("neron", "Rank-1 point counts by canonical height");
  ecn_cmd->add_option("--curve", ec.curve)->required();
  ecn_cmd->add_option("--gen", ec.gen)->required();
  ecn_cmd->add_option("--torsion", ec.torsion, "Torsion points separated by ';'");
  ecn_cmd->add_option("--grid", ec.grid, "Multiples of h(P): geometric:F:K, linear:K or a list");
  ecn_cmd->add_option("--seed", ec.seed, "Seed for the spot checks");

  auto* co_cmd = app.add_subcommand("corpus", "List the bundled systems");

  std::string manifest;
  auto* re_cmd = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
  re_cmd->add_option("manifest", manifest)->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (re_cmd->parsed()) {
      return run(replay_args(manifest, session.out_dir), out, err);
    }
    std::string name;
    if (dim_cmd->parsed()) {
      name = "dim";
      cmd_dim(session, dim);
    } else if (en_cmd->parsed()) {
      name = "enumerate";
      cmd_enumerate(session, en);
    } else if (mem_cmd->parsed()) {
      name = "member";
      cmd_member(session, mem);
    } else if (au_cmd->parsed()) {
      name = "audit";
      cmd_audit(session, au);
    } else if (gr_cmd->parsed()) {
      name = "growth";
      cmd_growth(session, gr);
    } else if (ce_cmd->parsed()) {
      name = "census";
      cmd_census(session, ce);
    } else if (he_cmd->parsed()) {
      name = "height";
      cmd_height(session, he);
    } else if (ap_cmd->parsed()) {
      name = "approx";
      cmd_approx(session, ap);
    } else if (in_cmd->parsed()) {
      name = "intersect";
      cmd_intersect(session, in);
    } else if (ech_cmd->parsed()) {
      name = "ec-height";
      cmd_ec_height(session, ec);
    } else if (ecn_cmd->parsed()) {
      name = "ec-neron";
      cmd_ec_neron(session, ec);
    } else if (co_cmd->parsed()) {
      name = "corpus";
      cmd_corpus(session);
    }
    session.manifest(name);
  } catch (const Error& e) {
    err << "error: " << e.qualified_code() << ": " << e.what() << "\n";
    return error_exit(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitAnalysis;
  }
  return kExitOk;
}

}  // namespace arfrac::cli
