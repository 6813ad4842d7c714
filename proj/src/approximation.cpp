#include "arfrac/approximation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "arfrac/error.hpp"

namespace arfrac {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_line_point(const ProjectivePoint& p) {
  if (p.coords.size() != 2) throw Error("approximation", ErrorCode::UnsupportedSpace, "chordal metric is on P^1 only");
  if (p.coords[0] == 0 && p.coords[1] == 0) {
    throw Error("approximation", ErrorCode::ZeroProjectivePoint, "(0:0) is not a projective point");
  }
}

// |x| / sqrt(y z) for y, z > 0 without leaving double range on the way.
double scaled_ratio(const Integer& x, const Integer& y, const Integer& z) {
  if (x == 0) return 0.0;
  long ex = 0, ey = 0, ez = 0;
  const double mx = std::fabs(mpz_get_d_2exp(&ex, x.get_mpz_t()));
  double my = mpz_get_d_2exp(&ey, y.get_mpz_t());
  const double mz = mpz_get_d_2exp(&ez, z.get_mpz_t());
  if ((ey + ez) % 2 != 0) {
    my *= 2.0;
    --ey;
  }
  return std::ldexp(mx / std::sqrt(my * mz), static_cast<int>(ex - (ey + ez) / 2));
}

struct Components {
  Integer cross, n1, n2;
};

Components components(const ProjectivePoint& p, const ProjectivePoint& q) {
  require_line_point(p);
  require_line_point(q);
  const auto& a = p.coords[0];
  const auto& b = p.coords[1];
  const auto& c = q.coords[0];
  const auto& d = q.coords[1];
  return {a * d - b * c, a * a + b * b, c * c + d * d};
}

bool is_line_bag(const PointBag& bag) {
  if (bag.points.empty()) return true;
  const auto& p = bag.points.front().point;
  if (const auto* q = std::get_if<ProjectivePoint>(&p)) return q->coords.size() == 2;
  return std::holds_alternative<IntPoint>(p);
}

}  // namespace

ApproxTarget ApproxTarget::rational(const ProjectivePoint& p) {
  require_line_point(p);
  ApproxTarget t;
  t.exact = std::get<ProjectivePoint>(canonicalize(SpacePoint{p}));
  t.value = t.exact->coords[1] == 0 ? std::numeric_limits<double>::infinity()
                                    : ratio_to_double(t.exact->coords[0], t.exact->coords[1]);
  return t;
}

ApproxTarget ApproxTarget::real(double value, double error) {
  if (!std::isfinite(value) || !(error >= 0.0)) {
    throw Error("approximation", ErrorCode::InvalidArgument, "real targets need a finite value and error >= 0");
  }
  ApproxTarget t;
  t.value = value;
  t.error = error;
  return t;
}

std::string ApproxTarget::to_string() const {
  if (exact) return arfrac::to_string(SpacePoint{*exact});
  return "real:" + format_real(value) + ":" + format_real(error);
}

ApproxTarget parse_target(std::string_view text) {
  const std::string s(text);
  if (s.rfind("real:", 0) == 0) {
    const auto colon = s.find(':', 5);
    try {
      const double v = std::stod(s.substr(5, colon == std::string::npos ? std::string::npos : colon - 5));
      const double e = colon == std::string::npos ? 0.0 : std::stod(s.substr(colon + 1));
      return ApproxTarget::real(v, e);
    } catch (const std::logic_error&) {
      throw Error("approximation", ErrorCode::ParseError, "cannot parse target '" + s + "'");
    }
  }
  Rational num, den = 1;
  if (const auto colon = s.find(':'); colon != std::string::npos) {
    num = parse_rational(std::string_view(s).substr(0, colon));
    den = parse_rational(std::string_view(s).substr(colon + 1));
  } else {
    num = parse_rational(s);
  }
  // (p/q : r/t) -> (p t : r q)
  ProjectivePoint p;
  p.coords = {num.get_num() * den.get_den(), den.get_num() * num.get_den()};
  return ApproxTarget::rational(p);
}

double chordal_distance(const ProjectivePoint& p, const ProjectivePoint& q) {
  const auto c = components(p, q);
  return scaled_ratio(c.cross, c.n1, c.n2);
}

double log_chordal_distance(const ProjectivePoint& p, const ProjectivePoint& q) {
  const auto c = components(p, q);
  if (c.cross == 0) return kNegInf;
  return log_abs(c.cross) - 0.5 * (log_abs(c.n1) + log_abs(c.n2));
}

double chordal_distance(const ProjectivePoint& p, double value) {
  require_line_point(p);
  const Integer m = std::max(Integer(abs(p.coords[0])), Integer(abs(p.coords[1])));
  const double a = ratio_to_double(p.coords[0], m);
  const double b = ratio_to_double(p.coords[1], m);
  return std::fabs(a - b * value) / (std::hypot(a, b) * std::hypot(1.0, value));
}

std::vector<ApproxRecord> approximation_records(const PointBag& bag, const ApproxTarget& target) {
  if (!is_line_bag(bag)) {
    throw Error("approximation", ErrorCode::UnsupportedSpace, "approximation runs on P^1(Q) or Z bags only");
  }
  std::vector<ApproxRecord> out;
  out.reserve(bag.size());
  for (const auto& e : bag.points) {
    ApproxRecord r;
    r.point = e.point;
    r.h = e.size.log_size;
    if (const auto* q = std::get_if<ProjectivePoint>(&e.point)) {
      if (target.exact) {
        r.d = chordal_distance(*q, *target.exact);
        r.log_d = log_chordal_distance(*q, *target.exact);
        r.exact_hit = r.log_d == kNegInf;
      } else {
        r.d = chordal_distance(*q, target.value);
        r.log_d = r.d > 0 ? std::log(r.d) : kNegInf;
        r.d_error = target.error;
        r.exact_hit = r.d == 0.0 && target.error == 0.0;
      }
    } else {
      const Integer& x = std::get<IntPoint>(e.point).value;
      if (target.exact) {
        const auto& a = target.exact->coords[0];
        const auto& b = target.exact->coords[1];
        if (b == 0) throw Error("approximation", ErrorCode::InvalidArgument, "target at infinity on the real line");
        const Integer num = x * b - a;
        r.exact_hit = num == 0;
        r.d = r.exact_hit ? 0.0 : std::fabs(ratio_to_double(num, b));
        r.log_d = r.exact_hit ? kNegInf : log_abs(num) - log_abs(b);
      } else {
        r.d = std::fabs(x.get_d() - target.value);
        r.log_d = r.d > 0 ? std::log(r.d) : kNegInf;
        r.d_error = target.error;
        r.exact_hit = r.d == 0.0 && target.error == 0.0;
      }
    }
    if (!r.exact_hit && r.h > 0.0 && r.log_d != kNegInf) {
      r.exponent = -r.log_d / r.h;
      r.has_exponent = true;
    }
    out.push_back(std::move(r));
  }
  return out;
}

ApproximantsReport approximants(const PointBag& bag, const ApproxTarget& target, double delta, double c) {
  if (!(delta > 0.0) || !(c > 0.0)) throw Error("approximation", ErrorCode::InvalidArgument, "need delta > 0 and C > 0");
  ApproximantsReport report;
  report.delta = delta;
  report.c = c;
  const auto records = approximation_records(bag, target);
  if (records.empty()) {
    report.stabilized = true;
    return report;
  }
  report.h_min = records.front().h;
  report.h_max = records.back().h;
  for (const auto& r : records) {
    report.h_min = std::min(report.h_min, r.h);
    report.h_max = std::max(report.h_max, r.h);
  }
  const double span = report.h_max - report.h_min;
  const double mid = report.h_min + 0.5 * span;
  report.stabilized = true;
  for (const auto& r : records) {
    const double log_threshold = std::log(c) - delta * r.h;
    const double hi = r.d + r.d_error;
    const double lo = r.d - r.d_error;
    const bool certain = r.exact_hit || (r.d_error == 0.0 ? r.log_d <= log_threshold : std::log(hi) <= log_threshold);
    if (certain) {
      report.hits.push_back(r);
      const std::size_t bin =
          span > 0 ? std::min<std::size_t>(9, static_cast<std::size_t>(10.0 * (r.h - report.h_min) / span)) : 0;
      ++report.decile_hits[bin];
      if (r.h > mid) report.stabilized = false;
    } else if (r.d_error > 0.0 && (lo <= 0.0 || std::log(lo) <= log_threshold)) {
      report.undecided.push_back(r);
    }
  }
  std::stable_sort(report.hits.begin(), report.hits.end(), [](const auto& a, const auto& b) { return a.h < b.h; });
  return report;
}

ExponentProfile approximation_exponent_profile(const PointBag& bag, const ApproxTarget& target) {
  const auto records = approximation_records(bag, target);
  ExponentProfile profile;
  // Bags are sorted by size, so equal heights are adjacent.
  for (const auto& r : records) {
    if (!r.has_exponent) continue;
    if (profile.levels.empty() || r.h > profile.levels.back().h) {
      profile.levels.push_back({r.h, r.exponent, 0.0, 0.0});
    } else {
      profile.levels.back().level_max = std::max(profile.levels.back().level_max, r.exponent);
    }
  }
  if (profile.levels.empty()) throw Error("approximation", ErrorCode::InsufficientData, "no point has an exponent");
  double run = -std::numeric_limits<double>::infinity();
  for (auto& l : profile.levels) {
    run = std::max(run, l.level_max);
    l.running_max = run;
  }
  run = -std::numeric_limits<double>::infinity();
  for (auto it = profile.levels.rbegin(); it != profile.levels.rend(); ++it) {
    run = std::max(run, it->level_max);
    it->suffix_max = run;
  }
  profile.max_exponent = profile.levels.front().suffix_max;
  profile.last_level = profile.levels.back().level_max;

  const double mid = 0.5 * (profile.levels.front().h + profile.levels.back().h);
  double n = 0, su = 0, se = 0, suu = 0, sue = 0;
  for (const auto& l : profile.levels) {
    if (l.h < mid) continue;
    const double u = 1.0 / l.h;
    n += 1;
    su += u;
    se += l.level_max;
    suu += u * u;
    sue += u * l.level_max;
  }
  const double det = n * suu - su * su;
  if (n < 2 || det <= 0.0) {
    throw Error("approximation", ErrorCode::InsufficientData, "need two heights in the upper half of the range");
  }
  profile.tail_slope = (n * sue - su * se) / det;
  profile.tail_exponent = (se - profile.tail_slope * su) / n;
  return profile;
}

}  // namespace arfrac
