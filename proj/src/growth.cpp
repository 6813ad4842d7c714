#include "arfrac/growth.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "arfrac/error.hpp"

namespace arfrac {

std::string_view to_string(SizeKind kind) {
  switch (kind) {
    case SizeKind::Abs: return "abs";
    case SizeKind::Norm: return "norm";
    case SizeKind::Height: return "height";
    case SizeKind::LogHeight: return "log-height";
    case SizeKind::CanonicalHeight: return "canonical-height";
  }
  return "?";
}

std::string_view to_string(BoundDirection direction) {
  return direction == BoundDirection::Upper ? "upper" : "lower";
}

SizeKind default_size_kind(SpaceKind space) {
  switch (space) {
    case SpaceKind::Int: return SizeKind::Abs;
    case SpaceKind::Gauss: return SizeKind::Norm;
    default: return SizeKind::LogHeight;
  }
}

namespace {

Integer threshold(double x, SizeKind kind) {
  if (kind == SizeKind::LogHeight) return floor_exp_bound(x);
  if (kind == SizeKind::CanonicalHeight) {
    throw Error("growth", ErrorCode::InvalidArgument, "canonical-height tables are built by the elliptic module");
  }
  return floor_bound(x);
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

CountTable counting_function(const PointBag& bag, std::span<const double> grid, SizeKind kind) {
  CountTable table;
  table.kind = kind;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= 0.0)) throw Error("growth", ErrorCode::InvalidArgument, "grid values must be nonnegative");
    if (i > 0 && !(grid[i] > grid[i - 1])) throw Error("growth", ErrorCode::InvalidArgument, "grid must increase");
    const Integer t = threshold(grid[i], kind);
    if (t > bag.bound) {
      throw Error("growth", ErrorCode::GridExceedsBound,
                  "grid value " + format_real(grid[i]) + " exceeds the bag bound " + bag.bound.get_str());
    }
    const auto it = std::upper_bound(bag.points.begin(), bag.points.end(), t,
                                     [](const Integer& v, const BagEntry& e) { return v < e.size.raw; });
    table.grid.push_back(grid[i]);
    table.counts.push_back(static_cast<std::uint64_t>(it - bag.points.begin()));
  }
  return table;
}

GrowthFit fit_growth_exponent(const CountTable& table, std::optional<FitWindow> window) {
  std::vector<double> xs, ys, gx;
  for (std::size_t i = 0; i < table.grid.size(); ++i) {
    const double x = table.grid[i];
    if (table.counts[i] < 2 || x <= 0.0) continue;
    if (window && (x < window->xmin || x > window->xmax)) continue;
    xs.push_back(std::log(x));
    ys.push_back(std::log(static_cast<double>(table.counts[i])));
    gx.push_back(x);
  }
  if (xs.size() < 3) {
    throw Error("growth", ErrorCode::InsufficientData,
                "need 3 grid points with N >= 2, have " + std::to_string(xs.size()));
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx <= 0.0) throw Error("growth", ErrorCode::InsufficientData, "grid points coincide");
  GrowthFit fit;
  fit.exponent = sxy / sxx;
  fit.intercept = my - fit.exponent * mx;
  double sse = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (fit.intercept + fit.exponent * xs[i]);
    sse += r * r;
  }
  fit.rmse = std::sqrt(sse / n);
  fit.window = {gx.front(), gx.back()};
  fit.points = xs.size();
  return fit;
}

std::vector<double> geometric_grid(double lo, double hi, double factor) {
  if (!(lo > 0.0) || !(factor > 1.0) || hi < lo) {
    throw Error("growth", ErrorCode::InvalidArgument, "geometric grid needs 0 < lo <= hi and factor > 1");
  }
  std::vector<double> out;
  for (int k = 0;; ++k) {
    double x = lo * std::pow(factor, k);
    if (x > hi * (1 + 1e-9)) break;
    if (std::fabs(x - hi) <= 1e-9 * hi) x = hi;
    out.push_back(x);
  }
  return out;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t count) {
  if (count < 2 || hi <= lo) throw Error("growth", ErrorCode::InvalidArgument, "linear grid needs count >= 2, lo < hi");
  std::vector<double> out;
  for (std::size_t k = 0; k < count; ++k) {
    out.push_back(k + 1 == count ? hi : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(count - 1));
  }
  return out;
}

std::vector<double> midpoint_grid(const PointBag& bag, SizeKind kind, double lo, double hi) {
  std::vector<double> levels;
  for (const auto& e : bag.points) {
    const double v = kind == SizeKind::LogHeight ? e.size.log_size : e.size.raw.get_d();
    if (levels.empty() || v > levels.back()) levels.push_back(v);
  }
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
    const double m = 0.5 * (levels[i] + levels[i + 1]);
    if (m >= lo && m <= hi) out.push_back(m);
  }
  return out;
}

std::vector<double> parse_grid(std::string_view spec, const PointBag& bag, SizeKind kind, double lo, double hi) {
  const std::string text(spec);
  try {
    if (text.rfind("geometric:", 0) == 0) return geometric_grid(lo, hi, std::stod(text.substr(10)));
    if (text.rfind("linear:", 0) == 0) return linear_grid(lo, hi, std::stoul(text.substr(7)));
    if (text == "midpoints") return midpoint_grid(bag, kind, lo, hi);
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    }
    if (out.empty()) throw std::invalid_argument(text);
    return out;
  } catch (const std::logic_error&) {
    throw Error("growth", ErrorCode::ParseError, "cannot parse grid '" + text + "'");
  }
}

LemmaVerdict lemma_bound_check(const CountTable& table, double s, BoundDirection direction,
                               const LemmaThresholds& thresholds) {
  if (!(s > 0.0)) throw Error("growth", ErrorCode::InvalidArgument, "exponent s must be positive");
  const std::size_t n = table.grid.size();
  if (n < 4) throw Error("growth", ErrorCode::InvalidArgument, "need at least 4 grid points");
  LemmaVerdict v;
  v.s = s;
  v.direction = direction;
  v.thresholds = thresholds;
  for (std::size_t i = 0; i < n; ++i) {
    v.h_sequence.push_back(std::exp(std::log(static_cast<double>(table.counts[i])) - s * std::log(table.grid[i])));
  }
  const std::size_t half = n / 2;
  const std::vector<double> head(v.h_sequence.begin(), v.h_sequence.begin() + static_cast<long>(half));
  const std::vector<double> tail(v.h_sequence.begin() + static_cast<long>(half), v.h_sequence.end());
  v.head_median = median(head);
  v.monotone_tail_ratio = tail.back() / tail.front();
  if (direction == BoundDirection::Upper) {
    v.tail_extreme = *std::max_element(tail.begin(), tail.end());
    v.tail_monotone = std::is_sorted(tail.begin(), tail.end());
    const bool climbing = v.tail_monotone && v.monotone_tail_ratio > thresholds.trend_ratio;
    v.bounded = v.tail_extreme <= thresholds.ratio * v.head_median && !climbing;
  } else {
    v.tail_extreme = *std::min_element(tail.begin(), tail.end());
    v.tail_monotone = std::is_sorted(tail.rbegin(), tail.rend());
    const bool sinking = v.tail_monotone && 1.0 / v.monotone_tail_ratio > thresholds.trend_ratio;
    v.bounded = v.tail_extreme >= v.head_median / thresholds.ratio && !sinking;
  }
  return v;
}

}  // namespace arfrac
