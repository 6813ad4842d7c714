#include "arfrac/heights.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <thread>

#include "arfrac/error.hpp"

namespace arfrac {

namespace {

SizeValue make_size(Integer raw) {
  SizeValue out;
  out.log_size = log_max1(raw);
  out.raw = std::move(raw);
  return out;
}

Integer height_of_rational(const Rational& q) {
  return std::max(Integer(abs(q.get_num())), Integer(q.get_den()));
}

}  // namespace

SizeValue size_of(const SpacePoint& p) {
  switch (kind_of(p)) {
    case SpaceKind::Int: return make_size(abs(std::get<IntPoint>(p).value));
    case SpaceKind::Gauss: return make_size(std::get<GaussPoint>(p).value.norm());
    case SpaceKind::ProjQ: {
      Integer h = 0;
      for (const auto& c : std::get<ProjectivePoint>(p).coords) h = std::max(h, Integer(abs(c)));
      return make_size(std::move(h));
    }
    case SpaceKind::AffQ: {
      const auto& coords = std::get<AffinePoint>(p).coords;
      Integer lcm = 1;
      for (const auto& c : coords) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.get_den_mpz_t());
      // (lcm : lcm*x_1 : ... : lcm*x_n) is primitive.
      Integer h = lcm;
      for (const auto& c : coords) {
        Integer scaled = abs(c.get_num()) * (lcm / c.get_den());
        if (scaled > h) h = std::move(scaled);
      }
      return make_size(std::move(h));
    }
    case SpaceKind::EC: {
      const auto& e = std::get<CurvePoint>(p);
      if (e.infinity) return make_size(Integer(1));
      return make_size(height_of_rational(e.x));
    }
  }
  return {};
}

std::vector<GrowthResidual> height_growth_audit(const FractalSystem& system, const PointBag& bag) {
  std::vector<GrowthResidual> out;
  for (std::size_t i = 0; i < system.maps.size(); ++i) {
    const auto& map = system.maps[i];
    const double deg = static_cast<double>(degree(map));
    GrowthResidual r;
    r.map_index = i;
    r.min = std::numeric_limits<double>::infinity();
    r.max = -std::numeric_limits<double>::infinity();
    double total = 0.0;
    for (const auto& entry : bag.points) {
      if (!belongs_to(entry.point, system.space)) {
        throw Error("heights", ErrorCode::SpaceMismatch, "bag point " + to_string(entry.point) + " not in system space");
      }
      const SpacePoint image = arfrac::apply(map, entry.point);
      const double residual = size_of(image).log_size - deg * entry.size.log_size;
      r.min = std::min(r.min, residual);
      r.max = std::max(r.max, residual);
      r.max_abs = std::max(r.max_abs, std::fabs(residual));
      total += residual;
      ++r.samples;
    }
    if (r.samples == 0) {
      r.min = r.max = 0.0;
    } else {
      r.mean = total / static_cast<double>(r.samples);
    }
    out.push_back(r);
  }
  return out;
}

double schanuel_prediction(unsigned n, double x) {
  if (n == 0) throw Error("heights", ErrorCode::InvalidArgument, "projective dimension must be >= 1");
  const double zeta = std::riemann_zeta(static_cast<double>(n + 1));
  return std::pow(2.0, n + 1) * std::pow(x, n + 1) / (2.0 * zeta);
}

namespace {

std::uint64_t gcd64(std::uint64_t a, std::uint64_t b) { return std::gcd(a, b); }

template <typename Body>
long long parallel_sum(long first, long last, unsigned threads, Body body) {
  threads = std::max(1u, threads);
  const long span = last - first + 1;
  if (span <= 0) return 0;
  if (threads == 1 || span < 64) return body(first, last);
  // Interleaved stripes balance the triangular workloads.
  std::vector<long long> partial(threads, 0);
  std::vector<std::thread> workers;
  for (unsigned t = 0; t < threads; ++t) {
    workers.emplace_back([&, t] {
      long long acc = 0;
      for (long v = first + static_cast<long>(t); v <= last; v += static_cast<long>(threads)) acc += body(v, v);
      partial[t] = acc;
    });
  }
  for (auto& w : workers) w.join();
  return std::accumulate(partial.begin(), partial.end(), 0LL);
}

}  // namespace

long long projective_census(unsigned n, long x, unsigned threads) {
  if (n != 1 && n != 2) throw Error("heights", ErrorCode::UnsupportedSpace, "census supports P^1 and P^2 only");
  const long limit = n == 1 ? kCensusMaxBoundP1 : kCensusMaxBoundP2;
  if (x > limit) {
    throw Error("heights", ErrorCode::BoundTooLarge,
                "bound " + std::to_string(x) + " exceeds " + std::to_string(limit) + " for P^" + std::to_string(n));
  }
  if (x < 1) return 0;
  const auto ux = static_cast<std::uint64_t>(x);
  if (n == 1) {
    // (1:0), (0:1), and (a:±b) for coprime a, b in [1, x].
    const long long coprime = parallel_sum(1, x, threads, [&](long lo, long hi) {
      long long c = 0;
      for (auto a = static_cast<std::uint64_t>(lo); a <= static_cast<std::uint64_t>(hi); ++a) {
        for (std::uint64_t b = 1; b <= ux; ++b) c += gcd64(a, b) == 1;
      }
      return c;
    });
    return 2 + 2 * coprime;
  }
  // Primitive vectors of [-x, x]^3 counted on the nonnegative octant with
  // sign multiplicity 2^(nonzero coordinates); each point has two of them.
  const long long weighted = parallel_sum(0, x, threads, [&](long lo, long hi) {
    long long c = 0;
    for (auto a = static_cast<std::uint64_t>(lo); a <= static_cast<std::uint64_t>(hi); ++a) {
      for (std::uint64_t b = 0; b <= ux; ++b) {
        const std::uint64_t gab = gcd64(a, b);
        for (std::uint64_t d = 0; d <= ux; ++d) {
          if (gcd64(gab, d) != 1) continue;
          const int nonzero = (a != 0) + (b != 0) + (d != 0);
          c += 1LL << nonzero;
        }
      }
    }
    return c;
  });
  return weighted / 2;
}

PointBag projective_window(unsigned n, long x) {
  if (n != 1 && n != 2) throw Error("heights", ErrorCode::UnsupportedSpace, "windows support P^1 and P^2 only");
  if ((n == 1 && x > 2000) || (n == 2 && x > 60)) {
    throw Error("heights", ErrorCode::BoundTooLarge, "window bound too large to materialize");
  }
  PointBag bag;
  bag.label = "P" + std::to_string(n) + "(Q) window";
  bag.bound = x;
  const std::size_t k = n + 1;
  std::vector<long> coords(k, -x);
  while (x >= 1) {
    long g = 0;
    for (long c : coords) g = std::gcd(g, c);
    long lead = 0;
    for (long c : coords) {
      if (c != 0) {
        lead = c;
        break;
      }
    }
    if (g == 1 && lead > 0) {
      ProjectivePoint p;
      for (long c : coords) p.coords.emplace_back(c);
      BagEntry e;
      e.point = std::move(p);
      e.size = size_of(e.point);
      e.key = encode(e.point);
      bag.points.push_back(std::move(e));
    }
    std::size_t i = 0;
    while (i < k && coords[i] == x) coords[i++] = -x;
    if (i == k) break;
    ++coords[i];
  }
  bag.finalize();
  return bag;
}

}  // namespace arfrac
