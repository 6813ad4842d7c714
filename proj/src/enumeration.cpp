#include "arfrac/enumeration.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <thread>
#include <unordered_set>

#include "arfrac/error.hpp"
#include "arfrac/heights.hpp"

namespace arfrac {

namespace {

struct Candidate {
  SpacePoint point;
  SizeValue size;
  std::string key;
  std::size_t parent;
  std::size_t via_map;
};

void expand_range(const FractalSystem& system, const std::vector<BagEntry>& entries,
                  const std::vector<std::size_t>& frontier, std::size_t begin, std::size_t end,
                  const Integer& bound, std::vector<Candidate>& out) {
  for (std::size_t f = begin; f < end; ++f) {
    const std::size_t idx = frontier[f];
    for (std::size_t m = 0; m < system.maps.size(); ++m) {
      SpacePoint image = arfrac::apply(system.maps[m], entries[idx].point);
      SizeValue size = size_of(image);
      if (size.raw > bound) continue;
      std::string key = encode(image);
      out.push_back({std::move(image), std::move(size), std::move(key), idx, m});
    }
  }
}

void require_valid(const FractalSystem& system) {
  const auto report = validate_system(system);
  if (!report.valid()) {
    const auto& v = report.violations.front();
    throw Error("enumeration", ErrorCode::ValidationFailed,
                "system '" + system.label + "' is invalid: " + std::string(to_string(v.kind)) + " at " + v.subject +
                    " " + std::to_string(v.index) + " (" + v.detail + ")");
  }
}

}  // namespace

PointBag enumerate(const FractalSystem& system, const Integer& bound, const EnumerateOptions& options) {
  require_valid(system);
  PointBag bag;
  bag.label = system.label;
  bag.bound = bound;
  std::unordered_set<std::string> seen;
  std::vector<std::size_t> frontier;
  for (const auto& seed : system.seeds) {
    BagEntry e;
    e.point = seed;
    e.size = size_of(seed);
    if (e.size.raw > bound) {
      throw Error("enumeration", ErrorCode::InvalidArgument,
                  "seed " + to_string(seed) + " has size " + e.size.raw.get_str() + " above the bound " + bound.get_str());
    }
    e.key = encode(seed);
    if (!seen.insert(e.key).second) continue;
    frontier.push_back(bag.points.size());
    bag.points.push_back(std::move(e));
  }
  const unsigned threads = std::max(1u, options.threads);
  unsigned depth = 0;
  while (!frontier.empty() && !bag.truncated) {
    ++depth;
    // Chunks are merged in frontier order, so the result is schedule independent.
    const std::size_t chunks = std::min<std::size_t>(threads, std::max<std::size_t>(1, frontier.size() / 256));
    std::vector<std::vector<Candidate>> produced(chunks);
    const std::size_t per = (frontier.size() + chunks - 1) / chunks;
    if (chunks == 1) {
      expand_range(system, bag.points, frontier, 0, frontier.size(), bound, produced[0]);
    } else {
      std::vector<std::thread> workers;
      std::vector<std::exception_ptr> failures(chunks);
      for (std::size_t c = 0; c < chunks; ++c) {
        workers.emplace_back([&, c] {
          try {
            expand_range(system, bag.points, frontier, c * per, std::min(frontier.size(), (c + 1) * per), bound,
                         produced[c]);
          } catch (...) {
            failures[c] = std::current_exception();
          }
        });
      }
      for (auto& w : workers) w.join();
      for (auto& f : failures) {
        if (f) std::rethrow_exception(f);
      }
    }
    std::vector<std::size_t> next;
    for (auto& chunk : produced) {
      for (auto& cand : chunk) {
        if (!seen.insert(cand.key).second) continue;
        if (depth > options.max_depth) {
          throw Error("enumeration", ErrorCode::NonTerminating,
                      "new points still appear after " + std::to_string(options.max_depth) + " generations");
        }
        if (bag.points.size() >= options.max_points) {
          bag.truncated = true;
          break;
        }
        BagEntry e;
        e.point = std::move(cand.point);
        e.size = std::move(cand.size);
        e.key = std::move(cand.key);
        e.depth = depth;
        e.parent = cand.parent;
        e.via_map = cand.via_map;
        next.push_back(bag.points.size());
        bag.points.push_back(std::move(e));
      }
      if (bag.truncated) break;
    }
    frontier = std::move(next);
  }
  bag.finalize();
  return bag;
}

SpacePoint replay(const FractalSystem& system, const Certificate& certificate) {
  SpacePoint p = system.seeds.at(certificate.seed_index);
  for (std::size_t m : certificate.maps) p = arfrac::apply(system.maps.at(m), p);
  return p;
}

double basin_radius(const FractalSystem& system) {
  double r = 0.0;
  for (const auto& map : system.maps) {
    if (const auto* m = std::get_if<IntAffine>(&map)) {
      r = std::max(r, Integer(abs(m->b)).get_d() / (Integer(abs(m->a)).get_d() - 1.0));
    } else if (const auto* m = std::get_if<GaussAffine>(&map)) {
      r = std::max(r, std::sqrt(m->b.norm().get_d()) / (std::sqrt(m->a.norm().get_d()) - 1.0));
    } else {
      throw Error("enumeration", ErrorCode::UnsupportedSpace, "basin radius is defined for Z and Z[i] systems");
    }
  }
  return r + 1.0;
}

MembershipResult is_member(const FractalSystem& system, const SpacePoint& point, std::size_t depth_limit) {
  const SpacePoint p = canonicalize(point);
  if (!belongs_to(p, system.space)) {
    throw Error("enumeration", ErrorCode::SpaceMismatch, "point " + to_string(p) + " is not in the system space");
  }
  std::unordered_map<std::string, std::size_t> seed_index;
  for (std::size_t i = 0; i < system.seeds.size(); ++i) seed_index.emplace(encode(system.seeds[i]), i);

  MembershipResult result;
  const bool exact_inverses =
      std::all_of(system.maps.begin(), system.maps.end(), [](const auto& m) { return supports_preimage(m); });
  if (!exact_inverses) {
    result.fallback_used = true;
    Integer bound = size_of(p).raw;
    for (const auto& s : system.seeds) bound = std::max(bound, size_of(s).raw);
    const PointBag bag = enumerate(system, bound);
    const auto idx = bag.find(p);
    if (!idx) return result;
    result.status = MemberStatus::Member;
    Certificate cert;
    std::size_t cur = *idx;
    while (bag.points[cur].parent) {
      cert.maps.push_back(bag.points[cur].via_map);
      cur = *bag.points[cur].parent;
    }
    std::reverse(cert.maps.begin(), cert.maps.end());
    cert.seed_index = seed_index.at(bag.points[cur].key);
    result.certificate = std::move(cert);
    return result;
  }

  // Breadth-first backward search; `link` records how each visited node maps
  // forward to the node it was reached from.
  struct Node {
    SpacePoint point;
    std::size_t depth;
    std::optional<std::size_t> child;  // node this one maps onto
    std::size_t via_map;
  };
  std::vector<Node> nodes;
  std::unordered_set<std::string> visited;
  nodes.push_back({p, 0, std::nullopt, 0});
  visited.insert(encode(p));
  bool cut = false;
  for (std::size_t head = 0; head < nodes.size(); ++head) {
    const std::string key = encode(nodes[head].point);
    if (const auto s = seed_index.find(key); s != seed_index.end()) {
      Certificate cert;
      cert.seed_index = s->second;
      for (std::size_t cur = head; nodes[cur].child; cur = *nodes[cur].child) cert.maps.push_back(nodes[cur].via_map);
      result.status = MemberStatus::Member;
      result.certificate = std::move(cert);
      return result;
    }
    if (nodes[head].depth >= depth_limit) {
      cut = true;
      continue;
    }
    for (std::size_t m = 0; m < system.maps.size(); ++m) {
      for (auto& q : preimages(system.maps[m], nodes[head].point)) {
        if (!visited.insert(encode(q)).second) continue;
        nodes.push_back({std::move(q), nodes[head].depth + 1, head, m});
      }
    }
  }
  result.status = cut ? MemberStatus::Undecided : MemberStatus::NotMember;
  return result;
}

ExactnessReport audit_bag(const FractalSystem& system, const PointBag& bag) {
  ExactnessReport report;
  report.bound = bag.bound;
  report.point_count = bag.size();
  const std::size_t n = bag.size();
  std::vector<std::uint32_t> count(n, 0);
  std::vector<std::pair<std::size_t, std::size_t>> first(n);  // (map, preimage index)
  std::unordered_map<std::size_t, std::vector<std::pair<std::size_t, std::size_t>>> extra;
  for (std::size_t q = 0; q < n; ++q) {
    for (std::size_t m = 0; m < system.maps.size(); ++m) {
      const auto idx = bag.find(arfrac::apply(system.maps[m], bag.points[q].point));
      if (!idx) continue;
      if (count[*idx]++ == 0) first[*idx] = {m, q};
      else extra[*idx].emplace_back(m, q);
    }
  }
  std::unordered_set<std::string> seeds;
  for (const auto& s : system.seeds) seeds.insert(encode(s));
  for (std::size_t p = 0; p < n; ++p) {
    if (count[p] > 0) ++report.covered_count;
    if (count[p] == 0 && !seeds.count(bag.points[p].key)) report.uncovered.push_back(bag.points[p].point);
    if (count[p] >= 2) {
      Overlap o;
      o.point = bag.points[p].point;
      o.witnesses.push_back({first[p].first, bag.points[first[p].second].point});
      for (const auto& [m, q] : extra[p]) o.witnesses.push_back({m, bag.points[q].point});
      report.overlaps.push_back(std::move(o));
    }
  }
  for (const auto& s : system.seeds) {
    const auto idx = bag.find(s);
    report.seed_covered.push_back(idx && count[*idx] > 0);
  }
  return report;
}

ExactnessReport audit_exactness(const FractalSystem& system, const Integer& bound, const EnumerateOptions& options) {
  return audit_bag(system, enumerate(system, bound, options));
}

IntersectionReport curve_intersection_probe(const FractalSystem& system, const Polynomial& curve,
                                            std::span<const Integer> bounds, const EnumerateOptions& options) {
  if (system.space.kind != SpaceKind::AffQ) {
    throw Error("enumeration", ErrorCode::UnsupportedSpace, "intersection probes need an affine rational space");
  }
  if (curve.is_zero()) throw Error("enumeration", ErrorCode::InvalidArgument, "curve polynomial is zero");
  if (curve.variables() != system.space.dim) {
    throw Error("enumeration", ErrorCode::InvalidArgument, "curve has the wrong number of variables");
  }
  if (bounds.empty()) throw Error("enumeration", ErrorCode::InvalidArgument, "no bounds given");
  for (std::size_t k = 1; k < bounds.size(); ++k) {
    if (bounds[k] <= bounds[k - 1]) throw Error("enumeration", ErrorCode::InvalidArgument, "bounds must increase");
  }
  // Windows are nested, so one enumeration at the largest bound serves all.
  const PointBag bag = enumerate(system, bounds.back(), options);
  IntersectionReport report;
  for (const auto& b : bounds) {
    IntersectionLevel level;
    level.bound = b;
    for (const auto& e : bag.points) {
      if (e.size.raw > b) break;
      const auto& coords = std::get<AffinePoint>(e.point).coords;
      if (curve.evaluate(std::span<const Rational>(coords)) == 0) level.points.push_back(e.point);
    }
    report.levels.push_back(std::move(level));
  }
  if (report.levels.size() >= 2) {
    const auto& a = report.levels[report.levels.size() - 2].points;
    const auto& b = report.levels.back().points;
    report.stabilized = a == b;
  }
  return report;
}

}  // namespace arfrac
