#pragma once

// Bounded windows of a fractal: the forward orbit of the seeds pruned at a
// size bound, membership decisions with replayable certificates, the
// bounded exactness audit of F = disjoint union of f_i(F), and exact
// curve-intersection probes.

#include <span>
#include <vector>

#include "arfrac/point_bag.hpp"
#include "arfrac/polynomial.hpp"
#include "arfrac/spaces.hpp"

namespace arfrac {

struct EnumerateOptions {
  std::size_t max_points = 5'000'000;
  /// Generations allowed before the run is declared non-terminating.
  unsigned max_depth = 100'000;
  /// Workers per generation; results do not depend on this.
  unsigned threads = 1;
};

/// Breadth-first closure of the seeds under every map, discarding images of
/// size > bound. Sets `truncated` when max_points is reached. Throws
/// Error(ValidationFailed) for invalid systems, Error(InvalidArgument) when
/// a seed exceeds the bound, Error(NonTerminating) past max_depth.
PointBag enumerate(const FractalSystem& system, const Integer& bound, const EnumerateOptions& options = {});

/// Forward path: start at seeds[seed_index], apply maps[k] in order.
struct Certificate {
  std::size_t seed_index = 0;
  std::vector<std::size_t> maps;
};

SpacePoint replay(const FractalSystem& system, const Certificate& certificate);

enum class MemberStatus { Member, NotMember, Undecided };

struct MembershipResult {
  MemberStatus status = MemberStatus::NotMember;
  /// Decided from an enumerated bag because some map has no exact inverse.
  bool fallback_used = false;
  std::optional<Certificate> certificate;

  bool member() const noexcept { return status == MemberStatus::Member; }
};

/// max_i |b_i| / (|a_i| - 1) + 1 for integer and Gaussian systems (|a| =
/// sqrt(Norm) for Gaussian maps). Outside this radius every preimage is
/// strictly smaller than its image.
double basin_radius(const FractalSystem& system);

/// Backward descent through exact preimages until a seed is reached. The
/// search keeps a visited set, so cycles inside the basin terminate.
MembershipResult is_member(const FractalSystem& system, const SpacePoint& p, std::size_t depth_limit = 10'000);

struct Witness {
  std::size_t map_index = 0;
  SpacePoint preimage;
};

struct Overlap {
  SpacePoint point;
  std::vector<Witness> witnesses;
};

struct ExactnessReport {
  Integer bound;
  std::size_t point_count = 0;
  std::size_t covered_count = 0;
  std::vector<Overlap> overlaps;       // points with >= 2 distinct witnesses
  std::vector<SpacePoint> uncovered;   // non-seed points with no witness
  std::vector<bool> seed_covered;      // informational

  /// Almost-disjointness allows `overlap_allowance` overlapping points.
  bool exact(std::size_t overlap_allowance = 0) const {
    return overlaps.size() <= overlap_allowance && uncovered.empty();
  }
};

/// Enumerates at `bound` and audits the resulting bag.
ExactnessReport audit_exactness(const FractalSystem& system, const Integer& bound,
                                const EnumerateOptions& options = {});

/// Audits an arbitrary candidate set against the system's maps: every
/// representation p = f_i(q) with p and q in the bag is a witness. Points
/// equal to a system seed are exempt from coverage.
ExactnessReport audit_bag(const FractalSystem& system, const PointBag& bag);

struct IntersectionLevel {
  Integer bound;
  std::vector<SpacePoint> points;
};

struct IntersectionReport {
  std::vector<IntersectionLevel> levels;
  /// The last two levels hold the same points.
  bool stabilized = false;
};

/// Exact zero test of `curve` (in the affine coordinates x1..xn) on the bag
/// at each bound. Throws Error(UnsupportedSpace) unless the space is AffQ(n).
IntersectionReport curve_intersection_probe(const FractalSystem& system, const Polynomial& curve,
                                            std::span<const Integer> bounds, const EnumerateOptions& options = {});

}  // namespace arfrac
