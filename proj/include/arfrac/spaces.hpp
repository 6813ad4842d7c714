#pragma once

// Ambient spaces, their points, the expanding self-maps used as similarities,
// and the fractal systems built from them. Every value here is immutable
// after construction; all operations are pure.

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "arfrac/elliptic_curve.hpp"
#include "arfrac/numeric.hpp"
#include "arfrac/polynomial.hpp"

namespace arfrac {

enum class SpaceKind { Int, Gauss, AffQ, ProjQ, EC };

std::string_view to_string(SpaceKind kind);

/// Ambient space. `dim` is n for AffQ(n) (n coordinates) and ProjQ(n)
/// (n+1 homogeneous coordinates); 1 otherwise. EC spaces carry their curve.
struct Space {
  SpaceKind kind = SpaceKind::Int;
  std::size_t dim = 1;
  std::optional<Curve> curve;

  std::size_t coordinate_count() const { return kind == SpaceKind::ProjQ ? dim + 1 : dim; }
  bool operator==(const Space& other) const = default;
};

struct Gaussian {
  Integer re;
  Integer im;

  Integer norm() const { return re * re + im * im; }
  Gaussian conj() const { return {re, -im}; }
  bool operator==(const Gaussian& other) const = default;
};

Gaussian operator+(const Gaussian& a, const Gaussian& b);
Gaussian operator-(const Gaussian& a, const Gaussian& b);
Gaussian operator*(const Gaussian& a, const Gaussian& b);
/// Exact quotient in Z[i]; nullopt when divisor does not divide.
std::optional<Gaussian> exact_divide(const Gaussian& dividend, const Gaussian& divisor);

struct IntPoint {
  Integer value;
  bool operator==(const IntPoint& other) const = default;
};
struct GaussPoint {
  Gaussian value;
  bool operator==(const GaussPoint& other) const = default;
};
struct AffinePoint {
  std::vector<Rational> coords;
  bool operator==(const AffinePoint& other) const = default;
};
/// Canonical form: gcd of coordinates is 1, first nonzero coordinate positive.
struct ProjectivePoint {
  std::vector<Integer> coords;
  bool operator==(const ProjectivePoint& other) const = default;
};

using SpacePoint = std::variant<IntPoint, GaussPoint, AffinePoint, ProjectivePoint, CurvePoint>;

SpaceKind kind_of(const SpacePoint& p);
bool belongs_to(const SpacePoint& p, const Space& space);

/// x -> a*x + b on Z, |a| > 1.
struct IntAffine {
  Integer a;
  Integer b;
};
/// z -> a*z + b on Z[i], Norm(a) > 1.
struct GaussAffine {
  Gaussian a;
  Gaussian b;
};
/// n polynomials in n variables acting on Q^n, each of total degree >= 1.
struct PolyTupleQ {
  std::vector<Polynomial> components;
};
/// n+1 homogeneous integer forms of one common degree acting on P^n(Q).
struct ProjHomog {
  std::vector<Polynomial> forms;
};
/// P -> [n]P + T on an elliptic curve.
struct EllTranslate {
  Curve curve;
  Integer multiplier;
  CurvePoint translation;
};

using SimilarityMap = std::variant<IntAffine, GaussAffine, PolyTupleQ, ProjHomog, EllTranslate>;

SpaceKind kind_of(const SimilarityMap& map);

/// Growth degree of the map: 1 for the affine lattice maps, total degree for
/// polynomial and projective maps, n^2 for [n]+T (the canonical height scaling).
long degree(const SimilarityMap& map);

std::string describe(const SimilarityMap& map);

struct FractalSystem {
  Space space;
  std::vector<SimilarityMap> maps;
  std::vector<SpacePoint> seeds;
  std::string label;
};

enum class ViolationKind {
  NoMaps,
  NoSeeds,
  SpaceMismatch,
  NonExpanding,
  DegreeTooLow,
  WrongArity,
  NotHomogeneous,
  NonIntegerCoefficient,
  CommonZero,
  NotOnCurve,
  NonCanonicalSeed,
};

std::string_view to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::string subject;  // "map", "seed" or "system"
  std::size_t index = 0;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool valid() const noexcept { return violations.empty(); }
};

/// Every violated invariant, with the offending map/seed index. Half-width of
/// the integer grid searched for common zeros of projective forms.
ValidationReport validate_system(const FractalSystem& system, int common_zero_grid = 4);

/// Exact, canonical image. Throws Error(SpaceMismatch), or
/// Error(ZeroProjectivePoint) when projective forms vanish simultaneously.
SpacePoint apply(const SimilarityMap& map, const SpacePoint& p);

/// True for map kinds with lattice-exact inverses: IntAffine, GaussAffine,
/// and PolyTupleQ whose i-th component is c*x_i^k.
bool supports_preimage(const SimilarityMap& map);

/// Principal preimage q with apply(map, q) == p, if one exists in the
/// ambient lattice/space (for even monomial powers, the positive root).
/// Throws Error(UnsupportedMapKind) when !supports_preimage(map).
std::optional<SpacePoint> preimage(const SimilarityMap& map, const SpacePoint& p);

/// All preimages (both signs of even monomial roots).
std::vector<SpacePoint> preimages(const SimilarityMap& map, const SpacePoint& p);

/// Idempotent canonical form. Throws Error(ZeroProjectivePoint).
SpacePoint canonicalize(const SpacePoint& p);
bool is_canonical(const SpacePoint& p);

/// Canonical byte encoding used for deduplication and ordering.
std::string encode(const SpacePoint& p);

/// Human-readable form, also accepted by parse_point: "7", "3+4i", "(1/2,4)",
/// "(1:2)", "(0,0)" / "inf" on curves.
std::string to_string(const SpacePoint& p);

/// Parses a point of `space` and canonicalizes it. Accepts the to_string form
/// and bare comma/colon separated lists.
SpacePoint parse_point(std::string_view text, const Space& space);

/// Guesses the space from syntax alone: ':' projective, 'i' Gaussian,
/// ',' affine, otherwise integer.
SpacePoint parse_point_any(std::string_view text);

}  // namespace arfrac
