#pragma once

// Finite towers K_1 <- K_2 <- ... of complexes with quasi-simplicial bonds:
// regularity reports, certification of the inverse-limit conditions,
// restriction, pulled-back star covers and stagewise lifting.

#include "polytower/carrier.hpp"
#include "polytower/connectivity.hpp"
#include "polytower/covers.hpp"
#include "polytower/maps.hpp"

#include <optional>
#include <string>
#include <vector>

namespace polytower {

enum class StarCover { O, B };
const char* to_string(StarCover kind);
IndexedCover star_cover(const ComplexPtr& complex, StarCover kind);

/// levels[0] = K_1. bonds[i] maps levels[i+1] into beta levels[i].
class Tower {
 public:
  Tower(std::vector<ComplexPtr> levels, std::vector<QSMap> bonds, std::vector<Rational> scales = {},
        std::vector<StarCover> covers = {});

  /// kappa_i = 2^-i for i = 1..count.
  static std::vector<Rational> default_scales(std::size_t count);

  std::size_t size() const { return levels_.size(); }
  const ComplexPtr& level(std::size_t i) const { return levels_.at(i); }
  const QSMap& bond(std::size_t i) const { return bonds_.at(i); }
  const Rational& scale(std::size_t i) const { return scales_.at(i); }
  StarCover cover_kind(std::size_t i) const { return covers_.at(i); }
  const std::vector<ComplexPtr>& levels() const { return levels_; }
  const std::vector<QSMap>& bonds() const { return bonds_; }
  const std::vector<Rational>& scales() const { return scales_; }
  const std::vector<StarCover>& covers() const { return covers_; }
  int max_dimension() const;

  /// Vertex images of the short projection K_m -> K_k (0-based, k <= m) as
  /// points of K_k.
  std::vector<Point> projection_images(std::size_t m, std::size_t k) const;
  /// Image of a point of K_m in K_k.
  Point project(const Point& x, std::size_t m, std::size_t k) const;
  /// Lipschitz constant of the short projection, K_m at kappa_m and K_k at kappa_k.
  Rational projection_lipschitz(std::size_t m, std::size_t k) const;

 private:
  std::vector<ComplexPtr> levels_;
  std::vector<QSMap> bonds_;
  std::vector<Rational> scales_;
  std::vector<StarCover> covers_;
};

struct RegularityEntry {
  Simplex delta;                 // simplex of beta L
  std::size_t preimage_size = 0;  // number of simplices
  bool empty = false;
  nlohmann::json invariants;     // per-invariant statuses
  Verdict verdict = Verdict::holds();
};

struct RegularityReport {
  int n = 1;
  std::vector<RegularityEntry> entries;
  Verdict aggregate = Verdict::holds();
  nlohmann::json to_json(const QSMap& map) const;
};

/// For every simplex delta of beta L: the preimage subcomplex and its
/// connectivity invariants below n. Empty preimages are surjectivity
/// failures. Fails lists every failing delta; the first is the witness.
RegularityReport n_regular_report(const QSMap& map, int n, const Budgets& budgets = {});

struct ConditionResult {
  std::string name;
  Verdict verdict = Verdict::holds();
  nlohmann::json data;
};

struct TowerCertificate {
  int n = 1;
  std::size_t depth = 0;
  std::vector<ConditionResult> conditions;  // I, II, A, B, C, D, E, homology
  Verdict conclusion = Verdict::holds();

  const ConditionResult& condition(const std::string& name) const;
  nlohmann::json to_json() const;
};

TowerCertificate verify_tower(const Tower& tower, int n, const Budgets& budgets = {});

/// The tower from level m on (0-based), restricted to A in K_m.
Tower restrict_tower(const Tower& tower, std::size_t m, const Subcomplex& a);

struct PulledBackCover {
  IndexedCover cover;
  std::vector<std::vector<std::size_t>> subsets;  // non-empty intersections
  std::vector<Verdict> verdicts;                  // k-connectivity below n, per subset
  Verdict aggregate = Verdict::holds();
};

/// Vertex-star cover of K_i pulled back to K_m along the short projection,
/// with a connectivity verdict for every non-empty intersection.
PulledBackCover pullback_star_cover(const Tower& tower, std::size_t i, std::size_t m, StarCover kind, int n,
                                    const Budgets& budgets = {});

struct LiftResult {
  Verdict verdict = Verdict::holds();
  std::optional<SubdividedMap> lift;  // into p.source(), positions in f's domain
  nlohmann::json certificate;         // closeness of p o g and f
};

/// One stage of lifting: g with g = g0 on A and p o g close to f with
/// respect to the closed cover (on p.base() or its subdivision). Domain
/// edges are split where two coordinates of f cross (barycentric
/// subdivision, at most three times, for other ambients) until f maps
/// simplices into simplices of the cover's ambient, then extended through
/// the carrier
/// f^-1(F_j) -> p^-1(F_j). Inconclusive (condition D) unless every
/// intersection of the pulled-back cover is AE(n), n at least dim X.
LiftResult single_lift(const QSMap& p, const IndexedCover& cover, const PLMap& f, const Subcomplex& a,
                       const std::optional<PLMap>& g0, const Budgets& budgets = {}, int n = 0);

/// Compatible points x_0..x_m (0-based levels) with bond_i(x_{i+1}) = x_i.
struct ThreadApprox {
  std::vector<Point> points;
  Verdict check(const Tower& tower) const;
  static ThreadApprox from_top(const Tower& tower, const Point& top);
};

/// A map on A into the top level projected down to every level.
std::vector<PLMap> thread_maps(const Tower& tower, const PLMap& top);

struct LiftStage {
  SubdividedMap map;  // f_m, positions in the previous stage's domain
  Verdict closeness = Verdict::holds();
};

struct CauchyEntry {
  std::size_t k = 0, m = 0;  // 0-based levels, increment between a^k_m and a^k_{m+1}
  Rational increment = 0;
  Rational lipschitz = 0;
  Rational mesh = 0;
  Rational bound = 0;
};

struct TowerLiftResult {
  Verdict verdict = Verdict::holds();
  std::vector<LiftStage> stages;       // stage 0 is f_1 itself
  std::vector<Point> positions;        // finest domain vertices in X
  std::vector<CauchyEntry> cauchy;
  std::vector<Rational> tails;         // tails[m] = sum of bounds for k = 0 from m on
  nlohmann::json to_json() const;
};

/// Lifts f_1 : X -> K_1 through `depth` levels with f_m = g0[m] on A.
/// Stops at the first stage that is not Holds and returns what was built.
TowerLiftResult tower_lift(const Tower& tower, const PLMap& f1, const Subcomplex& a, const std::vector<PLMap>& g0,
                           std::size_t depth, const Budgets& budgets = {}, int n = 0);

namespace gen {

/// base <- beta base <- ... with subdivision identities, `levels` levels.
Tower subdivision_tower(const ComplexPtr& base, std::size_t levels);
/// Delta^1 <- cylinder <- beta cylinder.
Tower cylinder_tower();
/// Iterated joined blow-ups starting from `base`.
Tower random_tower(std::uint64_t seed, const ComplexPtr& base, std::size_t levels);

}  // namespace gen

}  // namespace polytower
