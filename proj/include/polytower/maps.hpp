#pragma once

// Vertex maps between complexes, quasi-simplicial maps (simplicial into the
// barycentric subdivision of the target), preimages, affine application,
// exact Lipschitz constants and induced maps on integral homology.

#include "polytower/complex.hpp"
#include "polytower/connectivity.hpp"
#include "polytower/integer_matrix.hpp"
#include "polytower/verdict.hpp"

#include <map>
#include <optional>
#include <vector>

namespace polytower {

/// A map of vertex sets. It is not required to be simplicial; see
/// check_simplicial.
class VertexMap {
 public:
  /// `images[v]` is the target vertex of source vertex v. Throws
  /// InvalidInput on a size mismatch and UnknownVertex on a bad id.
  VertexMap(ComplexPtr source, ComplexPtr target, std::vector<VertexId> images);

  /// Name-based construction; every source vertex must be assigned.
  static VertexMap from_names(ComplexPtr source, ComplexPtr target,
                              const std::map<VertexName, VertexName>& images);

  static VertexMap identity(const ComplexPtr& complex);

  const ComplexPtr& source() const { return source_; }
  const ComplexPtr& target() const { return target_; }
  VertexId image(VertexId v) const { return images_.at(v); }
  const std::vector<VertexId>& images() const { return images_; }
  /// Sorted, de-duplicated vertex image of a simplex.
  Simplex image(const Simplex& sigma) const;

  friend bool operator==(const VertexMap& lhs, const VertexMap& rhs) {
    return *lhs.source_ == *rhs.source_ && *lhs.target_ == *rhs.target_ && lhs.images_ == rhs.images_;
  }

 private:
  ComplexPtr source_;
  ComplexPtr target_;
  std::vector<VertexId> images_;
};

/// Holds iff every simplex is sent onto a simplex of the target. Fails
/// carries the first offending simplex (canonical order) and its image.
Verdict check_simplicial(const VertexMap& map);

/// A vertex map K -> beta L that is simplicial.
class QSMap {
 public:
  /// Validates `map` (whose target must be a barycentric subdivision) and
  /// throws NotSimplicial carrying the witness simplex in its context.
  static QSMap check(VertexMap map);

  /// Builds beta L and resolves images given as subdivision names.
  static QSMap from_names(ComplexPtr source, ComplexPtr base,
                          const std::map<VertexName, VertexName>& images);

  /// The map beta L -> L sending each subdivision vertex to itself.
  static QSMap subdivision_identity(const ComplexPtr& base);

  const VertexMap& vertex_map() const { return map_; }
  const ComplexPtr& source() const { return map_.source(); }
  const ComplexPtr& base() const { return map_.target()->subdivision_parent(); }
  const ComplexPtr& subdivision() const { return map_.target(); }

 private:
  explicit QSMap(VertexMap map) : map_(std::move(map)) {}
  VertexMap map_;
};

/// Holds iff every maximal simplex of the target is the image of a simplex.
/// Fails lists all uncovered maximal simplices (by name).
Verdict is_surjective(const VertexMap& map);

/// Induced subcomplex of the source on {v : image(v) in delta}.
Subcomplex preimage_subcomplex(const VertexMap& map, const Simplex& delta);

/// All source simplices whose image lies in `sub`.
Subcomplex preimage(const VertexMap& map, const Subcomplex& sub);

/// Affine pushforward into the target complex (same scale as `x`).
Point push_forward(const VertexMap& map, const Point& x);

/// Pushforward into beta L, then flattened into L at scale `lambda`.
Point apply(const QSMap& map, const Point& x, const Rational& lambda = 1);

struct LipschitzConstant {
  Rational value = 0;
  /// Source vertex pair attaining the value, when the value is positive.
  std::optional<std::pair<VertexId, VertexId>> witness;
};

/// Exact per-simplex Lipschitz constant of the affine map that sends each
/// source vertex to the given target point, source at scale kappa and
/// target at scale lambda.
LipschitzConstant lipschitz_constant(const Complex& source, const std::vector<Point>& vertex_images,
                                     const Rational& kappa, const Rational& lambda);

LipschitzConstant lipschitz_constant(const QSMap& map, const Rational& kappa, const Rational& lambda);

/// outer after inner. Throws ComplexMismatch unless inner's target equals
/// outer's source.
VertexMap compose(const VertexMap& outer, const VertexMap& inner);

/// Composite of quasi-simplicial maps q: K -> beta L and p: L -> beta M as a
/// vertex map K -> beta beta M (v goes to the vertex named by p(q(v))).
/// When every such image is a single vertex of beta M, the result is
/// instead flattened to a vertex map K -> beta M.
VertexMap compose(const QSMap& outer, const QSMap& inner);

/// Vertex images of the composite as points of the final base complex, for
/// a chain of quasi-simplicial maps given outermost last:
/// maps[0]: K_1 -> beta K_0, maps[1]: K_2 -> beta K_1, ...
/// The result lists one point of K_0 per vertex of the last source.
std::vector<Point> composite_vertex_images(const std::vector<const QSMap*>& maps, const Rational& scale = 1);

/// Oriented chain map in degree k (columns: source k-simplices, rows: target
/// k-simplices). Degenerate images map to zero.
IntMatrix chain_map(const VertexMap& map, int k);

/// Cycles Z_k as a basis of integer columns and boundaries B_k written in
/// that basis: H_k = Z^cycles / image(relations).
struct HomologyPresentation {
  IntMatrix cycles;
  IntMatrix relations;
};

HomologyPresentation homology_presentation(const Complex& complex, int k);

struct HomologyMap {
  int degree = 0;
  HomologyGroup source;
  HomologyGroup target;
  IntMatrix cycle_map;  // source cycle coordinates -> target cycle coordinates
  bool injective = false;
  bool surjective = false;
  Verdict iso = Verdict::inconclusive("not computed");
};

/// Induced map on H_k of a simplicial vertex map. Throws NotSimplicial.
HomologyMap induced_homology_map(const VertexMap& map, int k);

inline HomologyMap induced_homology_map(const QSMap& map, int k) {
  return induced_homology_map(map.vertex_map(), k);
}

nlohmann::json to_json(const HomologyMap& map);

}  // namespace polytower
