#pragma once

// Open and barycentric stars, indexed covers by subcomplexes or open stars,
// pull-backs, nerves, cover isomorphism, mesh, the straight-line deformation
// onto a full subcomplex, and closeness certificates for PL maps.

#include "polytower/complex.hpp"
#include "polytower/connectivity.hpp"
#include "polytower/maps.hpp"
#include "polytower/pl_map.hpp"
#include "polytower/verdict.hpp"

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

namespace polytower {

/// |M| minus the union of the closed simplices missing the core L. A point
/// belongs iff its support simplex has a vertex in L.
class OpenStarSet {
 public:
  explicit OpenStarSet(Subcomplex core);

  const ComplexPtr& ambient() const { return core_.parent(); }
  const Subcomplex& core() const { return core_; }
  const std::vector<VertexId>& core_vertices() const { return core_vertices_; }

  /// Simplices of M disjoint from L.
  Subcomplex avoided() const;
  /// Union of the closed simplices that meet L.
  Subcomplex closure() const;

  /// Whether the open simplex `simplex` of M lies in the set.
  bool contains(const Simplex& simplex) const;
  /// `x` must lie in M.
  bool contains(const Point& x) const;

 private:
  Subcomplex core_;
  std::vector<VertexId> core_vertices_;
};

OpenStarSet open_star(const Subcomplex& core);

/// Closure of the chains of beta K whose least element meets L. This is
/// the union of the simplices of beta K that meet |L|.
Subcomplex barycentric_star(const Subcomplex& core, const ComplexPtr& subdivision);
Subcomplex barycentric_star(const Subcomplex& core);

/// beta A inside beta K: the chains of simplices of A.
Subcomplex subdivided(const Subcomplex& a, const ComplexPtr& subdivision);

enum class CoverKind { Open, Closed };
const char* to_string(CoverKind kind);

using CoverElement = std::variant<Subcomplex, OpenStarSet>;

/// Elements live in `ambient`, which is either `space` itself or its
/// barycentric subdivision; distances are measured in `space`.
class IndexedCover {
 public:
  IndexedCover(ComplexPtr space, ComplexPtr ambient, CoverKind kind, std::vector<VertexName> indices,
               std::vector<CoverElement> elements);

  const ComplexPtr& space() const { return space_; }
  const ComplexPtr& ambient() const { return ambient_; }
  CoverKind kind() const { return kind_; }
  std::size_t size() const { return indices_.size(); }
  const std::vector<VertexName>& indices() const { return indices_; }
  const CoverElement& element(std::size_t i) const { return elements_.at(i); }
  const Subcomplex& closed(std::size_t i) const;
  const OpenStarSet& open(std::size_t i) const;
  std::optional<std::size_t> find(const VertexName& index) const;

 private:
  ComplexPtr space_;
  ComplexPtr ambient_;
  CoverKind kind_;
  std::vector<VertexName> indices_;
  std::vector<CoverElement> elements_;
};

/// Holds iff the elements cover the ambient polyhedron.
Verdict check_cover(const IndexedCover& cover);

IndexedCover cover_O(const ComplexPtr& complex);
IndexedCover cover_B(const ComplexPtr& complex);

/// Element-wise preimage, same indices. `cover` must live on the target.
IndexedCover pullback_cover(const VertexMap& map, const IndexedCover& cover);
/// `cover` lives on the base complex L, triangulated by L or by beta L.
IndexedCover pullback_cover(const QSMap& map, const IndexedCover& cover);

/// Whether the elements with the given positions have a common point.
bool intersection_nonempty(const IndexedCover& cover, const std::vector<std::size_t>& subset);

/// A complex homotopy equivalent to the intersection of the given elements
/// (the intersection itself for closed covers; for open ones the subcomplex
/// of the subdivided ambient spanned by the simplices in the intersection).
ComplexPtr intersection_model(const IndexedCover& cover, const std::vector<std::size_t>& subset);

struct NerveResult {
  ComplexPtr complex;          // on the index names; null when inconclusive
  std::vector<std::vector<std::size_t>> simplices;  // non-empty subsets found
  std::uint64_t examined = 0;
  Verdict verdict = Verdict::holds();
};

/// Depth-first enumeration of index subsets with non-empty intersection,
/// never extending a subset whose intersection is empty. More than `budget`
/// examined subsets gives an Inconclusive verdict.
NerveResult nerve(const IndexedCover& cover, std::uint64_t budget = Budgets{}.nerve);

/// Holds iff the nerves agree. Fails names a subset that is non-empty in
/// exactly one cover. Throws IndexMismatch unless the index sets agree.
Verdict covers_isomorphic(const IndexedCover& lhs, const IndexedCover& rhs, std::uint64_t budget = Budgets{}.nerve);

struct MeshReport {
  Rational value = 0;
  bool from_closures = false;  // open covers are measured on closures
  std::optional<std::size_t> element;
};

/// Largest vertex-pair distance inside one element, in `space` at scale kappa.
MeshReport mesh(const IndexedCover& cover, const Rational& kappa = 1);

/// Phi(x, t) = t q(x) + (1 - t) x where q keeps only the coordinates on K
/// and renormalises. Throws DomainError when x has no K coordinate or K is
/// not full in x's complex.
Point deformation_phi(const Point& x, const Rational& t, const Subcomplex& k);

/// Whether an element contains the image of a whole closed simplex under a
/// PL map into `cover.space()`. Sufficient test (see are_close).
bool element_contains_image(const IndexedCover& cover, std::size_t element, const PLMap& f, const Simplex& sigma);

/// Whether the element contains the point.
bool element_contains(const IndexedCover& cover, std::size_t element, const Point& x);

/// Closeness certificate: Holds with one witness element per domain simplex
/// (possibly after one barycentric subdivision of the domain), Fails when a
/// domain vertex has images in no common element, otherwise Inconclusive.
Verdict are_close(const PLMap& f, const PLMap& g, const IndexedCover& cover);

}  // namespace polytower
