#pragma once

// Finite abstract simplicial complexes, points with exact barycentric
// coordinates, the scale-kappa l1 metric and barycentric subdivision.

#include "polytower/error.hpp"
#include "polytower/rational.hpp"

#include "json.hpp"

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace polytower {

/// A vertex name is either an atom (a string) or a sorted list of names.
/// Lists name the vertices of a barycentric subdivision: the list is the
/// simplex of the parent whose barycenter the vertex stands for.
class VertexName {
 public:
  VertexName() = default;
  explicit VertexName(std::string atom) : atom_(std::move(atom)) {}
  /// Sorts `parts`; throws DuplicateVertex when two parts are equal.
  static VertexName list(std::vector<VertexName> parts);

  bool is_atom() const { return !is_list_; }
  const std::string& atom() const { return atom_; }
  const std::vector<VertexName>& parts() const { return parts_; }

  /// Number of nested subdivision levels (0 for atoms).
  std::size_t depth() const;

  /// Atoms print verbatim, lists as compact JSON arrays.
  std::string to_string() const;

  friend std::strong_ordering operator<=>(const VertexName& lhs, const VertexName& rhs);
  friend bool operator==(const VertexName& lhs, const VertexName& rhs) {
    return (lhs <=> rhs) == std::strong_ordering::equal;
  }

 private:
  bool is_list_ = false;
  std::string atom_;
  std::vector<VertexName> parts_;
};

using VertexId = std::uint32_t;
/// Vertex ids in strictly increasing order. Ids follow the canonical order of
/// vertex names, so sorted ids are sorted names.
using Simplex = std::vector<VertexId>;

bool is_face(const Simplex& face, const Simplex& simplex);
Simplex simplex_union(const Simplex& lhs, const Simplex& rhs);
Simplex simplex_intersection(const Simplex& lhs, const Simplex& rhs);

/// Face-closed set of simplices bucketed by dimension, each bucket sorted.
class SimplexSet {
 public:
  /// Inserts `simplex` and all of its non-empty faces.
  void insert_closed(const Simplex& simplex);
  /// Inserts only `simplex`; caller keeps the set face-closed.
  void insert(const Simplex& simplex);
  void finalize();

  bool contains(const Simplex& simplex) const;
  bool empty() const { return buckets_.empty() || buckets_[0].empty(); }
  int dimension() const { return static_cast<int>(buckets_.size()) - 1; }
  std::size_t size() const;
  const std::vector<Simplex>& of_dimension(int dim) const;
  std::vector<Simplex> all() const;
  std::vector<Simplex> maximal() const;
  std::vector<VertexId> vertices() const;
  std::vector<std::size_t> f_vector() const;

  friend bool operator==(const SimplexSet&, const SimplexSet&) = default;

 private:
  std::vector<std::vector<Simplex>> buckets_;
};

SimplexSet intersect(const SimplexSet& lhs, const SimplexSet& rhs);

class Complex;
using ComplexPtr = std::shared_ptr<const Complex>;

/// Finite abstract simplicial complex. Immutable after construction.
class Complex {
 public:
  /// Builds the face closure of `simplices` over the union of their vertices
  /// and `extra_vertices`. Throws EmptySimplex or DuplicateVertex.
  static ComplexPtr from_simplices(const std::vector<std::vector<VertexName>>& simplices,
                                   const std::vector<VertexName>& extra_vertices = {});

  /// Same, for atom-named vertices given as plain strings.
  static ComplexPtr from_atoms(const std::vector<std::vector<std::string>>& simplices);

  std::size_t vertex_count() const { return names_.size(); }
  const std::vector<VertexName>& names() const { return names_; }
  const VertexName& name(VertexId id) const { return names_.at(id); }
  std::optional<VertexId> find(const VertexName& name) const;
  /// Throws UnknownVertex.
  VertexId id(const VertexName& name) const;
  Simplex simplex_of(const std::vector<VertexName>& names) const;

  int dimension() const { return simplices_.dimension(); }
  const SimplexSet& simplices() const { return simplices_; }
  const std::vector<Simplex>& simplices(int dim) const { return simplices_.of_dimension(dim); }
  std::size_t simplex_count() const { return simplices_.size(); }
  std::vector<std::size_t> f_vector() const { return simplices_.f_vector(); }
  const std::vector<Simplex>& maximal() const { return maximal_; }
  bool contains(const Simplex& simplex) const { return simplices_.contains(simplex); }
  std::vector<VertexName> names_of(const Simplex& simplex) const;

  /// Set when this complex was produced by barycentric_subdivide: the parent
  /// complex and, per vertex, the parent simplex it is the barycenter of.
  const ComplexPtr& subdivision_parent() const { return parent_; }
  const Simplex& carrier(VertexId id) const { return carriers_.at(id); }

  friend bool operator==(const Complex& lhs, const Complex& rhs) {
    return lhs.names_ == rhs.names_ && lhs.simplices_ == rhs.simplices_;
  }

 private:
  friend ComplexPtr barycentric_subdivide(const ComplexPtr& complex);
  friend ComplexPtr make_complex(std::vector<VertexName> names, SimplexSet simplices);

  std::vector<VertexName> names_;
  SimplexSet simplices_;
  std::vector<Simplex> maximal_;
  ComplexPtr parent_;
  std::vector<Simplex> carriers_;
};

/// `names` must be sorted and unique; `simplices` face-closed over their ids.
ComplexPtr make_complex(std::vector<VertexName> names, SimplexSet simplices);

/// Vertices of the result are the simplices of `complex`, simplices are the
/// strictly nested chains. The result remembers its parent.
ComplexPtr barycentric_subdivide(const ComplexPtr& complex);

/// Iterated subdivision; `times == 0` returns `complex` itself.
ComplexPtr barycentric_subdivide(const ComplexPtr& complex, int times);

/// Subdivision vertex id of a parent simplex. Throws UnknownVertex.
VertexId subdivision_vertex(const Complex& subdivision, const Simplex& parent_simplex);

/// A face-closed subset of a parent complex's simplices.
class Subcomplex {
 public:
  Subcomplex(ComplexPtr parent, SimplexSet simplices);
  static Subcomplex whole(const ComplexPtr& parent);
  static Subcomplex empty(const ComplexPtr& parent) { return Subcomplex(parent, SimplexSet{}); }
  /// Closure of the given simplices; throws NotSubcomplex if one is missing
  /// from the parent.
  static Subcomplex closure_of(const ComplexPtr& parent, const std::vector<Simplex>& simplices);

  const ComplexPtr& parent() const { return parent_; }
  const SimplexSet& simplices() const { return simplices_; }
  bool contains(const Simplex& simplex) const { return simplices_.contains(simplex); }
  bool empty() const { return simplices_.empty(); }
  std::vector<VertexId> vertices() const { return simplices_.vertices(); }
  /// Standalone complex carrying the parent's vertex names.
  ComplexPtr to_complex() const;

  friend bool operator==(const Subcomplex& lhs, const Subcomplex& rhs) {
    return lhs.simplices_ == rhs.simplices_;
  }

 private:
  ComplexPtr parent_;
  SimplexSet simplices_;
};

Subcomplex intersect(const Subcomplex& lhs, const Subcomplex& rhs);

/// All simplices of `complex` spanned by vertices of `vertex_set`.
/// Throws UnknownVertex for ids outside the complex.
Subcomplex induced_subcomplex(const ComplexPtr& complex, const std::vector<VertexId>& vertex_set);

/// True iff every simplex of the parent whose vertices all lie in `sub` is
/// already a simplex of `sub`.
bool is_full_subcomplex(const Subcomplex& sub);

/// Point of |K| given by exact barycentric coordinates and a metric scale.
/// Coordinates are kept sorted by vertex id with zero entries dropped.
class Point {
 public:
  using Coordinates = std::vector<std::pair<VertexId, Rational>>;

  /// Validates non-negativity, unit sum and that the support is a simplex.
  Point(ComplexPtr complex, Coordinates coords, Rational scale = 1);
  static Point vertex(const ComplexPtr& complex, VertexId v, Rational scale = 1);

  const ComplexPtr& complex() const { return complex_; }
  const Coordinates& coordinates() const { return coords_; }
  const Rational& scale() const { return scale_; }
  Rational coordinate(VertexId v) const;
  Simplex support() const;
  Point with_scale(Rational scale) const;

  friend bool operator==(const Point& lhs, const Point& rhs) {
    return lhs.coords_ == rhs.coords_ && lhs.scale_ == rhs.scale_;
  }

 private:
  ComplexPtr complex_;
  Coordinates coords_;
  Rational scale_;
};

/// Sum of `weights[i] * points[i]` over points of one complex; weights must
/// be non-negative and sum to one. The result's support must be a simplex.
Point affine_combination(std::span<const Point> points, std::span<const Rational> weights);

/// kappa * ||x - y||_1. Throws ScaleMismatch / ComplexMismatch.
Rational distance(const Point& x, const Point& y);

/// Uniform coordinates 1/|sigma| on the vertices of sigma.
Point barycenter(const ComplexPtr& complex, const Simplex& sigma, Rational scale = 1);

/// Maps a point of a subdivision to the parent complex: each subdivision
/// vertex contributes the barycenter of its parent simplex.
Point flatten(const Point& x);

nlohmann::json name_json(const VertexName& name);
/// Names of the simplex's vertices as a JSON array.
nlohmann::json simplex_json(const Complex& complex, const Simplex& simplex);

/// Coordinates keyed by vertex name, values as "p/q" strings.
nlohmann::json point_json(const Point& x);

/// Inverse of flatten: the unique representation of `x` in `subdivision`.
Point to_subdivision(const Point& x, const ComplexPtr& subdivision);

}  // namespace polytower
