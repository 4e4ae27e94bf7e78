#pragma once

// Piecewise-linear maps given by exact vertex images, affine on each simplex
// of the domain triangulation.

#include "polytower/complex.hpp"
#include "polytower/maps.hpp"

#include <vector>

namespace polytower {

class PLMap {
 public:
  /// Throws DomainError unless, for every domain simplex, the supports of
  /// its vertex images together span a simplex of the target. Images are
  /// stored at scale 1.
  PLMap(ComplexPtr domain, ComplexPtr target, std::vector<Point> images);

  /// Vertex map extended affinely; images are target vertices.
  static PLMap from_vertex_map(const VertexMap& map);
  /// Quasi-simplicial map as a map into its base complex.
  static PLMap from_qs_map(const QSMap& map);
  static PLMap constant(ComplexPtr domain, const Point& value);

  const ComplexPtr& domain() const { return domain_; }
  const ComplexPtr& target() const { return target_; }
  const Point& image(VertexId v) const { return images_.at(v); }
  const std::vector<Point>& images() const { return images_; }

  /// Smallest target simplex containing the image of a domain simplex.
  Simplex image_support(const Simplex& sigma) const;

  Point evaluate(const Point& x) const;

  /// The same map on the barycentric subdivision of the domain.
  PLMap subdivided() const;

  /// Post-composition with a quasi-simplicial map whose source is this
  /// map's target; requires every image simplex to map affinely, which
  /// holds because the outer map is simplicial into its subdivision.
  PLMap then(const QSMap& outer) const;

  friend bool operator==(const PLMap& lhs, const PLMap& rhs) {
    return *lhs.domain_ == *rhs.domain_ && *lhs.target_ == *rhs.target_ && lhs.images_ == rhs.images_;
  }

 private:
  ComplexPtr domain_;
  ComplexPtr target_;
  std::vector<Point> images_;
};

/// Flattens a point of an iterated subdivision down to `space`.
Point realize(const Point& x, const ComplexPtr& space);

}  // namespace polytower
