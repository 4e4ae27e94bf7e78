#include "polytower/pl_map.hpp"

#include <map>

namespace polytower {

namespace {

bool same_complex(const ComplexPtr& a, const ComplexPtr& b) { return a == b || *a == *b; }

}  // namespace

PLMap::PLMap(ComplexPtr domain, ComplexPtr target, std::vector<Point> images)
    : domain_(std::move(domain)), target_(std::move(target)), images_(std::move(images)) {
  if (images_.size() != domain_->vertex_count()) {
    throw Error(ErrorCode::InvalidInput, "PL map needs one image per domain vertex");
  }
  for (auto& p : images_) {
    if (!same_complex(p.complex(), target_)) throw Error(ErrorCode::ComplexMismatch, "image point outside the target");
    p = Point(target_, p.coordinates());
  }
  for (const auto& sigma : domain_->maximal()) {
    if (!target_->contains(image_support(sigma))) {
      throw Error(ErrorCode::DomainError, "image of a domain simplex does not lie in one target simplex",
                  simplex_json(*domain_, sigma).dump());
    }
  }
}

PLMap PLMap::from_vertex_map(const VertexMap& map) {
  std::vector<Point> images;
  for (VertexId v = 0; v < map.source()->vertex_count(); ++v) images.push_back(Point::vertex(map.target(), map.image(v)));
  return PLMap(map.source(), map.target(), std::move(images));
}

PLMap PLMap::from_qs_map(const QSMap& map) {
  std::vector<Point> images;
  for (VertexId v = 0; v < map.source()->vertex_count(); ++v) {
    images.push_back(barycenter(map.base(), map.subdivision()->carrier(map.vertex_map().image(v))));
  }
  return PLMap(map.source(), map.base(), std::move(images));
}

PLMap PLMap::constant(ComplexPtr domain, const Point& value) {
  std::vector<Point> images(domain->vertex_count(), value);
  auto target = value.complex();
  return PLMap(std::move(domain), std::move(target), std::move(images));
}

Simplex PLMap::image_support(const Simplex& sigma) const {
  Simplex out;
  for (auto v : sigma) out = simplex_union(out, images_.at(v).support());
  return out;
}

Point PLMap::evaluate(const Point& x) const {
  if (!same_complex(x.complex(), domain_)) throw Error(ErrorCode::ComplexMismatch, "point outside the domain");
  std::vector<Point> pts;
  std::vector<Rational> weights;
  for (const auto& [v, c] : x.coordinates()) {
    pts.push_back(images_[v]);
    weights.push_back(c);
  }
  return affine_combination(pts, weights).with_scale(x.scale());
}

PLMap PLMap::subdivided() const {
  auto sub = barycentric_subdivide(domain_);
  std::vector<Point> images;
  images.reserve(sub->vertex_count());
  for (VertexId v = 0; v < sub->vertex_count(); ++v) images.push_back(evaluate(barycenter(domain_, sub->carrier(v))));
  return PLMap(std::move(sub), target_, std::move(images));
}

PLMap PLMap::then(const QSMap& outer) const {
  if (!same_complex(outer.source(), target_)) throw Error(ErrorCode::ComplexMismatch, "maps do not compose");
  std::vector<Point> images;
  images.reserve(images_.size());
  for (const auto& p : images_) images.push_back(apply(outer, Point(outer.source(), p.coordinates())));
  return PLMap(domain_, outer.base(), std::move(images));
}

Point realize(const Point& x, const ComplexPtr& space) {
  Point y = x;
  while (!same_complex(y.complex(), space)) {
    if (!y.complex()->subdivision_parent()) {
      throw Error(ErrorCode::ComplexMismatch, "point does not lie in a subdivision of the space");
    }
    y = flatten(y);
  }
  return Point(space, y.coordinates(), y.scale());
}

}  // namespace polytower
