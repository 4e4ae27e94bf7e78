#include "polytower/maps.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace polytower {

namespace {

bool same_complex(const ComplexPtr& a, const ComplexPtr& b) { return a == b || *a == *b; }

std::size_t simplex_index(const std::vector<Simplex>& bucket, const Simplex& s) {
  auto it = std::lower_bound(bucket.begin(), bucket.end(), s);
  if (it == bucket.end() || *it != s) throw Error(ErrorCode::NotSimplicial, "image is not a simplex of the target");
  return static_cast<std::size_t>(it - bucket.begin());
}

nlohmann::json integer_json(const Integer& value) { return value.str(); }

}  // namespace

// ---------------------------------------------------------------------------
// VertexMap

VertexMap::VertexMap(ComplexPtr source, ComplexPtr target, std::vector<VertexId> images)
    : source_(std::move(source)), target_(std::move(target)), images_(std::move(images)) {
  if (images_.size() != source_->vertex_count()) {
    throw Error(ErrorCode::InvalidInput, "vertex map must assign every source vertex");
  }
  for (auto w : images_) {
    if (w >= target_->vertex_count()) throw Error(ErrorCode::UnknownVertex, "image outside the target complex");
  }
}

VertexMap VertexMap::from_names(ComplexPtr source, ComplexPtr target,
                                const std::map<VertexName, VertexName>& images) {
  std::vector<VertexId> ids(source->vertex_count());
  for (const auto& [from, to] : images) {
    const auto v = source->find(from);
    if (!v) throw Error(ErrorCode::UnknownVertex, "unknown source vertex '" + from.to_string() + "'", from.to_string());
    auto w = target->find(to);
    if (!w && to.is_atom() && target->subdivision_parent()) w = target->find(VertexName::list({to}));
    if (!w) throw Error(ErrorCode::UnknownVertex, "unknown target vertex '" + to.to_string() + "'", to.to_string());
    ids[*v] = *w;
  }
  for (VertexId v = 0; v < source->vertex_count(); ++v) {
    if (!images.count(source->name(v))) {
      throw Error(ErrorCode::InvalidInput, "no image for vertex '" + source->name(v).to_string() + "'",
                  source->name(v).to_string());
    }
  }
  return VertexMap(std::move(source), std::move(target), std::move(ids));
}

VertexMap VertexMap::identity(const ComplexPtr& complex) {
  std::vector<VertexId> ids(complex->vertex_count());
  for (VertexId v = 0; v < ids.size(); ++v) ids[v] = v;
  return VertexMap(complex, complex, std::move(ids));
}

Simplex VertexMap::image(const Simplex& sigma) const {
  Simplex out;
  out.reserve(sigma.size());
  for (auto v : sigma) out.push_back(images_.at(v));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Verdict check_simplicial(const VertexMap& map) {
  const auto& source = *map.source();
  for (int d = 0; d <= source.dimension(); ++d) {
    for (const auto& sigma : source.simplices(d)) {
      const auto img = map.image(sigma);
      if (!map.target()->contains(img)) {
        return Verdict::fails({{"simplex", simplex_json(source, sigma)},
                               {"image", simplex_json(*map.target(), img)}});
      }
    }
  }
  return Verdict::holds();
}

// ---------------------------------------------------------------------------
// QSMap

QSMap QSMap::check(VertexMap map) {
  if (!map.target()->subdivision_parent()) {
    throw Error(ErrorCode::TypeMismatch, "quasi-simplicial map must target a barycentric subdivision");
  }
  const auto verdict = check_simplicial(map);
  if (verdict.is_fails()) {
    throw Error(ErrorCode::NotSimplicial, "map is not simplicial into the subdivided target",
                verdict.detail().dump());
  }
  return QSMap(std::move(map));
}

QSMap QSMap::from_names(ComplexPtr source, ComplexPtr base, const std::map<VertexName, VertexName>& images) {
  auto sub = barycentric_subdivide(base);
  return check(VertexMap::from_names(std::move(source), std::move(sub), images));
}

QSMap QSMap::subdivision_identity(const ComplexPtr& base) {
  auto sub = barycentric_subdivide(base);
  return check(VertexMap::identity(sub));
}

// ---------------------------------------------------------------------------
// Surjectivity and preimages

Verdict is_surjective(const VertexMap& map) {
  std::set<Simplex> images;
  for (const auto& sigma : map.source()->maximal()) images.insert(map.image(sigma));
  auto uncovered = nlohmann::json::array();
  for (const auto& top : map.target()->maximal()) {
    if (!images.count(top)) uncovered.push_back(simplex_json(*map.target(), top));
  }
  if (uncovered.empty()) return Verdict::holds();
  return Verdict::fails({{"uncovered", uncovered}, {"witness", uncovered.front()}});
}

Subcomplex preimage_subcomplex(const VertexMap& map, const Simplex& delta) {
  std::vector<VertexId> w;
  for (VertexId v = 0; v < map.source()->vertex_count(); ++v) {
    if (std::binary_search(delta.begin(), delta.end(), map.image(v))) w.push_back(v);
  }
  return induced_subcomplex(map.source(), w);
}

Subcomplex preimage(const VertexMap& map, const Subcomplex& sub) {
  SimplexSet out;
  for (const auto& sigma : map.source()->simplices().all()) {
    if (sub.contains(map.image(sigma))) out.insert(sigma);
  }
  out.finalize();
  return Subcomplex(map.source(), std::move(out));
}

// ---------------------------------------------------------------------------
// Geometry

Point push_forward(const VertexMap& map, const Point& x) {
  std::map<VertexId, Rational> acc;
  for (const auto& [v, c] : x.coordinates()) acc[map.image(v)] += c;
  return Point(map.target(), Point::Coordinates(acc.begin(), acc.end()), x.scale());
}

Point apply(const QSMap& map, const Point& x, const Rational& lambda) {
  return flatten(push_forward(map.vertex_map(), x)).with_scale(lambda);
}

LipschitzConstant lipschitz_constant(const Complex& source, const std::vector<Point>& vertex_images,
                                     const Rational& kappa, const Rational& lambda) {
  if (kappa <= 0 || lambda <= 0) throw Error(ErrorCode::DomainError, "scales must be positive");
  if (vertex_images.size() != source.vertex_count()) {
    throw Error(ErrorCode::InvalidInput, "one image point per source vertex is required");
  }
  LipschitzConstant best;
  std::set<std::pair<VertexId, VertexId>> seen;
  for (const auto& top : source.maximal()) {
    for (std::size_t i = 0; i < top.size(); ++i) {
      for (std::size_t j = i + 1; j < top.size(); ++j) {
        if (!seen.emplace(top[i], top[j]).second) continue;
        const Rational d = distance(vertex_images[top[i]].with_scale(1), vertex_images[top[j]].with_scale(1));
        const Rational ratio = d * lambda / (2 * kappa);
        if (ratio > best.value) {
          best.value = ratio;
          best.witness = std::make_pair(top[i], top[j]);
        }
      }
    }
  }
  return best;
}

LipschitzConstant lipschitz_constant(const QSMap& map, const Rational& kappa, const Rational& lambda) {
  std::vector<Point> images;
  images.reserve(map.source()->vertex_count());
  for (VertexId v = 0; v < map.source()->vertex_count(); ++v) {
    images.push_back(barycenter(map.base(), map.subdivision()->carrier(map.vertex_map().image(v))));
  }
  return lipschitz_constant(*map.source(), images, kappa, lambda);
}

// ---------------------------------------------------------------------------
// Composition

VertexMap compose(const VertexMap& outer, const VertexMap& inner) {
  if (!same_complex(inner.target(), outer.source())) {
    throw Error(ErrorCode::ComplexMismatch, "inner map target differs from outer map source");
  }
  std::vector<VertexId> ids(inner.source()->vertex_count());
  for (VertexId v = 0; v < ids.size(); ++v) ids[v] = outer.image(inner.image(v));
  return VertexMap(inner.source(), outer.target(), std::move(ids));
}

VertexMap compose(const QSMap& outer, const QSMap& inner) {
  if (!same_complex(inner.base(), outer.source())) {
    throw Error(ErrorCode::ComplexMismatch, "inner map base differs from outer map source");
  }
  const auto& source = inner.source();
  std::vector<Simplex> images(source->vertex_count());
  bool singletons = true;
  for (VertexId v = 0; v < source->vertex_count(); ++v) {
    images[v] = outer.vertex_map().image(inner.subdivision()->carrier(inner.vertex_map().image(v)));
    singletons = singletons && images[v].size() == 1;
  }
  std::vector<VertexId> ids(source->vertex_count());
  if (singletons) {
    for (VertexId v = 0; v < ids.size(); ++v) ids[v] = images[v].front();
    return VertexMap(source, outer.subdivision(), std::move(ids));
  }
  auto twice = barycentric_subdivide(outer.subdivision());
  for (VertexId v = 0; v < ids.size(); ++v) ids[v] = subdivision_vertex(*twice, images[v]);
  return VertexMap(source, std::move(twice), std::move(ids));
}

std::vector<Point> composite_vertex_images(const std::vector<const QSMap*>& maps, const Rational& scale) {
  if (maps.empty()) throw Error(ErrorCode::InvalidInput, "empty map chain");
  for (std::size_t i = 0; i + 1 < maps.size(); ++i) {
    if (!same_complex(maps[i + 1]->base(), maps[i]->source())) {
      throw Error(ErrorCode::ComplexMismatch, "maps in the chain do not compose");
    }
  }
  const auto& top = maps.back()->source();
  std::vector<Point> out;
  out.reserve(top->vertex_count());
  for (VertexId v = 0; v < top->vertex_count(); ++v) {
    Point x = Point::vertex(top, v);
    for (std::size_t i = maps.size(); i-- > 0;) {
      x = apply(*maps[i], Point(maps[i]->source(), x.coordinates()));
    }
    out.push_back(x.with_scale(scale));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Homology

IntMatrix chain_map(const VertexMap& map, int k) {
  const auto& source = *map.source();
  const auto& target = *map.target();
  const auto& cols = source.simplices(k);
  const std::size_t n_rows = k <= target.dimension() ? target.simplices(k).size() : 0;
  IntMatrix out(n_rows, cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) {
    std::vector<VertexId> img;
    for (auto v : cols[c]) img.push_back(map.image(v));
    // Parity of the sorting permutation by counting inversions.
    int inversions = 0;
    bool degenerate = false;
    for (std::size_t i = 0; i < img.size(); ++i) {
      for (std::size_t j = i + 1; j < img.size(); ++j) {
        if (img[i] == img[j]) degenerate = true;
        if (img[i] > img[j]) ++inversions;
      }
    }
    if (degenerate) continue;
    std::sort(img.begin(), img.end());
    out(simplex_index(target.simplices(k), img), c) = inversions % 2 == 0 ? 1 : -1;
  }
  return out;
}

HomologyPresentation homology_presentation(const Complex& complex, int k) {
  if (k < 0) throw Error(ErrorCode::DomainError, "homology degree must be non-negative");
  HomologyPresentation p;
  if (k > complex.dimension()) return p;
  p.cycles = integer_kernel(boundary_matrix(complex, k));
  const std::size_t n_next = k + 1 <= complex.dimension() ? complex.simplices(k + 1).size() : 0;
  p.relations = IntMatrix(p.cycles.cols(), n_next);
  if (n_next == 0 || p.cycles.cols() == 0) return p;
  const IntMatrix next = boundary_matrix(complex, k + 1);
  const IntegerSolver solver(p.cycles);
  for (std::size_t c = 0; c < n_next; ++c) {
    const auto coords = solver.solve(next.column(c));
    if (!coords) throw Error(ErrorCode::DomainError, "boundary is not a cycle");
    for (std::size_t r = 0; r < coords->size(); ++r) p.relations(r, c) = (*coords)[r];
  }
  return p;
}

HomologyMap induced_homology_map(const VertexMap& map, int k) {
  const auto simplicial = check_simplicial(map);
  if (simplicial.is_fails()) {
    throw Error(ErrorCode::NotSimplicial, "induced map needs a simplicial map", simplicial.detail().dump());
  }
  HomologyMap h;
  h.degree = k;
  h.source = homology(*map.source(), k);
  h.target = homology(*map.target(), k);
  const auto src = homology_presentation(*map.source(), k);
  const auto tgt = homology_presentation(*map.target(), k);
  const std::size_t zs = src.cycles.cols();
  const std::size_t zt = tgt.cycles.cols();
  h.cycle_map = IntMatrix(zt, zs);
  if (zs > 0 && zt > 0) {
    const IntMatrix pushed = chain_map(map, k) * src.cycles;
    const IntegerSolver solver(tgt.cycles);
    for (std::size_t c = 0; c < zs; ++c) {
      const auto coords = solver.solve(pushed.column(c));
      if (!coords) throw Error(ErrorCode::DomainError, "image of a cycle is not a cycle");
      for (std::size_t r = 0; r < zt; ++r) h.cycle_map(r, c) = (*coords)[r];
    }
  }

  const IntMatrix joined = hconcat(h.cycle_map, tgt.relations);
  if (zt == 0) {
    h.surjective = true;
  } else {
    const auto smith = smith_normal_form(joined, false);
    h.surjective = smith.rank() == zt &&
                   std::all_of(smith.invariants.begin(), smith.invariants.end(), [](const Integer& d) { return d == 1; });
  }

  h.injective = true;
  if (zs > 0) {
    const IntMatrix kernel = integer_kernel(joined);
    const IntegerSolver in_boundaries(src.relations);
    for (std::size_t c = 0; c < kernel.cols() && h.injective; ++c) {
      std::vector<Integer> x(zs);
      for (std::size_t r = 0; r < zs; ++r) x[r] = kernel(r, c);
      h.injective = in_boundaries.solve(x).has_value();
    }
  }

  const nlohmann::json facts = {{"degree", k},
                                {"source", describe(h.source)},
                                {"target", describe(h.target)},
                                {"injective", h.injective},
                                {"surjective", h.surjective}};
  h.iso = h.injective && h.surjective ? Verdict::holds(facts) : Verdict::fails(facts);
  return h;
}

nlohmann::json to_json(const HomologyMap& map) {
  auto matrix = nlohmann::json::array();
  for (std::size_t r = 0; r < map.cycle_map.rows(); ++r) {
    auto row = nlohmann::json::array();
    for (std::size_t c = 0; c < map.cycle_map.cols(); ++c) row.push_back(integer_json(map.cycle_map(r, c)));
    matrix.push_back(row);
  }
  return {{"degree", map.degree},
          {"source", describe(map.source)},
          {"target", describe(map.target)},
          {"cycle_map", matrix},
          {"injective", map.injective},
          {"surjective", map.surjective},
          {"iso", map.iso.to_json()}};
}

}  // namespace polytower
