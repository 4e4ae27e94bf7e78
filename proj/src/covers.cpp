#include "polytower/covers.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace polytower {

namespace {

bool same_complex(const ComplexPtr& a, const ComplexPtr& b) { return a == b || *a == *b; }

bool meets(const Simplex& simplex, const std::vector<VertexId>& sorted_vertices) {
  for (auto v : simplex) {
    if (std::binary_search(sorted_vertices.begin(), sorted_vertices.end(), v)) return true;
  }
  return false;
}

/// Least element of a chain of beta K: the carrier with fewest vertices.
const Simplex& chain_minimum(const Complex& subdivision, const Simplex& chain) {
  const Simplex* best = &subdivision.carrier(chain.front());
  for (auto v : chain) {
    if (subdivision.carrier(v).size() < best->size()) best = &subdivision.carrier(v);
  }
  return *best;
}

std::vector<std::uint32_t> intersect_sorted(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
  std::vector<std::uint32_t> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

/// Per element, a sorted set whose pairwise intersections decide
/// non-emptiness: vertices for closed elements, maximal simplices of the
/// ambient meeting the core for open ones.
std::vector<std::uint32_t> witness_set(const IndexedCover& cover, std::size_t i) {
  if (cover.kind() == CoverKind::Closed) return cover.closed(i).vertices();
  std::vector<std::uint32_t> out;
  const auto& star = cover.open(i);
  const auto& tops = cover.ambient()->maximal();
  for (std::uint32_t t = 0; t < tops.size(); ++t) {
    if (meets(tops[t], star.core_vertices())) out.push_back(t);
  }
  return out;
}

nlohmann::json index_names(const IndexedCover& cover, const std::vector<std::size_t>& subset) {
  auto out = nlohmann::json::array();
  for (auto i : subset) out.push_back(name_json(cover.indices()[i]));
  return out;
}

/// Coordinates of a point of the space in the cover's ambient triangulation.
Point in_ambient(const IndexedCover& cover, const Point& x) {
  if (same_complex(cover.ambient(), x.complex())) return Point(cover.ambient(), x.coordinates());
  if (!same_complex(x.complex(), cover.space())) throw Error(ErrorCode::ComplexMismatch, "point outside the covered space");
  return to_subdivision(Point(cover.space(), x.coordinates()), cover.ambient());
}

}  // namespace

// ---------------------------------------------------------------------------
// Stars

OpenStarSet::OpenStarSet(Subcomplex core) : core_(std::move(core)), core_vertices_(core_.vertices()) {}

Subcomplex OpenStarSet::avoided() const {
  std::vector<VertexId> rest;
  for (VertexId v = 0; v < ambient()->vertex_count(); ++v) {
    if (!std::binary_search(core_vertices_.begin(), core_vertices_.end(), v)) rest.push_back(v);
  }
  return induced_subcomplex(ambient(), rest);
}

Subcomplex OpenStarSet::closure() const {
  std::vector<Simplex> tops;
  for (const auto& top : ambient()->maximal()) {
    if (meets(top, core_vertices_)) tops.push_back(top);
  }
  return Subcomplex::closure_of(ambient(), tops);
}

bool OpenStarSet::contains(const Simplex& simplex) const { return meets(simplex, core_vertices_); }

bool OpenStarSet::contains(const Point& x) const {
  if (!same_complex(x.complex(), ambient())) throw Error(ErrorCode::ComplexMismatch, "point outside the ambient complex");
  return meets(x.support(), core_vertices_);
}

OpenStarSet open_star(const Subcomplex& core) { return OpenStarSet(core); }

Subcomplex barycentric_star(const Subcomplex& core, const ComplexPtr& subdivision) {
  if (!subdivision->subdivision_parent() || !same_complex(subdivision->subdivision_parent(), core.parent())) {
    throw Error(ErrorCode::ComplexMismatch, "subdivision does not belong to the core's complex");
  }
  const auto core_vertices = core.vertices();
  SimplexSet out;
  for (const auto& chain : subdivision->simplices().all()) {
    if (meets(chain_minimum(*subdivision, chain), core_vertices)) out.insert(chain);
  }
  out.finalize();
  return Subcomplex(subdivision, std::move(out));
}

Subcomplex barycentric_star(const Subcomplex& core) {
  return barycentric_star(core, barycentric_subdivide(core.parent()));
}

Subcomplex subdivided(const Subcomplex& a, const ComplexPtr& subdivision) {
  if (!subdivision->subdivision_parent() || !same_complex(subdivision->subdivision_parent(), a.parent())) {
    throw Error(ErrorCode::ComplexMismatch, "subdivision does not belong to the subcomplex's complex");
  }
  std::vector<VertexId> chain_vertices;
  for (VertexId x = 0; x < subdivision->vertex_count(); ++x) {
    if (a.contains(subdivision->carrier(x))) chain_vertices.push_back(x);
  }
  return induced_subcomplex(subdivision, chain_vertices);
}

// ---------------------------------------------------------------------------
// Covers

const char* to_string(CoverKind kind) { return kind == CoverKind::Open ? "open" : "closed"; }

IndexedCover::IndexedCover(ComplexPtr space, ComplexPtr ambient, CoverKind kind, std::vector<VertexName> indices,
                           std::vector<CoverElement> elements)
    : space_(std::move(space)),
      ambient_(std::move(ambient)),
      kind_(kind),
      indices_(std::move(indices)),
      elements_(std::move(elements)) {
  if (indices_.size() != elements_.size()) throw Error(ErrorCode::InvalidInput, "one element per index is required");
  if (!same_complex(space_, ambient_) &&
      !(ambient_->subdivision_parent() && same_complex(ambient_->subdivision_parent(), space_))) {
    throw Error(ErrorCode::ComplexMismatch, "cover ambient must be the space or its subdivision");
  }
  std::set<VertexName> seen;
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (!seen.insert(indices_[i]).second) {
      throw Error(ErrorCode::DuplicateVertex, "duplicate cover index", indices_[i].to_string());
    }
    const bool open = std::holds_alternative<OpenStarSet>(elements_[i]);
    if (open != (kind_ == CoverKind::Open)) throw Error(ErrorCode::TypeMismatch, "element kind differs from cover kind");
    const auto& parent = open ? std::get<OpenStarSet>(elements_[i]).ambient() : std::get<Subcomplex>(elements_[i]).parent();
    if (!same_complex(parent, ambient_)) throw Error(ErrorCode::ComplexMismatch, "element outside the cover ambient");
  }
}

const Subcomplex& IndexedCover::closed(std::size_t i) const { return std::get<Subcomplex>(elements_.at(i)); }
const OpenStarSet& IndexedCover::open(std::size_t i) const { return std::get<OpenStarSet>(elements_.at(i)); }

std::optional<std::size_t> IndexedCover::find(const VertexName& index) const {
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (indices_[i] == index) return i;
  }
  return std::nullopt;
}

Verdict check_cover(const IndexedCover& cover) {
  const auto& ambient = *cover.ambient();
  if (cover.kind() == CoverKind::Closed) {
    for (const auto& top : ambient.maximal()) {
      bool covered = false;
      for (std::size_t i = 0; i < cover.size() && !covered; ++i) covered = cover.closed(i).contains(top);
      if (!covered) return Verdict::fails({{"uncovered", simplex_json(ambient, top)}});
    }
    return Verdict::holds();
  }
  for (VertexId v = 0; v < ambient.vertex_count(); ++v) {
    bool covered = false;
    for (std::size_t i = 0; i < cover.size() && !covered; ++i) covered = cover.open(i).contains(Simplex{v});
    if (!covered) return Verdict::fails({{"uncovered", simplex_json(ambient, {v})}});
  }
  return Verdict::holds();
}

IndexedCover cover_O(const ComplexPtr& complex) {
  std::vector<CoverElement> elements;
  for (VertexId v = 0; v < complex->vertex_count(); ++v) {
    elements.emplace_back(OpenStarSet(Subcomplex::closure_of(complex, {{v}})));
  }
  return IndexedCover(complex, complex, CoverKind::Open, complex->names(), std::move(elements));
}

IndexedCover cover_B(const ComplexPtr& complex) {
  auto sub = barycentric_subdivide(complex);
  std::vector<CoverElement> elements;
  for (VertexId v = 0; v < complex->vertex_count(); ++v) {
    elements.emplace_back(barycentric_star(Subcomplex::closure_of(complex, {{v}}), sub));
  }
  return IndexedCover(complex, sub, CoverKind::Closed, complex->names(), std::move(elements));
}

IndexedCover pullback_cover(const VertexMap& map, const IndexedCover& cover) {
  if (!same_complex(map.target(), cover.ambient())) {
    throw Error(ErrorCode::ComplexMismatch, "cover does not live on the map's target");
  }
  const auto& source = map.source();
  std::vector<CoverElement> elements;
  for (std::size_t i = 0; i < cover.size(); ++i) {
    if (cover.kind() == CoverKind::Closed) {
      elements.emplace_back(preimage(map, Subcomplex(map.target(), cover.closed(i).simplices())));
    } else {
      const auto& core = cover.open(i).core_vertices();
      std::vector<VertexId> w;
      for (VertexId v = 0; v < source->vertex_count(); ++v) {
        if (std::binary_search(core.begin(), core.end(), map.image(v))) w.push_back(v);
      }
      elements.emplace_back(OpenStarSet(induced_subcomplex(source, w)));
    }
  }
  return IndexedCover(source, source, cover.kind(), cover.indices(), std::move(elements));
}

IndexedCover pullback_cover(const QSMap& map, const IndexedCover& cover) {
  if (!same_complex(cover.space(), map.base())) throw Error(ErrorCode::ComplexMismatch, "cover does not live on the map's base");
  if (same_complex(cover.ambient(), map.subdivision())) return pullback_cover(map.vertex_map(), cover);
  const auto& sub = *map.subdivision();
  const auto& source = map.source();
  std::vector<CoverElement> elements;
  for (std::size_t i = 0; i < cover.size(); ++i) {
    if (cover.kind() == CoverKind::Closed) {
      const Subcomplex element(map.base(), cover.closed(i).simplices());
      elements.emplace_back(preimage(map.vertex_map(), subdivided(element, map.subdivision())));
    } else {
      const auto& core = cover.open(i).core_vertices();
      std::vector<VertexId> w;
      for (VertexId v = 0; v < source->vertex_count(); ++v) {
        if (meets(sub.carrier(map.vertex_map().image(v)), core)) w.push_back(v);
      }
      elements.emplace_back(OpenStarSet(induced_subcomplex(source, w)));
    }
  }
  return IndexedCover(source, source, cover.kind(), cover.indices(), std::move(elements));
}

// ---------------------------------------------------------------------------
// Intersections and nerves

bool intersection_nonempty(const IndexedCover& cover, const std::vector<std::size_t>& subset) {
  if (subset.empty()) return cover.ambient()->vertex_count() > 0;
  auto acc = witness_set(cover, subset.front());
  for (std::size_t j = 1; j < subset.size() && !acc.empty(); ++j) acc = intersect_sorted(acc, witness_set(cover, subset[j]));
  return !acc.empty();
}

ComplexPtr intersection_model(const IndexedCover& cover, const std::vector<std::size_t>& subset) {
  if (cover.kind() == CoverKind::Closed) {
    auto acc = Subcomplex::whole(cover.ambient());
    for (auto i : subset) acc = intersect(acc, cover.closed(i));
    return acc.to_complex();
  }
  const auto sub = barycentric_subdivide(cover.ambient());
  std::vector<VertexId> inside;
  for (VertexId x = 0; x < sub->vertex_count(); ++x) {
    bool all = true;
    for (auto i : subset) all = all && cover.open(i).contains(sub->carrier(x));
    if (all) inside.push_back(x);
  }
  return induced_subcomplex(sub, inside).to_complex();
}

NerveResult nerve(const IndexedCover& cover, std::uint64_t budget) {
  NerveResult result;
  std::vector<std::vector<std::uint32_t>> witness;
  for (std::size_t i = 0; i < cover.size(); ++i) witness.push_back(witness_set(cover, i));

  std::vector<std::size_t> current;
  bool exhausted = false;
  auto extend = [&](auto&& self, const std::vector<std::uint32_t>& state, std::size_t start) -> void {
    for (std::size_t j = start; j < cover.size() && !exhausted; ++j) {
      if (++result.examined > budget) {
        exhausted = true;
        return;
      }
      auto next = current.empty() ? witness[j] : intersect_sorted(state, witness[j]);
      if (next.empty()) continue;
      current.push_back(j);
      result.simplices.push_back(current);
      self(self, next, j + 1);
      current.pop_back();
    }
  };
  extend(extend, {}, 0);

  if (exhausted) {
    result.verdict = Verdict::inconclusive("nerve budget exhausted", {{"examined", budget}});
    return result;
  }
  std::sort(result.simplices.begin(), result.simplices.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  std::vector<std::vector<VertexName>> faces;
  for (const auto& s : result.simplices) {
    std::vector<VertexName> names;
    for (auto i : s) names.push_back(cover.indices()[i]);
    faces.push_back(std::move(names));
  }
  result.complex = Complex::from_simplices(faces);
  result.verdict = Verdict::holds({{"simplices", result.simplices.size()}});
  return result;
}

Verdict covers_isomorphic(const IndexedCover& lhs, const IndexedCover& rhs, std::uint64_t budget) {
  if (lhs.indices() != rhs.indices()) throw Error(ErrorCode::IndexMismatch, "covers have different index sets");
  const auto a = nerve(lhs, budget);
  const auto b = nerve(rhs, budget);
  if (!a.verdict.is_holds()) return a.verdict;
  if (!b.verdict.is_holds()) return b.verdict;
  const std::set<std::vector<std::size_t>> sa(a.simplices.begin(), a.simplices.end());
  const std::set<std::vector<std::size_t>> sb(b.simplices.begin(), b.simplices.end());
  // Both lists are sorted by size, so the first difference is a smallest one.
  for (std::size_t i = 0; i < std::max(a.simplices.size(), b.simplices.size()); ++i) {
    if (i < a.simplices.size() && !sb.count(a.simplices[i])) {
      return Verdict::fails({{"subset", index_names(lhs, a.simplices[i])}, {"nonempty_in", "first"}});
    }
    if (i < b.simplices.size() && !sa.count(b.simplices[i])) {
      return Verdict::fails({{"subset", index_names(lhs, b.simplices[i])}, {"nonempty_in", "second"}});
    }
  }
  return Verdict::holds({{"nerve_simplices", a.simplices.size()}});
}

// ---------------------------------------------------------------------------
// Mesh

MeshReport mesh(const IndexedCover& cover, const Rational& kappa) {
  if (kappa <= 0) throw Error(ErrorCode::DomainError, "scale must be positive");
  MeshReport report;
  report.from_closures = cover.kind() == CoverKind::Open;
  std::map<VertexId, Point> realized;
  auto point_of = [&](VertexId v) -> const Point& {
    auto it = realized.find(v);
    if (it == realized.end()) it = realized.emplace(v, realize(Point::vertex(cover.ambient(), v), cover.space())).first;
    return it->second;
  };
  for (std::size_t i = 0; i < cover.size(); ++i) {
    const auto vertices =
        cover.kind() == CoverKind::Closed ? cover.closed(i).vertices() : cover.open(i).closure().vertices();
    for (std::size_t a = 0; a < vertices.size(); ++a) {
      for (std::size_t b = a + 1; b < vertices.size(); ++b) {
        const Rational d = distance(point_of(vertices[a]), point_of(vertices[b])) * kappa;
        if (d > report.value) {
          report.value = d;
          report.element = i;
        }
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Deformation

Point deformation_phi(const Point& x, const Rational& t, const Subcomplex& k) {
  if (!same_complex(x.complex(), k.parent())) throw Error(ErrorCode::ComplexMismatch, "subcomplex of another complex");
  if (t < 0 || t > 1) throw Error(ErrorCode::DomainError, "t must lie in [0, 1]");
  if (!is_full_subcomplex(k)) throw Error(ErrorCode::DomainError, "deformation needs a full subcomplex");
  const auto kv = k.vertices();
  Rational mass = 0;
  for (const auto& [v, c] : x.coordinates()) {
    if (std::binary_search(kv.begin(), kv.end(), v)) mass += c;
  }
  if (mass == 0) throw Error(ErrorCode::DomainError, "point lies outside the open star of the subcomplex");
  Point::Coordinates out;
  for (const auto& [v, c] : x.coordinates()) {
    const bool in_k = std::binary_search(kv.begin(), kv.end(), v);
    const Rational value = in_k ? Rational(t * c / mass + (1 - t) * c) : Rational((1 - t) * c);
    if (value != 0) out.emplace_back(v, value);
  }
  return Point(x.complex(), std::move(out), x.scale());
}

// ---------------------------------------------------------------------------
// Closeness

bool element_contains(const IndexedCover& cover, std::size_t element, const Point& x) {
  const Point y = in_ambient(cover, x);
  if (cover.kind() == CoverKind::Closed) return cover.closed(element).contains(y.support());
  return cover.open(element).contains(y);
}

bool element_contains_image(const IndexedCover& cover, std::size_t element, const PLMap& f, const Simplex& sigma) {
  if (!same_complex(f.target(), cover.space())) throw Error(ErrorCode::ComplexMismatch, "map target is not the covered space");
  std::vector<Simplex> supports;
  if (same_complex(cover.ambient(), cover.space())) {
    for (auto v : sigma) supports.push_back(f.image(v).support());
  } else {
    // Affine in the base is affine in the subdivision only inside one chain.
    for (auto v : sigma) supports.push_back(to_subdivision(f.image(v), cover.ambient()).support());
  }
  Simplex all;
  for (const auto& s : supports) all = simplex_union(all, s);
  if (!cover.ambient()->contains(all)) return false;
  if (cover.kind() == CoverKind::Closed) return cover.closed(element).contains(all);
  for (const auto& s : supports) {
    if (!cover.open(element).contains(s)) return false;
  }
  return true;
}

namespace {

struct WitnessSearch {
  nlohmann::json witnesses = nlohmann::json::array();
  nlohmann::json missing = nlohmann::json::array();
  std::optional<nlohmann::json> refuted;
};

WitnessSearch search_witnesses(const PLMap& f, const PLMap& g, const IndexedCover& cover) {
  WitnessSearch out;
  const auto& domain = *f.domain();
  for (VertexId v = 0; v < domain.vertex_count(); ++v) {
    bool common = false;
    for (std::size_t i = 0; i < cover.size() && !common; ++i) {
      common = element_contains(cover, i, f.image(v)) && element_contains(cover, i, g.image(v));
    }
    if (!common) {
      out.refuted = nlohmann::json{{"vertex", name_json(domain.name(v))},
                                   {"f", point_json(f.image(v))},
                                   {"g", point_json(g.image(v))}};
      return out;
    }
  }
  for (const auto& sigma : domain.maximal()) {
    std::optional<std::size_t> found;
    for (std::size_t i = 0; i < cover.size() && !found; ++i) {
      if (element_contains_image(cover, i, f, sigma) && element_contains_image(cover, i, g, sigma)) found = i;
    }
    if (found) {
      out.witnesses.push_back({{"simplex", simplex_json(domain, sigma)}, {"element", name_json(cover.indices()[*found])}});
    } else {
      out.missing.push_back(simplex_json(domain, sigma));
    }
  }
  return out;
}

}  // namespace

Verdict are_close(const PLMap& f, const PLMap& g, const IndexedCover& cover) {
  if (!same_complex(f.domain(), g.domain())) throw Error(ErrorCode::ComplexMismatch, "maps have different domains");
  auto first = search_witnesses(f, g, cover);
  if (first.refuted) return Verdict::fails(*first.refuted);
  if (first.missing.empty()) return Verdict::holds({{"subdivided", false}, {"witnesses", first.witnesses}});
  auto second = search_witnesses(f.subdivided(), g.subdivided(), cover);
  if (second.refuted) return Verdict::fails(*second.refuted);
  if (second.missing.empty()) return Verdict::holds({{"subdivided", true}, {"witnesses", second.witnesses}});
  return Verdict::inconclusive("no common element for some simplex after one subdivision",
                               {{"simplices", second.missing}});
}

}  // namespace polytower
