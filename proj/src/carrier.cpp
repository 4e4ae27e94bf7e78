#include "polytower/carrier.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <queue>
#include <set>

namespace polytower {

namespace {

bool same_complex(const ComplexPtr& a, const ComplexPtr& b) { return a == b || *a == *b; }

std::vector<VertexId> common_sorted(const std::vector<VertexId>& a, const std::vector<VertexId>& b) {
  std::vector<VertexId> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

nlohmann::json subset_names(const IndexedCover& cover, const std::vector<std::size_t>& subset) {
  auto out = nlohmann::json::array();
  for (auto i : subset) out.push_back(name_json(cover.indices()[i]));
  return out;
}

}  // namespace

Carrier::Carrier(IndexedCover source_cover, ComplexPtr target_complex, std::vector<Subcomplex> target_images)
    : source(std::move(source_cover)), target(std::move(target_complex)), images(std::move(target_images)) {
  if (source.kind() != CoverKind::Closed || !same_complex(source.space(), source.ambient())) {
    throw Error(ErrorCode::TypeMismatch, "carrier source must be a closed cover by subcomplexes of its space");
  }
  if (images.size() != source.size()) throw Error(ErrorCode::IndexMismatch, "carrier needs one target per index");
  for (const auto& img : images) {
    if (!same_complex(img.parent(), target)) throw Error(ErrorCode::ComplexMismatch, "carrier target outside target complex");
  }
}

Verdict validate_carrier(const Carrier& carrier, std::uint64_t budget) {
  const auto& cover = carrier.source;
  std::uint64_t examined = 0;
  std::optional<Verdict> result;
  std::vector<std::size_t> subset;
  auto dfs = [&](auto&& self, std::size_t start, const std::vector<VertexId>& src, const std::vector<VertexId>& tgt) -> void {
    for (std::size_t i = start; i < cover.size() && !result; ++i) {
      if (++examined > budget) {
        result = Verdict::inconclusive("nerve budget exhausted", {{"examined", examined - 1}});
        return;
      }
      auto s = subset.empty() ? cover.closed(i).vertices() : common_sorted(src, cover.closed(i).vertices());
      if (s.empty()) continue;
      auto t = subset.empty() ? carrier.images[i].vertices() : common_sorted(tgt, carrier.images[i].vertices());
      subset.push_back(i);
      if (t.empty()) {
        result = Verdict::fails({{"subset", subset_names(cover, subset)}});
        return;
      }
      self(self, i + 1, s, t);
      subset.pop_back();
    }
  };
  dfs(dfs, 0, {}, {});
  if (result) return *result;
  return Verdict::holds({{"examined", examined}});
}

PartialPLMap::PartialPLMap(ComplexPtr domain, Subcomplex defined_on, ComplexPtr target, std::map<VertexId, Point> images)
    : domain_(std::move(domain)), defined_on_(std::move(defined_on)), target_(std::move(target)), images_(std::move(images)) {
  if (!same_complex(defined_on_.parent(), domain_)) throw Error(ErrorCode::ComplexMismatch, "defined-on set outside the domain");
  const auto verts = defined_on_.vertices();
  if (verts.size() != images_.size()) throw Error(ErrorCode::InvalidInput, "partial map needs exactly one image per vertex of A");
  for (auto v : verts) {
    auto it = images_.find(v);
    if (it == images_.end()) throw Error(ErrorCode::InvalidInput, "vertex of A without image", domain_->name(v).to_string());
    if (!same_complex(it->second.complex(), target_)) throw Error(ErrorCode::ComplexMismatch, "image point outside the target");
    it->second = Point(target_, it->second.coordinates());
  }
  for (const auto& sigma : defined_on_.simplices().maximal()) {
    if (!target_->contains(image_support(sigma))) {
      throw Error(ErrorCode::DomainError, "image of a simplex of A does not lie in one target simplex",
                  simplex_json(*domain_, sigma).dump());
    }
  }
}

PartialPLMap PartialPLMap::from(const PLMap& map) { return restrict(map, Subcomplex::whole(map.domain())); }

PartialPLMap PartialPLMap::restrict(const PLMap& map, const Subcomplex& a) {
  std::map<VertexId, Point> images;
  for (auto v : a.vertices()) images.emplace(v, map.image(v));
  return PartialPLMap(map.domain(), a, map.target(), std::move(images));
}

const Point& PartialPLMap::image(VertexId v) const {
  auto it = images_.find(v);
  if (it == images_.end()) throw Error(ErrorCode::DomainError, "vertex outside the defined-on set", domain_->name(v).to_string());
  return it->second;
}

Simplex PartialPLMap::image_support(const Simplex& sigma) const {
  Simplex out;
  for (auto v : sigma) out = simplex_union(out, image(v).support());
  return out;
}

SubdividedMap SubdividedMap::trivial(const PLMap& map) {
  std::vector<Point> positions;
  for (VertexId v = 0; v < map.domain()->vertex_count(); ++v) positions.push_back(Point::vertex(map.domain(), v));
  return SubdividedMap{map, map.domain(), std::move(positions)};
}

Simplex SubdividedMap::position_support(const Simplex& sigma) const {
  Simplex out;
  for (auto v : sigma) out = simplex_union(out, positions.at(v).support());
  return out;
}

nlohmann::json SubdividedMap::to_json() const {
  const auto& dom = *map.domain();
  auto vertices = nlohmann::json::array();
  for (VertexId v = 0; v < dom.vertex_count(); ++v) {
    vertices.push_back({{"name", name_json(dom.name(v))},
                        {"position", point_json(positions[v])},
                        {"image", point_json(map.image(v))}});
  }
  auto maximal = nlohmann::json::array();
  for (const auto& s : dom.maximal()) maximal.push_back(simplex_json(dom, s));
  return {{"vertices", vertices}, {"maximal", maximal}};
}

PLMap restate(const PLMap& f, const ComplexPtr& finer, const std::vector<Point>& positions) {
  if (positions.size() != finer->vertex_count()) throw Error(ErrorCode::InvalidInput, "one position per vertex required");
  std::vector<Point> images;
  images.reserve(positions.size());
  for (const auto& p : positions) images.push_back(f.evaluate(Point(f.domain(), p.coordinates())));
  return PLMap(finer, f.target(), std::move(images));
}

Verdict is_carried(const PartialPLMap& f, const Carrier& carrier) {
  if (!same_complex(f.domain(), carrier.domain())) throw Error(ErrorCode::ComplexMismatch, "map domain is not the carrier domain");
  if (!same_complex(f.target(), carrier.target)) throw Error(ErrorCode::ComplexMismatch, "map target is not the carrier target");
  for (std::size_t j = 0; j < carrier.source.size(); ++j) {
    const auto both = intersect(f.defined_on(), carrier.source.closed(j));
    for (const auto& sigma : both.simplices().maximal()) {
      if (!carrier.images[j].contains(f.image_support(sigma))) {
        return Verdict::fails({{"index", name_json(carrier.source.indices()[j])},
                               {"simplex", simplex_json(*f.domain(), sigma)}});
      }
    }
  }
  return Verdict::holds();
}

Verdict is_carried(const SubdividedMap& f, const Carrier& carrier) {
  if (!same_complex(f.base, carrier.domain())) throw Error(ErrorCode::ComplexMismatch, "map base is not the carrier domain");
  if (!same_complex(f.map.target(), carrier.target)) throw Error(ErrorCode::ComplexMismatch, "map target is not the carrier target");
  const auto& dom = *f.map.domain();
  for (const auto& sigma : dom.simplices().all()) {
    const Simplex where = f.position_support(sigma);
    for (std::size_t j = 0; j < carrier.source.size(); ++j) {
      if (!carrier.source.closed(j).contains(where)) continue;
      if (!carrier.images[j].contains(f.map.image_support(sigma))) {
        return Verdict::fails({{"index", name_json(carrier.source.indices()[j])}, {"simplex", simplex_json(dom, sigma)}});
      }
    }
  }
  return Verdict::holds();
}

namespace {

// Accumulates the subdivided domain: local ids, later renumbered in
// canonical name order.
struct DomainBuilder {
  ComplexPtr base;
  ComplexPtr target;
  std::vector<VertexName> names;
  std::vector<Point> positions;
  std::vector<Point> images;
  std::vector<Simplex> simplices;  // local ids, sorted
  std::set<VertexName> taken;
  std::size_t counter = 0;

  std::size_t add(VertexName name, Point position, Point image) {
    taken.insert(name);
    names.push_back(std::move(name));
    positions.push_back(std::move(position));
    images.push_back(std::move(image));
    return names.size() - 1;
  }
  std::size_t fresh(Point position, Point image) {
    VertexName name;
    do {
      name = VertexName("~" + std::to_string(counter++));
    } while (taken.count(name));
    return add(std::move(name), std::move(position), std::move(image));
  }
  void simplex(std::vector<std::size_t> local) {
    Simplex s(local.begin(), local.end());
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    simplices.push_back(std::move(s));
  }
  Simplex image_support(const Simplex& s) const {
    Simplex out;
    for (auto v : s) out = simplex_union(out, images[v].support());
    return out;
  }

  SubdividedMap finish() const {
    std::vector<std::size_t> order(names.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return names[a] < names[b]; });
    std::vector<VertexId> renumber(names.size());
    std::vector<VertexName> sorted_names;
    std::vector<Point> sorted_positions, sorted_images;
    for (std::size_t i = 0; i < order.size(); ++i) {
      renumber[order[i]] = static_cast<VertexId>(i);
      sorted_names.push_back(names[order[i]]);
      sorted_positions.push_back(positions[order[i]]);
      sorted_images.push_back(images[order[i]]);
    }
    SimplexSet set;
    for (const auto& s : simplices) {
      Simplex t;
      for (auto v : s) t.push_back(renumber[v]);
      std::sort(t.begin(), t.end());
      set.insert_closed(t);
    }
    set.finalize();
    auto domain = make_complex(std::move(sorted_names), std::move(set));
    std::vector<Point> pos;
    for (auto& p : sorted_positions) pos.emplace_back(base, p.coordinates());
    return SubdividedMap{PLMap(domain, target, std::move(sorted_images)), base, std::move(pos)};
  }
};

Subcomplex required_target(const Carrier& carrier, const Simplex& cell) {
  std::optional<Subcomplex> out;
  for (std::size_t j = 0; j < carrier.source.size(); ++j) {
    if (!carrier.source.closed(j).contains(cell)) continue;
    out = out ? intersect(*out, carrier.images[j]) : carrier.images[j];
  }
  return out ? *out : Subcomplex::whole(carrier.target);
}

std::map<VertexId, std::vector<VertexId>> adjacency(const Subcomplex& sub) {
  std::map<VertexId, std::vector<VertexId>> adj;
  for (auto v : sub.vertices()) adj[v];
  if (sub.simplices().dimension() >= 1) {
    for (const auto& e : sub.simplices().of_dimension(1)) {
      adj[e[0]].push_back(e[1]);
      adj[e[1]].push_back(e[0]);
    }
  }
  for (auto& [v, n] : adj) std::sort(n.begin(), n.end());
  return adj;
}

std::optional<std::vector<VertexId>> bfs_path(const std::map<VertexId, std::vector<VertexId>>& adj, VertexId from, VertexId to) {
  std::map<VertexId, VertexId> parent{{from, from}};
  std::deque<VertexId> queue{from};
  while (!queue.empty()) {
    const VertexId v = queue.front();
    queue.pop_front();
    if (v == to) break;
    for (auto w : adj.at(v)) {
      if (parent.emplace(w, v).second) queue.push_back(w);
    }
  }
  if (!parent.count(to)) return std::nullopt;
  std::vector<VertexId> path{to};
  while (path.back() != from) path.push_back(parent.at(path.back()));
  std::reverse(path.begin(), path.end());
  return path;
}

std::optional<VertexId> apex_of(const Subcomplex& sub) {
  const auto tops = sub.simplices().maximal();
  for (auto v : sub.vertices()) {
    if (std::all_of(tops.begin(), tops.end(), [v](const Simplex& s) { return std::binary_search(s.begin(), s.end(), v); })) {
      return v;
    }
  }
  return std::nullopt;
}

Simplex make_simplex(std::initializer_list<VertexId> vs) {
  Simplex s(vs);
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

struct RewriteOutcome {
  std::vector<std::vector<VertexId>> words;  // successive rings, last one constant
  bool exhausted = false;
};

// Best-first search over cyclic words of target vertices. A move changes
// one letter w_i to x when both triangles {w_{i-1}, w_i, x} and
// {w_i, w_{i+1}, x} lie in `sub`; each move becomes one annulus of the
// filler. Ordered by the summed BFS distance to a root vertex.
RewriteOutcome rewrite_loop(const Subcomplex& sub, std::vector<VertexId> start, std::uint64_t budget) {
  const auto adj = adjacency(sub);
  std::map<VertexId, std::uint64_t> dist;
  {
    std::deque<VertexId> queue;
    VertexId root = start.front();
    std::set<VertexId> seen{root};
    queue.push_back(root);
    while (!queue.empty()) {
      auto v = queue.front();
      queue.pop_front();
      for (auto w : adj.at(v)) {
        if (seen.insert(w).second) queue.push_back(w);
      }
    }
    root = *seen.begin();
    dist[root] = 0;
    queue.push_back(root);
    while (!queue.empty()) {
      auto v = queue.front();
      queue.pop_front();
      for (auto w : adj.at(v)) {
        if (dist.emplace(w, dist[v] + 1).second) queue.push_back(w);
      }
    }
  }
  auto potential = [&](const std::vector<VertexId>& w) {
    std::uint64_t p = 0;
    for (auto v : w) p += dist.at(v);
    return p;
  };
  auto constant = [](const std::vector<VertexId>& w) {
    return std::all_of(w.begin(), w.end(), [&](VertexId v) { return v == w.front(); });
  };

  struct Node {
    std::vector<VertexId> word;
    std::size_t parent;
  };
  std::vector<Node> nodes{{start, 0}};
  std::set<std::vector<VertexId>> seen{start};
  using Entry = std::pair<std::uint64_t, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  open.emplace(potential(start), 0);
  const std::size_t m = start.size();
  std::uint64_t expanded = 0;
  while (!open.empty()) {
    const std::size_t at = open.top().second;
    open.pop();
    if (constant(nodes[at].word)) {
      RewriteOutcome out;
      for (std::size_t i = at; ; i = nodes[i].parent) {
        out.words.push_back(nodes[i].word);
        if (i == 0) break;
      }
      std::reverse(out.words.begin(), out.words.end());
      return out;
    }
    if (++expanded > budget) break;
    const auto word = nodes[at].word;
    for (std::size_t i = 0; i < m; ++i) {
      const VertexId prev = word[(i + m - 1) % m], cur = word[i], next = word[(i + 1) % m];
      for (auto x : adj.at(cur)) {
        if (!sub.contains(make_simplex({prev, cur, x})) || !sub.contains(make_simplex({cur, next, x}))) continue;
        auto moved = word;
        moved[i] = x;
        if (!seen.insert(moved).second) continue;
        nodes.push_back({moved, at});
        open.emplace(potential(moved), nodes.size() - 1);
      }
    }
  }
  return RewriteOutcome{{}, true};
}

Point lerp(const Point& a, const Point& b, const Rational& t) {
  const std::vector<Point> pts{a, b};
  const std::vector<Rational> w{1 - t, t};
  return affine_combination(pts, w);
}

}  // namespace

ExtensionResult extend_carried(const PartialPLMap& f, const Carrier& carrier, std::uint64_t filler_budget) {
  const auto& domain = f.domain();
  if (!same_complex(domain, carrier.domain())) throw Error(ErrorCode::ComplexMismatch, "map domain is not the carrier domain");
  if (!same_complex(f.target(), carrier.target)) throw Error(ErrorCode::ComplexMismatch, "map target is not the carrier target");
  if (domain->dimension() > 2) throw Error(ErrorCode::DomainError, "extension is implemented for domains of dimension at most 2");
  if (auto carried = is_carried(f, carrier); !carried.is_holds()) {
    return {Verdict::fails({{"reason", "partial map is not carried"}, {"witness", carried.detail()}}), std::nullopt};
  }
  const auto& a = f.defined_on();
  const auto& target = carrier.target;

  DomainBuilder b{domain, target, {}, {}, {}, {}, {}, 0};
  for (const auto& n : domain->names()) b.taken.insert(n);
  // Domain vertices keep their ids as local ids.
  for (VertexId v = 0; v < domain->vertex_count(); ++v) {
    std::optional<Point> img;
    if (a.contains({v})) {
      img = f.image(v);
    } else {
      const auto t = required_target(carrier, {v});
      if (t.empty()) {
        return {Verdict::fails({{"cell", simplex_json(*domain, {v})}, {"reason", "empty target intersection"}}), std::nullopt};
      }
      img = Point::vertex(target, t.vertices().front());
    }
    b.add(domain->name(v), Point::vertex(domain, v), *img);
    b.simplex({v});
  }

  std::size_t routed = 0, coned = 0, rewritten = 0;
  std::map<Simplex, std::vector<std::size_t>> edge_paths;
  if (domain->dimension() >= 1) {
    for (const auto& e : domain->simplices(1)) {
      const VertexId u = e[0], v = e[1];
      std::vector<Point> stops{b.images[u]};
      if (!a.contains(e)) {
        const auto t = required_target(carrier, e);
        const Simplex su = b.images[u].support(), sv = b.images[v].support();
        if (!t.contains(simplex_union(su, sv))) {
          auto path = bfs_path(adjacency(t), su.front(), sv.front());
          if (!path) {
            return {Verdict::fails({{"cell", simplex_json(*domain, e)}, {"reason", "target intersection disconnected"}}),
                    std::nullopt};
          }
          for (auto w : *path) {
            Point p = Point::vertex(target, w);
            if (!(p == stops.back())) stops.push_back(std::move(p));
          }
          ++routed;
        }
      }
      if (!(b.images[v] == stops.back())) stops.push_back(b.images[v]);
      if (stops.size() == 1) stops.push_back(b.images[v]);
      std::vector<std::size_t> ids{u};
      const std::size_t k = stops.size() - 1;
      for (std::size_t i = 1; i < k; ++i) {
        const Rational t(static_cast<long>(i), static_cast<long>(k));
        ids.push_back(b.fresh(lerp(Point::vertex(domain, u), Point::vertex(domain, v), t), stops[i]));
      }
      ids.push_back(v);
      for (std::size_t i = 0; i + 1 < ids.size(); ++i) b.simplex({ids[i], ids[i + 1]});
      edge_paths[e] = std::move(ids);
    }
  }

  auto path_between = [&](VertexId from, VertexId to) {
    auto p = edge_paths.at(make_simplex({from, to}));
    if (from > to) std::reverse(p.begin(), p.end());
    return p;
  };

  nlohmann::json stuck = nlohmann::json::array();
  if (domain->dimension() >= 2) {
    for (const auto& tri : domain->simplices(2)) {
      if (a.contains(tri)) {
        b.simplex({tri[0], tri[1], tri[2]});
        continue;
      }
      std::vector<std::size_t> ring;
      for (auto [x, y] : {std::pair{tri[0], tri[1]}, std::pair{tri[1], tri[2]}, std::pair{tri[2], tri[0]}}) {
        auto p = path_between(x, y);
        ring.insert(ring.end(), p.begin(), p.end() - 1);
      }
      const std::size_t m = ring.size();
      const auto t = required_target(carrier, tri);
      const Point center = barycenter(domain, tri);
      Simplex all;
      for (auto r : ring) all = simplex_union(all, b.images[r].support());
      if (t.contains(all)) {
        if (m == 3) {
          b.simplex({ring[0], ring[1], ring[2]});
        } else {
          const auto z = b.fresh(center, b.images[ring[0]]);
          for (std::size_t i = 0; i < m; ++i) b.simplex({z, ring[i], ring[(i + 1) % m]});
        }
        continue;
      }
      if (auto c = apex_of(t)) {
        const auto z = b.fresh(center, Point::vertex(target, *c));
        for (std::size_t i = 0; i < m; ++i) b.simplex({z, ring[i], ring[(i + 1) % m]});
        ++coned;
        continue;
      }
      std::vector<VertexId> pushed;
      for (auto r : ring) pushed.push_back(b.images[r].support().front());
      auto outcome = rewrite_loop(t, pushed, filler_budget);
      if (outcome.exhausted) {
        stuck.push_back(simplex_json(*domain, tri));
        continue;
      }
      // Rings: the boundary, then one scaled copy per word, then the center.
      const std::size_t rings = outcome.words.size();
      std::vector<std::size_t> outer = ring;
      for (std::size_t j = 1; j <= rings; ++j) {
        const Rational s(static_cast<long>(rings + 1 - j), static_cast<long>(rings + 1));
        std::vector<std::size_t> inner;
        for (std::size_t i = 0; i < m; ++i) {
          inner.push_back(b.fresh(lerp(center, b.positions[ring[i]], s), Point::vertex(target, outcome.words[j - 1][i])));
        }
        for (std::size_t i = 0; i < m; ++i) {
          const std::size_t n = (i + 1) % m;
          b.simplex({outer[i], outer[n], inner[n]});
          b.simplex({outer[i], inner[n], inner[i]});
        }
        outer = std::move(inner);
      }
      const auto z = b.fresh(center, Point::vertex(target, outcome.words.back().front()));
      for (std::size_t i = 0; i < m; ++i) b.simplex({z, outer[i], outer[(i + 1) % m]});
      ++rewritten;
    }
  }
  if (!stuck.empty()) {
    return {Verdict::inconclusive("filler budget exhausted", {{"cells", stuck}, {"budget", filler_budget}}), std::nullopt};
  }

  auto result = b.finish();
  if (auto check = is_carried(result, carrier); !check.is_holds()) {
    throw Error(ErrorCode::DomainError, "constructed extension is not carried", check.detail().dump());
  }
  const std::size_t added = result.map.domain()->vertex_count() - domain->vertex_count();
  return {Verdict::holds({{"added_vertices", added}, {"edges_routed", routed}, {"cones", coned}, {"rewritten", rewritten}}),
          std::move(result)};
}

Prism prism(const ComplexPtr& domain) {
  std::vector<VertexName> names;
  for (const auto& n : domain->names()) {
    names.emplace_back(n.to_string() + "@0");
    names.emplace_back(n.to_string() + "@1");
  }
  std::vector<std::size_t> order(names.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto x, auto y) { return names[x] < names[y]; });
  std::vector<VertexId> id(names.size());
  std::vector<VertexName> sorted;
  for (std::size_t i = 0; i < order.size(); ++i) {
    id[order[i]] = static_cast<VertexId>(i);
    sorted.push_back(names[order[i]]);
  }
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i] == sorted[i - 1]) throw Error(ErrorCode::DuplicateVertex, "prism vertex names collide", sorted[i].to_string());
  }
  Prism out;
  for (VertexId v = 0; v < domain->vertex_count(); ++v) {
    out.bottom.push_back(id[2 * v]);
    out.top.push_back(id[2 * v + 1]);
  }
  SimplexSet set;
  for (const auto& s : domain->maximal()) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      Simplex p;
      for (std::size_t k = 0; k <= i; ++k) p.push_back(out.bottom[s[k]]);
      for (std::size_t k = i; k < s.size(); ++k) p.push_back(out.top[s[k]]);
      std::sort(p.begin(), p.end());
      set.insert_closed(p);
    }
  }
  set.finalize();
  out.complex = make_complex(std::move(sorted), std::move(set));
  return out;
}

namespace {

Point in_ambient(const Point& p, const IndexedCover& cover) {
  if (same_complex(cover.ambient(), cover.space())) return Point(cover.ambient(), p.coordinates());
  return to_subdivision(p, cover.ambient());
}

bool element_holds_support(const IndexedCover& cover, std::size_t e, const std::vector<Simplex>& supports) {
  Simplex all;
  for (const auto& s : supports) all = simplex_union(all, s);
  if (!cover.ambient()->contains(all)) return false;
  if (cover.kind() == CoverKind::Closed) return cover.closed(e).contains(all);
  return std::all_of(supports.begin(), supports.end(), [&](const Simplex& s) { return cover.open(e).contains(s); });
}

}  // namespace

HomotopyResult close_maps_homotopy(const PLMap& f0, const PLMap& g0, const IndexedCover& cover) {
  const Verdict close = are_close(f0, g0, cover);
  if (!close.is_holds()) return {close, std::nullopt};
  const bool sub = close.detail().value("subdivided", false);
  const PLMap f = sub ? f0.subdivided() : f0;
  const PLMap g = sub ? g0.subdivided() : g0;
  const auto& domain = f.domain();

  std::vector<std::size_t> witness;
  for (const auto& sigma : domain->maximal()) {
    std::optional<std::size_t> found;
    for (std::size_t i = 0; i < cover.size() && !found; ++i) {
      if (element_contains_image(cover, i, f, sigma) && element_contains_image(cover, i, g, sigma)) found = i;
    }
    if (!found) return {Verdict::inconclusive("closeness witness not reproducible"), std::nullopt};
    witness.push_back(*found);
  }

  const Prism pr = prism(domain);
  std::vector<Point> images(pr.complex->vertex_count(), Point::vertex(cover.ambient(), 0));
  for (VertexId v = 0; v < domain->vertex_count(); ++v) {
    images[pr.bottom[v]] = in_ambient(f.image(v), cover);
    images[pr.top[v]] = in_ambient(g.image(v), cover);
  }
  // Prism simplices over each maximal domain simplex, with its witness.
  std::vector<std::pair<Simplex, std::size_t>> cells;
  for (std::size_t k = 0; k < domain->maximal().size(); ++k) {
    const auto& s = domain->maximal()[k];
    for (std::size_t i = 0; i < s.size(); ++i) {
      Simplex p;
      for (std::size_t j = 0; j <= i; ++j) p.push_back(pr.bottom[s[j]]);
      for (std::size_t j = i; j < s.size(); ++j) p.push_back(pr.top[s[j]]);
      std::sort(p.begin(), p.end());
      cells.emplace_back(std::move(p), witness[k]);
    }
  }
  auto witness_json = [&]() {
    auto out = nlohmann::json::array();
    for (const auto& [cell, e] : cells) {
      out.push_back({{"simplex", simplex_json(*pr.complex, cell)}, {"element", name_json(cover.indices()[e])}});
    }
    return out;
  };

  const bool affine = std::all_of(cells.begin(), cells.end(), [&](const auto& c) {
    std::vector<Simplex> supports;
    for (auto v : c.first) supports.push_back(images[v].support());
    return element_holds_support(cover, c.second, supports);
  });
  if (affine) {
    auto map = SubdividedMap::trivial(PLMap(pr.complex, cover.ambient(), images));
    return {Verdict::holds({{"method", "affine"}, {"domain_subdivided", sub}, {"witnesses", witness_json()}}), std::move(map)};
  }
  if (cover.kind() != CoverKind::Closed) {
    return {Verdict::inconclusive("straight-line homotopy leaves an open element"), std::nullopt};
  }

  // Extend over the prism, carried by the witness elements.
  std::vector<std::vector<Simplex>> tops(cover.size());
  for (const auto& [cell, e] : cells) tops[e].push_back(cell);
  std::vector<CoverElement> elements;
  std::vector<Subcomplex> targets;
  for (std::size_t e = 0; e < cover.size(); ++e) {
    elements.emplace_back(Subcomplex::closure_of(pr.complex, tops[e]));
    targets.push_back(cover.closed(e));
  }
  Carrier carrier(IndexedCover(pr.complex, pr.complex, CoverKind::Closed, cover.indices(), std::move(elements)),
                  cover.ambient(), std::move(targets));
  std::vector<Simplex> ends;
  for (const auto& s : domain->maximal()) {
    Simplex lo, hi;
    for (auto v : s) {
      lo.push_back(pr.bottom[v]);
      hi.push_back(pr.top[v]);
    }
    std::sort(lo.begin(), lo.end());
    std::sort(hi.begin(), hi.end());
    ends.push_back(lo);
    ends.push_back(hi);
  }
  const auto ends_sub = Subcomplex::closure_of(pr.complex, ends);
  std::map<VertexId, Point> partial;
  for (auto v : ends_sub.vertices()) partial.emplace(v, images[v]);
  auto ext = extend_carried(PartialPLMap(pr.complex, ends_sub, cover.ambient(), std::move(partial)), carrier);
  if (!ext.verdict.is_holds()) return {ext.verdict, std::nullopt};
  return {Verdict::holds({{"method", "carrier"}, {"domain_subdivided", sub}, {"witnesses", witness_json()},
                          {"extension", ext.verdict.detail()}}),
          std::move(ext.extension)};
}

}  // namespace polytower
