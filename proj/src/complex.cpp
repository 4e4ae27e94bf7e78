#include "polytower/complex.hpp"

#include "json.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace polytower {

// ---------------------------------------------------------------------------
// VertexName

VertexName VertexName::list(std::vector<VertexName> parts) {
  std::sort(parts.begin(), parts.end());
  if (std::adjacent_find(parts.begin(), parts.end()) != parts.end()) {
    throw Error(ErrorCode::DuplicateVertex, "duplicate entry in subdivision vertex name");
  }
  VertexName name;
  name.is_list_ = true;
  name.parts_ = std::move(parts);
  return name;
}

std::size_t VertexName::depth() const {
  if (!is_list_) return 0;
  std::size_t inner = 0;
  for (const auto& part : parts_) inner = std::max(inner, part.depth());
  return inner + 1;
}

nlohmann::json name_json(const VertexName& name) {
  if (name.is_atom()) return name.atom();
  auto array = nlohmann::json::array();
  for (const auto& part : name.parts()) array.push_back(name_json(part));
  return array;
}

nlohmann::json simplex_json(const Complex& complex, const Simplex& simplex) {
  auto array = nlohmann::json::array();
  for (auto v : simplex) array.push_back(name_json(complex.name(v)));
  return array;
}

std::string VertexName::to_string() const {
  if (!is_list_) return atom_;
  return name_json(*this).dump();
}

std::strong_ordering operator<=>(const VertexName& lhs, const VertexName& rhs) {
  if (lhs.is_list_ != rhs.is_list_) {
    return lhs.is_list_ ? std::strong_ordering::greater : std::strong_ordering::less;
  }
  if (!lhs.is_list_) {
    const int c = lhs.atom_.compare(rhs.atom_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }
  const std::size_t n = std::min(lhs.parts_.size(), rhs.parts_.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (auto c = lhs.parts_[i] <=> rhs.parts_[i]; c != std::strong_ordering::equal) return c;
  }
  return lhs.parts_.size() <=> rhs.parts_.size();
}

// ---------------------------------------------------------------------------
// simplex helpers

bool is_face(const Simplex& face, const Simplex& simplex) {
  return std::includes(simplex.begin(), simplex.end(), face.begin(), face.end());
}

Simplex simplex_union(const Simplex& lhs, const Simplex& rhs) {
  Simplex out;
  std::set_union(lhs.begin(), lhs.end(), rhs.begin(), rhs.end(), std::back_inserter(out));
  return out;
}

Simplex simplex_intersection(const Simplex& lhs, const Simplex& rhs) {
  Simplex out;
  std::set_intersection(lhs.begin(), lhs.end(), rhs.begin(), rhs.end(), std::back_inserter(out));
  return out;
}

// ---------------------------------------------------------------------------
// SimplexSet

void SimplexSet::insert(const Simplex& simplex) {
  const std::size_t dim = simplex.size() - 1;
  if (buckets_.size() <= dim) buckets_.resize(dim + 1);
  buckets_[dim].push_back(simplex);
}

void SimplexSet::insert_closed(const Simplex& simplex) {
  const std::size_t n = simplex.size();
  if (n == 0) return;
  if (n > 31) throw Error(ErrorCode::InvalidInput, "simplex dimension too large");
  const std::uint32_t full = (std::uint32_t{1} << n) - 1;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    Simplex face;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (std::uint32_t{1} << i)) face.push_back(simplex[i]);
    }
    insert(face);
  }
}

void SimplexSet::finalize() {
  for (auto& bucket : buckets_) {
    std::sort(bucket.begin(), bucket.end());
    bucket.erase(std::unique(bucket.begin(), bucket.end()), bucket.end());
  }
  while (!buckets_.empty() && buckets_.back().empty()) buckets_.pop_back();
}

bool SimplexSet::contains(const Simplex& simplex) const {
  if (simplex.empty()) return false;
  const std::size_t dim = simplex.size() - 1;
  if (dim >= buckets_.size()) return false;
  return std::binary_search(buckets_[dim].begin(), buckets_[dim].end(), simplex);
}

std::size_t SimplexSet::size() const {
  std::size_t total = 0;
  for (const auto& bucket : buckets_) total += bucket.size();
  return total;
}

const std::vector<Simplex>& SimplexSet::of_dimension(int dim) const {
  static const std::vector<Simplex> none;
  if (dim < 0 || static_cast<std::size_t>(dim) >= buckets_.size()) return none;
  return buckets_[static_cast<std::size_t>(dim)];
}

std::vector<Simplex> SimplexSet::all() const {
  std::vector<Simplex> out;
  for (const auto& bucket : buckets_) out.insert(out.end(), bucket.begin(), bucket.end());
  return out;
}

std::vector<Simplex> SimplexSet::maximal() const {
  std::vector<Simplex> out;
  for (std::size_t d = 0; d < buckets_.size(); ++d) {
    for (const auto& s : buckets_[d]) {
      bool is_max = true;
      if (d + 1 < buckets_.size()) {
        for (const auto& t : buckets_[d + 1]) {
          if (is_face(s, t)) {
            is_max = false;
            break;
          }
        }
      }
      if (is_max) out.push_back(s);
    }
  }
  return out;
}

std::vector<VertexId> SimplexSet::vertices() const {
  std::vector<VertexId> out;
  for (const auto& s : of_dimension(0)) out.push_back(s[0]);
  return out;
}

std::vector<std::size_t> SimplexSet::f_vector() const {
  std::vector<std::size_t> out;
  for (const auto& bucket : buckets_) out.push_back(bucket.size());
  return out;
}

SimplexSet intersect(const SimplexSet& lhs, const SimplexSet& rhs) {
  SimplexSet out;
  const int top = std::min(lhs.dimension(), rhs.dimension());
  for (int d = 0; d <= top; ++d) {
    const auto& a = lhs.of_dimension(d);
    const auto& b = rhs.of_dimension(d);
    std::vector<Simplex> common;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
    for (auto& s : common) out.insert(s);
  }
  out.finalize();
  return out;
}

// ---------------------------------------------------------------------------
// Complex

ComplexPtr make_complex(std::vector<VertexName> names, SimplexSet simplices) {
  auto complex = std::make_shared<Complex>();
  simplices.finalize();
  complex->names_ = std::move(names);
  complex->maximal_ = simplices.maximal();
  complex->simplices_ = std::move(simplices);
  return complex;
}

ComplexPtr Complex::from_simplices(const std::vector<std::vector<VertexName>>& simplices,
                                   const std::vector<VertexName>& extra_vertices) {
  std::set<VertexName> vertex_set(extra_vertices.begin(), extra_vertices.end());
  for (std::size_t i = 0; i < simplices.size(); ++i) {
    const auto& s = simplices[i];
    if (s.empty()) {
      throw Error(ErrorCode::EmptySimplex, "empty simplex", "simplex " + std::to_string(i));
    }
    std::set<VertexName> seen;
    for (const auto& v : s) {
      if (!seen.insert(v).second) {
        throw Error(ErrorCode::DuplicateVertex, "duplicate vertex '" + v.to_string() + "' in simplex",
                    "simplex " + std::to_string(i));
      }
      vertex_set.insert(v);
    }
  }
  std::vector<VertexName> names(vertex_set.begin(), vertex_set.end());
  std::map<VertexName, VertexId> ids;
  for (VertexId i = 0; i < names.size(); ++i) ids.emplace(names[i], i);

  SimplexSet set;
  for (VertexId i = 0; i < names.size(); ++i) set.insert({i});
  for (const auto& s : simplices) {
    Simplex simplex;
    for (const auto& v : s) simplex.push_back(ids.at(v));
    std::sort(simplex.begin(), simplex.end());
    set.insert_closed(simplex);
  }
  return make_complex(std::move(names), std::move(set));
}

ComplexPtr Complex::from_atoms(const std::vector<std::vector<std::string>>& simplices) {
  std::vector<std::vector<VertexName>> named;
  for (const auto& s : simplices) {
    std::vector<VertexName> row;
    for (const auto& v : s) row.emplace_back(v);
    named.push_back(std::move(row));
  }
  return from_simplices(named);
}

std::optional<VertexId> Complex::find(const VertexName& name) const {
  auto it = std::lower_bound(names_.begin(), names_.end(), name);
  if (it == names_.end() || !(*it == name)) return std::nullopt;
  return static_cast<VertexId>(it - names_.begin());
}

VertexId Complex::id(const VertexName& name) const {
  if (auto found = find(name)) return *found;
  throw Error(ErrorCode::UnknownVertex, "unknown vertex '" + name.to_string() + "'", name.to_string());
}

Simplex Complex::simplex_of(const std::vector<VertexName>& names) const {
  Simplex s;
  for (const auto& n : names) s.push_back(id(n));
  std::sort(s.begin(), s.end());
  if (std::adjacent_find(s.begin(), s.end()) != s.end()) {
    throw Error(ErrorCode::DuplicateVertex, "duplicate vertex in simplex");
  }
  return s;
}

std::vector<VertexName> Complex::names_of(const Simplex& simplex) const {
  std::vector<VertexName> out;
  for (auto v : simplex) out.push_back(names_.at(v));
  return out;
}

// ---------------------------------------------------------------------------
// barycentric subdivision

ComplexPtr barycentric_subdivide(const ComplexPtr& complex) {
  // One subdivision vertex per simplex; vertex names are the sorted parent
  // name lists, so the id order is recovered by sorting names.
  std::vector<std::pair<VertexName, Simplex>> vertices;
  for (const auto& s : complex->simplices().all()) {
    vertices.emplace_back(VertexName::list(complex->names_of(s)), s);
  }
  std::sort(vertices.begin(), vertices.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<VertexName> names;
  std::vector<Simplex> carriers;
  std::map<Simplex, VertexId> id_of;
  for (VertexId i = 0; i < vertices.size(); ++i) {
    names.push_back(vertices[i].first);
    carriers.push_back(vertices[i].second);
    id_of.emplace(vertices[i].second, i);
  }

  // Maximal chains are full flags of maximal simplices: every ordering of a
  // maximal simplex's vertices gives one.
  SimplexSet set;
  for (VertexId i = 0; i < names.size(); ++i) set.insert({i});
  for (const auto& top : complex->maximal()) {
    Simplex order = top;
    do {
      Simplex chain;
      Simplex prefix;
      for (auto v : order) {
        prefix.insert(std::lower_bound(prefix.begin(), prefix.end(), v), v);
        chain.push_back(id_of.at(prefix));
      }
      std::sort(chain.begin(), chain.end());
      set.insert_closed(chain);
    } while (std::next_permutation(order.begin(), order.end()));
  }
  auto result = make_complex(std::move(names), std::move(set));
  auto mutable_result = std::const_pointer_cast<Complex>(result);
  mutable_result->parent_ = complex;
  mutable_result->carriers_ = std::move(carriers);
  return result;
}

ComplexPtr barycentric_subdivide(const ComplexPtr& complex, int times) {
  ComplexPtr current = complex;
  for (int i = 0; i < times; ++i) current = barycentric_subdivide(current);
  return current;
}

VertexId subdivision_vertex(const Complex& subdivision, const Simplex& parent_simplex) {
  const auto& parent = subdivision.subdivision_parent();
  if (!parent) throw Error(ErrorCode::TypeMismatch, "complex is not a barycentric subdivision");
  return subdivision.id(VertexName::list(parent->names_of(parent_simplex)));
}

// ---------------------------------------------------------------------------
// Subcomplex

Subcomplex::Subcomplex(ComplexPtr parent, SimplexSet simplices)
    : parent_(std::move(parent)), simplices_(std::move(simplices)) {
  simplices_.finalize();
}

Subcomplex Subcomplex::whole(const ComplexPtr& parent) { return Subcomplex(parent, parent->simplices()); }

Subcomplex Subcomplex::closure_of(const ComplexPtr& parent, const std::vector<Simplex>& simplices) {
  SimplexSet set;
  for (const auto& s : simplices) {
    if (!parent->contains(s)) {
      throw Error(ErrorCode::NotSubcomplex, "simplex is not in the parent complex");
    }
    set.insert_closed(s);
  }
  return Subcomplex(parent, std::move(set));
}

ComplexPtr Subcomplex::to_complex() const {
  const auto ids = simplices_.vertices();
  std::vector<VertexName> names;
  std::map<VertexId, VertexId> remap;
  for (VertexId i = 0; i < ids.size(); ++i) {
    names.push_back(parent_->name(ids[i]));
    remap.emplace(ids[i], i);
  }
  SimplexSet set;
  for (const auto& s : simplices_.all()) {
    Simplex t;
    for (auto v : s) t.push_back(remap.at(v));
    set.insert(t);
  }
  return make_complex(std::move(names), std::move(set));
}

Subcomplex intersect(const Subcomplex& lhs, const Subcomplex& rhs) {
  return Subcomplex(lhs.parent(), intersect(lhs.simplices(), rhs.simplices()));
}

Subcomplex induced_subcomplex(const ComplexPtr& complex, const std::vector<VertexId>& vertex_set) {
  std::vector<char> in(complex->vertex_count(), 0);
  for (auto v : vertex_set) {
    if (v >= complex->vertex_count()) {
      throw Error(ErrorCode::UnknownVertex, "vertex id outside the complex");
    }
    in[v] = 1;
  }
  SimplexSet set;
  for (const auto& s : complex->simplices().all()) {
    if (std::all_of(s.begin(), s.end(), [&](VertexId v) { return in[v] != 0; })) set.insert(s);
  }
  return Subcomplex(complex, std::move(set));
}

bool is_full_subcomplex(const Subcomplex& sub) {
  const auto verts = sub.vertices();
  return induced_subcomplex(sub.parent(), verts).simplices() == sub.simplices();
}

// ---------------------------------------------------------------------------
// Point

Point::Point(ComplexPtr complex, Coordinates coords, Rational scale)
    : complex_(std::move(complex)), scale_(std::move(scale)) {
  if (scale_ <= 0) throw Error(ErrorCode::DomainError, "scale must be positive");
  std::sort(coords.begin(), coords.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  Rational sum = 0;
  for (auto& [v, c] : coords) {
    if (c < 0) throw Error(ErrorCode::DomainError, "negative barycentric coordinate");
    if (v >= complex_->vertex_count()) throw Error(ErrorCode::UnknownVertex, "coordinate on unknown vertex");
    if (!coords_.empty() && coords_.back().first == v) {
      coords_.back().second += c;
    } else if (c != 0) {
      coords_.emplace_back(v, c);
    }
    sum += c;
  }
  std::erase_if(coords_, [](const auto& e) { return e.second == 0; });
  if (sum != 1) throw Error(ErrorCode::DomainError, "barycentric coordinates must sum to 1");
  if (!complex_->contains(support())) {
    throw Error(ErrorCode::DomainError, "point support does not span a simplex");
  }
}

Point Point::vertex(const ComplexPtr& complex, VertexId v, Rational scale) {
  return Point(complex, {{v, Rational(1)}}, std::move(scale));
}

Rational Point::coordinate(VertexId v) const {
  auto it = std::lower_bound(coords_.begin(), coords_.end(), v,
                             [](const auto& e, VertexId id) { return e.first < id; });
  if (it == coords_.end() || it->first != v) return 0;
  return it->second;
}

Simplex Point::support() const {
  Simplex s;
  for (const auto& [v, c] : coords_) s.push_back(v);
  return s;
}

Point Point::with_scale(Rational scale) const { return Point(complex_, coords_, std::move(scale)); }

Point affine_combination(std::span<const Point> points, std::span<const Rational> weights) {
  if (points.empty() || points.size() != weights.size()) {
    throw Error(ErrorCode::InvalidInput, "affine combination needs matching points and weights");
  }
  std::map<VertexId, Rational> acc;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].complex() != points[0].complex()) {
      throw Error(ErrorCode::ComplexMismatch, "points from different complexes");
    }
    if (weights[i] == 0) continue;
    for (const auto& [v, c] : points[i].coordinates()) acc[v] += weights[i] * c;
  }
  return Point(points[0].complex(), Point::Coordinates(acc.begin(), acc.end()), points[0].scale());
}

Rational distance(const Point& x, const Point& y) {
  if (x.complex() != y.complex() && !(*x.complex() == *y.complex())) {
    throw Error(ErrorCode::ComplexMismatch, "points lie in different complexes");
  }
  if (x.scale() != y.scale()) throw Error(ErrorCode::ScaleMismatch, "points carry different scales");
  Rational total = 0;
  const auto& a = x.coordinates();
  const auto& b = y.coordinates();
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      total += a[i++].second;
    } else if (i == a.size() || b[j].first < a[i].first) {
      total += b[j++].second;
    } else {
      total += abs(Rational(a[i].second - b[j].second));
      ++i;
      ++j;
    }
  }
  return total * x.scale();
}

Point barycenter(const ComplexPtr& complex, const Simplex& sigma, Rational scale) {
  Point::Coordinates coords;
  const Rational weight(1, static_cast<long>(sigma.size()));
  for (auto v : sigma) coords.emplace_back(v, weight);
  return Point(complex, std::move(coords), std::move(scale));
}

Point flatten(const Point& x) {
  const auto& sub = x.complex();
  const auto& parent = sub->subdivision_parent();
  if (!parent) throw Error(ErrorCode::TypeMismatch, "point does not lie in a barycentric subdivision");
  std::map<VertexId, Rational> acc;
  for (const auto& [v, c] : x.coordinates()) {
    const auto& carrier = sub->carrier(v);
    const Rational share = c / static_cast<long>(carrier.size());
    for (auto u : carrier) acc[u] += share;
  }
  return Point(parent, Point::Coordinates(acc.begin(), acc.end()), x.scale());
}

Point to_subdivision(const Point& x, const ComplexPtr& subdivision) {
  if (subdivision->subdivision_parent() != x.complex() &&
      !(subdivision->subdivision_parent() && *subdivision->subdivision_parent() == *x.complex())) {
    throw Error(ErrorCode::ComplexMismatch, "subdivision does not belong to the point's complex");
  }
  auto coords = x.coordinates();
  std::stable_sort(coords.begin(), coords.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  Point::Coordinates out;
  Simplex prefix;
  for (std::size_t j = 0; j < coords.size(); ++j) {
    prefix.insert(std::lower_bound(prefix.begin(), prefix.end(), coords[j].first), coords[j].first);
    const Rational next = j + 1 < coords.size() ? coords[j + 1].second : Rational(0);
    const Rational weight = Rational(static_cast<long>(j + 1)) * (coords[j].second - next);
    if (weight != 0) out.emplace_back(subdivision_vertex(*subdivision, prefix), weight);
  }
  return Point(subdivision, std::move(out), x.scale());
}

nlohmann::json point_json(const Point& x) {
  auto out = nlohmann::json::object();
  for (const auto& [v, c] : x.coordinates()) out[x.complex()->name(v).to_string()] = format_rational(c);
  return out;
}

}  // namespace polytower
