// Acceptance run: one PASS/FAIL line per criterion, checked against
// brute-force oracles that do not call the algorithms under test.
//
// usage: polytower_acceptance [scratch dir]

#include "test_support.hpp"

#include "polytower/connectivity.hpp"
#include "polytower/covers.hpp"
#include "polytower/generators.hpp"
#include "polytower/polytower.h"
#include "polytower/tower.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>

using namespace polytower;
using namespace polytower::testing;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  std::vector<std::string> problems;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (problems.size() < 5) problems.push_back(what);
    }
  }
};

using Coords = std::map<VertexId, Rational>;

Coords coords(const Point& x) {
  Coords out;
  for (const auto& [v, c] : x.coordinates()) {
    if (c != 0) out[v] = c;
  }
  return out;
}

Rational l1(const Coords& x, const Coords& y) {
  Rational d = 0;
  for (const auto& [v, c] : x) d += abs(c - (y.count(v) ? y.at(v) : Rational(0)));
  for (const auto& [v, c] : y) {
    if (!x.count(v)) d += abs(c);
  }
  return d;
}

void add_scaled(Coords& into, const Coords& x, const Rational& w) {
  for (const auto& [v, c] : x) into[v] += w * c;
}

Coords uniform(const Simplex& s) {
  Coords out;
  for (auto v : s) out[v] = Rational(1, static_cast<long>(s.size()));
  return out;
}

std::string fmt(const Rational& r) { return format_rational(r); }

// ---------------------------------------------------------------------------
// Chain oracles on plain vertex sets

using Face = std::set<int>;

std::vector<Face> all_faces_of_simplex(int d) {
  std::vector<Face> out;
  for (int mask = 1; mask < (1 << (d + 1)); ++mask) {
    Face f;
    for (int i = 0; i <= d; ++i) {
      if (mask & (1 << i)) f.insert(i);
    }
    out.push_back(f);
  }
  return out;
}

// Faces of the order complex: all chains under strict inclusion, as sets of
// indices into `faces`.
std::vector<Face> chains(const std::vector<Face>& faces) {
  std::vector<Face> out;
  std::vector<int> chain;
  auto extend = [&](auto&& self) -> void {
    out.push_back(Face(chain.begin(), chain.end()));
    const Face& top = faces[chain.back()];
    for (int j = 0; j < static_cast<int>(faces.size()); ++j) {
      const Face& f = faces[j];
      if (f.size() > top.size() && std::includes(f.begin(), f.end(), top.begin(), top.end())) {
        chain.push_back(j);
        self(self);
        chain.pop_back();
      }
    }
  };
  for (int i = 0; i < static_cast<int>(faces.size()); ++i) {
    chain = {i};
    extend(extend);
  }
  // a chain is a set; different insertion orders cannot repeat because
  // chains only grow upwards
  return out;
}

std::vector<std::size_t> f_vector_of(const std::vector<Face>& faces) {
  std::vector<std::size_t> f;
  for (const auto& s : faces) {
    if (f.size() < s.size()) f.resize(s.size(), 0);
    ++f[s.size() - 1];
  }
  return f;
}

// ---------------------------------------------------------------------------
// Homology oracle: ranks of boundary matrices over Q and over F_2, built from
// the closure of the maximal simplices.

std::vector<std::vector<std::vector<VertexId>>> faces_by_dim(const Complex& k) {
  std::set<std::vector<VertexId>> all;
  for (const auto& top : k.maximal()) {
    const std::size_t n = top.size();
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
      std::vector<VertexId> s;
      for (std::size_t i = 0; i < n; ++i) {
        if (mask & (std::uint64_t{1} << i)) s.push_back(top[i]);
      }
      all.insert(s);
    }
  }
  std::vector<std::vector<std::vector<VertexId>>> out;
  for (const auto& s : all) {
    if (out.size() < s.size()) out.resize(s.size());
    out[s.size() - 1].push_back(s);
  }
  return out;
}

std::size_t rank_q(std::vector<std::vector<Rational>> m) {
  std::size_t rank = 0;
  const std::size_t cols = m.empty() ? 0 : m[0].size();
  for (std::size_t c = 0; c < cols && rank < m.size(); ++c) {
    std::size_t pivot = rank;
    while (pivot < m.size() && m[pivot][c] == 0) ++pivot;
    if (pivot == m.size()) continue;
    std::swap(m[pivot], m[rank]);
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == rank || m[r][c] == 0) continue;
      const Rational f = m[r][c] / m[rank][c];
      for (std::size_t j = c; j < cols; ++j) m[r][j] -= f * m[rank][j];
    }
    ++rank;
  }
  return rank;
}

std::size_t rank_f2(std::vector<std::vector<int>> m) {
  std::size_t rank = 0;
  const std::size_t cols = m.empty() ? 0 : m[0].size();
  for (std::size_t c = 0; c < cols && rank < m.size(); ++c) {
    std::size_t pivot = rank;
    while (pivot < m.size() && m[pivot][c] == 0) ++pivot;
    if (pivot == m.size()) continue;
    std::swap(m[pivot], m[rank]);
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r != rank && m[r][c]) {
        for (std::size_t j = c; j < cols; ++j) m[r][j] ^= m[rank][j];
      }
    }
    ++rank;
  }
  return rank;
}

struct BettiOracle {
  std::vector<std::size_t> q, f2;  // per degree
};

BettiOracle betti_oracle(const Complex& k) {
  const auto faces = faces_by_dim(k);
  const std::size_t top = faces.size();
  // rank of boundary from degree d to d-1, d = 1..top-1
  std::vector<std::size_t> rq(top + 1, 0), r2(top + 1, 0);
  for (std::size_t d = 1; d < top; ++d) {
    std::map<std::vector<VertexId>, std::size_t> row;
    for (std::size_t i = 0; i < faces[d - 1].size(); ++i) row[faces[d - 1][i]] = i;
    std::vector<std::vector<Rational>> mq(faces[d - 1].size(), std::vector<Rational>(faces[d].size(), 0));
    std::vector<std::vector<int>> m2(faces[d - 1].size(), std::vector<int>(faces[d].size(), 0));
    for (std::size_t j = 0; j < faces[d].size(); ++j) {
      for (std::size_t drop = 0; drop < faces[d][j].size(); ++drop) {
        auto face = faces[d][j];
        face.erase(face.begin() + static_cast<long>(drop));
        mq[row.at(face)][j] = (drop % 2 == 0) ? 1 : -1;
        m2[row.at(face)][j] = 1;
      }
    }
    rq[d] = rank_q(mq);
    r2[d] = rank_f2(m2);
  }
  BettiOracle out;
  for (std::size_t d = 0; d < top; ++d) {
    out.q.push_back(faces[d].size() - rq[d] - rq[d + 1]);
    out.f2.push_back(faces[d].size() - r2[d] - r2[d + 1]);
  }
  return out;
}

std::size_t even_torsion(const HomologyGroup& g) {
  std::size_t n = 0;
  for (const auto& t : g.torsion) {
    if (t % 2 == 0) ++n;
  }
  return n;
}

// The library's groups against the oracle: free ranks over Q, and F_2 ranks
// predicted by the universal coefficient theorem.
bool homology_agrees(const Complex& k, std::string& why) {
  const auto groups = homology_all(k);
  const auto o = betti_oracle(k);
  for (std::size_t d = 0; d < o.q.size(); ++d) {
    const auto& g = d < groups.size() ? groups[d] : HomologyGroup{};
    const std::size_t even_here = even_torsion(g);
    const std::size_t even_below = d > 0 && d - 1 < groups.size() ? even_torsion(groups[d - 1]) : 0;
    if (static_cast<std::size_t>(g.betti) != o.q[d] || o.f2[d] != o.q[d] + even_here + even_below) {
      why = "degree " + std::to_string(d) + ": library " + describe(g) + ", oracle rank_Q " + std::to_string(o.q[d]) +
            " rank_F2 " + std::to_string(o.f2[d]);
      return false;
    }
  }
  return true;
}

// Reduced rational homology vanishes in degrees below n.
bool q_acyclic_below(const Complex& k, int n) {
  const auto o = betti_oracle(k);
  for (int d = 0; d < n && d < static_cast<int>(o.q.size()); ++d) {
    if (o.q[static_cast<std::size_t>(d)] != (d == 0 ? 1u : 0u)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Geometry oracles

// Image of x under a quasi-simplicial map, in base coordinates: each vertex
// goes to the barycenter of the simplex its image subdivides.
Coords apply_oracle(const QSMap& p, const Coords& x) {
  Coords out;
  for (const auto& [v, c] : x) add_scaled(out, uniform(p.subdivision()->carrier(p.vertex_map().image(v))), c);
  return out;
}

// Closed barycentric star of vertex v of K, by coordinates: v carries a
// largest coordinate.
bool in_bst_by_coordinates(const Coords& x, VertexId v) {
  Rational top = 0;
  for (const auto& [w, c] : x) top = c > top ? c : top;
  return x.count(v) && x.at(v) == top;
}

// mesh of the vertex-star cover B(K) at scale kappa: the star of v in beta K
// has vertex set {sigma : v in sigma}, and l1 diameters of unions of
// simplices are attained at vertex pairs.
Rational mesh_oracle(const Complex& k, const Rational& kappa) {
  Rational best = 0;
  const auto all = k.simplices().all();
  for (VertexId v = 0; v < k.vertex_count(); ++v) {
    std::vector<Coords> pts;
    for (const auto& s : all) {
      if (std::binary_search(s.begin(), s.end(), v)) pts.push_back(uniform(s));
    }
    for (std::size_t i = 0; i < pts.size(); ++i) {
      for (std::size_t j = i + 1; j < pts.size(); ++j) best = std::max<Rational>(best, kappa * l1(pts[i], pts[j]));
    }
  }
  return best;
}

// Base coordinates of a vertex of an iterated subdivision, from its name.
std::map<std::string, Rational> name_barycenter(const VertexName& n) {
  if (n.is_atom()) return {{n.atom(), Rational(1)}};
  std::map<std::string, Rational> out;
  for (const auto& part : n.parts()) {
    for (const auto& [atom, c] : name_barycenter(part)) out[atom] += c / static_cast<long>(n.parts().size());
  }
  return out;
}

Rational l1_named(const std::map<std::string, Rational>& x, const std::map<std::string, Rational>& y) {
  Rational d = 0;
  for (const auto& [k, c] : x) d += abs(c - (y.count(k) ? y.at(k) : Rational(0)));
  for (const auto& [k, c] : y) {
    if (!x.count(k)) d += abs(c);
  }
  return d;
}

// Lipschitz constant of the projection of level m of a subdivision tower to
// its base level 0, vertex pairs of common simplices.
Rational projection_lipschitz_oracle(const Tower& t, std::size_t m) {
  const auto& k = *t.level(m);
  Rational best = 0;
  for (const auto& top : k.maximal()) {
    for (std::size_t i = 0; i < top.size(); ++i) {
      for (std::size_t j = i + 1; j < top.size(); ++j) {
        const Rational d = t.scale(0) * l1_named(name_barycenter(k.name(top[i])), name_barycenter(k.name(top[j])));
        best = std::max<Rational>(best, d / (2 * t.scale(m)));
      }
    }
  }
  return best;
}

// Random point with support exactly sigma.
Coords random_interior(std::mt19937_64& rng, const Simplex& sigma, long den = 12) {
  std::uniform_int_distribution<long> w(1, den);
  std::vector<long> weights;
  long total = 0;
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    weights.push_back(w(rng));
    total += weights.back();
  }
  Coords out;
  for (std::size_t i = 0; i < sigma.size(); ++i) out[sigma[i]] = Rational(weights[i], total);
  return out;
}

Point to_point(const ComplexPtr& k, const Coords& c, const Rational& scale = 1) {
  return Point(k, Point::Coordinates(c.begin(), c.end()), scale);
}

Subcomplex closed_vertex_star(const ComplexPtr& k, VertexId v) {
  std::vector<Simplex> tops;
  for (const auto& s : k->maximal()) {
    if (std::binary_search(s.begin(), s.end(), v)) tops.push_back(s);
  }
  return Subcomplex::closure_of(k, tops);
}

// Subsets of cover indices whose closed elements share a vertex.
std::set<std::vector<std::size_t>> closed_nerve_oracle(const IndexedCover& c) {
  std::set<std::vector<std::size_t>> out;
  const std::size_t n = c.size();
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    std::vector<std::size_t> subset;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (std::uint64_t{1} << i)) subset.push_back(i);
    }
    for (VertexId v = 0; v < c.ambient()->vertex_count(); ++v) {
      bool all = true;
      for (auto i : subset) all = all && c.closed(i).contains(Simplex{v});
      if (all) {
        out.insert(subset);
        break;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Criteria

Outcome subdivision_counts() {
  Outcome o;
  const auto d1 = all_faces_of_simplex(1);
  const auto d2 = all_faces_of_simplex(2);
  const auto bd1 = chains(d1);
  const std::vector<std::pair<std::string, std::pair<ComplexPtr, std::vector<std::size_t>>>> cases = {
      {"beta D1", {barycentric_subdivide(gen::simplex(1)), f_vector_of(bd1)}},
      {"beta D2", {barycentric_subdivide(gen::simplex(2)), f_vector_of(chains(d2))}},
      {"beta^2 D1", {barycentric_subdivide(gen::simplex(1), 2), f_vector_of(chains(bd1))}},
  };
  const std::vector<std::vector<std::size_t>> expected = {{3, 2}, {7, 12, 6}, {5, 4}};
  std::ostringstream d;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto& [name, pair] = cases[i];
    const auto f = pair.first->f_vector();
    o.require(f == pair.second, name + " differs from the chain oracle");
    o.require(f == expected[i], name + " differs from the expected f-vector");
    d << name << "=(";
    for (std::size_t j = 0; j < f.size(); ++j) d << (j ? "," : "") << f[j];
    d << ") ";
  }
  o.detail = d.str();
  return o;
}

Outcome homology_suite() {
  Outcome o;
  auto expect = [&](const std::string& name, const ComplexPtr& k, const std::vector<std::string>& groups) {
    const auto got = homology_all(*k);
    std::vector<std::string> text;
    for (const auto& g : got) text.push_back(describe(g));
    while (text.size() < groups.size()) text.push_back("0");
    o.require(std::equal(groups.begin(), groups.end(), text.begin()) &&
                  std::all_of(text.begin() + static_cast<long>(groups.size()), text.end(),
                              [](const std::string& s) { return s == "0"; }),
              name + " groups " + nlohmann::json(text).dump());
    std::string why;
    o.require(homology_agrees(*k, why), name + " oracle: " + why);
  };
  expect("boundary D2", gen::sphere(1), {"Z", "Z"});
  expect("boundary D3", gen::sphere(2), {"Z", "0", "Z"});
  expect("RP2", gen::rp2(), {"Z", "Z/2", "0"});
  for (int d = 0; d <= 5; ++d) expect("D" + std::to_string(d), gen::simplex(d), {"Z"});
  o.detail = "S1, S2, RP2 (6 vertices), D0..D5";
  return o;
}

Outcome preimages() {
  Outcome o;
  std::mt19937_64 rng(3);
  std::size_t samples = 0, inside = 0;
  for (const auto& p : {gen::cylinder_map(), QSMap::subdivision_identity(gen::simplex(2))}) {
    const auto all = p.source()->simplices().all();
    std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
    for (const auto& delta : p.subdivision()->simplices().all()) {
      const auto pre = preimage_subcomplex(p.vertex_map(), delta);
      for (int i = 0; i < 1000; ++i) {
        const auto& sigma = all[pick(rng)];
        const Coords x = random_interior(rng, sigma);
        // push forward: vertex v contributes its coordinate at p(v)
        Coords image;
        for (const auto& [v, c] : x) image[p.vertex_map().image(v)] += c;
        bool by_image = true;
        for (const auto& [w, c] : image) by_image = by_image && std::binary_search(delta.begin(), delta.end(), w);
        const Point px = to_point(p.source(), x);
        const bool by_library = is_face(push_forward(p.vertex_map(), px).support(), delta);
        const bool member = pre.contains(px.support());
        o.require(member == by_image && by_library == by_image, "disagreement at delta " + nlohmann::json(delta).dump());
        ++samples;
        inside += member ? 1 : 0;
      }
    }
  }
  o.detail = std::to_string(samples) + " samples, " + std::to_string(inside) + " inside their preimage";
  return o;
}

Outcome star_identities() {
  Outcome o;
  std::mt19937_64 rng(4);
  std::size_t families = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const auto k = random_complex(rng, 8, 30);
    o.require(k->simplex_count() <= 30, "random complex too large");
    const auto sub = barycentric_subdivide(k);
    const auto sub_simplices = sub->simplices().all();
    const std::size_t nv = k->vertex_count();
    std::vector<std::vector<VertexId>> tuples;
    for (VertexId a = 0; a < nv; ++a) {
      for (VertexId b = a + 1; b < nv; ++b) {
        tuples.push_back({a, b});
        for (VertexId c = b + 1; c < nv; ++c) tuples.push_back({a, b, c});
      }
    }
    for (const auto& t : tuples) {
      std::vector<Subcomplex> family;
      auto common = Subcomplex::whole(k);
      for (auto v : t) {
        family.push_back(subdivided(closed_vertex_star(k, v), sub));
        common = intersect(common, closed_vertex_star(k, v));
      }
      const auto common_sub = subdivided(common, sub);
      const auto rhs = open_star(common_sub);
      std::vector<OpenStarSet> lhs;
      for (const auto& a : family) lhs.push_back(open_star(a));
      // open stars are unions of open simplices of beta K
      for (const auto& s : sub_simplices) {
        bool in_lhs = true, oracle_lhs = true;
        for (std::size_t i = 0; i < lhs.size(); ++i) {
          in_lhs = in_lhs && lhs[i].contains(s);
          bool meets = false;
          for (auto v : s) meets = meets || family[i].contains(Simplex{v});
          oracle_lhs = oracle_lhs && meets;
        }
        bool oracle_rhs = false;
        for (auto v : s) oracle_rhs = oracle_rhs || common_sub.contains(Simplex{v});
        o.require(in_lhs == rhs.contains(s) && in_lhs == oracle_lhs && oracle_lhs == oracle_rhs,
                  "star identity fails on a simplex of beta K");
      }
      ++families;
    }
  }
  o.detail = std::to_string(families) + " vertex pairs/triples over 10 complexes";
  return o;
}

Outcome deformation() {
  Outcome o;
  std::mt19937_64 rng(5);
  std::size_t samples = 0, in_bst = 0;
  int instances = 0;
  while (instances < 5) {
    const auto l = random_complex(rng, 6, 30, 3);
    std::vector<VertexId> chosen;
    for (VertexId v = 0; v < l->vertex_count(); ++v) {
      if (rng() % 2) chosen.push_back(v);
    }
    if (chosen.empty() || chosen.size() == l->vertex_count()) continue;
    const auto k = induced_subcomplex(l, chosen);
    o.require(is_full_subcomplex(k), "induced subcomplex is not full");
    std::vector<Simplex> meeting;
    for (const auto& s : l->simplices().all()) {
      for (auto v : s) {
        if (std::binary_search(chosen.begin(), chosen.end(), v)) {
          meeting.push_back(s);
          break;
        }
      }
    }
    const auto bst = barycentric_star(k, barycentric_subdivide(l));
    std::uniform_int_distribution<std::size_t> pick(0, meeting.size() - 1);
    for (int i = 0; i < 1000; ++i) {
      const Coords x = random_interior(rng, meeting[pick(rng)]);
      const Rational t(std::uniform_int_distribution<int>(0, 12)(rng), 12);
      Rational mass = 0;
      for (const auto& [v, c] : x) mass += std::binary_search(chosen.begin(), chosen.end(), v) ? c : Rational(0);
      // t q(x) + (1 - t) x, q(x) the normalized restriction to K
      Coords expected;
      for (const auto& [v, c] : x) {
        const bool on_k = std::binary_search(chosen.begin(), chosen.end(), v);
        const Rational value = (1 - t) * c + (on_k ? t * c / mass : Rational(0));
        if (value != 0) expected[v] = value;
      }
      const Point px = to_point(l, x);
      const Point y = deformation_phi(px, t, k);
      o.require(coords(y) == expected, "phi differs from the straight-line formula");
      o.require(deformation_phi(px, 0, k) == px, "phi(x, 0) != x");
      const Point end = deformation_phi(px, 1, k);
      bool on_k = true;
      for (const auto& [v, c] : coords(end)) on_k = on_k && std::binary_search(chosen.begin(), chosen.end(), v);
      o.require(on_k && k.contains(end.support()), "phi(x, 1) not in |K|");
      bool x_in = false;
      for (auto v : chosen) x_in = x_in || in_bst_by_coordinates(x, v);
      o.require(x_in == bst.contains(to_subdivision(px, bst.parent()).support()), "bst membership oracle disagrees");
      if (x_in) {
        ++in_bst;
        bool y_in = false;
        for (auto v : chosen) y_in = y_in || in_bst_by_coordinates(coords(y), v);
        o.require(y_in, "phi(x, t) left bst K");
        o.require(bst.contains(to_subdivision(y, bst.parent()).support()), "phi(x, t) left bst K (library)");
      }
      ++samples;
    }
    ++instances;
  }
  o.detail = std::to_string(samples) + " samples on 5 full subcomplexes, " + std::to_string(in_bst) + " in bst K";
  return o;
}

Outcome lipschitz() {
  Outcome o;
  const auto id = QSMap::subdivision_identity(gen::interval());
  const auto c = lipschitz_constant(id, 1, 1).value;
  o.require(c == Rational(1, 2), "identity constant is " + fmt(c));
  Rational worst = 0;
  std::size_t pairs = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    std::mt19937_64 rng(seed * 7);
    const auto base = random_complex(rng, 5, 20, 2);
    const auto p = gen::random_blowup(seed, base, 2, seed % 3 == 0, 0.1);
    const auto lip = lipschitz_constant(p, 1, 1).value;
    const auto& tops = p.source()->maximal();
    std::uniform_int_distribution<std::size_t> pick(0, tops.size() - 1);
    for (int i = 0; i < 200; ++i) {
      const auto& sigma = tops[pick(rng)];
      const Coords x = coords(random_point_on(rng, p.source(), sigma));
      const Coords y = coords(random_point_on(rng, p.source(), sigma));
      const Rational dx = l1(x, y);
      const Rational dy = l1(apply_oracle(p, x), apply_oracle(p, y));
      o.require(dy <= lip * dx, "sampled ratio above the constant");
      if (dx != 0 && lip != 0) worst = std::max<Rational>(worst, Rational(dy / dx / lip));
      ++pairs;
    }
    // the constant is attained on some edge
    Rational attained = 0;
    for (const auto& top : tops) {
      for (std::size_t a = 0; a < top.size(); ++a) {
        for (std::size_t b = a + 1; b < top.size(); ++b) {
          attained = std::max<Rational>(attained, l1(apply_oracle(p, {{top[a], 1}}), apply_oracle(p, {{top[b], 1}})) / 2);
        }
      }
    }
    o.require(attained == lip, "constant not attained at a vertex pair");
  }
  o.detail = "identity beta D1 -> D1: " + fmt(c) + "; " + std::to_string(pairs) +
             " sampled pairs, largest ratio/constant " + fmt(worst);
  return o;
}

Outcome cover_isomorphism() {
  Outcome o;
  std::mt19937_64 rng(7);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto base = random_complex(rng, 6, 30, 3);
    const auto p = gen::random_blowup(seed, base, 2, false);
    o.require(is_surjective(p.vertex_map()).is_holds(), "generated map is not surjective");
    const auto b = cover_B(base);
    const auto back = pullback_cover(p, b);
    o.require(closed_nerve_oracle(back) == closed_nerve_oracle(b), "pulled-back nerve differs (oracle)");
    o.require(covers_isomorphic(back, b).is_holds(), "covers_isomorphic does not hold");
  }
  for (int trial = 0; trial < 10; ++trial) {
    const auto k = random_complex(rng, 7, 30, 3);
    const auto o_k = cover_O(k);
    o.require(*nerve(o_k).complex == *k, "nerve(O_K) != K");
    // open stars of v_0..v_r meet iff some open simplex lies in all of them
    const std::size_t nv = k->vertex_count();
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << nv); ++mask) {
      Simplex subset;
      for (VertexId v = 0; v < nv; ++v) {
        if (mask & (std::uint64_t{1} << v)) subset.push_back(v);
      }
      bool meet = false;
      for (const auto& s : k->simplices().all()) {
        bool all = true;
        for (auto v : subset) all = all && o_k.open(o_k.find(k->name(v)).value()).contains(s);
        meet = meet || all;
      }
      o.require(meet == k->contains(subset), "open stars meet off the simplices of K");
    }
  }
  o.detail = "10 pulled-back B covers, 10 nerves of O_K";
  return o;
}

Outcome tower_positive() {
  Outcome o;
  const auto t = gen::subdivision_tower(gen::simplex(2), 3);
  for (std::size_t i = 0; i < 3; ++i) o.require(t.scale(i) == Rational(1, 2 << i), "scale " + std::to_string(i));
  const auto c = verify_tower(t, 2);
  o.require(c.conclusion.is_holds(), "conclusion " + c.conclusion.to_json().dump());
  for (const auto& cond : c.conditions) o.require(cond.verdict.is_holds(), "condition " + cond.name);
  const auto& d = c.condition("D").data;
  std::size_t intersections = 0;
  o.require(d.size() == 2, "condition D covers two bonds");
  for (std::size_t b = 0; b + 1 < t.size() && b < d.size(); ++b) {
    const auto pulled = pullback_cover(t.bond(b), cover_B(t.level(b)));
    const auto subsets = closed_nerve_oracle(pulled);
    o.require(d[b]["intersections"] == subsets.size(), "bond " + std::to_string(b + 1) + " intersection count");
    o.require(d[b]["verdict"]["status"] == "holds" && d[b]["failures"].empty(), "bond verdict");
    for (const auto& s : subsets) {
      auto common = pulled.closed(s[0]);
      for (auto i : s) common = intersect(common, pulled.closed(i));
      o.require(q_acyclic_below(*common.to_complex(), 2), "intersection with rational homology below 2");
      o.require(k_connected_verdict(*common.to_complex(), 2).is_holds(), "intersection verdict");
    }
    intersections += subsets.size();
  }
  const auto& e = c.condition("E").data;
  const Rational tail = parse_rational(e["tail_bounds"][0].get<std::string>());
  const Rational partial = parse_rational(e["rows"][0]["partial_sum"].get<std::string>());
  o.require(tail >= partial && partial > 0, "tail bound below the partial sum");
  o.detail = std::to_string(intersections) + " pull-back intersections certified; tail bound " + fmt(tail) +
             " (partial sum " + fmt(partial) + ", ratio " + e["ratio_bound"].get<std::string>() + ")";
  return o;
}

Outcome tower_negative() {
  Outcome o;
  const auto t = gen::cylinder_tower();
  const auto c2 = verify_tower(t, 2);
  o.require(c2.conclusion.is_fails(), "n = 2 does not fail");
  const auto& w = c2.conclusion.detail();
  const auto hat_w = nlohmann::json::array({nlohmann::json::array({"u", "v"})});
  o.require(w["delta"] == hat_w, "witness " + w["delta"].dump());
  o.require(w["H1"] == "Z", "H1 " + w["H1"].dump());
  // the preimage of the edge barycenter, by enumeration
  const auto& p = t.bond(0);
  const VertexId wv = p.subdivision()->id(VertexName::list({VertexName("u"), VertexName("v")}));
  std::vector<Simplex> pre;
  for (const auto& s : p.source()->simplices().all()) {
    bool all = true;
    for (auto v : s) all = all && p.vertex_map().image(v) == wv;
    if (all) pre.push_back(s);
  }
  const auto ring = Subcomplex::closure_of(p.source(), pre).to_complex();
  const auto b = betti_oracle(*ring);
  o.require(b.q.size() >= 2 && b.q[0] == 1 && b.q[1] == 1 && b.f2[1] == 1, "preimage of w is not a circle");
  const auto c1 = verify_tower(t, 1);
  o.require(c1.conclusion.is_holds(), "n = 1 does not hold");
  o.detail = "n=2 fails at bond " + w["bond"].dump() + " witness " + w["delta"].dump() +
             " H1=" + w["H1"].get<std::string>() + "; n=1 holds";
  return o;
}

Outcome weak_equivalence() {
  Outcome o;
  std::size_t maps = 0;
  auto check = [&](const Tower& t, int n) {
    const auto c = verify_tower(t, n);
    const auto& bonds = c.condition("II").data;
    for (std::size_t b = 0; b < t.bonds().size(); ++b) {
      if (bonds[b]["regularity"]["verdict"]["status"] != "holds") continue;
      const auto& p = t.bond(b);
      const auto src = betti_oracle(*p.source());
      const auto dst = betti_oracle(*p.base());
      for (int k = 0; k < n; ++k) {
        const auto h = induced_homology_map(p, k);
        o.require(h.iso.is_holds(), "bond " + std::to_string(b + 1) + " degree " + std::to_string(k) + " not iso");
        const auto at = [&](const BettiOracle& x, int d) {
          return d < static_cast<int>(x.q.size()) ? x.q[static_cast<std::size_t>(d)] : std::size_t{0};
        };
        o.require(at(src, k) == at(dst, k), "rational Betti numbers differ across a certified bond");
        ++maps;
      }
    }
    o.require(c.condition("homology").verdict.is_holds(), "homology condition");
  };
  check(gen::subdivision_tower(gen::simplex(2), 3), 2);
  check(gen::subdivision_tower(gen::sphere(1), 3), 2);
  check(gen::cylinder_tower(), 1);
  check(gen::cylinder_tower(), 2);
  for (std::uint64_t seed = 1; seed <= 3; ++seed) check(gen::random_tower(seed, gen::simplex(2), 2), 2);
  o.detail = std::to_string(maps) + " induced maps on certified bonds are isomorphisms";
  return o;
}

Outcome lifting() {
  Outcome o;
  const auto t = gen::subdivision_tower(gen::simplex(2), 3);
  const auto k1 = t.level(0);
  const auto f1 = PLMap::from_vertex_map(VertexMap::identity(k1));
  const VertexId a = k1->id(VertexName("a")), b = k1->id(VertexName("b"));
  const auto ends = Subcomplex::closure_of(k1, {{a}, {b}});
  const auto ac = ends.to_complex();
  const auto top = t.level(2);
  auto twice = [](const char* v) { return VertexName::list({VertexName::list({VertexName(v)})}); };
  const PLMap top_map(ac, top,
                      {Point::vertex(top, top->id(twice(ac->name(0).atom().c_str()))),
                       Point::vertex(top, top->id(twice(ac->name(1).atom().c_str())))});
  const auto g0 = thread_maps(t, top_map);
  const auto r = tower_lift(t, f1, ends, g0, 3);
  o.require(r.verdict.is_holds(), "verdict " + r.verdict.to_json().dump());
  o.require(r.stages.size() == 3, "stage count");
  if (!o.pass) return o;

  // positions of every stage's domain vertices in X
  std::vector<std::vector<Coords>> xpos(r.stages.size());
  for (std::size_t m = 0; m < r.stages.size(); ++m) {
    for (const auto& pos : r.stages[m].map.positions) {
      if (m == 0) {
        xpos[m].push_back(coords(pos));
      } else {
        Coords x;
        for (const auto& [u, c] : coords(pos)) add_scaled(x, xpos[m - 1][u], c);
        xpos[m].push_back(x);
      }
    }
  }
  // g_m = g0[m] on A, exactly
  std::size_t pinned = 0;
  for (std::size_t m = 0; m < r.stages.size(); ++m) {
    const auto& g = r.stages[m].map.map;
    for (VertexId v = 0; v < g.domain()->vertex_count(); ++v) {
      for (VertexId e = 0; e < ac->vertex_count(); ++e) {
        const VertexId in_x = k1->id(ac->name(e));
        if (xpos[m][v] == Coords{{in_x, 1}}) {
          o.require(g.image(v) == g0[m].image(e), "stage " + std::to_string(m + 1) + " moves A");
          ++pinned;
        }
      }
    }
  }
  o.require(pinned >= 2 * r.stages.size(), "A not represented at every stage");

  // closeness: bond o g_m and g_{m-1} share a B(K_{m-1}) element on every
  // domain simplex (vertex images suffice: both are affine there and the
  // closed stars are cut out by linear inequalities)
  std::size_t simplices = 0;
  for (std::size_t m = 1; m < r.stages.size(); ++m) {
    o.require(r.stages[m].closeness.is_holds(), "stage certificate");
    const auto& g = r.stages[m].map.map;
    const auto& prev = r.stages[m - 1].map.map;
    const auto& p = t.bond(m - 1);
    std::vector<Coords> lifted, before;
    for (VertexId v = 0; v < g.domain()->vertex_count(); ++v) {
      lifted.push_back(apply_oracle(p, coords(g.image(v))));
      Coords f;
      for (const auto& [u, c] : coords(r.stages[m].map.positions[v])) add_scaled(f, coords(prev.image(u)), c);
      before.push_back(f);
    }
    for (const auto& s : g.domain()->simplices().all()) {
      bool found = false;
      for (VertexId j = 0; j < t.level(m - 1)->vertex_count() && !found; ++j) {
        bool all = true;
        for (auto v : s) all = all && in_bst_by_coordinates(lifted[v], j) && in_bst_by_coordinates(before[v], j);
        found = all;
      }
      o.require(found, "stage " + std::to_string(m + 1) + " not close on a simplex");
      ++simplices;
    }
  }

  // Cauchy increments against Lip * mesh, recomputed
  std::vector<Rational> front;
  for (const auto& e : r.cauchy) {
    o.require(e.increment <= e.bound, "increment above its bound");
    o.require(e.bound == e.lipschitz * e.mesh, "bound is not Lip * mesh");
    o.require(e.mesh == mesh_oracle(*t.level(e.m), t.scale(e.m)), "mesh differs from the oracle");
    if (e.k == 0) {
      o.require(e.lipschitz == projection_lipschitz_oracle(t, e.m), "projection Lipschitz differs from the oracle");
      front.push_back(e.bound);
    }
  }
  o.require(front.size() == 2, "k = 0 increments");
  Rational ratio = 0;
  for (std::size_t i = 1; i < front.size(); ++i) ratio = std::max<Rational>(ratio, Rational(front[i] / front[i - 1]));
  o.require(ratio < 1, "bounds do not decrease");
  Rational sum = 0;
  for (std::size_t m = front.size(); m-- > 0;) {
    sum += front[m];
    o.require(m < r.tails.size() && r.tails[m] == sum, "tail " + std::to_string(m));
  }
  std::ostringstream d;
  d << pinned << " pinned vertices, " << simplices << " simplices certified close; k=0 bounds";
  for (const auto& f : front) d << " " << fmt(f);
  d << ", ratio " << fmt(ratio);
  o.detail = d.str();
  return o;
}

// ---------------------------------------------------------------------------
// Determinism through the C interface

std::string run_text(const std::vector<std::string>& argv, pt_format format, const pt_options& options,
                     pt_status* status = nullptr) {
  std::vector<const char*> args;
  for (std::size_t i = 1; i < argv.size(); ++i) args.push_back(argv[i].c_str());
  pt_report* report = nullptr;
  const pt_status s = pt_run(argv[0].c_str(), args.data(), args.size(), &options, &report);
  if (status) *status = s;
  std::string text = pt_report_text(report, format);
  pt_report_free(report);
  return text;
}

Outcome determinism(const std::filesystem::path& dir) {
  Outcome o;
  std::filesystem::create_directories(dir);
  pt_options options;
  pt_options_init(&options);
  options.budgets = pt_budgets{10000, 10000, 100000};
  auto file = [&](const std::string& name, const std::vector<std::string>& gen_args) {
    const auto path = (dir / name).string();
    std::vector<std::string> argv = {"gen"};
    argv.insert(argv.end(), gen_args.begin(), gen_args.end());
    std::ofstream(path) << run_text(argv, PT_FORMAT_JSON, options);
    return path;
  };
  const auto d2 = file("d2.json", {"simplex", "2"});
  const auto rp2 = file("rp2.json", {"rp2"});
  const auto s2 = file("s2.json", {"sphere", "2"});
  const auto cyl = file("cyl.json", {"cylinder"});
  const auto st = file("st.json", {"subdivision-tower", "2", "3"});
  const auto st1 = file("st1.json", {"subdivision-tower", "1", "3"});
  const auto ct = file("ct.json", {"cylinder-tower"});
  const auto job = (dir / "job.json").string();
  {
    std::ifstream in(st1);
    std::stringstream tower;
    tower << in.rdbuf();
    std::ofstream(job) << "{\"tower\": " << tower.str()
                       << ", \"domain\": {\"maximal\": [[\"x\", \"y\"]]},"
                          " \"map\": {\"x\": \"a\", \"y\": {\"a\": \"1/2\", \"b\": \"1/2\"}},"
                          " \"A\": [[\"x\"]], \"thread\": {\"x\": [[\"a\"]]}}";
  }
  const std::vector<std::vector<std::string>> commands = {
      {"validate", st},
      {"validate", job},
      {"subdivide", d2, "2"},
      {"stars", d2, "a", "a,b"},
      {"nerve", s2, "O"},
      {"nerve", s2, "B"},
      {"homology", rp2},
      {"pi1", rp2},
      {"pi1", s2},
      {"check-map", cyl},
      {"verify-tower", st},
      {"verify-tower", ct},
      {"restrict", ct, "1", "u"},
      {"lift", job},
      {"mesh", d2, "B"},
      {"gen", "random-tower", "2", "1"},
      {"gen", "random-map", "2"},
      {"gen", "subdivision-tower"},
      {"homology", (dir / "missing.json").string()},
  };
  std::size_t runs = 0;
  for (const auto& argv : commands) {
    for (auto format : {PT_FORMAT_JSON, PT_FORMAT_HUMAN}) {
      for (int n : {1, 2}) {
        options.n = n;
        options.seed = 17;
        pt_status s1, s2s;
        const auto first = run_text(argv, format, options, &s1);
        const auto second = run_text(argv, format, options, &s2s);
        o.require(first == second && s1 == s2s, "reports differ: " + argv[0] + " " + (argv.size() > 1 ? argv[1] : ""));
        o.require(!first.empty(), "empty report: " + argv[0]);
        o.require(s1 != PT_INTERNAL_ERROR, "internal error: " + argv[0]);
        runs += 2;
      }
    }
  }
  o.detail = std::to_string(runs) + " runs of " + std::to_string(commands.size()) +
             " command lines, byte-identical in pairs";
  return o;
}

struct Criterion {
  int id;
  std::string title;
  double limit_seconds;  // 0 = none
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::filesystem::path scratch =
      argc > 1 ? std::filesystem::path(argv[1]) : std::filesystem::temp_directory_path() / "polytower_acceptance";
  const std::vector<Criterion> criteria = {
      {1, "subdivision f-vectors match chain enumeration", 1, subdivision_counts},
      {2, "homology suite", 5, homology_suite},
      {3, "preimage membership vs push-forward", 10, preimages},
      {4, "open star intersection identity", 0, star_identities},
      {5, "straight-line deformation properties", 0, deformation},
      {6, "Lipschitz constants", 0, lipschitz},
      {7, "pull-back and nerve isomorphisms", 0, cover_isomorphism},
      {8, "subdivision tower of D2 certifies at n=2", 60, tower_positive},
      {9, "cylinder tower fails at n=2, holds at n=1", 10, tower_negative},
      {10, "certified bonds induce homology isomorphisms", 0, weak_equivalence},
      {11, "tower lift: pinned on A, close, Cauchy bounds", 0, lifting},
      {12, "byte-identical reports across runs", 0, [&] { return determinism(scratch); }},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.problems.push_back(std::string("exception: ") + e.what());
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_seconds > 0 && seconds > c.limit_seconds) {
      o.pass = false;
      std::ostringstream m;
      m << "took " << std::fixed << std::setprecision(2) << seconds << " s, limit " << c.limit_seconds << " s";
      o.problems.push_back(m.str());
    }
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << std::setw(2) << c.id << "] " << c.title << " (" << std::fixed
              << std::setprecision(2) << seconds << " s)";
    if (!o.detail.empty()) std::cout << ": " << o.detail;
    std::cout << "\n";
    for (const auto& p : o.problems) std::cout << "       " << p << "\n";
    if (!o.pass) ++failed;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
