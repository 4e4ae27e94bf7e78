#include "polytower/tower.hpp"

#include "polytower/generators.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <set>

namespace polytower {

namespace {

bool same_complex(const ComplexPtr& a, const ComplexPtr& b) { return a == b || *a == *b; }

Point on(const ComplexPtr& k, const Point& x) { return Point(k, x.coordinates(), x.scale()); }

// sum_w x_w positions[w]
Point push_position(const Point& x, const std::vector<Point>& positions) {
  std::vector<Point> pts;
  std::vector<Rational> w;
  for (const auto& [v, c] : x.coordinates()) {
    pts.push_back(positions.at(v));
    w.push_back(c);
  }
  return affine_combination(pts, w);
}

// The same point in another complex that shares the vertex names.
Point transfer(const Point& x, const ComplexPtr& to) {
  Point::Coordinates coords;
  for (const auto& [v, c] : x.coordinates()) coords.emplace_back(to->id(x.complex()->name(v)), c);
  std::sort(coords.begin(), coords.end());
  return Point(to, std::move(coords), x.scale());
}

Point in_ambient(const Point& p, const IndexedCover& cover) {
  if (same_complex(cover.ambient(), cover.space())) return on(cover.ambient(), p);
  return to_subdivision(on(cover.space(), p), cover.ambient());
}

std::string rational_string(const Rational& r) { return format_rational(r); }

nlohmann::json rationals_json(const std::vector<Rational>& values) {
  auto out = nlohmann::json::array();
  for (const auto& v : values) out.push_back(rational_string(v));
  return out;
}

nlohmann::json subset_json(const IndexedCover& cover, const std::vector<std::size_t>& subset) {
  auto out = nlohmann::json::array();
  for (auto i : subset) out.push_back(name_json(cover.indices()[i]));
  return out;
}

}  // namespace

const char* to_string(StarCover kind) { return kind == StarCover::O ? "O" : "B"; }

IndexedCover star_cover(const ComplexPtr& complex, StarCover kind) {
  return kind == StarCover::O ? cover_O(complex) : cover_B(complex);
}

Tower::Tower(std::vector<ComplexPtr> levels, std::vector<QSMap> bonds, std::vector<Rational> scales,
             std::vector<StarCover> covers)
    : levels_(std::move(levels)), bonds_(std::move(bonds)), scales_(std::move(scales)), covers_(std::move(covers)) {
  if (levels_.empty()) throw Error(ErrorCode::InvalidInput, "a tower needs at least one level");
  if (bonds_.size() + 1 != levels_.size()) throw Error(ErrorCode::InvalidInput, "a tower needs one bond between consecutive levels");
  for (std::size_t i = 0; i < bonds_.size(); ++i) {
    const std::string where = "bonds[" + std::to_string(i) + "]";
    if (!same_complex(bonds_[i].source(), levels_[i + 1])) {
      throw Error(ErrorCode::ComplexMismatch, "bond source is not the next level", where);
    }
    if (!same_complex(bonds_[i].base(), levels_[i])) {
      throw Error(ErrorCode::ComplexMismatch, "bond target is not the subdivision of the previous level", where);
    }
  }
  if (scales_.empty()) scales_ = default_scales(levels_.size());
  if (scales_.size() != levels_.size()) throw Error(ErrorCode::InvalidInput, "one scale per level required", "scales");
  for (const auto& s : scales_) {
    if (s <= 0) throw Error(ErrorCode::DomainError, "scales must be positive", "scales");
  }
  if (covers_.empty()) covers_.assign(levels_.size(), StarCover::B);
  if (covers_.size() != levels_.size()) throw Error(ErrorCode::InvalidInput, "one cover kind per level required", "covers");
}

std::vector<Rational> Tower::default_scales(std::size_t count) {
  std::vector<Rational> out;
  Rational s = 1;
  for (std::size_t i = 0; i < count; ++i) {
    s /= 2;
    out.push_back(s);
  }
  return out;
}

int Tower::max_dimension() const {
  int d = 0;
  for (const auto& k : levels_) d = std::max(d, k->dimension());
  return d;
}

std::vector<Point> Tower::projection_images(std::size_t m, std::size_t k) const {
  if (k > m || m >= size()) throw Error(ErrorCode::DomainError, "projection levels out of range");
  if (k == m) {
    std::vector<Point> out;
    for (VertexId v = 0; v < levels_[m]->vertex_count(); ++v) out.push_back(Point::vertex(levels_[m], v));
    return out;
  }
  std::vector<const QSMap*> chain;
  for (std::size_t j = k; j < m; ++j) chain.push_back(&bonds_[j]);
  auto images = composite_vertex_images(chain);
  for (auto& p : images) p = on(levels_[k], p);
  return images;
}

Point Tower::project(const Point& x, std::size_t m, std::size_t k) const {
  if (k > m || m >= size()) throw Error(ErrorCode::DomainError, "projection levels out of range");
  Point y = on(levels_[m], x);
  for (std::size_t j = m; j > k; --j) y = on(levels_[j - 1], apply(bonds_[j - 1], on(levels_[j], y), y.scale()));
  return y;
}

Rational Tower::projection_lipschitz(std::size_t m, std::size_t k) const {
  if (k == m) return 1;
  return lipschitz_constant(*levels_[m], projection_images(m, k), scales_[m], scales_[k]).value;
}

nlohmann::json RegularityReport::to_json(const QSMap& map) const {
  auto entries_json = nlohmann::json::array();
  for (const auto& e : entries) {
    entries_json.push_back({{"delta", simplex_json(*map.subdivision(), e.delta)},
                            {"preimage_size", e.preimage_size},
                            {"empty", e.empty},
                            {"invariants", e.invariants},
                            {"verdict", e.verdict.to_json()}});
  }
  return {{"n", n}, {"entries", entries_json}, {"verdict", aggregate.to_json()}};
}

RegularityReport n_regular_report(const QSMap& map, int n, const Budgets& budgets) {
  if (n < 1) throw Error(ErrorCode::DomainError, "n must be at least 1");
  RegularityReport report;
  report.n = n;
  const auto& sub = *map.subdivision();
  auto failures = nlohmann::json::array();
  // (dimension of delta, largest carrier among its vertices, order)
  std::vector<std::array<std::size_t, 3>> ranked;
  bool inconclusive = false;
  for (const auto& delta : sub.simplices().all()) {
    RegularityEntry entry;
    entry.delta = delta;
    const auto pre = preimage_subcomplex(map.vertex_map(), delta);
    entry.preimage_size = pre.simplices().size();
    const auto delta_json = simplex_json(sub, delta);
    if (pre.empty()) {
      entry.empty = true;
      entry.invariants = {{"surjective", "fails"}};
      entry.verdict = Verdict::fails({{"delta", delta_json}, {"invariant", "surjective"}, {"empty", true}});
    } else {
      const auto c = pre.to_complex();
      std::vector<std::pair<std::string, Verdict>> checks;
      checks.emplace_back("connected", is_connected(*c));
      if (n >= 2) checks.emplace_back("pi1", pi1_verdict(*c, std::nullopt, budgets.pi1));
      for (int k = 2; k < n; ++k) {
        const auto h = homology(*c, k);
        checks.emplace_back("H" + std::to_string(k),
                            h.is_zero() ? Verdict::holds() : Verdict::fails({{"group", describe(h)}}));
      }
      entry.invariants = nlohmann::json::object();
      entry.verdict = Verdict::holds();
      for (const auto& [name, v] : checks) {
        entry.invariants[name] = to_string(v.status());
        if (!entry.verdict.is_holds() && !(entry.verdict.is_inconclusive() && v.is_fails())) continue;
        if (v.is_fails()) {
          nlohmann::json w{{"delta", delta_json}, {"invariant", name}, {"detail", v.detail()}};
          if (name == "pi1" || name == "connected") w["H1"] = describe(homology(*c, 1));
          if (name == "connected") w["H0"] = describe(homology(*c, 0));
          entry.verdict = Verdict::fails(w);
        } else if (v.is_inconclusive()) {
          entry.verdict = Verdict::inconclusive(v.reason(), {{"delta", delta_json}, {"invariant", name}});
        }
      }
    }
    if (entry.verdict.is_fails()) {
      std::size_t carrier = 0;
      for (auto x : delta) carrier = std::max(carrier, sub.carrier(x).size());
      ranked.push_back({delta.size(), carrier, ranked.size()});
      failures.push_back(entry.verdict.detail());
    }
    if (entry.verdict.is_inconclusive()) inconclusive = true;
    report.entries.push_back(std::move(entry));
  }
  if (!failures.empty()) {
    // Witness: a failing vertex of beta L over the largest cell of L, the
    // fiber over an open cell rather than over its boundary.
    const auto best = *std::min_element(ranked.begin(), ranked.end(), [](const auto& x, const auto& y) {
      if (x[0] != y[0]) return x[0] < y[0];
      if (x[1] != y[1]) return x[1] > y[1];
      return x[2] < y[2];
    });
    report.aggregate = Verdict::fails({{"witness", failures[best[2]]}, {"failures", failures}});
  } else if (inconclusive) {
    report.aggregate = Verdict::inconclusive("pi1 budget exhausted for some preimage");
  } else {
    report.aggregate = Verdict::holds({{"simplices", report.entries.size()}});
  }
  return report;
}

const ConditionResult& TowerCertificate::condition(const std::string& name) const {
  for (const auto& c : conditions) {
    if (c.name == name) return c;
  }
  throw Error(ErrorCode::InvalidInput, "unknown condition", name);
}

nlohmann::json TowerCertificate::to_json() const {
  auto conds = nlohmann::json::object();
  for (const auto& c : conditions) conds[c.name] = {{"verdict", c.verdict.to_json()}, {"data", c.data}};
  return {{"n", n}, {"depth", depth}, {"conditions", conds}, {"conclusion", conclusion.to_json()}};
}

namespace {

ConditionResult check_dimension(const Tower& t) {
  std::vector<int> dims;
  for (const auto& k : t.levels()) dims.push_back(k->dimension());
  return {"I", Verdict::holds(), {{"dimensions", dims}}};
}

ConditionResult check_bonds(const Tower& t, int n, const Budgets& budgets, std::vector<bool>& bond_ok) {
  auto per_bond = nlohmann::json::array();
  Verdict verdict = Verdict::holds();
  for (std::size_t i = 0; i < t.bonds().size(); ++i) {
    const auto& p = t.bond(i);
    const Verdict qs = check_simplicial(p.vertex_map());
    const Verdict surj = is_surjective(p.vertex_map());
    const auto reg = n_regular_report(p, n, budgets);
    Verdict v = conjoin(conjoin(qs, surj), reg.aggregate);
    bond_ok.push_back(v.is_holds());
    per_bond.push_back({{"bond", i + 1},
                        {"quasi_simplicial", qs.to_json()},
                        {"surjective", surj.to_json()},
                        {"regularity", reg.to_json(p)}});
    if (!v.is_holds()) {
      nlohmann::json detail = v.detail();
      if (v.is_fails() && detail.contains("witness")) detail = detail["witness"];
      detail["bond"] = i + 1;
      v = v.is_fails() ? Verdict::fails(detail) : Verdict::inconclusive(v.reason(), detail);
    }
    verdict = conjoin(verdict, v);
  }
  return {"II", verdict, per_bond};
}

ConditionResult check_lipschitz(const Tower& t) {
  auto constants = nlohmann::json::array();
  for (std::size_t i = 0; i < t.bonds().size(); ++i) {
    const auto c = lipschitz_constant(t.bond(i), t.scale(i + 1), t.scale(i));
    constants.push_back({{"bond", i + 1}, {"constant", rational_string(c.value)}, {"at_most_one", c.value <= 1}});
  }
  return {"B", Verdict::holds({{"note", "computed constants feed the summability check (E)"}}), {{"constants", constants}}};
}

ConditionResult check_covers(const Tower& t) {
  auto kinds = nlohmann::json::array();
  for (auto k : t.covers()) kinds.push_back(k == StarCover::O ? "open, finite" : "closed, finite");
  return {"C", Verdict::holds(), {{"covers", kinds}}};
}

ConditionResult check_pullbacks(const Tower& t, int n, const Budgets& budgets) {
  auto levels = nlohmann::json::array();
  Verdict verdict = Verdict::holds();
  for (std::size_t i = 0; i < t.bonds().size(); ++i) {
    const auto pulled = pullback_cover(t.bond(i), star_cover(t.level(i), t.cover_kind(i)));
    const auto nv = nerve(pulled, budgets.nerve);
    nlohmann::json entry{{"bond", i + 1}, {"cover", to_string(t.cover_kind(i))}};
    if (!nv.verdict.is_holds()) {
      entry["verdict"] = nv.verdict.to_json();
      verdict = conjoin(verdict, Verdict::inconclusive(nv.verdict.reason(), {{"bond", i + 1}}));
      levels.push_back(entry);
      continue;
    }
    auto failures = nlohmann::json::array();
    Verdict level = Verdict::holds();
    for (const auto& subset : nv.simplices) {
      const auto model = intersection_model(pulled, subset);
      const auto v = k_connected_verdict(*model, n, budgets);
      if (v.is_fails()) {
        nlohmann::json w{{"bond", i + 1}, {"subset", subset_json(pulled, subset)}, {"detail", v.detail()}};
        w["H1"] = describe(homology(*model, 1));
        failures.push_back(w);
        level = conjoin(level, Verdict::fails(w));
      } else if (v.is_inconclusive()) {
        level = conjoin(level, Verdict::inconclusive(v.reason(), {{"bond", i + 1}, {"subset", subset_json(pulled, subset)}}));
      }
    }
    entry["intersections"] = nv.simplices.size();
    entry["failures"] = failures;
    entry["verdict"] = level.to_json();
    levels.push_back(entry);
    verdict = conjoin(verdict, level);
  }
  return {"D", verdict, levels};
}

ConditionResult check_summability(const Tower& t) {
  const std::size_t m_count = t.size();
  std::vector<Rational> meshes;
  for (std::size_t m = 0; m < m_count; ++m) meshes.push_back(mesh(star_cover(t.level(m), t.cover_kind(m)), t.scale(m)).value);
  auto rows = nlohmann::json::array();
  std::vector<Rational> last_terms, sums;
  for (std::size_t k = 0; k < m_count; ++k) {
    std::vector<Rational> terms;
    Rational sum = 0;
    for (std::size_t m = k; m < m_count; ++m) {
      terms.push_back(t.projection_lipschitz(m, k) * meshes[m]);
      sum += terms.back();
    }
    rows.push_back({{"k", k + 1}, {"terms", rationals_json(terms)}, {"partial_sum", rational_string(sum)}});
    last_terms.push_back(terms.back());
    sums.push_back(sum);
  }
  const int d = t.max_dimension();
  Rational ratio = 0;
  for (std::size_t i = 0; i + 1 < m_count; ++i) ratio = std::max(ratio, Rational(t.scale(i + 1) / t.scale(i)));
  const Rational q = ratio * Rational(d, d + 1);
  nlohmann::json data{{"meshes", rationals_json(meshes)}, {"rows", rows}, {"dimension", d},
                      {"scale_ratio", rational_string(ratio)}, {"ratio_bound", rational_string(q)}};
  if (q >= 1) {
    return {"E", Verdict::inconclusive("no geometric tail bound: scale ratio times D/(D+1) is at least 1"), data};
  }
  std::vector<Rational> bounds;
  for (std::size_t k = 0; k < m_count; ++k) bounds.push_back(sums[k] + last_terms[k] * q / (1 - q));
  data["tail_bounds"] = rationals_json(bounds);
  return {"E", Verdict::holds(), data};
}

ConditionResult check_homology(const Tower& t, int n, const std::vector<bool>& bond_ok) {
  auto rows = nlohmann::json::array();
  Verdict verdict = Verdict::holds();
  for (std::size_t i = 0; i < t.bonds().size(); ++i) {
    if (!bond_ok[i]) continue;
    for (int k = 0; k < n; ++k) {
      const auto h = induced_homology_map(t.bond(i), k);
      rows.push_back({{"bond", i + 1}, {"degree", k}, {"iso", h.iso.to_json()},
                      {"source", describe(h.source)}, {"target", describe(h.target)}});
      if (!h.iso.is_holds()) {
        nlohmann::json w{{"bond", i + 1}, {"degree", k}, {"detail", h.iso.detail()}};
        verdict = conjoin(verdict, h.iso.is_fails() ? Verdict::fails(w) : Verdict::inconclusive(h.iso.reason(), w));
      }
    }
  }
  return {"homology", verdict, rows};
}

}  // namespace

TowerCertificate verify_tower(const Tower& tower, int n, const Budgets& budgets) {
  if (n < 1) throw Error(ErrorCode::DomainError, "n must be at least 1");
  TowerCertificate cert;
  cert.n = n;
  cert.depth = tower.size();
  std::vector<bool> bond_ok;
  cert.conditions.push_back(check_dimension(tower));
  cert.conditions.push_back(check_bonds(tower, n, budgets, bond_ok));
  cert.conditions.push_back({"A", Verdict::holds(), {{"note", "finite complexes are compact"}}});
  cert.conditions.push_back(check_lipschitz(tower));
  cert.conditions.push_back(check_covers(tower));
  cert.conditions.push_back(check_pullbacks(tower, n, budgets));
  cert.conditions.push_back(check_summability(tower));
  cert.conditions.push_back(check_homology(tower, n, bond_ok));

  std::optional<Verdict> worst_fail, worst_inc;
  for (const auto& c : cert.conditions) {
    if (c.verdict.is_fails() && !worst_fail) {
      nlohmann::json w = c.verdict.detail();
      w["condition"] = c.name;
      worst_fail = Verdict::fails(w);
    } else if (c.verdict.is_inconclusive() && !worst_inc) {
      nlohmann::json w = c.verdict.detail();
      if (w.is_null()) w = nlohmann::json::object();
      w["condition"] = c.name;
      worst_inc = Verdict::inconclusive(c.verdict.reason(), w);
    }
  }
  if (worst_fail) {
    cert.conclusion = *worst_fail;
  } else if (worst_inc) {
    cert.conclusion = *worst_inc;
  } else {
    cert.conclusion = Verdict::holds(
        {{"statement", "every bond of this " + std::to_string(tower.size()) +
                           "-level truncation is quasi-simplicial, surjective and " + std::to_string(n) +
                           "-regular; pulled-back cover intersections are k-connected for k < n; bonds induce "
                           "homology isomorphisms below n. Finite-stage evidence that the limit is locally "
                           "k-connected for each k < n."}});
  }
  return cert;
}

Tower restrict_tower(const Tower& tower, std::size_t m, const Subcomplex& a) {
  if (m >= tower.size()) throw Error(ErrorCode::DomainError, "restriction level out of range");
  if (!same_complex(a.parent(), tower.level(m))) throw Error(ErrorCode::NotSubcomplex, "A is not a subcomplex of the level");
  if (a.empty()) throw Error(ErrorCode::DomainError, "cannot restrict to an empty subcomplex");
  std::vector<ComplexPtr> levels{a.to_complex()};
  std::vector<QSMap> bonds;
  Subcomplex current = a;
  for (std::size_t j = m; j + 1 < tower.size(); ++j) {
    const auto& p = tower.bond(j);
    const auto next = preimage(p.vertex_map(), subdivided(current, p.subdivision()));
    if (next.empty()) throw Error(ErrorCode::DomainError, "restriction has an empty level", std::to_string(j + 2));
    auto source = next.to_complex();
    std::map<VertexName, VertexName> images;
    for (auto v : next.vertices()) {
      images.emplace(p.source()->name(v), p.subdivision()->name(p.vertex_map().image(v)));
    }
    bonds.push_back(QSMap::from_names(source, levels.back(), images));
    levels.push_back(bonds.back().source());
    current = next;
  }
  std::vector<Rational> scales(tower.scales().begin() + static_cast<std::ptrdiff_t>(m), tower.scales().end());
  std::vector<StarCover> covers(tower.covers().begin() + static_cast<std::ptrdiff_t>(m), tower.covers().end());
  return Tower(std::move(levels), std::move(bonds), std::move(scales), std::move(covers));
}

PulledBackCover pullback_star_cover(const Tower& tower, std::size_t i, std::size_t m, StarCover kind, int n,
                                    const Budgets& budgets) {
  if (i > m || m >= tower.size()) throw Error(ErrorCode::DomainError, "cover levels out of range");
  IndexedCover cover = star_cover(tower.level(i), kind);
  for (std::size_t j = i; j < m; ++j) cover = pullback_cover(tower.bond(j), cover);
  PulledBackCover out{cover, {}, {}, Verdict::holds()};
  const auto nv = nerve(cover, budgets.nerve);
  if (!nv.verdict.is_holds()) {
    out.aggregate = nv.verdict;
    return out;
  }
  for (const auto& subset : nv.simplices) {
    const auto model = intersection_model(cover, subset);
    auto v = k_connected_verdict(*model, n, budgets);
    if (v.is_fails()) {
      nlohmann::json w{{"subset", subset_json(cover, subset)}, {"detail", v.detail()}, {"H1", describe(homology(*model, 1))}};
      v = Verdict::fails(w);
    }
    out.aggregate = conjoin(out.aggregate, v);
    out.subsets.push_back(subset);
    out.verdicts.push_back(std::move(v));
  }
  return out;
}

namespace {

bool cellular(const PLMap& f, const IndexedCover& cover) {
  for (const auto& sigma : f.domain()->maximal()) {
    Simplex all;
    for (auto v : sigma) all = simplex_union(all, in_ambient(f.image(v), cover).support());
    if (!cover.ambient()->contains(all)) return false;
  }
  return true;
}

struct SplitDomain {
  PLMap f;
  Subcomplex a;
  std::optional<PLMap> g0;
  std::vector<Point> positions;
  std::size_t splits = 0;
};

// Splits domain edges where f_v - f_w changes sign, for every pair v, w of
// adjacent target vertices. Afterwards the coordinates of f keep one weak
// order on each simplex, so each simplex maps into a simplex of the target's
// subdivision. Splits made for one pair never create sign changes for a pair
// already handled: a split point's values lie between its endpoints'.
SplitDomain split_along_orders(const PLMap& f, const Subcomplex& a, const std::optional<PLMap>& g0,
                               const std::vector<Point>& positions) {
  const auto& domain = f.domain();
  std::vector<VertexName> names = domain->names();
  std::vector<Point> images = f.images();
  std::vector<Point> pos = positions;
  std::vector<Simplex> tops = domain->maximal();
  std::vector<Simplex> a_tops = a.simplices().maximal();
  std::map<VertexId, Point> g_images;
  for (auto v : a.vertices()) g_images.emplace(v, g0->image(g0->domain()->id(names[v])));

  std::set<std::pair<VertexId, VertexId>> pairs;
  for (const auto& t : f.target()->maximal()) {
    for (std::size_t i = 0; i < t.size(); ++i) {
      for (std::size_t j = i + 1; j < t.size(); ++j) pairs.emplace(t[i], t[j]);
    }
  }
  auto replace_edge = [](std::vector<Simplex>& simplices, VertexId x, VertexId y, VertexId p) {
    std::vector<Simplex> out;
    for (const auto& s : simplices) {
      if (!std::binary_search(s.begin(), s.end(), x) || !std::binary_search(s.begin(), s.end(), y)) {
        out.push_back(s);
        continue;
      }
      for (auto drop : {x, y}) {
        Simplex t;
        for (auto v : s) {
          if (v != drop) t.push_back(v);
        }
        t.push_back(p);
        std::sort(t.begin(), t.end());
        out.push_back(std::move(t));
      }
    }
    simplices = std::move(out);
  };
  auto lerp = [](const Point& x, const Point& y, const Rational& t) {
    const std::vector<Point> pts{x, y};
    const std::vector<Rational> w{1 - t, t};
    return affine_combination(pts, w);
  };

  std::size_t splits = 0;
  for (const auto& [v, w] : pairs) {
    auto value = [&](VertexId x) { return Rational(images[x].coordinate(v) - images[x].coordinate(w)); };
    for (;;) {
      std::optional<std::pair<VertexId, VertexId>> crossing;
      for (const auto& s : tops) {
        for (std::size_t i = 0; i < s.size() && !crossing; ++i) {
          for (std::size_t j = i + 1; j < s.size() && !crossing; ++j) {
            if (value(s[i]) * value(s[j]) < 0) crossing = std::make_pair(s[i], s[j]);
          }
        }
        if (crossing) break;
      }
      if (!crossing) break;
      const auto [x, y] = *crossing;
      const Rational t = value(x) / (value(x) - value(y));
      const auto p = static_cast<VertexId>(names.size());
      names.push_back(VertexName::list({names[x], names[y], VertexName("t=" + format_rational(t))}));
      images.push_back(lerp(images[x], images[y], t));
      pos.push_back(lerp(pos[x], pos[y], t));
      bool in_a = false;
      for (const auto& s : a_tops) {
        in_a = in_a || (std::binary_search(s.begin(), s.end(), x) && std::binary_search(s.begin(), s.end(), y));
      }
      if (in_a) g_images.emplace(p, lerp(g_images.at(x), g_images.at(y), t));
      replace_edge(tops, x, y, p);
      replace_edge(a_tops, x, y, p);
      ++splits;
    }
  }
  if (splits == 0) return {f, a, g0, positions, 0};

  std::vector<std::size_t> order(names.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto l, auto r) { return names[l] < names[r]; });
  std::vector<VertexId> renumber(names.size());
  std::vector<VertexName> sorted_names;
  std::vector<Point> sorted_images, sorted_positions;
  for (std::size_t i = 0; i < order.size(); ++i) {
    renumber[order[i]] = static_cast<VertexId>(i);
    sorted_names.push_back(names[order[i]]);
    sorted_images.push_back(images[order[i]]);
    sorted_positions.push_back(pos[order[i]]);
  }
  auto closed = [&](const std::vector<Simplex>& simplices) {
    SimplexSet set;
    for (const auto& s : simplices) {
      Simplex t;
      for (auto v : s) t.push_back(renumber[v]);
      std::sort(t.begin(), t.end());
      set.insert_closed(t);
    }
    set.finalize();
    return set;
  };
  auto new_domain = make_complex(sorted_names, closed(tops));
  Subcomplex new_a(new_domain, closed(a_tops));
  std::optional<PLMap> new_g0;
  if (g0) {
    const auto ac = new_a.to_complex();
    std::vector<Point> gi;
    for (VertexId v = 0; v < ac->vertex_count(); ++v) {
      const auto old = order[new_domain->id(ac->name(v))];
      gi.push_back(g_images.at(static_cast<VertexId>(old)));
    }
    new_g0 = PLMap(ac, g0->target(), std::move(gi));
  }
  return {PLMap(new_domain, f.target(), std::move(sorted_images)), std::move(new_a), std::move(new_g0),
          std::move(sorted_positions), splits};
}

}  // namespace

LiftResult single_lift(const QSMap& p, const IndexedCover& cover, const PLMap& f0, const Subcomplex& a0,
                       const std::optional<PLMap>& g0_in, const Budgets& budgets, int n) {
  if (cover.kind() != CoverKind::Closed) throw Error(ErrorCode::TypeMismatch, "lifting needs a closed cover");
  if (!same_complex(cover.space(), p.base())) throw Error(ErrorCode::ComplexMismatch, "cover does not live on the bond's base");
  if (!same_complex(f0.target(), p.base())) throw Error(ErrorCode::ComplexMismatch, "map does not land in the bond's base");
  if (!same_complex(a0.parent(), f0.domain())) throw Error(ErrorCode::ComplexMismatch, "A is not a subcomplex of the domain");
  if (!a0.empty() && !g0_in) throw Error(ErrorCode::InvalidInput, "a lift on A is required when A is non-empty");
  const auto& y = p.source();
  const int n_eff = std::max({n, f0.domain()->dimension(), 1});

  const auto pulled = pullback_cover(p, cover);
  const auto pulled_nerve = nerve(pulled, budgets.nerve);
  if (!pulled_nerve.verdict.is_holds()) {
    return {Verdict::inconclusive(pulled_nerve.verdict.reason(), {{"condition", "D"}}), std::nullopt, nullptr};
  }
  for (const auto& subset : pulled_nerve.simplices) {
    const auto model = intersection_model(pulled, subset);
    const auto v = ae_verdict(*model, n_eff, budgets);
    if (v.is_holds()) continue;
    nlohmann::json d{{"condition", "D"}, {"n", n_eff}, {"subset", subset_json(pulled, subset)}};
    if (v.is_fails()) d["H1"] = describe(homology(*model, 1));
    return {Verdict::inconclusive("pull-back cover intersection is not AE(n) (condition D)", d), std::nullopt, nullptr};
  }

  PLMap f = f0;
  Subcomplex a = a0;
  std::optional<PLMap> g0 = g0_in;
  std::vector<Point> positions;
  for (VertexId v = 0; v < f0.domain()->vertex_count(); ++v) positions.push_back(Point::vertex(f0.domain(), v));
  std::size_t splits = 0;
  if (!same_complex(cover.ambient(), cover.space()) && !cellular(f, cover)) {
    auto s = split_along_orders(f, a, g0, positions);
    f = std::move(s.f);
    a = std::move(s.a);
    g0 = std::move(s.g0);
    positions = std::move(s.positions);
    splits = s.splits;
  }
  int subdivisions = 0;
  while (!cellular(f, cover)) {
    if (subdivisions == 3) {
      return {Verdict::inconclusive("map is not cellular for the cover after three subdivisions"), std::nullopt, nullptr};
    }
    auto finer = f.subdivided();
    std::vector<Point> next;
    for (VertexId v = 0; v < finer.domain()->vertex_count(); ++v) {
      const auto& c = finer.domain()->carrier(v);
      std::vector<Point> pts;
      for (auto w : c) pts.push_back(positions[w]);
      std::vector<Rational> wts(c.size(), Rational(1, static_cast<long>(c.size())));
      next.push_back(affine_combination(pts, wts));
    }
    a = subdivided(a, finer.domain());
    if (g0) g0 = g0->subdivided();
    f = std::move(finer);
    positions = std::move(next);
    ++subdivisions;
  }
  const auto& domain = f.domain();

  std::vector<SimplexSet> parts(cover.size());
  for (const auto& sigma : domain->simplices().all()) {
    Simplex all;
    for (auto v : sigma) all = simplex_union(all, in_ambient(f.image(v), cover).support());
    for (std::size_t j = 0; j < cover.size(); ++j) {
      if (cover.closed(j).contains(all)) parts[j].insert(sigma);
    }
  }
  std::vector<CoverElement> elements;
  for (auto& s : parts) {
    s.finalize();
    elements.emplace_back(Subcomplex(domain, std::move(s)));
  }
  std::vector<Subcomplex> targets;
  for (std::size_t j = 0; j < pulled.size(); ++j) targets.push_back(pulled.closed(j));
  const Carrier carrier(IndexedCover(domain, domain, CoverKind::Closed, cover.indices(), std::move(elements)), y,
                        std::move(targets));

  std::map<VertexId, Point> partial;
  for (auto v : a.vertices()) partial.emplace(v, on(y, g0->image(g0->domain()->id(domain->name(v)))));
  auto ext = extend_carried(PartialPLMap(domain, a, y, std::move(partial)), carrier, budgets.filler);
  if (!ext.verdict.is_holds()) return {ext.verdict, std::nullopt, nullptr};

  const auto& g = *ext.extension;
  const PLMap pg = g.map.then(p);
  const PLMap fr = restate(f, g.map.domain(), g.positions);
  const Verdict close = are_close(pg, fr, cover);
  nlohmann::json cert{{"closeness", close.to_json()}, {"subdivisions", subdivisions}, {"splits", splits},
                     {"extension", ext.verdict.detail()}};
  if (!close.is_holds()) return {Verdict::inconclusive("lift is not certified close", cert), std::nullopt, cert};

  std::vector<Point> base_positions;
  for (const auto& pos : g.positions) base_positions.push_back(push_position(pos, positions));
  return {Verdict::holds(cert), SubdividedMap{g.map, f0.domain(), std::move(base_positions)}, cert};
}

Verdict ThreadApprox::check(const Tower& tower) const {
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const Point down = tower.project(points[i + 1], i + 1, i);
    if (!(down.coordinates() == points[i].coordinates())) {
      return Verdict::fails({{"level", i + 1}, {"expected", point_json(points[i])}, {"projected", point_json(down)}});
    }
  }
  return Verdict::holds();
}

ThreadApprox ThreadApprox::from_top(const Tower& tower, const Point& top) {
  ThreadApprox out;
  const std::size_t m = tower.size() - 1;
  for (std::size_t i = 0; i <= m; ++i) out.points.push_back(tower.project(top, m, i));
  return out;
}

std::vector<PLMap> thread_maps(const Tower& tower, const PLMap& top) {
  if (!same_complex(top.target(), tower.level(tower.size() - 1))) {
    throw Error(ErrorCode::ComplexMismatch, "map does not land in the top level");
  }
  std::vector<PLMap> out(tower.size(), top);
  for (std::size_t i = tower.size() - 1; i > 0; --i) out[i - 1] = out[i].then(tower.bond(i - 1));
  return out;
}

nlohmann::json TowerLiftResult::to_json() const {
  auto stage_json = nlohmann::json::array();
  for (const auto& s : stages) stage_json.push_back({{"map", s.map.to_json()}, {"closeness", s.closeness.to_json()}});
  auto cauchy_json = nlohmann::json::array();
  for (const auto& c : cauchy) {
    cauchy_json.push_back({{"k", c.k + 1}, {"m", c.m + 1}, {"increment", rational_string(c.increment)},
                           {"lipschitz", rational_string(c.lipschitz)}, {"mesh", rational_string(c.mesh)},
                           {"bound", rational_string(c.bound)}});
  }
  return {{"verdict", verdict.to_json()}, {"stages", stage_json}, {"cauchy", cauchy_json}, {"tails", rationals_json(tails)}};
}

TowerLiftResult tower_lift(const Tower& tower, const PLMap& f1, const Subcomplex& a, const std::vector<PLMap>& g0,
                           std::size_t depth, const Budgets& budgets, int n) {
  if (depth < 1 || depth > tower.size()) throw Error(ErrorCode::DomainError, "lift depth out of range");
  if (!same_complex(f1.target(), tower.level(0))) throw Error(ErrorCode::ComplexMismatch, "map does not land in K_1");
  if (!same_complex(a.parent(), f1.domain())) throw Error(ErrorCode::ComplexMismatch, "A is not a subcomplex of the domain");
  if (f1.domain()->dimension() > 2) throw Error(ErrorCode::DomainError, "lifting is implemented for domains of dimension at most 2");
  const bool constrained = !a.empty();
  ComplexPtr a_complex;
  if (constrained) {
    if (g0.size() < depth) throw Error(ErrorCode::InvalidInput, "one map on A per lifted level required");
    a_complex = a.to_complex();
    for (std::size_t i = 0; i < depth; ++i) {
      if (!same_complex(g0[i].domain(), a_complex) || !same_complex(g0[i].target(), tower.level(i))) {
        throw Error(ErrorCode::ComplexMismatch, "map on A has the wrong domain or level", std::to_string(i + 1));
      }
      if (i + 1 < depth && !(g0[i + 1].then(tower.bond(i)).images() == g0[i].images())) {
        throw Error(ErrorCode::DomainError, "maps on A are not a thread", std::to_string(i + 1));
      }
    }
    for (auto v : a.vertices()) {
      if (!(f1.image(v) == g0[0].image(a_complex->id(f1.domain()->name(v))))) {
        throw Error(ErrorCode::DomainError, "f_1 does not agree with the lift on A", f1.domain()->name(v).to_string());
      }
    }
  }

  TowerLiftResult out;
  out.stages.push_back({SubdividedMap::trivial(f1), Verdict::holds()});
  std::vector<Point> in_x = out.stages.back().map.positions;  // current domain vertices in X
  Subcomplex a_cur = a;
  for (std::size_t m = 0; m + 1 < depth; ++m) {
    const PLMap& f = out.stages.back().map.map;
    std::optional<PLMap> g_on_a;
    if (constrained) {
      const auto ac = a_cur.to_complex();
      std::vector<Point> images;
      for (VertexId v = 0; v < ac->vertex_count(); ++v) {
        const Point x = in_x[f.domain()->id(ac->name(v))];
        images.push_back(g0[m + 1].evaluate(transfer(x, a_complex)));
      }
      g_on_a = PLMap(ac, tower.level(m + 1), std::move(images));
    }
    auto r = single_lift(tower.bond(m), cover_B(tower.level(m)), f, a_cur, g_on_a, budgets, n);
    if (!r.verdict.is_holds()) {
      nlohmann::json d = r.verdict.detail();
      if (d.is_null()) d = nlohmann::json::object();
      d["stage"] = m + 1;
      out.verdict = r.verdict.is_fails() ? Verdict::fails(d) : Verdict::inconclusive(r.verdict.reason(), d);
      return out;
    }
    const auto& lifted = *r.lift;
    std::vector<Point> next_x;
    for (const auto& pos : lifted.positions) next_x.push_back(push_position(pos, in_x));
    SimplexSet on_a;
    for (const auto& s : lifted.map.domain()->simplices().all()) {
      if (a_cur.contains(lifted.position_support(s))) on_a.insert(s);
    }
    on_a.finalize();
    a_cur = Subcomplex(lifted.map.domain(), std::move(on_a));
    in_x = std::move(next_x);
    out.stages.push_back({lifted, Verdict::holds(r.certificate)});
  }
  for (auto& p : in_x) p = on(f1.domain(), p);
  out.positions = in_x;

  // Every stage restated on the finest domain.
  const std::size_t last = out.stages.size() - 1;
  const auto& finest = out.stages[last].map.map.domain();
  std::vector<std::vector<Point>> at(out.stages.size());
  for (VertexId v = 0; v < finest->vertex_count(); ++v) at[last].push_back(Point::vertex(finest, v));
  for (std::size_t m = last; m > 0; --m) {
    for (const auto& x : at[m]) {
      const auto& pos = out.stages[m].map.positions;
      at[m - 1].push_back(push_position(Point(out.stages[m].map.map.domain(), x.coordinates()), pos));
    }
  }
  std::vector<Rational> meshes;
  for (std::size_t m = 0; m <= last; ++m) meshes.push_back(mesh(cover_B(tower.level(m)), tower.scale(m)).value);
  bool bounded = true;
  for (std::size_t k = 0; k <= last; ++k) {
    for (std::size_t m = k; m < last; ++m) {
      CauchyEntry e;
      e.k = k;
      e.m = m;
      for (std::size_t v = 0; v < at[last].size(); ++v) {
        const Point lo = tower.project(out.stages[m].map.map.evaluate(at[m][v]), m, k).with_scale(tower.scale(k));
        const Point hi = tower.project(out.stages[m + 1].map.map.evaluate(at[m + 1][v]), m + 1, k).with_scale(tower.scale(k));
        e.increment = std::max(e.increment, distance(lo, hi));
      }
      e.lipschitz = tower.projection_lipschitz(m, k);
      e.mesh = meshes[m];
      e.bound = e.lipschitz * e.mesh;
      bounded = bounded && e.increment <= e.bound;
      out.cauchy.push_back(std::move(e));
    }
  }
  out.tails.assign(last, 0);
  for (const auto& e : out.cauchy) {
    if (e.k != 0) continue;
    for (std::size_t m = 0; m <= e.m; ++m) out.tails[m] += e.bound;
  }
  out.verdict = bounded ? Verdict::holds({{"stages", out.stages.size()}})
                        : Verdict::fails({{"reason", "Cauchy increment exceeds its bound"}});
  return out;
}

namespace gen {

Tower subdivision_tower(const ComplexPtr& base, std::size_t levels) {
  if (levels < 1) throw Error(ErrorCode::DomainError, "a tower needs at least one level");
  std::vector<ComplexPtr> ks{base};
  std::vector<QSMap> bonds;
  for (std::size_t i = 1; i < levels; ++i) {
    bonds.push_back(QSMap::subdivision_identity(ks.back()));
    ks.push_back(bonds.back().source());
  }
  return Tower(std::move(ks), std::move(bonds));
}

Tower cylinder_tower() {
  auto p = cylinder_map();
  auto id = QSMap::subdivision_identity(p.source());
  std::vector<ComplexPtr> ks{p.base(), p.source(), id.source()};
  return Tower(std::move(ks), {p, id});
}

Tower random_tower(std::uint64_t seed, const ComplexPtr& base, std::size_t levels) {
  if (levels < 1) throw Error(ErrorCode::DomainError, "a tower needs at least one level");
  std::vector<ComplexPtr> ks{base};
  std::vector<QSMap> bonds;
  for (std::size_t i = 1; i < levels; ++i) {
    bonds.push_back(random_blowup(seed * 1000 + i, ks.back(), 2, true));
    ks.push_back(bonds.back().source());
  }
  return Tower(std::move(ks), std::move(bonds));
}

}  // namespace gen

}  // namespace polytower
