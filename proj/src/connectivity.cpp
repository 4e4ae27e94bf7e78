#include "polytower/connectivity.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>

namespace polytower {

IntMatrix boundary_matrix(const Complex& complex, int k) {
  const auto& cols = complex.simplices(k);
  if (k == 0) return IntMatrix(0, cols.size());
  const auto& rows = complex.simplices(k - 1);
  IntMatrix m(rows.size(), cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) {
    const auto& s = cols[c];
    for (std::size_t i = 0; i < s.size(); ++i) {
      Simplex face;
      face.reserve(s.size() - 1);
      for (std::size_t j = 0; j < s.size(); ++j) {
        if (j != i) face.push_back(s[j]);
      }
      const auto it = std::lower_bound(rows.begin(), rows.end(), face);
      m(static_cast<std::size_t>(it - rows.begin()), c) = (i % 2 == 0) ? 1 : -1;
    }
  }
  return m;
}

HomologyGroup homology(const Complex& complex, int k, bool reduced) {
  if (k < 0) throw Error(ErrorCode::DomainError, "homology degree must be non-negative");
  HomologyGroup group;
  group.degree = k;
  const std::size_t chains = complex.simplices(k).size();
  if (chains == 0) return group;

  std::size_t rank_in = 0;
  if (k == 0) {
    rank_in = reduced ? 1 : 0;
  } else {
    rank_in = smith_normal_form(boundary_matrix(complex, k), false).rank();
  }
  std::size_t rank_out = 0;
  if (!complex.simplices(k + 1).empty()) {
    const auto smith = smith_normal_form(boundary_matrix(complex, k + 1), false);
    rank_out = smith.rank();
    for (const auto& d : smith.invariants) {
      if (d > 1) group.torsion.push_back(d);
    }
  }
  group.betti = Integer(chains) - Integer(rank_in) - Integer(rank_out);
  return group;
}

std::vector<HomologyGroup> homology_all(const Complex& complex, bool reduced) {
  std::vector<HomologyGroup> out;
  for (int k = 0; k <= complex.dimension(); ++k) out.push_back(homology(complex, k, reduced));
  return out;
}

std::string describe(const HomologyGroup& group) {
  if (group.is_zero()) return "0";
  std::string text;
  if (group.betti == 1) {
    text = "Z";
  } else if (group.betti > 1) {
    text = "Z^" + group.betti.str();
  }
  for (const auto& t : group.torsion) {
    if (!text.empty()) text += " + ";
    text += "Z/" + t.str();
  }
  return text;
}

// ---------------------------------------------------------------------------
// connectivity

namespace {

std::vector<std::vector<VertexId>> adjacency(const Complex& complex) {
  std::vector<std::vector<VertexId>> adj(complex.vertex_count());
  for (const auto& e : complex.simplices(1)) {
    adj[e[0]].push_back(e[1]);
    adj[e[1]].push_back(e[0]);
  }
  for (auto& list : adj) std::sort(list.begin(), list.end());
  return adj;
}

}  // namespace

std::vector<std::vector<VertexId>> connected_components(const Complex& complex) {
  const std::size_t n = complex.vertex_count();
  std::vector<VertexId> parent(n);
  std::iota(parent.begin(), parent.end(), VertexId{0});
  auto find = [&](VertexId v) {
    while (parent[v] != v) {
      parent[v] = parent[parent[v]];
      v = parent[v];
    }
    return v;
  };
  for (const auto& e : complex.simplices(1)) {
    const VertexId a = find(e[0]);
    const VertexId b = find(e[1]);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::map<VertexId, std::vector<VertexId>> groups;
  for (VertexId v = 0; v < n; ++v) groups[find(v)].push_back(v);
  std::vector<std::vector<VertexId>> out;
  for (auto& [root, members] : groups) out.push_back(std::move(members));
  return out;
}

Verdict is_connected(const Complex& complex) {
  if (complex.vertex_count() == 0) return Verdict::fails({{"empty", true}});
  const auto components = connected_components(complex);
  if (components.size() == 1) return Verdict::holds();
  return Verdict::fails({{"components", components.size()},
                         {"representatives",
                          {complex.name(components[0][0]).to_string(),
                           complex.name(components[1][0]).to_string()}}});
}

// ---------------------------------------------------------------------------
// fundamental group

Pi1Presentation pi1_presentation(const Complex& complex, VertexId basepoint) {
  const auto adj = adjacency(complex);
  std::vector<char> seen(complex.vertex_count(), 0);
  std::vector<Simplex> tree;
  std::deque<VertexId> queue{basepoint};
  seen[basepoint] = 1;
  while (!queue.empty()) {
    const VertexId v = queue.front();
    queue.pop_front();
    for (auto w : adj[v]) {
      if (seen[w]) continue;
      seen[w] = 1;
      tree.push_back({std::min(v, w), std::max(v, w)});
      queue.push_back(w);
    }
  }
  std::sort(tree.begin(), tree.end());

  Pi1Presentation out;
  out.basepoint = basepoint;
  std::map<Simplex, int> letter;
  for (const auto& e : complex.simplices(1)) {
    if (!seen[e[0]] || std::binary_search(tree.begin(), tree.end(), e)) continue;
    out.generators.push_back(e);
    letter.emplace(e, static_cast<int>(out.generators.size()));
  }
  auto edge_letter = [&](VertexId a, VertexId b) {
    auto it = letter.find(Simplex{a, b});
    return it == letter.end() ? 0 : it->second;
  };
  for (const auto& t : complex.simplices(2)) {
    if (!seen[t[0]]) continue;
    std::vector<int> word;
    if (int l = edge_letter(t[0], t[1])) word.push_back(l);
    if (int l = edge_letter(t[1], t[2])) word.push_back(l);
    if (int l = edge_letter(t[0], t[2])) word.push_back(-l);
    out.relators.push_back(std::move(word));
  }
  return out;
}

namespace {

void free_reduce(std::vector<int>& word) {
  std::vector<int> out;
  for (int x : word) {
    if (!out.empty() && out.back() == -x) {
      out.pop_back();
    } else {
      out.push_back(x);
    }
  }
  // cyclic reduction
  std::size_t lo = 0;
  std::size_t hi = out.size();
  while (hi - lo >= 2 && out[lo] == -out[hi - 1]) {
    ++lo;
    --hi;
  }
  word.assign(out.begin() + static_cast<std::ptrdiff_t>(lo), out.begin() + static_cast<std::ptrdiff_t>(hi));
}

std::vector<int> inverse(const std::vector<int>& word) {
  std::vector<int> out(word.rbegin(), word.rend());
  for (auto& x : out) x = -x;
  return out;
}

}  // namespace

TietzeOutcome simplify(Pi1Presentation& presentation, std::uint64_t budget) {
  auto& relators = presentation.relators;
  std::vector<char> alive(presentation.generators.size() + 1, 1);
  alive[0] = 0;
  TietzeOutcome outcome;

  auto charge = [&](std::uint64_t cost) {
    outcome.steps += cost;
    if (outcome.steps > budget) outcome.budget_exhausted = true;
    return !outcome.budget_exhausted;
  };

  for (;;) {
    for (auto& r : relators) free_reduce(r);
    std::erase_if(relators, [](const auto& r) { return r.empty(); });

    // A relator of length one kills its generator.
    auto single = std::find_if(relators.begin(), relators.end(), [](const auto& r) { return r.size() == 1; });
    if (single != relators.end()) {
      const int g = std::abs((*single)[0]);
      std::uint64_t touched = 1;
      for (auto& r : relators) {
        const auto before = r.size();
        std::erase_if(r, [g](int x) { return std::abs(x) == g; });
        touched += before - r.size();
      }
      alive[static_cast<std::size_t>(g)] = 0;
      if (!charge(touched)) break;
      continue;
    }

    // Eliminate a generator occurring exactly once in some relator.
    std::size_t best_relator = relators.size();
    int best_generator = 0;
    for (std::size_t i = 0; i < relators.size(); ++i) {
      std::map<int, int> counts;
      for (int x : relators[i]) ++counts[std::abs(x)];
      for (const auto& [g, count] : counts) {
        if (count != 1) continue;
        if (best_relator == relators.size() || relators[i].size() < relators[best_relator].size()) {
          best_relator = i;
          best_generator = g;
        }
        break;
      }
    }
    if (best_relator == relators.size()) break;

    std::vector<int> r = relators[best_relator];
    const auto pos = static_cast<std::size_t>(
        std::find_if(r.begin(), r.end(), [&](int x) { return std::abs(x) == best_generator; }) - r.begin());
    std::rotate(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(pos), r.end());
    const bool positive = r[0] > 0;
    const std::vector<int> rest(r.begin() + 1, r.end());
    // g^e * rest = 1, so g = rest^-1 when e = +1 and g = rest when e = -1.
    const std::vector<int> replacement = positive ? inverse(rest) : rest;
    const std::vector<int> replacement_inv = inverse(replacement);
    relators.erase(relators.begin() + static_cast<std::ptrdiff_t>(best_relator));
    std::uint64_t touched = 1;
    for (auto& word : relators) {
      std::vector<int> next;
      for (int x : word) {
        if (std::abs(x) != best_generator) {
          next.push_back(x);
          continue;
        }
        const auto& piece = x > 0 ? replacement : replacement_inv;
        next.insert(next.end(), piece.begin(), piece.end());
        touched += piece.size();
      }
      word = std::move(next);
    }
    alive[static_cast<std::size_t>(best_generator)] = 0;
    if (!charge(touched)) break;
  }
  outcome.generators_left = static_cast<std::size_t>(std::count(alive.begin(), alive.end(), 1));
  outcome.relators_left = relators.size();
  return outcome;
}

Verdict pi1_verdict(const Complex& complex, std::optional<VertexId> basepoint, std::uint64_t budget) {
  if (complex.vertex_count() == 0) return Verdict::fails({{"empty", true}});
  std::vector<std::vector<VertexId>> components = connected_components(complex);
  if (basepoint) {
    std::erase_if(components, [&](const auto& c) { return !std::binary_search(c.begin(), c.end(), *basepoint); });
  }
  Verdict result = Verdict::holds();
  nlohmann::json evidence = nlohmann::json::array();
  for (const auto& component : components) {
    const Subcomplex piece = induced_subcomplex(std::make_shared<Complex>(complex), component);
    const ComplexPtr sub = piece.to_complex();
    const VertexId root = basepoint ? sub->id(complex.name(*basepoint)) : VertexId{0};
    const auto h1 = homology(*sub, 1);
    if (!h1.is_zero()) {
      return Verdict::fails({{"invariant", "H1"},
                             {"degree", 1},
                             {"group", describe(h1)},
                             {"basepoint", sub->name(root).to_string()}});
    }
    auto presentation = pi1_presentation(*sub, root);
    const std::size_t generators = presentation.generators.size();
    const auto outcome = simplify(presentation, budget);
    nlohmann::json entry{{"basepoint", sub->name(root).to_string()},
                         {"generators", generators},
                         {"steps", outcome.steps}};
    if (outcome.generators_left == 0) {
      evidence.push_back(entry);
      continue;
    }
    entry["generators_left"] = outcome.generators_left;
    entry["relators_left"] = outcome.relators_left;
    result = conjoin(result, Verdict::inconclusive(
                                 outcome.budget_exhausted ? "pi1 budget exhausted" : "presentation not simplified",
                                 entry));
  }
  if (result.is_holds()) return Verdict::holds({{"components", evidence}});
  return result;
}

std::optional<VertexId> cone_apex(const Complex& complex) {
  if (complex.vertex_count() == 0) return std::nullopt;
  for (VertexId v = 0; v < complex.vertex_count(); ++v) {
    const bool apex = std::all_of(complex.maximal().begin(), complex.maximal().end(),
                                  [v](const Simplex& s) { return std::binary_search(s.begin(), s.end(), v); });
    if (apex) return v;
  }
  return std::nullopt;
}

Verdict k_connected_verdict(const Complex& complex, int n, const Budgets& budgets) {
  if (n < 1) throw Error(ErrorCode::DomainError, "n must be at least 1");
  if (complex.vertex_count() == 0) return Verdict::fails({{"invariant", "nonempty"}, {"empty", true}});
  const Verdict connected = is_connected(complex);
  if (connected.is_fails()) {
    nlohmann::json witness = connected.detail();
    witness["invariant"] = "connected";
    return Verdict::fails(witness);
  }
  if (auto apex = cone_apex(complex)) {
    return Verdict::holds({{"cone_apex", complex.name(*apex).to_string()}});
  }
  Verdict result = Verdict::holds();
  if (n >= 2) {
    result = conjoin(result, pi1_verdict(complex, std::nullopt, budgets.pi1));
    if (result.is_fails()) return result;
  }
  for (int k = 2; k < n; ++k) {
    const auto group = homology(complex, k);
    if (!group.is_zero()) {
      return Verdict::fails({{"invariant", "H" + std::to_string(k)}, {"degree", k}, {"group", describe(group)}});
    }
  }
  return result;
}

Verdict ae_verdict(const Complex& complex, int n, const Budgets& budgets) {
  const Verdict base = k_connected_verdict(complex, n, budgets);
  if (!base.is_holds()) return base;
  nlohmann::json evidence = base.detail().is_null() ? nlohmann::json::object() : base.detail();
  evidence["rule"] = "finite polyhedron, k-connected for k < n";
  return Verdict::holds(evidence);
}

}  // namespace polytower
