#pragma once

// Integral simplicial homology, edge-path presentations of the fundamental
// group, and the three-valued k-connectedness / AE(n) verdicts built from them.

#include "polytower/complex.hpp"
#include "polytower/integer_matrix.hpp"
#include "polytower/verdict.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace polytower {

struct Budgets {
  std::uint64_t pi1 = 10'000;        // Tietze rewrite steps
  std::uint64_t filler = 10'000;     // 2-cell filler search states
  std::uint64_t nerve = 100'000;     // index subsets examined per nerve
};

/// Boundary map from k-simplices (columns) to (k-1)-simplices (rows), with
/// the orientation induced by the vertex order. Degree 0 gives a 0 x n_0
/// matrix.
IntMatrix boundary_matrix(const Complex& complex, int k);

struct HomologyGroup {
  int degree = 0;
  Integer betti = 0;
  std::vector<Integer> torsion;  // each >= 2, each dividing the next
  bool is_zero() const { return betti == 0 && torsion.empty(); }
  friend bool operator==(const HomologyGroup&, const HomologyGroup&) = default;
};

/// H_k(K; Z) via Smith normal form. `reduced` only changes degree 0 (and
/// the empty complex). Throws DomainError for k < 0.
HomologyGroup homology(const Complex& complex, int k, bool reduced = false);

/// H_0 .. H_dim.
std::vector<HomologyGroup> homology_all(const Complex& complex, bool reduced = false);

std::string describe(const HomologyGroup& group);  // "Z^2 + Z/2", "0"

/// Union-find components of the 1-skeleton; each is a sorted vertex list.
std::vector<std::vector<VertexId>> connected_components(const Complex& complex);

/// Holds for a non-empty connected complex; Fails carries one vertex from
/// each of two components, or {"empty": true}.
Verdict is_connected(const Complex& complex);

/// Generators are the 1-skeleton edges outside a BFS spanning tree; one
/// relator per triangle. Letters are +-(generator index + 1).
struct Pi1Presentation {
  VertexId basepoint = 0;
  std::vector<Simplex> generators;
  std::vector<std::vector<int>> relators;
};

Pi1Presentation pi1_presentation(const Complex& complex, VertexId basepoint);

struct TietzeOutcome {
  std::size_t generators_left = 0;
  std::size_t relators_left = 0;
  std::uint64_t steps = 0;
  bool budget_exhausted = false;
};

/// Bounded Tietze simplification (free/cyclic reduction, deletion of
/// generators killed by a relator, elimination of generators occurring once).
TietzeOutcome simplify(Pi1Presentation& presentation, std::uint64_t budget);

/// Holds when simplification empties the presentation, Fails when H_1 of
/// the component is non-zero, otherwise Inconclusive. Without a basepoint
/// every component is checked and the verdicts conjoined.
Verdict pi1_verdict(const Complex& complex, std::optional<VertexId> basepoint, std::uint64_t budget);

/// Vertex adjacent to every other vertex and lying in every maximal simplex.
std::optional<VertexId> cone_apex(const Complex& complex);

/// Connected (n >= 1), trivial pi_1 (n >= 2) and H_k = 0 for 2 <= k < n.
/// By Hurewicz this certifies k-connectedness for every k < n.
Verdict k_connected_verdict(const Complex& complex, int n, const Budgets& budgets = {});

/// A finite polyhedron is ANE(infinity), so by Dugundji's theorem it is AE(n)
/// exactly when it is k-connected for all k < n.
Verdict ae_verdict(const Complex& complex, int n, const Budgets& budgets = {});

}  // namespace polytower
