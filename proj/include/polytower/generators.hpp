#pragma once

// Standard example complexes and maps.

#include "polytower/complex.hpp"
#include "polytower/maps.hpp"

#include <cstdint>

namespace polytower::gen {

/// Vertex names a, b, c, ... (v0, v1, ... beyond 26 vertices).
std::vector<VertexName> vertex_names(int count);

/// The full d-simplex.
ComplexPtr simplex(int d);

/// Boundary of the (d+1)-simplex.
ComplexPtr sphere(int d);

/// Six-vertex triangulation of the projective plane.
ComplexPtr rp2();

/// Three stacked rings b, m, t of a 12-triangle cylinder, mapped onto the
/// edge [u, v]: bottom ring to [u], middle ring to the edge barycenter, top
/// ring to [v].
ComplexPtr cylinder();
ComplexPtr interval();  // edge [u, v]
QSMap cylinder_map();

/// Random quasi-simplicial map onto `base`: each vertex x of beta L gets
/// 1..max_copies copies, and every maximal chain of beta L contributes
/// simplices over copies of its vertices. With `join` the chain contributes
/// the single simplex on all copies (every preimage is then a simplex);
/// otherwise one or two simplices choosing one copy per vertex.
/// `drop` is the probability of leaving a chain out (non-surjective maps).
QSMap random_blowup(std::uint64_t seed, const ComplexPtr& base, int max_copies, bool join, double drop = 0.0);

}  // namespace polytower::gen
