#pragma once

// Carriers from a closed cover of a domain to subcomplexes of a target,
// carried PL maps on recorded subdivisions, constructive extension over the
// 2-skeleton, and prism homotopies between close maps.

#include "polytower/connectivity.hpp"
#include "polytower/covers.hpp"
#include "polytower/pl_map.hpp"

#include <map>
#include <optional>
#include <vector>

namespace polytower {

/// `source` is a closed cover of its space (ambient == space); `images[i]`
/// is the subcomplex of `target` assigned to source element i.
struct Carrier {
  IndexedCover source;
  ComplexPtr target;
  std::vector<Subcomplex> images;

  Carrier(IndexedCover source, ComplexPtr target, std::vector<Subcomplex> images);
  const ComplexPtr& domain() const { return source.space(); }
};

/// Holds iff every index subset with non-empty source intersection has a
/// non-empty target intersection. Fails names the first offending subset.
Verdict validate_carrier(const Carrier& carrier, std::uint64_t budget = Budgets{}.nerve);

/// A PL map on the subcomplex `defined_on` of `domain`. Images of vertices
/// outside `defined_on` are absent.
class PartialPLMap {
 public:
  PartialPLMap(ComplexPtr domain, Subcomplex defined_on, ComplexPtr target, std::map<VertexId, Point> images);
  static PartialPLMap from(const PLMap& map);
  static PartialPLMap restrict(const PLMap& map, const Subcomplex& a);

  const ComplexPtr& domain() const { return domain_; }
  const Subcomplex& defined_on() const { return defined_on_; }
  const ComplexPtr& target() const { return target_; }
  const std::map<VertexId, Point>& images() const { return images_; }
  const Point& image(VertexId v) const;
  Simplex image_support(const Simplex& sigma) const;

 private:
  ComplexPtr domain_;
  Subcomplex defined_on_;
  ComplexPtr target_;
  std::map<VertexId, Point> images_;
};

/// A PL map on a subdivision of `base`: vertex v of map.domain() sits at
/// positions[v] in |base|, and each domain simplex lies in one simplex of base.
struct SubdividedMap {
  PLMap map;
  ComplexPtr base;
  std::vector<Point> positions;

  static SubdividedMap trivial(const PLMap& map);
  /// Smallest simplex of `base` containing the domain simplex.
  Simplex position_support(const Simplex& sigma) const;
  nlohmann::json to_json() const;
};

/// Restates `f` (a PL map on |base|) on the finer triangulation given by
/// `positions`.
PLMap restate(const PLMap& f, const ComplexPtr& finer, const std::vector<Point>& positions);

/// Fails with {"index", "simplex"} when some simplex of an element has its
/// image outside the assigned target subcomplex.
Verdict is_carried(const PartialPLMap& f, const Carrier& carrier);
Verdict is_carried(const SubdividedMap& f, const Carrier& carrier);

struct ExtensionResult {
  Verdict verdict = Verdict::holds();
  std::optional<SubdividedMap> extension;
};

/// Extends f over the whole domain (dimension at most 2) so that the result
/// is carried by `carrier`. Vertices go to the least vertex of the required
/// target intersection, edges follow BFS shortest paths, triangles are coned
/// to an apex or filled by a bounded loop-rewriting search. Fails when a
/// required intersection is empty or disconnected; Inconclusive (with the
/// cell list) when a 2-cell exhausts `filler_budget`.
ExtensionResult extend_carried(const PartialPLMap& f, const Carrier& carrier,
                               std::uint64_t filler_budget = Budgets{}.filler);

struct HomotopyResult {
  Verdict verdict = Verdict::holds();
  std::optional<SubdividedMap> homotopy;  // on a prism over the (subdivided) domain
};

/// Prism triangulation of X x [0,1]: vertices (v,0) named [v,"0"] style
/// atoms, simplices from the vertex order staircase.
struct Prism {
  ComplexPtr complex;
  std::vector<VertexId> bottom;  // by domain vertex
  std::vector<VertexId> top;
};
Prism prism(const ComplexPtr& domain);

/// U-homotopy between U-close maps: the affine map on the prism that is f
/// on the bottom and g on the top, with one witness element per prism
/// simplex. Never fabricates: Fails/Inconclusive from are_close propagate.
HomotopyResult close_maps_homotopy(const PLMap& f, const PLMap& g, const IndexedCover& cover);

}  // namespace polytower
