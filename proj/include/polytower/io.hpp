#pragma once

// JSON file formats. Objects are written with sorted keys and rationals as
// "p/q" strings, so equal objects serialize to identical bytes.
//
//   complex: {"vertices": [name...], "maximal": [[name...]...]}
//   map:     {"source": <complex>, "target": <complex>,
//             "subdivide_target": bool, "vertex_images": {name: name}}
//   cover:   {"ambient": <complex>, "space": <complex>?, "kind": "open"|"closed",
//             "elements": {index: [[name...]...] | {"star_of": name}}}
//   tower:   {"levels": [<complex>...], "bonds": [<map>...],
//             "scales": ["p/q"...]?, "covers": ["O"|"B"...]?}
//   point:   {name: "p/q"}
//   lift job: {"tower": <tower>, "domain": <complex>, "map": {name: <point>},
//              "A": [[name...]...]?, "thread": {name: <point of top level>}?,
//              "depth": int?, "n": int?}
//
// A name is a string atom or a nested array of names. Where a name is an
// object key, list names are written as their compact JSON text.

#include "polytower/covers.hpp"
#include "polytower/maps.hpp"
#include "polytower/pl_map.hpp"
#include "polytower/tower.hpp"

#include "json.hpp"

#include <string>
#include <string_view>

namespace polytower::io {

using nlohmann::json;

/// Errors carry "<source>:<line>:<column>" in their context.
json parse(std::string_view text, const std::string& source = "<input>");
json read_file(const std::string& path);
/// Two-space indented text with a trailing newline.
std::string dump(const json& value);

VertexName name_from_json(const json& value, const std::string& field);
VertexName name_from_key(const std::string& key, const std::string& field);
std::string name_key(const VertexName& name);

json complex_to_json(const Complex& complex);
ComplexPtr complex_from_json(const json& value, const std::string& field = "");

/// subdivide_target: the file's target is the base L and images name
/// vertices of beta L.
struct MapFile {
  VertexMap map;
  bool subdivide_target = false;
  std::optional<QSMap> qs() const;
};
json map_to_json(const VertexMap& map, bool subdivide_target);
json map_to_json(const QSMap& map);
MapFile map_from_json(const json& value, const std::string& field = "");

json cover_to_json(const IndexedCover& cover);
IndexedCover cover_from_json(const json& value, const std::string& field = "");

json tower_to_json(const Tower& tower);
/// Missing scales default to scale_base^i for level i = 1, 2, ...
Tower tower_from_json(const json& value, const Rational& scale_base = Rational(1, 2), const std::string& field = "");

Point point_from_json(const json& value, const ComplexPtr& complex, const std::string& field);
json pl_map_to_json(const PLMap& map);

struct LiftJob {
  Tower tower;
  PLMap f1;
  Subcomplex a;
  std::vector<PLMap> g0;
  std::size_t depth;
  int n;
};
LiftJob lift_job_from_json(const json& value, const Rational& scale_base = Rational(1, 2));

}  // namespace polytower::io
