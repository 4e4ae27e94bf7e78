#include "doctest.h"
#include "test_support.hpp"

#include "polytower/generators.hpp"
#include "polytower/io.hpp"

#include <random>

using namespace polytower;
using namespace polytower::testing;
using polytower::io::json;

namespace {

std::string context_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.context();
  }
  return "<no error>";
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidInput;
}

}  // namespace

TEST_CASE("complex round trip") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 30; ++i) {
    const auto k = random_complex(rng, 7, 40);
    const auto j = io::complex_to_json(*k);
    const auto back = io::complex_from_json(io::parse(io::dump(j)));
    CHECK(*back == *k);
    CHECK(io::dump(io::complex_to_json(*back)) == io::dump(j));
  }
  const auto b = barycentric_subdivide(gen::simplex(2), 2);
  CHECK(*io::complex_from_json(io::complex_to_json(*b)) == *b);
}

TEST_CASE("complex parsing errors carry positions and fields") {
  CHECK(context_of([] { io::parse("{\n  \"maximal\": [[\"a\",]\n}", "k.json"); }) == "k.json:2:20");
  CHECK(context_of([] { io::parse("   \n", "e.json"); }) == "e.json");
  CHECK(context_of([] { io::complex_from_json(json::parse(R"({"maximal": [["a"], ["b", 3]]})")); }) == "/maximal/1/1");
  CHECK(context_of([] { io::complex_from_json(json::parse(R"({"vertices": ["a"]})")); }) == "/maximal");
  CHECK(code_of([] { io::complex_from_json(json::parse(R"({"maximal": [["a", "a"]]})")); }) == ErrorCode::DuplicateVertex);
  CHECK(code_of([] { io::complex_from_json(json::parse(R"({"maximal": [[]]})")); }) == ErrorCode::EmptySimplex);
  CHECK(code_of([] { io::complex_from_json(json::parse(R"({"vertices": ["a"], "maximal": [["a", "b"]]})")); }) ==
        ErrorCode::UnknownVertex);
  // isolated vertices come from "vertices"
  const auto k = io::complex_from_json(json::parse(R"({"vertices": ["a", "b", "z"], "maximal": [["a", "b"]]})"));
  CHECK(k->f_vector() == std::vector<std::size_t>{3, 1});
}

TEST_CASE("map round trip and subdivided targets") {
  const auto cyl = gen::cylinder_map();
  const auto j = io::map_to_json(cyl);
  CHECK(j["subdivide_target"] == true);
  const auto back = io::map_from_json(io::parse(io::dump(j)));
  REQUIRE(back.qs());
  CHECK(back.qs()->vertex_map().images() == cyl.vertex_map().images());
  CHECK(io::dump(io::map_to_json(*back.qs())) == io::dump(j));

  // atom shorthand for subdivision vertices
  auto short_form = j;
  short_form["vertex_images"]["b1"] = "u";
  CHECK(io::map_from_json(short_form).map.images() == cyl.vertex_map().images());

  auto unknown = j;
  unknown["vertex_images"]["b1"] = "w";
  CHECK(code_of([&] { io::map_from_json(unknown); }) == ErrorCode::UnknownVertex);
  auto missing = j;
  missing["vertex_images"].erase("b1");
  CHECK(code_of([&] { io::map_from_json(missing); }) == ErrorCode::InvalidInput);

  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto p = gen::random_blowup(seed, gen::simplex(2), 2, seed % 2 == 0);
    const auto r = io::map_from_json(io::map_to_json(p));
    CHECK(*r.map.source() == *p.source());
    CHECK(r.map.images() == p.vertex_map().images());
  }
}

TEST_CASE("cover round trip and star shorthand") {
  const auto k = gen::simplex(2);
  for (const auto& c : {cover_O(k), cover_B(k)}) {
    const auto j = io::cover_to_json(c);
    const auto back = io::cover_from_json(io::parse(io::dump(j)));
    CHECK(back.kind() == c.kind());
    CHECK(back.indices() == c.indices());
    CHECK(covers_isomorphic(back, c).is_holds());
    CHECK(io::dump(io::cover_to_json(back)) == io::dump(j));
  }
  const json b = {{"ambient", io::complex_to_json(*barycentric_subdivide(k))},
                  {"space", io::complex_to_json(*k)},
                  {"kind", "closed"},
                  {"elements", {{"a", {{"star_of", "a"}}}, {"b", {{"star_of", "b"}}}, {"c", {{"star_of", "c"}}}}}};
  const auto parsed = io::cover_from_json(b);
  const auto reference = cover_B(k);
  for (std::size_t i = 0; i < 3; ++i) CHECK(parsed.closed(i).simplices() == reference.closed(i).simplices());
  CHECK(mesh(parsed).value == mesh(reference).value);

  json bad = b;
  bad["kind"] = "half-open";
  CHECK(context_of([&] { io::cover_from_json(bad); }) == "/kind");
}

TEST_CASE("tower round trip") {
  const auto t = gen::cylinder_tower();
  const auto j = io::tower_to_json(t);
  const auto back = io::tower_from_json(io::parse(io::dump(j)));
  CHECK(back.size() == t.size());
  CHECK(back.scales() == t.scales());
  CHECK(io::dump(io::tower_to_json(back)) == io::dump(j));

  auto no_scales = j;
  no_scales.erase("scales");
  CHECK(io::tower_from_json(no_scales, Rational(1, 3)).scale(1) == Rational(1, 9));

  auto mismatched = j;
  mismatched["levels"][0] = io::complex_to_json(*gen::simplex(2));
  CHECK(code_of([&] { io::tower_from_json(mismatched); }) == ErrorCode::ComplexMismatch);
  auto short_bonds = j;
  short_bonds["bonds"].erase(1);
  CHECK(context_of([&] { io::tower_from_json(short_bonds); }) == "/bonds");
}

TEST_CASE("lift jobs") {
  const auto t = gen::subdivision_tower(gen::simplex(1), 3);
  auto job = json::parse(R"({
    "domain": {"maximal": [["x", "y"]]},
    "map": {"x": "a", "y": {"a": "1/2", "b": "1/2"}},
    "A": [["x"]],
    "thread": {"x": [["a"]]}
  })");
  job["tower"] = io::tower_to_json(t);
  const auto parsed = io::lift_job_from_json(job);
  CHECK(parsed.depth == 3);
  CHECK(parsed.g0.size() == 3);
  CHECK(parsed.f1.image(1).coordinate(0) == Rational(1, 2));
  const auto r = tower_lift(parsed.tower, parsed.f1, parsed.a, parsed.g0, parsed.depth);
  CHECK(r.verdict.is_holds());

  auto bad = job;
  bad["map"]["y"] = json::parse(R"({"a": "1/2", "b": "1/3"})");
  CHECK(code_of([&] { io::lift_job_from_json(bad); }) == ErrorCode::DomainError);
  CHECK(context_of([&] { io::lift_job_from_json(bad); }).rfind("/map/y", 0) == 0);
}
