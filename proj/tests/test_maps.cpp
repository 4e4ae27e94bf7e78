#include "doctest.h"
#include "test_support.hpp"

#include "polytower/generators.hpp"
#include "polytower/maps.hpp"

using namespace polytower;
using namespace polytower::testing;

namespace {

std::map<VertexName, VertexName> names(const std::vector<std::pair<std::string, VertexName>>& table) {
  std::map<VertexName, VertexName> out;
  for (const auto& [k, v] : table) out[VertexName(k)] = v;
  return out;
}

// Independent membership test for |delta|: the support lies inside delta.
bool in_closed_simplex(const Point& x, const Simplex& delta) { return is_face(x.support(), delta); }

}  // namespace

TEST_CASE("simplicial checks") {
  auto tri = gen::simplex(2);
  CHECK(check_simplicial(VertexMap::identity(tri)).is_holds());

  auto edge = atoms({{"a", "b"}});
  auto points = atoms({{"u"}, {"v"}});
  const auto bad = check_simplicial(VertexMap::from_names(edge, points, names({{"a", VertexName("u")}, {"b", VertexName("v")}})));
  CHECK(bad.is_fails());
  CHECK(bad.detail()["simplex"] == nlohmann::json::array({"a", "b"}));
}

TEST_CASE("the cylinder map is quasi-simplicial") {
  const auto p = gen::cylinder_map();
  // Oracle: every triangle lies in one ring pair, so its image names are a
  // chain of faces of [u, v].
  const auto& k = *p.source();
  CHECK(k.f_vector() == std::vector<std::size_t>{9, 21, 12});
  for (const auto& tri : k.simplices(2)) {
    std::set<char> rings;
    for (auto v : tri) rings.insert(k.name(v).atom()[0]);
    CHECK(rings.size() == 2);
    CHECK_FALSE((rings.count('b') && rings.count('t')));
  }
  CHECK(check_simplicial(p.vertex_map()).is_holds());
}

TEST_CASE("quasi-simplicial validation") {
  auto base = gen::interval();
  auto sub = barycentric_subdivide(base);
  auto id = QSMap::subdivision_identity(base);
  CHECK(id.source()->vertex_count() == 3);

  auto tri = gen::simplex(2);
  const auto constant = QSMap::from_names(
      tri, base, names({{"a", VertexName("u")}, {"b", VertexName("u")}, {"c", VertexName("u")}}));
  CHECK(constant.vertex_map().image(0) == sub->id(sub_name({"u"})));

  auto edge = atoms({{"a", "b"}});
  try {
    QSMap::from_names(edge, base, names({{"a", VertexName("u")}, {"b", VertexName("v")}}));
    FAIL("expected NotSimplicial");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotSimplicial);
  }
  CHECK_THROWS_AS(QSMap::from_names(edge, base, names({{"a", VertexName("u")}})), Error);
  CHECK_THROWS_AS(QSMap::from_names(edge, base, names({{"a", VertexName("u")}, {"b", VertexName("q")}})), Error);
}

TEST_CASE("surjectivity") {
  auto base = gen::interval();
  CHECK(is_surjective(QSMap::subdivision_identity(base).vertex_map()).is_holds());
  CHECK(is_surjective(gen::cylinder_map().vertex_map()).is_holds());

  auto tri = gen::simplex(2);
  const auto constant = QSMap::from_names(
      tri, base, names({{"a", VertexName("u")}, {"b", VertexName("u")}, {"c", VertexName("u")}}));
  const auto v = is_surjective(constant.vertex_map());
  REQUIRE(v.is_fails());
  const nlohmann::json wv = nlohmann::json::array({nlohmann::json::array({"u", "v"}), nlohmann::json::array({"v"})});
  bool found = false;
  for (const auto& s : v.detail()["uncovered"]) found = found || s == wv;
  CHECK(found);
}

TEST_CASE("preimages of simplices of the subdivided target") {
  const auto p = gen::cylinder_map();
  const auto& sub = *p.subdivision();
  const VertexId u = sub.id(sub_name({"u"}));
  const VertexId w = sub.id(sub_name({"u", "v"}));

  const auto middle = preimage_subcomplex(p.vertex_map(), {w});
  CHECK(middle.simplices().f_vector() == std::vector<std::size_t>{3, 3});
  const auto bottom = preimage_subcomplex(p.vertex_map(), Simplex{std::min(u, w), std::max(u, w)});
  CHECK(bottom.simplices().f_vector() == std::vector<std::size_t>{6, 12, 6});

  const auto id = QSMap::subdivision_identity(gen::simplex(2));
  for (const auto& delta : id.subdivision()->simplices().all()) {
    const auto pre = preimage_subcomplex(id.vertex_map(), delta);
    CHECK(pre.simplices().size() == (std::size_t{1} << delta.size()) - 1);
    CHECK(pre.contains(delta));
  }
}

TEST_CASE("preimage membership agrees with pushing points forward") {
  std::mt19937_64 rng(4);
  const auto p = gen::cylinder_map();
  for (const auto& delta : p.subdivision()->simplices().all()) {
    const auto pre = preimage_subcomplex(p.vertex_map(), delta);
    for (int i = 0; i < 60; ++i) {
      const Point x = random_point(rng, p.source());
      const bool by_image = in_closed_simplex(push_forward(p.vertex_map(), x), delta);
      CHECK(pre.contains(x.support()) == by_image);
    }
  }
}

TEST_CASE("applying a quasi-simplicial map") {
  const auto p = gen::cylinder_map();
  const auto& k = p.source();
  const auto& base = p.base();
  CHECK(apply(p, Point::vertex(k, k->id(VertexName("b1")))) == Point::vertex(base, base->id(VertexName("u"))));
  const Point mid = barycenter(k, ids(k, {"b1", "m1"}));
  const Point image = apply(p, mid);
  CHECK(image.coordinate(base->id(VertexName("u"))) == Rational(3, 4));
  CHECK(image.coordinate(base->id(VertexName("v"))) == Rational(1, 4));
}

TEST_CASE("Lipschitz constants") {
  auto base = gen::interval();
  CHECK(lipschitz_constant(QSMap::subdivision_identity(base), 1, 1).value == Rational(1, 2));

  auto tri = gen::simplex(2);
  auto edge = atoms({{"x", "y"}});
  const auto lifted = QSMap::from_names(
      edge, tri, names({{"x", sub_name({"a"})}, {"y", sub_name({"a", "b", "c"})}}));
  const auto lip = lipschitz_constant(lifted, 1, 1);
  CHECK(lip.value == Rational(2, 3));
  REQUIRE(lip.witness.has_value());

  const auto constant = QSMap::from_names(tri, base,
                                          names({{"a", VertexName("u")}, {"b", VertexName("u")}, {"c", VertexName("u")}}));
  CHECK(lipschitz_constant(constant, 1, 1).value == 0);
  CHECK(lipschitz_constant(QSMap::subdivision_identity(base), Rational(1, 4), Rational(1, 2)).value == 1);
}

TEST_CASE("sampled ratios inside a simplex never exceed the Lipschitz constant, and a vertex pair attains it") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    std::mt19937_64 rng(seed);
    auto base = random_complex(rng, 4, 15, 2);
    const auto p = gen::random_blowup(seed, base, 2, false, 0.2);
    const auto lip = lipschitz_constant(p, 1, 1);
    for (int i = 0; i < 60; ++i) {
      const auto& tops = p.source()->maximal();
      const auto& sigma = tops[std::uniform_int_distribution<std::size_t>(0, tops.size() - 1)(rng)];
      const Point x = random_point_on(rng, p.source(), sigma);
      const Point y = random_point_on(rng, p.source(), sigma);
      CHECK(distance(apply(p, x), apply(p, y)) <= lip.value * distance(x, y));
    }
    if (lip.witness) {
      const Point a = Point::vertex(p.source(), lip.witness->first);
      const Point b = Point::vertex(p.source(), lip.witness->second);
      CHECK(distance(apply(p, a), apply(p, b)) == lip.value * distance(a, b));
    }
  }
}

TEST_CASE("composition") {
  const auto p = gen::cylinder_map();
  const auto& f = p.vertex_map();
  CHECK(compose(f, VertexMap::identity(p.source())) == f);
  CHECK(compose(VertexMap::identity(p.subdivision()), f) == f);
  CHECK_THROWS_AS(compose(f, f), Error);

  // The cylinder map after the subdivision identity of the cylinder.
  const auto id = QSMap::subdivision_identity(p.source());
  const auto composite = compose(p, id);
  const auto& target = *composite.target();
  REQUIRE(target.subdivision_parent());
  CHECK(*target.subdivision_parent() == *p.subdivision());
  const auto& src = *composite.source();
  const auto b1 = VertexName("b1");
  const auto m1 = VertexName("m1");
  const auto u = sub_name({"u"});
  const auto w = sub_name({"u", "v"});
  CHECK(target.name(composite.image(src.id(VertexName::list({b1})))) == VertexName::list({u}));
  CHECK(target.name(composite.image(src.id(VertexName::list({b1, m1})))) == VertexName::list({u, w}));
  CHECK(check_simplicial(composite).is_holds());

  // Inner images that are parent vertices flatten into beta M.
  auto base = gen::interval();
  auto tri = gen::simplex(2);
  const auto constant = QSMap::from_names(
      tri, base, names({{"a", VertexName("u")}, {"b", VertexName("u")}, {"c", VertexName("u")}}));
  const auto fold = QSMap::from_names(base, base, names({{"u", sub_name({"u"})}, {"v", sub_name({"u", "v"})}}));
  const auto flat = compose(fold, constant);
  CHECK(flat.target() == fold.subdivision());
  for (VertexId v = 0; v < flat.source()->vertex_count(); ++v) {
    CHECK(flat.target()->name(flat.image(v)) == sub_name({"u"}));
  }
}

TEST_CASE("composite vertex images agree with stepwise application") {
  const auto p = gen::cylinder_map();
  const auto id = QSMap::subdivision_identity(p.source());
  const auto images = composite_vertex_images({&p, &id});
  const auto& top = id.source();
  REQUIRE(images.size() == top->vertex_count());
  for (VertexId v = 0; v < top->vertex_count(); ++v) {
    const Point step = apply(id, Point::vertex(top, v));
    CHECK(images[v] == apply(p, Point(p.source(), step.coordinates())));
  }
}

TEST_CASE("induced homology maps") {
  const auto id = QSMap::subdivision_identity(gen::interval());
  for (int k = 0; k <= 1; ++k) CHECK(induced_homology_map(id, k).iso.is_holds());

  const auto p = gen::cylinder_map();
  const auto h1 = induced_homology_map(p, 1);
  CHECK(h1.iso.is_fails());
  CHECK_FALSE(h1.injective);
  CHECK(h1.surjective);
  CHECK(describe(h1.source) == "Z");
  CHECK(induced_homology_map(p, 0).iso.is_holds());

  auto point = atoms({{"p"}});
  const auto constant = QSMap::from_names(point, point, names({{"p", VertexName("p")}}));
  CHECK(induced_homology_map(constant, 0).iso.is_holds());
}

TEST_CASE("induced maps on circles and functoriality") {
  auto hexagon = atoms({{"0", "1"}, {"1", "2"}, {"2", "3"}, {"3", "4"}, {"4", "5"}, {"5", "0"}});
  auto triangle = atoms({{"a", "b"}, {"b", "c"}, {"c", "a"}});
  const auto wrap = VertexMap::from_names(
      hexagon, triangle,
      names({{"0", VertexName("a")}, {"1", VertexName("b")}, {"2", VertexName("c")},
             {"3", VertexName("a")}, {"4", VertexName("b")}, {"5", VertexName("c")}}));
  const auto rotate = VertexMap::from_names(
      triangle, triangle, names({{"a", VertexName("b")}, {"b", VertexName("c")}, {"c", VertexName("a")}}));

  const auto hw = induced_homology_map(wrap, 1);
  REQUIRE(hw.cycle_map.rows() == 1);
  REQUIRE(hw.cycle_map.cols() == 1);
  CHECK(abs(Rational(hw.cycle_map(0, 0))) == 2);
  CHECK(hw.injective);
  CHECK_FALSE(hw.surjective);

  const auto hr = induced_homology_map(rotate, 1);
  CHECK(hr.iso.is_holds());
  const auto hc = induced_homology_map(compose(rotate, wrap), 1);
  CHECK(hc.cycle_map == hr.cycle_map * hw.cycle_map);


  const auto shift = VertexMap::from_names(
      hexagon, hexagon,
      names({{"0", VertexName("1")}, {"1", VertexName("2")}, {"2", VertexName("3")},
             {"3", VertexName("4")}, {"4", VertexName("5")}, {"5", VertexName("0")}}));
  CHECK(induced_homology_map(compose(wrap, shift), 1).cycle_map ==
        hw.cycle_map * induced_homology_map(shift, 1).cycle_map);
}
