#include "polytower/io.hpp"

#include <fstream>
#include <sstream>

namespace polytower::io {

namespace {

std::string at(const std::string& field, const std::string& key) { return field + "/" + key; }
std::string at(const std::string& field, std::size_t i) { return field + "/" + std::to_string(i); }

[[noreturn]] void bad(const std::string& field, const std::string& message) {
  throw Error(ErrorCode::Parse, message, field.empty() ? "/" : field);
}

const json& member(const json& obj, const std::string& key, const std::string& field) {
  if (!obj.is_object()) bad(field, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) bad(at(field, key), "missing field '" + key + "'");
  return *it;
}

const json& array_at(const json& obj, const std::string& key, const std::string& field) {
  const auto& a = member(obj, key, field);
  if (!a.is_array()) bad(at(field, key), "expected an array");
  return a;
}

// Re-throws library errors with the JSON field prepended to the context.
template <typename F>
auto within(const std::string& field, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Parse) throw;
    const std::string where = field.empty() ? "/" : field;
    throw Error(e.code(), e.what(), e.context().empty() ? where : where + ": " + e.context());
  }
}

Rational rational_from_json(const json& value, const std::string& field) {
  try {
    if (value.is_number_integer()) return Rational(value.get<long long>());
    if (value.is_string()) return parse_rational(value.get<std::string>());
  } catch (const std::invalid_argument&) {
  }
  bad(field, "expected a rational \"p/q\"");
}

Subcomplex closure_from_json(const json& value, const ComplexPtr& k, const std::string& field) {
  if (!value.is_array()) bad(field, "expected a list of simplices");
  std::vector<Simplex> simplices;
  for (std::size_t i = 0; i < value.size(); ++i) {
    const auto& s = value[i];
    if (!s.is_array() || s.empty()) bad(at(field, i), "expected a non-empty list of vertex names");
    std::vector<VertexName> names;
    for (std::size_t j = 0; j < s.size(); ++j) names.push_back(name_from_json(s[j], at(at(field, i), j)));
    simplices.push_back(within(at(field, i), [&] {
      const Simplex sigma = k->simplex_of(names);
      if (!k->contains(sigma)) throw Error(ErrorCode::NotSubcomplex, "not a simplex of the complex");
      return sigma;
    }));
  }
  return Subcomplex::closure_of(k, simplices);
}

json maximal_json(const Complex& k, const std::vector<Simplex>& simplices) {
  auto out = json::array();
  for (const auto& s : simplices) out.push_back(simplex_json(k, s));
  return out;
}

}  // namespace

json parse(std::string_view text, const std::string& source) {
  bool blank = true;
  for (char c : text) blank = blank && std::isspace(static_cast<unsigned char>(c));
  if (blank) throw Error(ErrorCode::Parse, "empty input", source);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, column = 1;
    const std::size_t end = std::min(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::string what = e.what();
    const auto colon = what.rfind(": ");
    if (colon != std::string::npos) what = what.substr(colon + 2);
    throw Error(ErrorCode::Parse, what, source + ":" + std::to_string(line) + ":" + std::to_string(column));
  }
}

json read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot open file", path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse(text.str(), path);
}

std::string dump(const json& value) { return value.dump(2) + "\n"; }

VertexName name_from_json(const json& value, const std::string& field) {
  if (value.is_string()) {
    if (value.get<std::string>().empty()) bad(field, "empty vertex name");
    return VertexName(value.get<std::string>());
  }
  if (value.is_array() && !value.empty()) {
    std::vector<VertexName> parts;
    for (std::size_t i = 0; i < value.size(); ++i) parts.push_back(name_from_json(value[i], at(field, i)));
    std::vector<VertexName> sorted = parts;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) bad(field, "repeated part in a list name");
    return VertexName::list(std::move(parts));
  }
  bad(field, "expected a vertex name (string or non-empty array)");
}

VertexName name_from_key(const std::string& key, const std::string& field) {
  if (!key.empty() && key.front() == '[') {
    json value;
    try {
      value = json::parse(key);
    } catch (const json::parse_error&) {
      bad(field, "malformed list name in key");
    }
    return name_from_json(value, field);
  }
  if (key.empty()) bad(field, "empty vertex name");
  return VertexName(key);
}

std::string name_key(const VertexName& name) { return name.to_string(); }

json complex_to_json(const Complex& complex) {
  auto vertices = json::array();
  for (const auto& n : complex.names()) vertices.push_back(name_json(n));
  return {{"vertices", vertices}, {"maximal", maximal_json(complex, complex.maximal())}};
}

ComplexPtr complex_from_json(const json& value, const std::string& field) {
  const auto& maximal = array_at(value, "maximal", field);
  std::vector<VertexName> extra;
  if (value.contains("vertices")) {
    const auto& vs = array_at(value, "vertices", field);
    for (std::size_t i = 0; i < vs.size(); ++i) extra.push_back(name_from_json(vs[i], at(at(field, "vertices"), i)));
  }
  std::vector<std::vector<VertexName>> simplices;
  for (std::size_t i = 0; i < maximal.size(); ++i) {
    const auto& s = maximal[i];
    const auto where = at(at(field, "maximal"), i);
    if (!s.is_array()) bad(where, "expected a list of vertex names");
    std::vector<VertexName> names;
    for (std::size_t j = 0; j < s.size(); ++j) names.push_back(name_from_json(s[j], at(where, j)));
    simplices.push_back(std::move(names));
  }
  if (value.contains("vertices")) {
    std::set<VertexName> listed(extra.begin(), extra.end());
    if (listed.size() != extra.size()) bad(at(field, "vertices"), "duplicate vertex name");
    for (std::size_t i = 0; i < simplices.size(); ++i) {
      for (const auto& n : simplices[i]) {
        if (!listed.count(n)) {
          throw Error(ErrorCode::UnknownVertex, "vertex '" + n.to_string() + "' is not listed in \"vertices\"",
                      at(at(field, "maximal"), i));
        }
      }
    }
  }
  if (simplices.empty() && extra.empty()) bad(field, "a complex needs at least one vertex");
  return within(at(field, "maximal"), [&] { return Complex::from_simplices(simplices, extra); });
}

std::optional<QSMap> MapFile::qs() const {
  if (!subdivide_target) return std::nullopt;
  return QSMap::check(map);
}

json map_to_json(const VertexMap& map, bool subdivide_target) {
  const auto& target = subdivide_target ? map.target()->subdivision_parent() : map.target();
  if (!target) throw Error(ErrorCode::InvalidInput, "map target is not a subdivision");
  auto images = json::object();
  for (VertexId v = 0; v < map.source()->vertex_count(); ++v) {
    images[name_key(map.source()->name(v))] = name_json(map.target()->name(map.image(v)));
  }
  return {{"source", complex_to_json(*map.source())},
          {"target", complex_to_json(*target)},
          {"subdivide_target", subdivide_target},
          {"vertex_images", images}};
}

json map_to_json(const QSMap& map) { return map_to_json(map.vertex_map(), true); }

namespace {

std::map<VertexName, VertexName> images_from_json(const json& value, const std::string& field) {
  const auto& obj = member(value, "vertex_images", field);
  const auto where = at(field, "vertex_images");
  if (!obj.is_object()) bad(where, "expected an object");
  std::map<VertexName, VertexName> images;
  for (const auto& [key, image] : obj.items()) images[name_from_key(key, at(where, key))] = name_from_json(image, at(where, key));
  return images;
}

bool subdivide_flag(const json& value, const std::string& field) {
  if (!value.contains("subdivide_target")) return false;
  const auto& flag = value["subdivide_target"];
  if (!flag.is_boolean()) bad(at(field, "subdivide_target"), "expected true or false");
  return flag.get<bool>();
}

// Bond of a tower: source and base are the given levels.
QSMap bond_from_json(const json& value, const ComplexPtr& source, const ComplexPtr& base, const std::string& field) {
  if (value.contains("source") && *complex_from_json(value["source"], at(field, "source")) != *source) {
    throw Error(ErrorCode::ComplexMismatch, "bond source differs from the next level", at(field, "source"));
  }
  if (value.contains("target") && *complex_from_json(value["target"], at(field, "target")) != *base) {
    throw Error(ErrorCode::ComplexMismatch, "bond target differs from the previous level", at(field, "target"));
  }
  if (value.contains("subdivide_target") && !subdivide_flag(value, field)) {
    bad(at(field, "subdivide_target"), "tower bonds map into subdivisions");
  }
  const auto images = images_from_json(value, field);
  return within(field, [&] { return QSMap::from_names(source, base, images); });
}

}  // namespace

MapFile map_from_json(const json& value, const std::string& field) {
  const auto source = complex_from_json(member(value, "source", field), at(field, "source"));
  const auto target = complex_from_json(member(value, "target", field), at(field, "target"));
  const bool subdivide = subdivide_flag(value, field);
  const auto images = images_from_json(value, field);
  const auto actual = subdivide ? barycentric_subdivide(target) : target;
  auto map = within(at(field, "vertex_images"), [&] { return VertexMap::from_names(source, actual, images); });
  return MapFile{std::move(map), subdivide};
}

json cover_to_json(const IndexedCover& cover) {
  auto elements = json::object();
  for (std::size_t i = 0; i < cover.size(); ++i) {
    const auto& ambient = *cover.ambient();
    if (cover.kind() == CoverKind::Closed) {
      elements[name_key(cover.indices()[i])] = maximal_json(ambient, cover.closed(i).simplices().maximal());
    } else {
      elements[name_key(cover.indices()[i])] = {
          {"open_star_of", maximal_json(ambient, cover.open(i).core().simplices().maximal())}};
    }
  }
  json out{{"ambient", complex_to_json(*cover.ambient())}, {"kind", to_string(cover.kind())}, {"elements", elements}};
  if (cover.ambient() != cover.space() && *cover.ambient() != *cover.space()) out["space"] = complex_to_json(*cover.space());
  return out;
}

IndexedCover cover_from_json(const json& value, const std::string& field) {
  auto ambient = complex_from_json(member(value, "ambient", field), at(field, "ambient"));
  ComplexPtr space = ambient;
  if (value.contains("space")) {
    space = complex_from_json(value["space"], at(field, "space"));
    if (*space != *ambient) {
      auto sub = barycentric_subdivide(space);
      if (*sub != *ambient) {
        throw Error(ErrorCode::ComplexMismatch, "ambient is neither the space nor its subdivision", at(field, "ambient"));
      }
      ambient = sub;
    } else {
      ambient = space;
    }
  }
  const auto& kind_json = member(value, "kind", field);
  if (!kind_json.is_string() || (kind_json != "open" && kind_json != "closed")) {
    bad(at(field, "kind"), "kind must be \"open\" or \"closed\"");
  }
  const bool open = kind_json == "open";
  const auto& elements = member(value, "elements", field);
  const auto where = at(field, "elements");
  if (!elements.is_object() || elements.empty()) bad(where, "expected a non-empty object");

  std::vector<std::pair<VertexName, CoverElement>> parsed;
  for (const auto& [key, el] : elements.items()) {
    const auto ef = at(where, key);
    const auto index = name_from_key(key, ef);
    if (el.is_object() && el.contains("star_of")) {
      const auto v = name_from_json(el["star_of"], at(ef, "star_of"));
      if (open) {
        const auto id = within(ef, [&] { return ambient->id(v); });
        parsed.emplace_back(index, OpenStarSet(Subcomplex::closure_of(ambient, {{id}})));
      } else if (ambient == space) {
        const auto id = within(ef, [&] { return ambient->id(v); });
        std::vector<Simplex> star;
        for (const auto& s : ambient->maximal()) {
          if (std::binary_search(s.begin(), s.end(), id)) star.push_back(s);
        }
        parsed.emplace_back(index, Subcomplex::closure_of(ambient, star));
      } else {
        const auto id = within(ef, [&] { return space->id(v); });
        parsed.emplace_back(index, barycentric_star(Subcomplex::closure_of(space, {{id}}), ambient));
      }
    } else if (open) {
      if (!el.is_object() || !el.contains("open_star_of")) bad(ef, "open elements are {\"star_of\": v} or {\"open_star_of\": [[...]]}");
      parsed.emplace_back(index, OpenStarSet(closure_from_json(el["open_star_of"], ambient, at(ef, "open_star_of"))));
    } else {
      parsed.emplace_back(index, closure_from_json(el, ambient, ef));
    }
  }
  std::sort(parsed.begin(), parsed.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  std::vector<VertexName> indices;
  std::vector<CoverElement> els;
  for (auto& [i, e] : parsed) {
    indices.push_back(i);
    els.push_back(std::move(e));
  }
  return within(field, [&] {
    return IndexedCover(space, ambient, open ? CoverKind::Open : CoverKind::Closed, std::move(indices), std::move(els));
  });
}

json tower_to_json(const Tower& tower) {
  auto levels = json::array();
  for (const auto& k : tower.levels()) levels.push_back(complex_to_json(*k));
  auto bonds = json::array();
  for (const auto& b : tower.bonds()) bonds.push_back(map_to_json(b));
  auto scales = json::array();
  for (const auto& s : tower.scales()) scales.push_back(format_rational(s));
  auto covers = json::array();
  for (auto c : tower.covers()) covers.push_back(to_string(c));
  return {{"levels", levels}, {"bonds", bonds}, {"scales", scales}, {"covers", covers}};
}

Tower tower_from_json(const json& value, const Rational& scale_base, const std::string& field) {
  const auto& lv = array_at(value, "levels", field);
  if (lv.empty()) bad(at(field, "levels"), "a tower needs at least one level");
  std::vector<ComplexPtr> levels;
  for (std::size_t i = 0; i < lv.size(); ++i) levels.push_back(complex_from_json(lv[i], at(at(field, "levels"), i)));
  const auto& bj = value.contains("bonds") ? array_at(value, "bonds", field) : json::array();
  if (bj.size() + 1 != levels.size()) bad(at(field, "bonds"), "expected one bond per pair of consecutive levels");
  std::vector<QSMap> bonds;
  for (std::size_t i = 0; i < bj.size(); ++i) {
    bonds.push_back(bond_from_json(bj[i], levels[i + 1], levels[i], at(at(field, "bonds"), i)));
  }
  std::vector<Rational> scales;
  if (value.contains("scales")) {
    const auto& sj = array_at(value, "scales", field);
    for (std::size_t i = 0; i < sj.size(); ++i) scales.push_back(rational_from_json(sj[i], at(at(field, "scales"), i)));
  } else {
    if (scale_base <= 0 || scale_base >= 1) bad(at(field, "scales"), "scale base must lie strictly between 0 and 1");
    Rational s = 1;
    for (std::size_t i = 0; i < levels.size(); ++i) {
      s *= scale_base;
      scales.push_back(s);
    }
  }
  std::vector<StarCover> covers;
  if (value.contains("covers")) {
    const auto& cj = array_at(value, "covers", field);
    for (std::size_t i = 0; i < cj.size(); ++i) {
      if (cj[i] == "O") {
        covers.push_back(StarCover::O);
      } else if (cj[i] == "B") {
        covers.push_back(StarCover::B);
      } else {
        bad(at(at(field, "covers"), i), "cover kind must be \"O\" or \"B\"");
      }
    }
  }
  return within(field, [&] { return Tower(std::move(levels), std::move(bonds), std::move(scales), std::move(covers)); });
}

Point point_from_json(const json& value, const ComplexPtr& complex, const std::string& field) {
  if (value.is_string() || value.is_array()) {
    const auto n = name_from_json(value, field);
    return within(field, [&] { return Point::vertex(complex, complex->id(n)); });
  }
  if (!value.is_object() || value.empty()) bad(field, "expected a point {name: \"p/q\"} or a vertex name");
  Point::Coordinates coords;
  for (const auto& [key, c] : value.items()) {
    const auto n = name_from_key(key, at(field, key));
    const auto id = within(at(field, key), [&] { return complex->id(n); });
    coords.emplace_back(id, rational_from_json(c, at(field, key)));
  }
  return within(field, [&] { return Point(complex, std::move(coords)); });
}

json pl_map_to_json(const PLMap& map) {
  auto images = json::object();
  for (VertexId v = 0; v < map.domain()->vertex_count(); ++v) images[name_key(map.domain()->name(v))] = point_json(map.image(v));
  return {{"domain", complex_to_json(*map.domain())}, {"images", images}};
}

namespace {

PLMap pl_map_from_json(const json& value, const ComplexPtr& domain, const ComplexPtr& target, const std::string& field) {
  if (!value.is_object()) bad(field, "expected an object {vertex: point}");
  std::vector<std::optional<Point>> images(domain->vertex_count());
  for (const auto& [key, p] : value.items()) {
    const auto n = name_from_key(key, at(field, key));
    const auto id = within(at(field, key), [&] { return domain->id(n); });
    images[id] = point_from_json(p, target, at(field, key));
  }
  std::vector<Point> all;
  for (VertexId v = 0; v < domain->vertex_count(); ++v) {
    if (!images[v]) bad(field, "no image for vertex '" + domain->name(v).to_string() + "'");
    all.push_back(*images[v]);
  }
  return within(field, [&] { return PLMap(domain, target, std::move(all)); });
}

}  // namespace

LiftJob lift_job_from_json(const json& value, const Rational& scale_base) {
  auto tower = tower_from_json(member(value, "tower", ""), scale_base, "/tower");
  const auto domain = complex_from_json(member(value, "domain", ""), "/domain");
  auto f1 = pl_map_from_json(member(value, "map", ""), domain, tower.level(0), "/map");
  auto a = value.contains("A") ? closure_from_json(value["A"], domain, "/A") : Subcomplex::empty(domain);
  std::size_t depth = tower.size();
  if (value.contains("depth")) {
    if (!value["depth"].is_number_integer() || value["depth"].get<long long>() < 1 ||
        value["depth"].get<long long>() > static_cast<long long>(tower.size())) {
      bad("/depth", "depth must be an integer between 1 and the number of levels");
    }
    depth = value["depth"].get<std::size_t>();
  }
  int n = 0;
  if (value.contains("n")) {
    if (!value["n"].is_number_integer() || value["n"].get<long long>() < 0 || value["n"].get<long long>() > 64) {
      bad("/n", "n must be a small non-negative integer");
    }
    n = value["n"].get<int>();
  }
  std::vector<PLMap> g0;
  if (!a.empty()) {
    if (!value.contains("thread")) bad("/thread", "a thread on A is required when A is non-empty");
    const auto ac = a.to_complex();
    const auto top = pl_map_from_json(value["thread"], ac, tower.level(tower.size() - 1), "/thread");
    g0 = within("/thread", [&] { return thread_maps(tower, top); });
  }
  return LiftJob{std::move(tower), std::move(f1), std::move(a), std::move(g0), depth, n};
}

}  // namespace polytower::io
