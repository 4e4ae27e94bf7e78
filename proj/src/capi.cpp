#include "polytower/polytower.h"

#include "polytower/carrier.hpp"
#include "polytower/connectivity.hpp"
#include "polytower/covers.hpp"
#include "polytower/generators.hpp"
#include "polytower/io.hpp"
#include "polytower/tower.hpp"

#include <cstdlib>
#include <cstring>
#include <functional>
#include <map>
#include <sstream>

using polytower::io::json;

struct pt_report {
  pt_status status = PT_HOLDS;
  json body;
  bool raw = false;  // body is the produced object itself (subdivide, gen)
  std::string json_text;
  std::string human_text;
};

struct pt_complex {
  polytower::ComplexPtr complex;
};

struct pt_tower {
  polytower::Tower tower;
};

namespace {

using namespace polytower;

thread_local std::string last_error;

void set_error(const std::string& message) { last_error = message; }

std::string error_text(const Error& e) {
  std::string out = std::string(to_string(e.code())) + ": " + e.what();
  if (!e.context().empty()) out += " (at " + e.context() + ")";
  return out;
}

pt_status status_of(const Verdict& v) {
  if (v.is_holds()) return PT_HOLDS;
  return v.is_fails() ? PT_FAILS : PT_INCONCLUSIVE;
}

Budgets budgets_of(const pt_options& o) { return Budgets{o.budgets.pi1, o.budgets.filler, o.budgets.nerve}; }

struct Outcome {
  pt_status status = PT_HOLDS;
  json result;
  bool raw = false;
};

// ---------------------------------------------------------------------------
// Human rendering: an indented projection of the JSON report.

bool is_flat(const json& v) {
  if (!v.is_array()) return !v.is_object();
  for (const auto& e : v) {
    if (!is_flat(e)) return false;
  }
  return v.dump().size() <= 72;
}

std::string scalar(const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

void render(const json& v, int indent, std::ostringstream& out) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  if (v.is_object()) {
    for (const auto& [k, e] : v.items()) {
      if (is_flat(e)) {
        out << pad << k << ": " << (e.is_array() ? e.dump() : scalar(e)) << "\n";
      } else {
        out << pad << k << ":\n";
        render(e, indent + 2, out);
      }
    }
  } else if (v.is_array()) {
    for (const auto& e : v) {
      if (is_flat(e)) {
        out << pad << "- " << (e.is_array() ? e.dump() : scalar(e)) << "\n";
      } else {
        out << pad << "-\n";
        render(e, indent + 2, out);
      }
    }
  } else {
    out << pad << scalar(v) << "\n";
  }
}

// ---------------------------------------------------------------------------
// Argument helpers

const std::string& arg(const std::vector<std::string>& args, std::size_t i, const char* what) {
  if (i >= args.size()) throw Error(ErrorCode::InvalidInput, std::string("missing argument: ") + what);
  return args[i];
}

long integer_arg(const std::string& text, const char* what, long lo, long hi) {
  char* end = nullptr;
  const long v = std::strtol(text.c_str(), &end, 10);
  if (text.empty() || *end != '\0' || v < lo || v > hi) {
    throw Error(ErrorCode::InvalidInput, std::string("invalid ") + what + " '" + text + "'");
  }
  return v;
}

// "u", "[\"u\",\"v\"]" (a list name) as a vertex name
VertexName name_arg(const std::string& text) {
  if (!text.empty() && text.front() == '[') return io::name_from_key(text, "argument");
  if (text.empty()) throw Error(ErrorCode::InvalidInput, "empty vertex name");
  return VertexName(text);
}

// "u,v" names a simplex
Simplex simplex_arg(const ComplexPtr& k, const std::string& text) {
  std::vector<VertexName> names;
  if (!text.empty() && text.front() == '[') {
    const auto j = io::parse(text, "argument");
    if (!j.is_array()) throw Error(ErrorCode::Parse, "expected a list of vertex names", "argument");
    for (std::size_t i = 0; i < j.size(); ++i) names.push_back(io::name_from_json(j[i], "argument/" + std::to_string(i)));
  } else {
    std::stringstream in(text);
    std::string part;
    while (std::getline(in, part, ',')) names.push_back(name_arg(part));
  }
  const Simplex s = k->simplex_of(names);
  if (!k->contains(s)) throw Error(ErrorCode::NotSubcomplex, "not a simplex of the complex", text);
  return s;
}

Rational scale_of(const pt_options& o, const Rational& fallback) {
  if (!o.scale_base) return fallback;
  try {
    const Rational r = parse_rational(o.scale_base);
    if (r <= 0) throw std::invalid_argument("non-positive");
    return r;
  } catch (const std::invalid_argument&) {
    throw Error(ErrorCode::InvalidInput, std::string("invalid scale base '") + o.scale_base + "'");
  }
}

StarCover kind_arg(const std::vector<std::string>& args, std::size_t i, StarCover fallback) {
  if (i >= args.size()) return fallback;
  if (args[i] == "O") return StarCover::O;
  if (args[i] == "B") return StarCover::B;
  throw Error(ErrorCode::InvalidInput, "cover kind must be O or B", args[i]);
}

json groups_json(const Complex& k) {
  auto out = json::array();
  for (const auto& g : homology_all(k)) {
    auto torsion = json::array();
    for (const auto& t : g.torsion) torsion.push_back(t.str());
    out.push_back({{"degree", g.degree}, {"betti", g.betti.str()}, {"torsion", torsion}, {"group", describe(g)}});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Commands

Outcome cmd_validate(const std::vector<std::string>& args, const pt_options& o) {
  const auto j = io::read_file(arg(args, 0, "input file"));
  if (!j.is_object()) throw Error(ErrorCode::Parse, "expected a JSON object", "/");
  if (j.contains("tower")) {
    const auto job = io::lift_job_from_json(j, scale_of(o, Rational(1, 2)));
    return {PT_HOLDS, {{"kind", "lift job"}, {"levels", job.tower.size()}, {"depth", job.depth},
                       {"domain", io::complex_to_json(*job.f1.domain())}}};
  }
  if (j.contains("levels")) {
    const auto t = io::tower_from_json(j, scale_of(o, Rational(1, 2)));
    auto fv = json::array();
    for (const auto& k : t.levels()) fv.push_back(k->f_vector());
    return {PT_HOLDS, {{"kind", "tower"}, {"levels", t.size()}, {"f_vectors", fv}}};
  }
  if (j.contains("elements")) {
    const auto c = io::cover_from_json(j);
    const auto v = check_cover(c);
    return {status_of(v), {{"kind", "cover"}, {"elements", c.size()}, {"cover", v.to_json()}}};
  }
  if (j.contains("source")) {
    const auto m = io::map_from_json(j);
    const auto v = check_simplicial(m.map);
    return {status_of(v), {{"kind", m.subdivide_target ? "quasi-simplicial map" : "simplicial map"},
                           {"simplicial", v.to_json()}}};
  }
  const auto k = io::complex_from_json(j);
  return {PT_HOLDS, {{"kind", "complex"}, {"dimension", k->dimension()}, {"f_vector", k->f_vector()}}};
}

Outcome cmd_subdivide(const std::vector<std::string>& args, const pt_options&) {
  const auto k = io::complex_from_json(io::read_file(arg(args, 0, "complex file")));
  const int times = args.size() > 1 ? static_cast<int>(integer_arg(args[1], "subdivision count", 0, 4)) : 1;
  return {PT_HOLDS, io::complex_to_json(*barycentric_subdivide(k, times)), true};
}

Outcome cmd_stars(const std::vector<std::string>& args, const pt_options&) {
  const auto k = io::complex_from_json(io::read_file(arg(args, 0, "complex file")));
  std::vector<Simplex> cores;
  for (std::size_t i = 1; i < args.size(); ++i) cores.push_back(simplex_arg(k, args[i]));
  if (cores.empty()) {
    for (VertexId v = 0; v < k->vertex_count(); ++v) cores.push_back({v});
  }
  const auto sub = barycentric_subdivide(k);
  auto stars = json::array();
  for (const auto& core : cores) {
    const auto closed_core = Subcomplex::closure_of(k, {core});
    const OpenStarSet ost(closed_core);
    auto open = json::array();
    for (const auto& s : k->simplices().all()) {
      if (ost.contains(s)) open.push_back(simplex_json(*k, s));
    }
    auto bst = json::array();
    for (const auto& s : barycentric_star(closed_core, sub).simplices().maximal()) bst.push_back(simplex_json(*sub, s));
    auto closure = json::array();
    for (const auto& s : ost.closure().simplices().maximal()) closure.push_back(simplex_json(*k, s));
    stars.push_back({{"core", simplex_json(*k, core)}, {"open_star", open}, {"open_star_closure", closure},
                     {"barycentric_star", bst}});
  }
  return {PT_HOLDS, {{"stars", stars}}};
}

Outcome cmd_nerve(const std::vector<std::string>& args, const pt_options& o) {
  const auto j = io::read_file(arg(args, 0, "cover or complex file"));
  const auto budgets = budgets_of(o);
  json result;
  std::optional<IndexedCover> cover;
  ComplexPtr complex;
  if (j.is_object() && j.contains("elements")) {
    cover = io::cover_from_json(j);
  } else {
    complex = io::complex_from_json(j);
    const auto kind = kind_arg(args, 1, StarCover::O);
    cover = star_cover(complex, kind);
    result["cover"] = to_string(kind);
  }
  const auto nv = nerve(*cover, budgets.nerve);
  result["examined"] = nv.examined;
  result["verdict"] = nv.verdict.to_json();
  if (!nv.verdict.is_holds()) return {status_of(nv.verdict), result};
  result["nerve"] = io::complex_to_json(*nv.complex);
  result["intersections"] = nv.simplices.size();
  if (complex) {
    // Star covers are indexed by vertices: the nerve should be K itself.
    const bool iso = *nv.complex == *complex;
    result["isomorphic_to_complex"] = iso;
  }
  return {PT_HOLDS, result};
}

Outcome cmd_homology(const std::vector<std::string>& args, const pt_options&) {
  const auto k = io::complex_from_json(io::read_file(arg(args, 0, "complex file")));
  long chi = 0;
  const auto fv = k->f_vector();
  for (std::size_t d = 0; d < fv.size(); ++d) chi += (d % 2 == 0 ? 1 : -1) * static_cast<long>(fv[d]);
  return {PT_HOLDS, {{"groups", groups_json(*k)}, {"euler_characteristic", chi}, {"f_vector", fv}}};
}

Outcome cmd_pi1(const std::vector<std::string>& args, const pt_options& o) {
  const auto k = io::complex_from_json(io::read_file(arg(args, 0, "complex file")));
  std::optional<VertexId> base;
  if (args.size() > 1) base = k->id(name_arg(args[1]));
  const auto budgets = budgets_of(o);
  auto p = pi1_presentation(*k, base.value_or(0));
  const auto initial = json{{"generators", p.generators.size()}, {"relators", p.relators.size()}};
  const auto t = simplify(p, budgets.pi1);
  const auto v = pi1_verdict(*k, base, budgets.pi1);
  return {status_of(v),
          {{"basepoint", name_json(k->name(p.basepoint))},
           {"presentation", initial},
           {"simplified", {{"generators", t.generators_left}, {"relators", t.relators_left}, {"steps", t.steps},
                           {"budget_exhausted", t.budget_exhausted}}},
           {"H1", describe(homology(*k, 1))},
           {"simply_connected", v.to_json()}}};
}

Outcome cmd_check_map(const std::vector<std::string>& args, const pt_options& o) {
  const auto m = io::map_from_json(io::read_file(arg(args, 0, "map file")));
  const int n = o.n > 0 ? o.n : 1;
  const auto budgets = budgets_of(o);
  json result;
  const Verdict simplicial = check_simplicial(m.map);
  result["quasi_simplicial"] = simplicial.to_json();
  result["subdivide_target"] = m.subdivide_target;
  if (!simplicial.is_holds()) return {status_of(simplicial), result};
  const Verdict surjective = is_surjective(m.map);
  result["surjective"] = surjective.to_json();
  Verdict all = conjoin(simplicial, surjective);
  if (const auto qs = m.qs()) {
    const Rational kappa = scale_of(o, Rational(1));
    const auto lip = lipschitz_constant(*qs, kappa, kappa);
    json l{{"constant", format_rational(lip.value)}, {"kappa", format_rational(kappa)}, {"lambda", format_rational(kappa)}};
    if (lip.witness) {
      l["witness"] = {name_json(qs->source()->name(lip.witness->first)), name_json(qs->source()->name(lip.witness->second))};
    }
    result["lipschitz"] = l;
    const auto report = n_regular_report(*qs, n, budgets);
    result["regularity"] = report.to_json(*qs);
    all = conjoin(all, report.aggregate);
  }
  result["verdict"] = all.to_json();
  return {status_of(all), result};
}

int n_of(const pt_options& o) { return o.n > 0 ? o.n : 1; }

Outcome cmd_verify_tower(const std::vector<std::string>& args, const pt_options& o) {
  const auto t = io::tower_from_json(io::read_file(arg(args, 0, "tower file")), scale_of(o, Rational(1, 2)));
  const auto cert = verify_tower(t, n_of(o), budgets_of(o));
  return {status_of(cert.conclusion), cert.to_json()};
}

Outcome cmd_restrict(const std::vector<std::string>& args, const pt_options& o) {
  const auto t = io::tower_from_json(io::read_file(arg(args, 0, "tower file")), scale_of(o, Rational(1, 2)));
  const long level = integer_arg(arg(args, 1, "level"), "level", 1, static_cast<long>(t.size()));
  const auto& k = t.level(static_cast<std::size_t>(level - 1));
  std::vector<Simplex> simplices;
  for (std::size_t i = 2; i < args.size(); ++i) simplices.push_back(simplex_arg(k, args[i]));
  if (simplices.empty()) throw Error(ErrorCode::InvalidInput, "missing argument: simplices of A");
  const auto r = restrict_tower(t, static_cast<std::size_t>(level - 1), Subcomplex::closure_of(k, simplices));
  const auto cert = verify_tower(r, n_of(o), budgets_of(o));
  return {status_of(cert.conclusion), {{"tower", io::tower_to_json(r)}, {"certificate", cert.to_json()}}};
}

Outcome cmd_lift(const std::vector<std::string>& args, const pt_options& o) {
  const auto job = io::lift_job_from_json(io::read_file(arg(args, 0, "lift job file")), scale_of(o, Rational(1, 2)));
  const int n = o.n > 0 ? o.n : job.n;
  const auto r = tower_lift(job.tower, job.f1, job.a, job.g0, job.depth, budgets_of(o), n);
  auto result = r.to_json();
  auto positions = json::array();
  for (const auto& p : r.positions) positions.push_back(point_json(p));
  result["positions"] = positions;
  return {status_of(r.verdict), result};
}

Outcome cmd_mesh(const std::vector<std::string>& args, const pt_options& o) {
  const auto k = io::complex_from_json(io::read_file(arg(args, 0, "complex file")));
  const auto kind = kind_arg(args, 1, StarCover::B);
  const Rational kappa = scale_of(o, Rational(1));
  const auto m = mesh(star_cover(k, kind), kappa);
  json result{{"cover", to_string(kind)}, {"scale", format_rational(kappa)}, {"mesh", format_rational(m.value)},
              {"from_closures", m.from_closures}};
  if (m.element) result["element"] = name_json(k->name(static_cast<VertexId>(*m.element)));
  return {PT_HOLDS, result};
}

Outcome cmd_gen(const std::vector<std::string>& args, const pt_options& o) {
  const auto& kind = arg(args, 0, "generator kind");
  auto param = [&](std::size_t i, long fallback, const char* what, long lo, long hi) {
    return i < args.size() ? integer_arg(args[i], what, lo, hi) : fallback;
  };
  const Rational base = scale_of(o, Rational(1, 2));
  auto scaled = [&](const Tower& t) {
    std::vector<Rational> scales;
    Rational s = 1;
    for (std::size_t i = 0; i < t.size(); ++i) {
      s *= base;
      scales.push_back(s);
    }
    return io::tower_to_json(Tower(t.levels(), t.bonds(), scales, t.covers()));
  };
  if (kind == "simplex") return {PT_HOLDS, io::complex_to_json(*gen::simplex(static_cast<int>(param(1, 2, "dimension", 0, 8)))), true};
  if (kind == "sphere") return {PT_HOLDS, io::complex_to_json(*gen::sphere(static_cast<int>(param(1, 2, "dimension", 0, 7)))), true};
  if (kind == "circle") return {PT_HOLDS, io::complex_to_json(*gen::sphere(1)), true};
  if (kind == "rp2") return {PT_HOLDS, io::complex_to_json(*gen::rp2()), true};
  if (kind == "interval") return {PT_HOLDS, io::complex_to_json(*gen::interval()), true};
  if (kind == "cylinder") return {PT_HOLDS, io::map_to_json(gen::cylinder_map()), true};
  if (kind == "subdivision-tower") {
    const auto d = static_cast<int>(param(1, 2, "base dimension", 0, 4));
    const auto levels = static_cast<std::size_t>(param(2, 3, "levels", 1, 4));
    return {PT_HOLDS, scaled(gen::subdivision_tower(gen::simplex(d), levels)), true};
  }
  if (kind == "cylinder-tower") return {PT_HOLDS, scaled(gen::cylinder_tower()), true};
  if (kind == "random-tower") {
    const auto levels = static_cast<std::size_t>(param(1, 2, "levels", 1, 3));
    const auto d = static_cast<int>(param(2, 1, "base dimension", 0, 2));
    return {PT_HOLDS, scaled(gen::random_tower(o.seed, gen::simplex(d), levels)), true};
  }
  if (kind == "random-map") {
    const auto d = static_cast<int>(param(1, 2, "base dimension", 0, 3));
    return {PT_HOLDS, io::map_to_json(gen::random_blowup(o.seed, gen::simplex(d), 2, true)), true};
  }
  throw Error(ErrorCode::InvalidInput, "unknown generator kind '" + kind + "'");
}

using Command = std::function<Outcome(const std::vector<std::string>&, const pt_options&)>;

const std::map<std::string, Command>& commands() {
  static const std::map<std::string, Command> table{
      {"validate", cmd_validate},   {"subdivide", cmd_subdivide},       {"stars", cmd_stars},
      {"nerve", cmd_nerve},         {"homology", cmd_homology},         {"pi1", cmd_pi1},
      {"check-map", cmd_check_map}, {"verify-tower", cmd_verify_tower}, {"restrict", cmd_restrict},
      {"lift", cmd_lift},           {"mesh", cmd_mesh},                 {"gen", cmd_gen}};
  return table;
}

pt_report* make_report(const std::string& command, pt_status status, json result, bool raw) {
  auto* r = new pt_report;
  r->status = status;
  r->raw = raw;
  if (raw) {
    r->body = std::move(result);
  } else {
    r->body = {{"command", command}, {"status", pt_status_name(status)}, {"result", std::move(result)}};
  }
  return r;
}

pt_report* error_report(const std::string& command, pt_status status, const std::string& code, const std::string& message,
                        const std::string& context) {
  json e{{"code", code}, {"message", message}};
  if (!context.empty()) e["context"] = context;
  auto* r = new pt_report;
  r->status = status;
  r->body = {{"command", command}, {"status", pt_status_name(status)}, {"error", e}};
  return r;
}

template <typename F>
pt_status guarded(F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    set_error(error_text(e));
    return PT_INPUT_ERROR;
  } catch (const std::bad_alloc&) {
    set_error("out of memory");
    return PT_INTERNAL_ERROR;
  } catch (const std::exception& e) {
    set_error(e.what());
    return PT_INTERNAL_ERROR;
  }
}

bool parse_budget_env(const char* text, pt_budgets& b) {
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) return false;
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    char* end = nullptr;
    if (value.empty() || value.front() == '-') return false;
    const unsigned long long v = std::strtoull(value.c_str(), &end, 10);
    if (*end != '\0' || v == 0) return false;
    if (key == "pi1") {
      b.pi1 = v;
    } else if (key == "filler") {
      b.filler = v;
    } else if (key == "nerve") {
      b.nerve = v;
    } else {
      return false;
    }
  }
  return true;
}

}  // namespace

extern "C" {

const char* pt_version(void) { return "0.1.0"; }

const char* pt_last_error(void) { return last_error.c_str(); }

const char* pt_status_name(pt_status status) {
  switch (status) {
    case PT_HOLDS: return "holds";
    case PT_FAILS: return "fails";
    case PT_INCONCLUSIVE: return "inconclusive";
    case PT_INPUT_ERROR: return "input_error";
    case PT_INTERNAL_ERROR: return "internal_error";
  }
  return "unknown";
}

pt_status pt_options_init(pt_options* out) {
  if (!out) return PT_INPUT_ERROR;
  const Budgets d;
  *out = pt_options{0, pt_budgets{d.pi1, d.filler, d.nerve}, nullptr, 0};
  if (const char* env = std::getenv("POLYTOWER_BUDGETS")) {
    pt_budgets b = out->budgets;
    if (!parse_budget_env(env, b)) {
      set_error(std::string("malformed POLYTOWER_BUDGETS '") + env + "'");
      return PT_INPUT_ERROR;
    }
    out->budgets = b;
  }
  return PT_HOLDS;
}

pt_status pt_run(const char* command, const char* const* args, size_t arg_count, const pt_options* options,
                 pt_report** out) {
  const std::string name = command ? command : "";
  pt_report* report = nullptr;
  pt_status status = PT_INTERNAL_ERROR;
  try {
    pt_options o;
    if (options) {
      o = *options;
    } else if (pt_options_init(&o) != PT_HOLDS) {
      throw Error(ErrorCode::InvalidInput, last_error);
    }
    if (o.budgets.pi1 == 0 || o.budgets.filler == 0 || o.budgets.nerve == 0) {
      throw Error(ErrorCode::InvalidInput, "budgets must be positive");
    }
    if (o.n < 0) throw Error(ErrorCode::InvalidInput, "n must be at least 1");
    const auto it = commands().find(name);
    if (it == commands().end()) throw Error(ErrorCode::InvalidInput, "unknown command '" + name + "'");
    std::vector<std::string> argv;
    for (size_t i = 0; i < arg_count; ++i) argv.emplace_back(args[i] ? args[i] : "");
    auto outcome = it->second(argv, o);
    status = outcome.status;
    report = make_report(name, status, std::move(outcome.result), outcome.raw);
  } catch (const Error& e) {
    set_error(error_text(e));
    status = PT_INPUT_ERROR;
    report = error_report(name, status, to_string(e.code()), e.what(), e.context());
  } catch (const std::bad_alloc&) {
    set_error("out of memory");
    status = PT_INTERNAL_ERROR;
    report = error_report(name, status, "Internal", "out of memory", "");
  } catch (const std::exception& e) {
    set_error(e.what());
    status = PT_INTERNAL_ERROR;
    report = error_report(name, status, "Internal", e.what(), "");
  }
  if (out) {
    *out = report;
  } else {
    delete report;
  }
  return status;
}

pt_status pt_report_status(const pt_report* report) { return report ? report->status : PT_INTERNAL_ERROR; }

const char* pt_report_text(pt_report* report, pt_format format) {
  if (!report) return "";
  if (format == PT_FORMAT_HUMAN) {
    if (report->human_text.empty()) {
      std::ostringstream out;
      render(report->body, 0, out);
      report->human_text = out.str();
    }
    return report->human_text.c_str();
  }
  if (report->json_text.empty()) report->json_text = io::dump(report->body);
  return report->json_text.c_str();
}

void pt_report_free(pt_report* report) { delete report; }

pt_status pt_complex_parse(const char* text, size_t length, pt_complex** out) {
  if (!text || !out) return PT_INPUT_ERROR;
  return guarded([&] {
    auto k = io::complex_from_json(io::parse(std::string_view(text, length)));
    *out = new pt_complex{std::move(k)};
    return PT_HOLDS;
  });
}

void pt_complex_free(pt_complex* complex) { delete complex; }

size_t pt_complex_vertex_count(const pt_complex* complex) { return complex ? complex->complex->vertex_count() : 0; }

int pt_complex_dimension(const pt_complex* complex) { return complex ? complex->complex->dimension() : -1; }

pt_status pt_complex_f_vector(const pt_complex* complex, size_t* buffer, size_t capacity, size_t* length) {
  if (!complex || !length) return PT_INPUT_ERROR;
  const auto fv = complex->complex->f_vector();
  *length = fv.size();
  for (size_t i = 0; i < fv.size() && i < capacity && buffer; ++i) buffer[i] = fv[i];
  return PT_HOLDS;
}

pt_status pt_complex_subdivide(const pt_complex* complex, pt_complex** out) {
  if (!complex || !out) return PT_INPUT_ERROR;
  return guarded([&] {
    *out = new pt_complex{barycentric_subdivide(complex->complex)};
    return PT_HOLDS;
  });
}

pt_status pt_complex_homology(const pt_complex* complex, int degree, uint64_t* betti, size_t* torsion_count) {
  if (!complex) return PT_INPUT_ERROR;
  return guarded([&] {
    const auto h = homology(*complex->complex, degree);
    if (h.betti > Integer(std::numeric_limits<uint64_t>::max())) {
      throw Error(ErrorCode::DomainError, "Betti number exceeds 64 bits");
    }
    if (betti) *betti = static_cast<uint64_t>(h.betti);
    if (torsion_count) *torsion_count = h.torsion.size();
    return PT_HOLDS;
  });
}

char* pt_complex_to_json(const pt_complex* complex) {
  if (!complex) return nullptr;
  const auto text = io::dump(io::complex_to_json(*complex->complex));
  char* out = static_cast<char*>(std::malloc(text.size() + 1));
  if (out) std::memcpy(out, text.c_str(), text.size() + 1);
  return out;
}

pt_status pt_tower_parse(const char* text, size_t length, const char* scale_base, pt_tower** out) {
  if (!text || !out) return PT_INPUT_ERROR;
  return guarded([&] {
    Rational base(1, 2);
    if (scale_base) {
      try {
        base = parse_rational(scale_base);
      } catch (const std::invalid_argument&) {
        throw Error(ErrorCode::InvalidInput, "invalid scale base");
      }
    }
    *out = new pt_tower{io::tower_from_json(io::parse(std::string_view(text, length)), base)};
    return PT_HOLDS;
  });
}

void pt_tower_free(pt_tower* tower) { delete tower; }

size_t pt_tower_depth(const pt_tower* tower) { return tower ? tower->tower.size() : 0; }

pt_status pt_tower_verify(const pt_tower* tower, int n, const pt_budgets* budgets, pt_report** out) {
  if (!tower || !out || n < 1) {
    set_error("tower, report pointer and n >= 1 are required");
    return PT_INPUT_ERROR;
  }
  return guarded([&] {
    Budgets b;
    if (budgets) b = Budgets{budgets->pi1, budgets->filler, budgets->nerve};
    const auto cert = verify_tower(tower->tower, n, b);
    const auto status = status_of(cert.conclusion);
    *out = make_report("verify-tower", status, cert.to_json(), false);
    return status;
  });
}

void pt_string_free(char* text) { std::free(text); }

}  // extern "C"
