// polytower: command-line front end over the C interface.

#include "polytower/polytower.h"

#include "CLI11.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

struct Flags {
  int n = 0;
  std::optional<uint64_t> pi1, filler, nerve;
  std::string scale_base;
  std::string format = "json";
  std::string output;
  uint64_t seed = 0;
};

const char* kDescriptions[][2] = {
    {"validate", "parse and check a complex, map, cover, tower or lift job"},
    {"subdivide", "barycentric subdivision of a complex [times]"},
    {"stars", "open and barycentric stars of simplices (u,v ...)"},
    {"nerve", "nerve of a cover file, or of the O|B star cover of a complex"},
    {"homology", "integral homology in every degree"},
    {"pi1", "edge-path presentation and simple-connectivity verdict [basepoint]"},
    {"check-map", "quasi-simplicial, surjective, Lipschitz and n-regular checks"},
    {"verify-tower", "certify a tower at --n"},
    {"restrict", "restrict a tower at <level> to the closure of simplices"},
    {"lift", "stagewise lift of a map through a tower (lift job file)"},
    {"mesh", "mesh of the O|B vertex-star cover at --scale-base"},
    {"gen", "generate inputs: simplex d | sphere d | circle | rp2 | interval | cylinder |"
            " subdivision-tower [d] [levels] | cylinder-tower | random-tower [levels] [d] | random-map [d]"},
};

int exit_code(pt_status s) { return s == PT_INTERNAL_ERROR ? 3 : static_cast<int>(s); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Inverse limits of polyhedra: complexes, quasi-simplicial maps, towers and lifts"};
  app.require_subcommand(1);
  Flags flags;
  std::vector<std::string> args;

  for (const auto& [name, text] : kDescriptions) {
    auto* sub = app.add_subcommand(name, text);
    sub->add_option("args", args, "input file and command parameters");
    sub->add_option("--n", flags.n, "connectivity bound n (default 1)")->check(CLI::Range(1, 64));
    sub->add_option("--budget-pi1", flags.pi1, "Tietze rewrite steps")->check(CLI::PositiveNumber);
    sub->add_option("--budget-filler", flags.filler, "2-cell filler search states")->check(CLI::PositiveNumber);
    sub->add_option("--budget-nerve", flags.nerve, "index subsets examined per nerve")->check(CLI::PositiveNumber);
    sub->add_option("--scale-base", flags.scale_base, "scale kappa, or base b of kappa_i = b^i for towers");
    sub->add_option("--format", flags.format, "json or human")->check(CLI::IsMember({"json", "human"}));
    sub->add_option("--seed", flags.seed, "seed for random generators");
    sub->add_option("--output,-o", flags.output, "write the report here instead of stdout");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 3;
  }

  pt_options options;
  if (pt_options_init(&options) != PT_HOLDS) {
    std::cerr << "polytower: " << pt_last_error() << "\n";
    return 3;
  }
  options.n = flags.n;
  if (flags.pi1) options.budgets.pi1 = *flags.pi1;
  if (flags.filler) options.budgets.filler = *flags.filler;
  if (flags.nerve) options.budgets.nerve = *flags.nerve;
  options.scale_base = flags.scale_base.empty() ? nullptr : flags.scale_base.c_str();
  options.seed = flags.seed;

  const std::string command = app.get_subcommands().front()->get_name();
  std::vector<const char*> cargs;
  for (const auto& a : args) cargs.push_back(a.c_str());

  pt_report* report = nullptr;
  const pt_status status = pt_run(command.c_str(), cargs.data(), cargs.size(), &options, &report);
  const char* text = pt_report_text(report, flags.format == "human" ? PT_FORMAT_HUMAN : PT_FORMAT_JSON);
  if (status == PT_INPUT_ERROR || status == PT_INTERNAL_ERROR) std::cerr << "polytower: " << pt_last_error() << "\n";

  int code = exit_code(status);
  if (flags.output.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(flags.output, std::ios::binary);
    out << text;
    if (!out) {
      std::cerr << "polytower: cannot write " << flags.output << "\n";
      code = 3;
    }
  }
  pt_report_free(report);
  return code;
}
