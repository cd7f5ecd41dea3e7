#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace kperec::cli;
  CLI::App app{"Elliptic curves over F_p(t) and its perfect closure: heights, torsion, descent."};
  app.require_subcommand(1);
  RunConfig cfg;
  std::uint32_t p = 0, max_level = 0;
  auto* p_opt = app.add_option("--p", p, "characteristic (a prime)");
  app.add_option("--curve", cfg.curve, "curve JSON {\"p\":5,\"a\":[a1,a2,a3,a4,a6]}, inline or a file");
  app.add_option("--point", cfg.point,
                 "point JSON {\"level\":n,\"x\":...,\"y\":...} (coordinates on the n-th Frobenius twist) "
                 "or {\"infinity\":true}");
  app.add_option("--level", cfg.level, "tower level n, for K^{1/p^n}");
  app.add_option("--bound", cfg.bound, "naive height bound D for enumerate");
  app.add_option("--epsilon", cfg.epsilon, "canonical height accuracy (default 1/1000000)");
  auto* max_opt = app.add_option("--max-level", max_level, "highest tower level (demo-isotrivial defaults to 2)");
  app.add_option("--search-bound", cfg.search_bound, "naive height bound for descend and gs-survey (default 1)");
  app.add_option("--budget", cfg.budget, "cap on x-candidates examined by enumeration");
  app.add_option("--family", cfg.family,
                 "gs-survey grid {\"p\":5,\"a\":[[a1 choices],...,[a6 choices]]}, inline or a file");
  app.add_flag("--json", cfg.json, "print JSON instead of a plain table");
  app.add_option("--out", cfg.out, "write the report to FILE");

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"invariants", "b- and c-invariants, discriminant, j, isotriviality"},
      {"disc", "minimal discriminant divisor with Kodaira types"},
      {"height", "naive height of a point"},
      {"canheight", "canonical height with a certified error"},
      {"torsion", "torsion subgroup over K^{1/p^max-level}"},
      {"enumerate", "points of naive height at most --bound at --level"},
      {"descend", "generators of the subgroups G_0, ..., G_max-level"},
      {"gs-check", "Goldfeld-Szpiro lower bound certificate for one point"},
      {"gs-survey", "Goldfeld-Szpiro ratios over a family (CSV, or JSON with --json)"},
      {"demo-isotrivial",
       "shrinking heights on Y^2 = X^3 + (t^3+t)^2 X (p odd; the p = 2 analogue is not implemented)"}};
  for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? Success : BadInput;
  }
  if (p_opt->count()) cfg.p = p;
  if (max_opt->count()) cfg.max_level = max_level;

  const std::string name = app.get_subcommands().front()->get_name();
  std::string error;
  const Report report = run(name, cfg, error);
  if (!error.empty()) {
    std::cerr << "kperec " << name << ": " << error << '\n';
    return report.exit_code;
  }
  std::string text;
  if (cfg.json)
    text = report.body.dump(2) + "\n";
  else
    text = report.csv ? *report.csv : render_plain(report.body);
  if (cfg.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(cfg.out);
    if (!out) {
      std::cerr << "kperec: cannot write " << cfg.out << '\n';
      return BadInput;
    }
    out << text;
  }
  return report.exit_code;
}
