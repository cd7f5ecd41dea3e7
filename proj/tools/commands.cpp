#include "commands.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "kperec/isotrivial.hpp"
#include "kperec/parallel.hpp"

namespace kperec::cli {

namespace {

std::string load_text(const std::string& source, const std::string& what) {
  if (source.empty()) throw InputError("missing --" + what);
  const auto first = source.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (source[first] == '{' || source[first] == '[')) return source;
  std::ifstream in(source);
  if (!in) throw InputError("--" + what + " is neither inline JSON nor a readable file: " + source);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

WeierstrassCurve curve_of(const RunConfig& cfg) {
  return curve_from_json(parse_json(load_text(cfg.curve, "curve"), "curve"), cfg.p);
}

TowerPoint point_of(const RunConfig& cfg, const WeierstrassCurve& E) {
  return point_from_json(parse_json(load_text(cfg.point, "point"), "point"), E);
}

Rational positive(const std::string& text, const std::string& what) {
  if (text.empty()) throw InputError("missing --" + what);
  Rational q = parse_rational(text);
  if (q <= 0) throw InputError("--" + what + " must be positive");
  return q;
}

Rational nonnegative(const std::string& text, const std::string& what) {
  if (text.empty()) throw InputError("missing --" + what);
  Rational q = parse_rational(text);
  if (q < 0) throw InputError("--" + what + " must be nonnegative");
  return q;
}

std::string decimal(const Rational& q, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, q.convert_to<double>());
  return buf;
}

Rational power(std::uint32_t p, std::uint32_t n) {
  Rational q = 1;
  for (std::uint32_t i = 0; i < n; ++i) q *= p;
  return q;
}

}  // namespace

Report cmd_invariants(const RunConfig& cfg) { return {invariants_to_json(curve_of(cfg))}; }

Report cmd_disc(const RunConfig& cfg) { return {discriminant_to_json(discriminant_report(curve_of(cfg)))}; }

Report cmd_height(const RunConfig& cfg) {
  const auto E = curve_of(cfg);
  const auto P = point_of(cfg, E);
  const Rational naive = naive_height(P);
  Report r{{{"point", point_to_json(P)}, {"naive", rational_to_string(naive)}, {"level", P.level()}}};
  if (naive_height_by_places(P) != naive) {
    r.body["inconsistency"] = "naive height differs from the sum over places";
    r.exit_code = InvariantViolation;
  }
  return r;
}

Report cmd_canheight(const RunConfig& cfg) {
  const auto E = curve_of(cfg);
  const auto P = point_of(cfg, E);
  const Rational eps = positive(cfg.epsilon, "epsilon");
  const auto h = canonical_height(P, eps);
  return {{{"point", point_to_json(P)},
           {"naive", rational_to_string(naive_height(P))},
           {"canonical", canonical_to_json(h)},
           {"level", P.level()},
           {"epsilon", rational_to_string(eps)}}};
}

Report cmd_torsion(const RunConfig& cfg) {
  return {torsion_to_json(torsion_perfect_closure(curve_of(cfg), cfg.max_level.value_or(0)))};
}

Report cmd_enumerate(const RunConfig& cfg) {
  const auto E = curve_of(cfg);
  const Rational D = nonnegative(cfg.bound, "bound");
  const auto pts = bounded_height_points(E, cfg.level, D, EnumerationOptions{cfg.budget});
  ordered_json list = ordered_json::array();
  for (const auto& P : pts) list.push_back({{"point", point_to_json(P)}, {"naive", rational_to_string(naive_height(P))}});
  return {{{"level", cfg.level}, {"bound", rational_to_string(D)}, {"count", pts.size()}, {"points", list}}};
}

Report cmd_descend(const RunConfig& cfg) {
  const auto E = curve_of(cfg);
  ClosureOptions opts;
  opts.enumeration.budget = cfg.budget;
  opts.eps = positive(cfg.epsilon, "epsilon");
  const auto rep = perfect_closure_generators(E, cfg.max_level.value_or(0), positive(cfg.search_bound, "search-bound"), opts);
  return {closure_to_json(rep)};
}

Report cmd_gs_check(const RunConfig& cfg) {
  const auto E = curve_of(cfg);
  const auto P = point_of(cfg, E);
  // a requested epsilon too coarse for the floor is tightened to floor / 4
  const Rational requested = positive(cfg.epsilon, "epsilon"), floor = gs_floor(E);
  const Rational eps = floor > 0 && floor < 2 * requested ? Rational(floor / 4) : requested;
  const auto cert = lehmer_certificate(P, eps, E.to_string());
  ordered_json body = certificate_to_json(cert);
  body["epsilon_requested"] = rational_to_string(requested);
  body["epsilon_used"] = rational_to_string(eps);
  if (cert.ratio) body["ratio_approx"] = decimal(*cert.ratio, 12);
  return {body, cert.verdict == Verdict::Fail ? InvariantViolation : Success};
}

std::string default_family(std::uint32_t p) {
  ordered_json a4 = ordered_json::array(), a6 = ordered_json::array();
  for (int c = 0; c < 5; ++c) {
    a4.push_back(std::to_string(c));
    a6.push_back(c == 0 ? std::string("t") : "t+" + std::to_string(c));
  }
  ordered_json zero = ordered_json::array({"0"});
  return ordered_json{{"p", p}, {"a", {zero, zero, zero, a4, a6}}}.dump();
}

Report cmd_gs_survey(const RunConfig& cfg) {
  std::uint32_t p = cfg.p.value_or(5);
  const auto spec = parse_json(cfg.family.empty() ? default_family(p) : load_text(cfg.family, "family"), "family");
  if (spec.contains("p")) {
    if (!spec["p"].is_number_unsigned()) throw InputError("family field \"p\" must be a positive integer");
    if (cfg.p && *cfg.p != spec["p"].get<std::uint32_t>()) throw InputError("--p disagrees with the family's p");
    p = spec["p"].get<std::uint32_t>();
  }
  if (!PrimeField::is_prime(p)) throw InputError(std::to_string(p) + " is not prime");
  if (!spec.contains("a") || !spec["a"].is_array() || spec["a"].size() != 5)
    throw InputError("family field \"a\" must hold five lists of coefficient choices");
  std::array<std::vector<RatFunc>, 5> choices;
  for (std::size_t i = 0; i < 5; ++i) {
    const auto& list = spec["a"][i];
    if (!list.is_array()) throw InputError("family coefficient choices must be arrays of strings");
    for (const auto& c : list) {
      if (!c.is_string()) throw InputError("family coefficient choices must be arrays of strings");
      choices[i].push_back(parse_ratfunc(c.get<std::string>(), p));
    }
  }
  const Rational bound = positive(cfg.search_bound, "search-bound");
  const Rational eps = positive(cfg.epsilon, "epsilon");

  std::vector<std::array<RatFunc, 5>> grid;
  std::array<RatFunc, 5> cur;
  auto expand = [&](auto&& self, std::size_t i) -> void {
    if (i == 5) {
      grid.push_back(cur);
      return;
    }
    for (const auto& c : choices[i]) {
      cur[i] = c;
      self(self, i + 1);
    }
  };
  expand(expand, 0);

  struct Row {
    std::string id;
    std::optional<WeierstrassCurve> curve;
    std::string skipped;
    std::int64_t degree = 0;
    Rational floor;
    std::optional<Rational> min_height;
    std::size_t searched = 0;
    bool over_budget = false;
    std::vector<std::string> violations;
  };
  std::vector<Row> rows(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    Row& row = rows[i];
    try {
      row.curve.emplace(grid[i]);
    } catch (const SingularCurveError&) {
      row.id = "[";
      for (std::size_t k = 0; k < 5; ++k) row.id += (k ? ", " : "") + grid[i][k].to_string();
      row.id += "]";
      row.skipped = "singular";
      return;
    }
    row.id = row.curve->to_string();
    const WeierstrassCurve& E = *row.curve;
    if (is_isotrivial(E)) {
      row.skipped = "isotrivial";
      return;
    }
    row.degree = minimal_discriminant_degree(E);
    row.floor = gs_floor(E);
    const Rational local_eps = std::min<Rational>(eps, row.floor / 4);
    std::vector<TowerPoint> pts;
    try {
      pts = bounded_height_points(E, 0, bound, EnumerationOptions{cfg.budget});
    } catch (const BudgetExceededError&) {
      row.over_budget = true;
      return;
    }
    for (const auto& P : pts) {
      if (P.is_infinity()) continue;
      ++row.searched;
      const auto cert = lehmer_certificate(P, local_eps, row.id);
      if (cert.verdict == Verdict::Torsion) continue;
      if (cert.verdict == Verdict::Fail) row.violations.push_back(cert.diagnostics);
      if (!row.min_height || cert.height.value < *row.min_height) row.min_height = cert.height.value;
    }
  });

  Report report;
  ordered_json table = ordered_json::array(), skipped = ordered_json::array();
  std::ostringstream csv;
  csv << "curve_id,deg_disc,min_canonical_height,floor,ratio,points_searched\n";
  std::size_t violations = 0;
  bool over_budget = false;
  for (const auto& row : rows) {
    if (!row.skipped.empty()) {
      skipped.push_back({{"curve_id", row.id}, {"reason", row.skipped}});
      continue;
    }
    ordered_json r = {{"curve_id", row.id}, {"deg_disc", row.degree}};
    std::optional<Rational> ratio;
    if (row.min_height && row.floor > 0) ratio = *row.min_height / row.floor;
    r["min_canonical_height"] = row.min_height ? ordered_json(decimal(*row.min_height, 12)) : ordered_json(nullptr);
    r["floor"] = decimal(row.floor, 12);
    r["ratio"] = ratio ? ordered_json(decimal(*ratio, 12)) : ordered_json(nullptr);
    r["points_searched"] = row.searched;
    r["budget_exceeded"] = row.over_budget;
    if (!row.violations.empty()) r["violations"] = row.violations;
    table.push_back(r);
    violations += row.violations.size();
    over_budget = over_budget || row.over_budget;
    csv << '"' << row.id << "\"," << row.degree << ',' << (row.min_height ? decimal(*row.min_height, 12) : "") << ','
        << decimal(row.floor, 12) << ',' << (ratio ? decimal(*ratio, 12) : "") << ',' << row.searched << '\n';
  }
  report.body = {{"p", p},
                 {"search_bound", rational_to_string(bound)},
                 {"rows", table},
                 {"skipped", skipped},
                 {"violations", violations},
                 {"partial", over_budget}};
  report.csv = csv.str();
  report.exit_code = violations > 0 ? InvariantViolation : over_budget ? OverBudget : Success;
  return report;
}

Report cmd_demo_isotrivial(const RunConfig& cfg) {
  const std::uint32_t p = cfg.p.value_or(5);
  if (!PrimeField::is_prime(p)) throw InputError(std::to_string(p) + " is not prime");
  if (p == 2)
    throw InputError(
        "p = 2 is not implemented: the family needs p odd; a p = 2 analogue exists but is out of scope");
  const std::uint32_t max_level = cfg.max_level.value_or(2);
  const Rational eps = positive(cfg.epsilon, "epsilon");
  const auto E = isotrivial_twist_curve(p);

  Report report;
  ordered_json rows = ordered_json::array();
  std::optional<CanonicalHeight> first;
  for (std::uint32_t n = 0; n <= max_level; ++n) {
    const TowerPoint P = isotrivial_family_point(E, n);
    const bool on_curve = P.twist().contains(P.rep());
    const bool minimal = P.level() == n;
    const auto h = canonical_height(P, eps);
    if (!first) first = h;
    const Rational expected = first->value / power(p, n);
    const bool scaling = abs(h.value - expected) <= 2 * eps;
    if (!on_curve || !minimal || !scaling) report.exit_code = InvariantViolation;
    rows.push_back({{"n", n},
                    {"point", point_to_json(P)},
                    {"on_curve", on_curve},
                    {"level_minimal", minimal},
                    {"naive", rational_to_string(naive_height(P))},
                    {"canonical", canonical_to_json(h)},
                    {"canonical_approx", decimal(h.value, 10)},
                    {"expected_approx", decimal(expected, 10)},
                    {"scaling_holds", scaling}});
  }
  report.body = {
      {"curve", curve_to_json(E)},
      {"isotrivial", is_isotrivial(E)},
      {"j", E.j().to_string()},
      {"correspondence",
       "E_d is the quadratic twist of y^2 = x^3 + x by d = t^3 + t; (x, y) over F_p(t, sqrt(d)) maps to "
       "(d x, d^(3/2) y), sending (t, sqrt(d)) to P_0 and F^-n of it to P_n"},
      {"epsilon", rational_to_string(eps)},
      {"rows", rows}};
  return report;
}

Report run(const std::string& name, const RunConfig& cfg, std::string& error) {
  static const std::map<std::string, Report (*)(const RunConfig&)> table = {
      {"invariants", cmd_invariants}, {"disc", cmd_disc},         {"height", cmd_height},
      {"canheight", cmd_canheight},   {"torsion", cmd_torsion},   {"enumerate", cmd_enumerate},
      {"descend", cmd_descend},       {"gs-check", cmd_gs_check}, {"gs-survey", cmd_gs_survey},
      {"demo-isotrivial", cmd_demo_isotrivial}};
  auto it = table.find(name);
  if (it == table.end()) {
    error = "unknown subcommand " + name;
    return {{}, BadInput};
  }
  try {
    return it->second(cfg);
  } catch (const BudgetExceededError& e) {
    error = e.what();
    return {{}, OverBudget};
  } catch (const ResourceLimitError& e) {
    error = e.what();
    return {{}, OverBudget};
  } catch (const InputError& e) {
    error = e.what();
  } catch (const ParseError& e) {
    error = e.what();
  } catch (const std::invalid_argument& e) {
    error = e.what();
  } catch (const ordered_json::exception& e) {
    error = e.what();
  } catch (const std::exception& e) {
    error = std::string("internal invariant violated: ") + e.what();
    return {{}, InvariantViolation};
  }
  return {{}, BadInput};
}

namespace {

void render(const ordered_json& j, int indent, std::ostringstream& os) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  auto scalar = [](const ordered_json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
  auto simple = [](const ordered_json& v) {
    return v.is_primitive() || (v.is_array() && std::all_of(v.begin(), v.end(), [](const auto& e) { return e.is_primitive(); }));
  };
  auto flat = [&](const ordered_json& v) {
    if (v.is_primitive()) return scalar(v);
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + scalar(v[i]);
    return s + "]";
  };
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) {
      if (simple(v)) {
        os << pad << k << ": " << flat(v) << '\n';
      } else if (v.is_object() && std::all_of(v.begin(), v.end(), [](const auto& e) { return e.is_primitive(); })) {
        std::string s;
        for (const auto& [kk, vv] : v.items()) s += (s.empty() ? "" : ", ") + kk + "=" + scalar(vv);
        os << pad << k << ": " << s << '\n';
      } else {
        os << pad << k << ":\n";
        render(v, indent + 2, os);
      }
    }
  } else if (j.is_array()) {
    for (const auto& v : j) {
      if (simple(v)) {
        os << pad << "- " << flat(v) << '\n';
      } else {
        os << pad << "-\n";
        render(v, indent + 2, os);
      }
    }
  } else {
    os << pad << scalar(j) << '\n';
  }
}

}  // namespace

std::string render_plain(const ordered_json& j) {
  std::ostringstream os;
  render(j, 0, os);
  return os.str();
}

}  // namespace kperec::cli
