#include "json_io.hpp"

namespace kperec::cli {

namespace {

std::string text_field(const ordered_json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string())
    throw InputError(std::string("expected a string field \"") + key + "\" in " + j.dump());
  return j[key].get<std::string>();
}

ordered_json points_to_json(const std::vector<TowerPoint>& pts) {
  ordered_json out = ordered_json::array();
  for (const auto& P : pts) out.push_back(point_to_json(P));
  return out;
}

}  // namespace

ordered_json parse_json(const std::string& text, const std::string& what) {
  try {
    return ordered_json::parse(text);
  } catch (const ordered_json::parse_error& e) {
    throw InputError("malformed " + what + " JSON at byte " + std::to_string(e.byte) + ": " + text);
  }
}

WeierstrassCurve curve_from_json(const ordered_json& j, std::optional<std::uint32_t> p) {
  if (!j.is_object()) throw InputError("curve must be a JSON object");
  if (j.contains("p")) {
    if (!j["p"].is_number_unsigned()) throw InputError("curve field \"p\" must be a positive integer");
    const auto q = j["p"].get<std::uint32_t>();
    if (p && *p != q) throw InputError("--p " + std::to_string(*p) + " disagrees with the curve's p = " + std::to_string(q));
    p = q;
  }
  if (!p) throw InputError("the prime p is missing: pass --p or put \"p\" in the curve");
  if (!PrimeField::is_prime(*p)) throw InputError(std::to_string(*p) + " is not prime");
  if (!j.contains("a") || !j["a"].is_array() || j["a"].size() != 5)
    throw InputError("curve field \"a\" must list five coefficients a1, a2, a3, a4, a6");
  std::array<RatFunc, 5> a;
  for (std::size_t i = 0; i < 5; ++i) {
    if (!j["a"][i].is_string()) throw InputError("curve coefficients must be strings");
    a[i] = parse_ratfunc(j["a"][i].get<std::string>(), *p);
  }
  return WeierstrassCurve(a);
}

ordered_json curve_to_json(const WeierstrassCurve& E) {
  ordered_json a = ordered_json::array();
  for (const auto& c : E.coefficients()) a.push_back(c.to_string());
  return {{"p", E.prime()}, {"a", a}};
}

TowerPoint point_from_json(const ordered_json& j, const WeierstrassCurve& E) {
  if (!j.is_object()) throw InputError("point must be a JSON object");
  if (j.value("infinity", false)) return TowerPoint::infinity(E);
  std::uint32_t level = 0;
  if (j.contains("level")) {
    if (!j["level"].is_number_unsigned()) throw InputError("point field \"level\" must be a nonnegative integer");
    level = j["level"].get<std::uint32_t>();
  }
  Affine Q{parse_ratfunc(text_field(j, "x"), E.prime()), parse_ratfunc(text_field(j, "y"), E.prime())};
  return TowerPoint(E, level, Q);
}

ordered_json point_to_json(const TowerPoint& P) {
  if (P.is_infinity()) return {{"infinity", true}};
  return {{"level", P.level()}, {"x", P.rep()->x.to_string()}, {"y", P.rep()->y.to_string()}};
}

ordered_json invariants_to_json(const WeierstrassCurve& E) {
  return {{"curve", curve_to_json(E)},
          {"b2", E.b2().to_string()},
          {"b4", E.b4().to_string()},
          {"b6", E.b6().to_string()},
          {"b8", E.b8().to_string()},
          {"c4", E.c4().to_string()},
          {"c6", E.c6().to_string()},
          {"disc", E.disc().to_string()},
          {"j", E.j().to_string()},
          {"isotrivial", is_isotrivial(E)}};
}

ordered_json discriminant_to_json(const DiscriminantReport& r) {
  ordered_json places = ordered_json::array();
  for (const auto& d : r.places)
    places.push_back({{"place", d.place.to_string()}, {"kodaira", d.kodaira.to_string()}, {"v", d.v_min_disc}});
  return {{"degree", r.degree}, {"semistable", r.semistable}, {"places", places}};
}

ordered_json canonical_to_json(const CanonicalHeight& h) {
  return {{"value", rational_to_string(h.value)}, {"error", rational_to_string(h.error)}};
}

ordered_json torsion_to_json(const PerfectTorsion& t) {
  ordered_json counts = ordered_json::array();
  for (const auto& [v, n] : t.group.counts) counts.push_back({{"place", v.to_string()}, {"count", n}});
  return {{"structure", t.group.structure},
          {"generators", points_to_json(t.group.generators)},
          {"generator_orders", t.group.generator_orders},
          {"order", t.group.order()},
          {"stabilized_at", t.stabilized_at},
          {"p_part_orders", t.p_part_orders},
          {"residue_counts", counts}};
}

ordered_json level_to_json(const LevelReport& r) {
  const auto& d = r.result;
  return {{"level", r.level},
          {"rank", d.rank},
          {"torsion", points_to_json(d.torsion)},
          {"free_generators", points_to_json(d.free_generators)},
          {"stabilized", d.stabilized},
          {"search_bound", rational_to_string(d.search_bound)},
          {"points_found", r.points_found},
          {"tower_containment", r.tower_containment},
          {"rank_bound", r.rank_bound}};
}

ordered_json closure_to_json(const PerfectClosureReport& r) {
  ordered_json levels = ordered_json::array();
  for (const auto& lv : r.levels) levels.push_back(level_to_json(lv));
  ordered_json out = {{"levels", levels}, {"ranks", r.ranks}};
  out["stabilized_at"] = r.stabilized_at ? ordered_json(*r.stabilized_at) : ordered_json(nullptr);
  return out;
}

ordered_json certificate_to_json(const GsCertificate& c) {
  ordered_json out = {{"curve_id", c.curve_id},
                      {"deg_min_disc", c.deg_min_disc},
                      {"floor", rational_to_string(c.floor)},
                      {"point", point_to_json(c.point)},
                      {"canonical", canonical_to_json(c.height)},
                      {"verdict", to_string(c.verdict)}};
  out["ratio"] = c.ratio ? ordered_json(rational_to_string(*c.ratio)) : ordered_json(nullptr);
  if (!c.diagnostics.empty()) out["diagnostics"] = c.diagnostics;
  return out;
}

}  // namespace kperec::cli
