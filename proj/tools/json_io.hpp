#pragma once

// JSON forms of curves, points and the reports printed by the CLI.

#include <optional>
#include <string>

#include "json.hpp"
#include "kperec/certificate.hpp"
#include "kperec/descent.hpp"
#include "kperec/heights.hpp"
#include "kperec/localdata.hpp"
#include "kperec/torsion.hpp"

namespace kperec::cli {

using nlohmann::ordered_json;

/// Bad user input: exit code 1.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// {"p": 5, "a": [a1, a2, a3, a4, a6]}; `p` may come from the command line instead.
WeierstrassCurve curve_from_json(const ordered_json& j, std::optional<std::uint32_t> p);
ordered_json curve_to_json(const WeierstrassCurve& E);

/// {"level": n, "x": ..., "y": ...} with x, y the coordinates on the n-th
/// Frobenius twist, or {"infinity": true}.
TowerPoint point_from_json(const ordered_json& j, const WeierstrassCurve& E);
ordered_json point_to_json(const TowerPoint& P);

ordered_json invariants_to_json(const WeierstrassCurve& E);
ordered_json discriminant_to_json(const DiscriminantReport& r);
ordered_json canonical_to_json(const CanonicalHeight& h);
ordered_json torsion_to_json(const PerfectTorsion& t);
ordered_json level_to_json(const LevelReport& r);
ordered_json closure_to_json(const PerfectClosureReport& r);
ordered_json certificate_to_json(const GsCertificate& c);

/// Parses text as JSON, reporting the byte offset of a syntax error.
ordered_json parse_json(const std::string& text, const std::string& what);

}  // namespace kperec::cli
