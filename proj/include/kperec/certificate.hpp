#pragma once

// Certifying the Goldfeld-Szpiro lower bound for one point.

#include <optional>
#include <stdexcept>
#include <string>

#include "kperec/heights.hpp"
#include "kperec/torsion.hpp"

namespace kperec {

enum class Verdict { Pass, Torsion, Fail };
std::string to_string(Verdict v);

/// The requested epsilon cannot separate the floor from zero.
class EpsTooCoarseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct GsCertificate {
  std::string curve_id;
  std::int64_t deg_min_disc = 0;
  Rational floor;
  TowerPoint point;
  CanonicalHeight height;
  Verdict verdict = Verdict::Fail;
  /// value / floor, when the floor is positive.
  std::optional<Rational> ratio;
  /// Filled in on a fail verdict.
  std::string diagnostics;
};

/// Torsion when the height vanishes to within eps and the point lies in the torsion
/// subgroup; otherwise pass iff value - error >= gs_floor(E).
/// Throws EpsTooCoarseError when the floor is positive but below 2 eps.
GsCertificate lehmer_certificate(const TowerPoint& P, const Rational& eps, const std::string& curve_id = "",
                                 const HeightOptions& opts = {});

}  // namespace kperec
