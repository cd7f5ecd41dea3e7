#pragma once

// Local reduction data via Tate's algorithm at every place of F_p(t),
// and the degree of the minimal discriminant divisor.

#include <array>
#include <string>
#include <vector>

#include "kperec/curve.hpp"

namespace kperec {

enum class ReductionClass { Good, Multiplicative, Additive };

enum class KodairaKind { I0, In, II, III, IV, I0Star, InStar, IVStar, IIIStar, IIStar };

struct Kodaira {
  KodairaKind kind = KodairaKind::I0;
  int n = 0;  // the index of I_n and I_n^*
  std::string to_string() const;
  friend bool operator==(const Kodaira&, const Kodaira&) = default;
};

/// Change of coordinates x = u^2 x' + r, y = u^3 y' + s u^2 x' + w.
struct CoordinateChange {
  RatFunc u, r, s, w;
  /// First this, then `next`.
  CoordinateChange then(const CoordinateChange& next) const;
  static CoordinateChange identity(std::uint32_t p);
};

struct ReductionData {
  Place place;
  Kodaira kodaira;
  std::int64_t v_min_disc = 0;
  ReductionClass reduction_class = ReductionClass::Good;
  /// For the infinite place the transform and model are in the variable s = 1/t.
  CoordinateChange transform;
  std::array<RatFunc, 5> minimal_model;
};

struct DiscriminantReport {
  std::vector<ReductionData> places;  // bad places only, sorted
  std::int64_t degree = 0;
  bool semistable = true;
};

/// Applies a change of coordinates to the a-invariants.
std::array<RatFunc, 5> transform_coefficients(const std::array<RatFunc, 5>& a, const CoordinateChange& c);

ReductionData local_minimal_data(const WeierstrassCurve& E, const Place& v);
/// Places where E could have bad reduction: factors of the discriminant and of
/// the coefficient denominators, plus infinity.
std::vector<Place> candidate_bad_places(const WeierstrassCurve& E);
DiscriminantReport discriminant_report(const WeierstrassCurve& E);
std::int64_t minimal_discriminant_degree(const WeierstrassCurve& E);

struct Semistability {
  bool semistable;
  std::vector<Place> additive_places;
};
Semistability is_semistable(const WeierstrassCurve& E);

}  // namespace kperec
