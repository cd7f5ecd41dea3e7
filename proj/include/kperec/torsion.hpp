#pragma once

// Reduction at good places, naive point counts over residue fields, and the
// torsion subgroups of E(K) and of E(K^{1/p^n}).

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "kperec/curve.hpp"
#include "kperec/kpoly.hpp"

namespace kperec {

class BadReductionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The reduction of a minimal model at a place of good reduction, over
/// F_q = F_p[t]/(modulus). At infinity the modulus is the uniformizer s = 1/t.
class FiniteCurve {
 public:
  /// Throws BadReductionError if E has bad reduction at v.
  FiniteCurve(const WeierstrassCurve& E, const Place& v);

  const Place& place() const { return place_; }
  const Poly& modulus() const { return modulus_; }
  std::uint64_t field_size() const { return q_; }
  /// Reduced a1, a2, a3, a4, a6 as residues mod the modulus.
  const std::array<Poly, 5>& coefficients() const { return a_; }

  /// |E~(F_q)| by running over every x in F_q.
  std::uint64_t count_points() const;
  /// Whether P in E(K) reduces to the identity.
  bool reduces_to_identity(const Point& P) const;

 private:
  WeierstrassCurve curve_;
  Place place_;
  Poly modulus_;
  std::uint64_t q_ = 0;
  std::array<Poly, 5> a_;
  // minimal model over the local variable, and the change of coordinates to it
  std::array<RatFunc, 5> model_;
  RatFunc u_, r_, s_, w_;
};

std::uint64_t count_points(const WeierstrassCurve& E, const Place& v);

/// Finite places of good reduction, by degree and then lexicographically.
std::vector<Place> good_places(const WeierstrassCurve& E, std::size_t count, std::size_t max_degree);

/// f_n = psi_n for odd n and psi_n / psi_2 for even n, as polynomials in x.
KPoly division_polynomial(const WeierstrassCurve& E, std::int64_t n);
/// Points of E(K) with the given x-coordinate (zero, one or two of them).
std::vector<Point> points_with_x(const WeierstrassCurve& E, const RatFunc& x);
/// Every Q in E(K) with ell * Q = T.
std::vector<Point> division_points(const WeierstrassCurve& E, const Point& T, std::int64_t ell);

struct TorsionOptions {
  /// Overrides the two places used to bound the prime-to-p part.
  std::optional<std::array<Place, 2>> places;
  std::size_t max_place_degree = 4;
};

struct TorsionGroup {
  /// Invariant factors d1 | d2 with the trivial ones dropped: [], [n] or [d1, d2].
  std::vector<std::int64_t> structure;
  std::vector<TowerPoint> generators;
  std::vector<std::int64_t> generator_orders;
  /// Every element, Infinity first.
  std::vector<TowerPoint> elements;
  /// Point counts at the places used for the prime-to-p bound.
  std::vector<std::pair<Place, std::uint64_t>> counts;

  std::int64_t order() const { return static_cast<std::int64_t>(elements.size()); }
  bool contains(const TowerPoint& P) const;
};

TorsionGroup torsion_subgroup(const WeierstrassCurve& E, const TorsionOptions& opts = {});

struct PerfectTorsion {
  TorsionGroup group;
  /// Smallest level after which the p-part stopped growing (observed, not proved).
  std::uint32_t stabilized_at = 0;
  /// |p-part| of E(K^{1/p^n}) for n = 0..max_level.
  std::vector<std::int64_t> p_part_orders;
};

PerfectTorsion torsion_perfect_closure(const WeierstrassCurve& E, std::uint32_t max_level,
                                       const TorsionOptions& opts = {});

/// Order of a torsion point by repeated addition, or nullopt past `limit`.
std::optional<std::int64_t> point_order(const WeierstrassCurve& E, const Point& P, std::int64_t limit);

}  // namespace kperec
