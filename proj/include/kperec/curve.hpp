#pragma once

// Weierstrass curves over K = F_p(t), the group law, Frobenius twists, and
// points of E(K^{1/p^n}) stored as points on the n-th twist.

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

#include "kperec/ratfunc.hpp"

namespace kperec {

struct Affine {
  RatFunc x;
  RatFunc y;
  friend bool operator==(const Affine&, const Affine&) = default;
};

/// A point of E(K); nullopt is the point at infinity.
using Point = std::optional<Affine>;

/// Coordinatewise p^n-th power.
Point frobenius(const Point& P, std::uint32_t n = 1);
std::string point_to_string(const Point& P);

class SingularCurveError : public std::invalid_argument {
 public:
  explicit SingularCurveError(const std::string& disc)
      : std::invalid_argument("singular curve: discriminant " + disc) {}
};

/// y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 with nonzero discriminant.
class WeierstrassCurve {
 public:
  /// Coefficients in the order a1, a2, a3, a4, a6.
  explicit WeierstrassCurve(std::array<RatFunc, 5> a);
  static WeierstrassCurve short_form(const RatFunc& a4, const RatFunc& a6);

  std::uint32_t prime() const { return a_[0].prime(); }
  const std::array<RatFunc, 5>& coefficients() const { return a_; }
  const RatFunc& a1() const { return a_[0]; }
  const RatFunc& a2() const { return a_[1]; }
  const RatFunc& a3() const { return a_[2]; }
  const RatFunc& a4() const { return a_[3]; }
  const RatFunc& a6() const { return a_[4]; }
  const RatFunc& b2() const { return b2_; }
  const RatFunc& b4() const { return b4_; }
  const RatFunc& b6() const { return b6_; }
  const RatFunc& b8() const { return b8_; }
  const RatFunc& c4() const { return c4_; }
  const RatFunc& c6() const { return c6_; }
  const RatFunc& disc() const { return disc_; }
  const RatFunc& j() const { return j_; }

  bool contains(const Point& P) const;
  Point negate(const Point& P) const;
  Point add(const Point& P, const Point& Q) const;
  Point dbl(const Point& P) const { return add(P, P); }
  Point multiply(std::int64_t m, const Point& P) const;

  std::string to_string() const;
  friend bool operator==(const WeierstrassCurve& a, const WeierstrassCurve& b) { return a.a_ == b.a_; }

 private:
  std::array<RatFunc, 5> a_;
  RatFunc b2_, b4_, b6_, b8_, c4_, c6_, disc_, j_;
};

/// Coefficients raised to the p^n.
WeierstrassCurve frobenius_twist(const WeierstrassCurve& E, std::uint32_t n);
/// Over F_p(t) the j-invariant is algebraic over F_p iff it is constant.
bool is_isotrivial(const WeierstrassCurve& E);

/// A point of E(K^{1/p^level}), held as the point rep on the twist E^{(p^level)}(K)
/// that the Frobenius bijection sends it to. The level is always minimal.
class TowerPoint {
 public:
  /// Throws std::invalid_argument if rep is not on the level-th twist.
  TowerPoint(const WeierstrassCurve& base, std::uint32_t level, Point rep);
  TowerPoint(std::shared_ptr<const WeierstrassCurve> base, std::uint32_t level, Point rep);
  static TowerPoint infinity(const WeierstrassCurve& base);

  const WeierstrassCurve& base() const { return *base_; }
  const std::shared_ptr<const WeierstrassCurve>& base_ptr() const { return base_; }
  /// The curve E^{(p^level)} that rep lives on.
  const WeierstrassCurve& twist() const { return *twist_; }
  std::uint32_t level() const { return level_; }
  const Point& rep() const { return rep_; }
  bool is_infinity() const { return !rep_.has_value(); }
  /// Representative on the twist at a level L >= level().
  Point rep_at(std::uint32_t L) const;

  std::string to_string() const;
  friend bool operator==(const TowerPoint& a, const TowerPoint& b);

 private:
  struct Trusted {};
  TowerPoint(Trusted, std::shared_ptr<const WeierstrassCurve> base,
             std::shared_ptr<const WeierstrassCurve> twist, std::uint32_t level, Point rep);
  void normalize();

  std::shared_ptr<const WeierstrassCurve> base_;
  std::shared_ptr<const WeierstrassCurve> twist_;
  std::uint32_t level_ = 0;
  Point rep_;

  friend TowerPoint add(const TowerPoint&, const TowerPoint&);
  friend TowerPoint negate(const TowerPoint&);
  friend TowerPoint scalar_mul(std::int64_t, const TowerPoint&);
  friend TowerPoint frobenius_map(const TowerPoint&);
  friend TowerPoint frobenius_inverse(const WeierstrassCurve&, const Point&);
};

/// Throws std::invalid_argument when the base curves differ.
TowerPoint add(const TowerPoint& P, const TowerPoint& Q);
TowerPoint negate(const TowerPoint& P);
TowerPoint scalar_mul(std::int64_t m, const TowerPoint& P);

/// F: E(K^{1/p^n}) -> E^{(p)}(K^{1/p^n}). The result has base E^{(p)}; its level
/// is n-1 with the same representative for n >= 1, and rep^p at level 0 for n = 0.
TowerPoint frobenius_map(const TowerPoint& P);
/// The unique P in E(K^{1/p}) with F(P) = Q, for Q in E^{(p)}(K).
TowerPoint frobenius_inverse(const WeierstrassCurve& E, const Point& Q);
/// V(Q) = p * F^{-1}(Q), a point of E(K). Throws std::logic_error if it fails to
/// land at level 0.
TowerPoint verschiebung(const WeierstrassCurve& E, const Point& Q);

}  // namespace kperec
