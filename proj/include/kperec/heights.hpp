#pragma once

// Naive and canonical heights of points of E(K^{1/p^n}).

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "kperec/curve.hpp"

namespace kperec {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

std::string rational_to_string(const Rational& q);
/// Accepts "a", "a/b", decimal "0.001" and scientific "1e-6".
Rational parse_rational(const std::string& text);

/// h_K(P) = H(x(rep)) / p^level; Infinity has height 0.
Rational naive_height(const TowerPoint& P);
/// The same quantity as a sum of local pole orders over the places of x(rep).
Rational naive_height_by_places(const TowerPoint& P);

/// The duplication map x -> Phi(x)/D(x) of a curve, moved to an integral model,
/// together with the constants of |h(2P) - 4h(P)| <= C.
class DuplicationData {
 public:
  explicit DuplicationData(const WeierstrassCurve& E);

  const WeierstrassCurve& curve() const { return curve_; }
  const WeierstrassCurve& integral_model() const { return model_; }
  /// x_model = scale^2 x, y_model = scale^3 y.
  const RatFunc& scale() const { return scale_; }
  Point to_model(const Point& P) const;

  /// Coefficients of the quartic forms Phi(X, Z) and D(X, Z), X^4 first.
  const std::array<Poly, 5>& phi() const { return phi_; }
  const std::array<Poly, 5>& dup_den() const { return den_; }
  /// Resultant of Phi and D.
  const Poly& resultant() const { return res_; }
  /// Irreducible factors of the resultant.
  const std::vector<Poly>& bad_primes() const { return primes_; }

  /// h(2P) <= 4h(P) + upper() on the integral model.
  std::int64_t upper() const { return upper_; }
  /// h(2P) >= 4h(P) - lower() on the integral model.
  std::int64_t lower() const { return lower_; }
  /// C_E for the original model.
  std::int64_t constant() const;

 private:
  WeierstrassCurve curve_;
  RatFunc scale_;
  WeierstrassCurve model_;
  std::array<Poly, 5> phi_, den_;
  Poly res_;
  std::vector<Poly> primes_;
  std::int64_t upper_ = 0, lower_ = 0;
};

/// C_E with |h(2P) - 4h(P)| <= C_E for every P in E(K).
Rational duplication_height_bound(const WeierstrassCurve& E);

class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct HeightOptions {
  int max_doublings = 40;
};

struct CanonicalHeight {
  Rational value;
  Rational error;
  /// Set when the doubling orbit closed up, in which case value = error = 0.
  bool torsion = false;
  int doublings = 0;
};

/// ĥ(P) to within eps: (1/2) h(2^m P)/4^m with the certified error C_E/(6 4^m).
CanonicalHeight canonical_height(const TowerPoint& P, const Rational& eps, const HeightOptions& opts = {});
/// For a point Q on data.curve() standing for a point of level `level`.
CanonicalHeight canonical_height(const DuplicationData& data, const Point& Q, std::uint32_t level,
                                 const Rational& eps, const HeightOptions& opts = {});

/// (1/2) H(x(2^m rep)) / (4^m p^n) by repeated doubling with the group law.
Rational doubling_approximation(const TowerPoint& P, int m);

/// 10^-13 deg(Delta_min).
Rational gs_floor(const WeierstrassCurve& E);

}  // namespace kperec
