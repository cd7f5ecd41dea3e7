#pragma once

// Polynomials in one variable X over K = F_p(t), and their roots in K.

#include <vector>

#include "kperec/ratfunc.hpp"

namespace kperec {

/// Coefficients low-to-high in X, no trailing zeros.
class KPoly {
 public:
  explicit KPoly(std::uint32_t p) : p_(p) {}
  KPoly(std::uint32_t p, std::vector<RatFunc> coeffs);
  static KPoly constant(const RatFunc& c) { return KPoly(c.prime(), {c}); }
  /// X - r
  static KPoly linear(const RatFunc& r);

  std::uint32_t prime() const { return p_; }
  std::int64_t deg() const { return static_cast<std::int64_t>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<RatFunc>& coeffs() const { return c_; }
  const RatFunc& operator[](std::size_t i) const { return c_[i]; }
  const RatFunc& lead() const { return c_.back(); }

  KPoly monic() const;
  KPoly derivative() const;
  RatFunc eval(const RatFunc& x) const;

  friend bool operator==(const KPoly&, const KPoly&) = default;
  friend KPoly operator+(const KPoly& a, const KPoly& b);
  friend KPoly operator-(const KPoly& a, const KPoly& b);
  friend KPoly operator*(const KPoly& a, const KPoly& b);
  KPoly operator*(const RatFunc& c) const;
  friend std::pair<KPoly, KPoly> divmod(const KPoly& a, const KPoly& b);

 private:
  void trim();
  std::uint32_t p_;
  std::vector<RatFunc> c_;
};

/// Monic gcd.
KPoly gcd(const KPoly& a, const KPoly& b);

/// Distinct roots of f in K, sorted. f must be nonzero.
std::vector<RatFunc> roots_in_K(const KPoly& f);

}  // namespace kperec
