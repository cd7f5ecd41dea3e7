#pragma once

// Dense univariate polynomials over a prime field F_p.

#include <compare>
#include <iosfwd>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kperec {

using Coeff = std::uint32_t;

/// Arithmetic in F_p for a runtime prime p. Elements are residues in [0, p).
class PrimeField {
 public:
  explicit PrimeField(std::uint32_t p);

  std::uint32_t p() const { return p_; }

  Coeff reduce(long long v) const;
  Coeff add(Coeff a, Coeff b) const { Coeff s = a + b; return s >= p_ ? s - p_ : s; }
  Coeff sub(Coeff a, Coeff b) const { return a >= b ? a - b : a + p_ - b; }
  Coeff neg(Coeff a) const { return a == 0 ? 0 : p_ - a; }
  Coeff mul(Coeff a, Coeff b) const {
    return static_cast<Coeff>((static_cast<std::uint64_t>(a) * b) % p_);
  }
  Coeff pow(Coeff a, std::uint64_t e) const;
  Coeff inv(Coeff a) const;
  /// Square root in F_p (p odd or 2), if one exists.
  std::optional<Coeff> sqrt(Coeff a) const;
  bool is_square(Coeff a) const;

  static bool is_prime(std::uint64_t n);

 private:
  std::uint32_t p_;
};

/// Polynomial degree with a distinguished -infinity for the zero polynomial.
class Degree {
 public:
  constexpr Degree() = default;  // -infinity
  constexpr explicit Degree(std::int64_t d) : d_(d) {}
  static constexpr Degree neg_inf() { return Degree(); }

  constexpr bool is_neg_inf() const { return !d_.has_value(); }
  std::int64_t value() const {
    if (!d_) throw std::logic_error("degree of the zero polynomial is -infinity");
    return *d_;
  }
  std::int64_t value_or(std::int64_t fallback) const { return d_.value_or(fallback); }

  friend constexpr bool operator==(const Degree&, const Degree&) = default;
  friend constexpr std::strong_ordering operator<=>(const Degree& a, const Degree& b) {
    if (!a.d_ && !b.d_) return std::strong_ordering::equal;
    if (!a.d_) return std::strong_ordering::less;
    if (!b.d_) return std::strong_ordering::greater;
    return *a.d_ <=> *b.d_;
  }
  friend constexpr bool operator==(const Degree& a, std::int64_t b) { return a.d_ && *a.d_ == b; }

 private:
  std::optional<std::int64_t> d_;
};

/// Element of F_p[t]. Coefficients low-to-high, no trailing zeros.
class Poly {
 public:
  Poly() = default;  // the zero polynomial over an unset field; only for containers
  explicit Poly(std::uint32_t p) : p_(p) {}
  Poly(std::uint32_t p, std::vector<Coeff> coeffs);

  static Poly constant(std::uint32_t p, long long c);
  static Poly monomial(std::uint32_t p, Coeff c, std::size_t k);
  static Poly t(std::uint32_t p) { return monomial(p, 1, 1); }
  /// Build from signed integer coefficients (low to high), reduced mod p.
  static Poly from_ints(std::uint32_t p, const std::vector<long long>& coeffs);

  std::uint32_t prime() const { return p_; }
  PrimeField field() const { return PrimeField(p_); }
  const std::vector<Coeff>& coeffs() const { return c_; }

  Degree degree() const {
    return c_.empty() ? Degree::neg_inf() : Degree(static_cast<std::int64_t>(c_.size()) - 1);
  }
  /// Degree with zero mapped to -1; convenient for loops.
  std::int64_t deg() const { return static_cast<std::int64_t>(c_.size()) - 1; }
  std::size_t size() const { return c_.size(); }
  bool is_zero() const { return c_.empty(); }
  bool is_constant() const { return c_.size() <= 1; }
  bool is_one() const { return c_.size() == 1 && c_[0] == 1; }
  bool is_monic() const { return !c_.empty() && c_.back() == 1; }
  Coeff lead() const { return c_.empty() ? 0 : c_.back(); }
  Coeff operator[](std::size_t i) const { return i < c_.size() ? c_[i] : 0; }

  Poly monic() const;
  Poly scaled(Coeff s) const;
  Poly derivative() const;
  Coeff eval(Coeff x) const;
  /// f(t) -> f(t + c)
  Poly shift(Coeff c) const;
  /// t^n * f(1/t); requires n >= deg f.
  Poly reversed(std::size_t n) const;
  /// f mod t^n
  Poly truncated(std::size_t n) const;
  /// f * t^k
  Poly shifted_up(std::size_t k) const;
  /// Exponent of t dividing f (f != 0).
  std::size_t t_adic_valuation() const;
  /// f(t)^p = f(t^p) over F_p.
  Poly frobenius() const;
  /// g with g^p = f, if it exists.
  std::optional<Poly> pth_root() const;
  Poly pow(std::uint64_t e) const;

  std::string to_string() const;

  friend bool operator==(const Poly& a, const Poly& b) { return a.p_ == b.p_ && a.c_ == b.c_; }
  /// Total order: by degree, then coefficients from the top down.
  friend std::strong_ordering operator<=>(const Poly& a, const Poly& b);

  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a);
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator/(const Poly& a, const Poly& b);
  friend Poly operator%(const Poly& a, const Poly& b);
  Poly& operator+=(const Poly& b) { return *this = *this + b; }
  Poly& operator-=(const Poly& b) { return *this = *this - b; }
  Poly& operator*=(const Poly& b) { return *this = *this * b; }

 private:
  void trim();

  std::uint32_t p_ = 0;
  std::vector<Coeff> c_;
};

/// Quotient and remainder; throws std::domain_error on division by zero.
std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b);
/// Monic gcd (zero if both are zero).
Poly gcd(const Poly& a, const Poly& b);
/// Returns (g, s, u) with s*a + u*b = g monic.
struct ExtGcd {
  Poly g, s, u;
};
ExtGcd ext_gcd(const Poly& a, const Poly& b);
/// base^e mod m.
Poly powmod(const Poly& base, std::uint64_t e, const Poly& m);
/// Inverse of a modulo m; throws std::domain_error if not invertible.
Poly invmod(const Poly& a, const Poly& m);
/// a*b mod t^n
Poly mul_trunc(const Poly& a, const Poly& b, std::size_t n);
/// Divides f out of a as often as possible and returns the count (a != 0, deg f >= 1).
std::size_t strip_factor(Poly& a, const Poly& f);

/// Square root of a polynomial over F_p (p odd), if it is a perfect square.
std::optional<Poly> poly_sqrt(const Poly& f);

void require_same_field(const Poly& a, const Poly& b);

std::ostream& operator<<(std::ostream& os, const Poly& f);

}  // namespace kperec
