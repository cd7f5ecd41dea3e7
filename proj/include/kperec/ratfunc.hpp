#pragma once

// The rational function field K = F_p(t), its places, and the perfect closure.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "kperec/poly.hpp"

namespace kperec {

/// Reduced fraction num/den with den monic; zero is 0/1.
class RatFunc {
 public:
  RatFunc() = default;
  explicit RatFunc(std::uint32_t p) : num_(p), den_(Poly::constant(p, 1)) {}
  explicit RatFunc(Poly num);
  RatFunc(Poly num, Poly den);

  static RatFunc constant(std::uint32_t p, long long c) { return RatFunc(Poly::constant(p, c)); }
  static RatFunc t(std::uint32_t p) { return RatFunc(Poly::t(p)); }

  std::uint32_t prime() const { return num_.prime(); }
  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }

  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return num_.is_one() && den_.is_one(); }
  bool is_polynomial() const { return den_.is_one(); }
  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }

  /// H(f) = max(deg num, deg den); 0 for f = 0.
  std::int64_t height() const;

  RatFunc inverse() const;
  RatFunc pow(std::int64_t e) const;
  RatFunc frobenius() const;
  /// frobenius applied n times (f^{p^n}).
  RatFunc frobenius(std::uint32_t n) const;
  std::optional<RatFunc> pth_root() const;
  std::optional<RatFunc> sqrt() const;
  /// f(1/t).
  RatFunc invert_variable() const;

  std::string to_string() const;

  friend bool operator==(const RatFunc& a, const RatFunc& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const RatFunc& a, const RatFunc& b) {
    if (auto c = a.num_ <=> b.num_; c != 0) return c;
    return a.den_ <=> b.den_;
  }

  friend RatFunc operator+(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator-(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator-(const RatFunc& a);
  friend RatFunc operator*(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator/(const RatFunc& a, const RatFunc& b);
  RatFunc& operator+=(const RatFunc& b) { return *this = *this + b; }
  RatFunc& operator-=(const RatFunc& b) { return *this = *this - b; }
  RatFunc& operator*=(const RatFunc& b) { return *this = *this * b; }
  RatFunc scaled(long long c) const;

 private:
  void normalize();

  Poly num_;
  Poly den_;
};

/// Discrete valuation value; nullopt represents +infinity (valuation of 0).
struct Valuation {
  std::optional<std::int64_t> v;
  bool is_infinite() const { return !v.has_value(); }
  std::int64_t value() const;
  friend bool operator==(const Valuation&, const Valuation&) = default;
};

/// A place of F_p(t): a monic irreducible polynomial or the infinite place.
class Place {
 public:
  struct Infinite {
    friend bool operator==(const Infinite&, const Infinite&) = default;
  };

  static Place infinite() { return Place(Infinite{}); }
  /// Throws std::invalid_argument unless pi is monic irreducible.
  static Place finite(const Poly& pi);

  bool is_infinite() const { return std::holds_alternative<Infinite>(kind_); }
  /// The irreducible polynomial of a finite place.
  const Poly& poly() const;
  std::int64_t residue_degree() const;
  std::string to_string() const;

  friend bool operator==(const Place&, const Place&) = default;
  /// Finite places by Poly order, infinity last.
  friend bool operator<(const Place& a, const Place& b);

 private:
  explicit Place(std::variant<Poly, Infinite> k) : kind_(std::move(k)) {}
  std::variant<Poly, Infinite> kind_;
};

Valuation valuation(const RatFunc& f, const Place& v);
std::int64_t residue_degree(const Place& v);
/// Non-failing p-th root: absent when f is not a p-th power in K.
std::optional<RatFunc> pth_root(const RatFunc& f);
std::int64_t func_height(const RatFunc& f);
/// Places where f has a zero or a pole (finite ones from factoring, plus infinity).
std::vector<Place> support(const RatFunc& f);

/// rep^{1/p^level} in K^{1/p^level}, normalized so that the level is minimal.
class PerfElement {
 public:
  PerfElement(RatFunc rep, std::uint32_t level);

  const RatFunc& rep() const { return rep_; }
  std::uint32_t level() const { return level_; }
  std::uint32_t prime() const { return rep_.prime(); }

  /// Representation at a higher level L >= level().
  RatFunc rep_at(std::uint32_t L) const;
  PerfElement pow_p() const;

  friend bool operator==(const PerfElement&, const PerfElement&) = default;

 private:
  RatFunc rep_;
  std::uint32_t level_;
};

enum class PerfOp { Add, Sub, Mul, Div };
PerfElement perf_arith(const PerfElement& a, const PerfElement& b, PerfOp op);

/// Parse error with the byte offset where parsing failed.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t pos)
      : std::runtime_error(msg + " at position " + std::to_string(pos)), pos_(pos) {}
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

/// Grammar: integers (reduced mod p), `t`, + - * / ^ and parentheses.
RatFunc parse_ratfunc(std::string_view text, std::uint32_t p);
Place parse_place(std::string_view text, std::uint32_t p);

std::ostream& operator<<(std::ostream& os, const RatFunc& f);
std::ostream& operator<<(std::ostream& os, const Place& v);

}  // namespace kperec
