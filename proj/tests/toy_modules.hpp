#pragma once

// Small height modules with brute-force answers, shared by the descent tests
// and the acceptance suite.

#include <array>
#include <numeric>
#include <string>
#include <vector>

#include "kperec/descent.hpp"

namespace toy {

using kperec::HeightModule;
using kperec::Rational;

// Z with h(x) = x^2 and a = 2
struct IntModule {
  using Element = long long;
  long long zero() const { return 0; }
  long long add(long long x, long long y) const { return x + y; }
  long long negate(long long x) const { return -x; }
  long long act(long long x) const { return 2 * x; }
  Rational height(long long x) const { return Rational(x * x); }
  std::vector<long long> enumerate(const Rational& D) const {
    std::vector<long long> out;
    for (long long x = -100; x <= 100; ++x)
      if (Rational(x * x) <= D) out.push_back(x);
    return out;
  }
  std::vector<long long> torsion() const { return {0}; }
  Rational floor() const { return Rational(1, 2); }
  std::string key(long long x) const { return std::to_string(x); }
};

using Vec2 = std::array<long long, 2>;

// the lattice spanned by u and v inside Z^2, h = L1 norm, a = 4
struct LatticeModule {
  using Element = Vec2;
  Vec2 u{1, 0}, v{0, 1};
  Vec2 zero() const { return {0, 0}; }
  Vec2 add(const Vec2& x, const Vec2& y) const { return {x[0] + y[0], x[1] + y[1]}; }
  Vec2 negate(const Vec2& x) const { return {-x[0], -x[1]}; }
  Vec2 act(const Vec2& x) const { return {4 * x[0], 4 * x[1]}; }
  Rational height(const Vec2& x) const { return Rational(std::abs(x[0]) + std::abs(x[1])); }
  Vec2 combo(long long i, long long j) const { return {i * u[0] + j * v[0], i * u[1] + j * v[1]}; }
  bool member(const Vec2& x) const {
    // solve x = i u + j v by Cramer's rule
    const long long det = u[0] * v[1] - u[1] * v[0];
    const long long i = x[0] * v[1] - x[1] * v[0], j = u[0] * x[1] - u[1] * x[0];
    return i % det == 0 && j % det == 0;
  }
  std::vector<Vec2> enumerate(const Rational& D) const {
    std::vector<Vec2> out;
    for (long long a = -40; a <= 40; ++a)
      for (long long b = -40; b <= 40; ++b)
        if (Rational(std::abs(a) + std::abs(b)) <= D && member({a, b})) out.push_back({a, b});
    return out;
  }
  std::vector<Vec2> torsion() const { return {{0, 0}}; }
  Rational floor() const { return Rational(1, 2); }
  std::string key(const Vec2& x) const { return std::to_string(x[0]) + "," + std::to_string(x[1]); }
};

// Z/5 with h = 0 and a = 2
struct CyclicModule {
  using Element = int;
  int zero() const { return 0; }
  int add(int x, int y) const { return (x + y) % 5; }
  int negate(int x) const { return (5 - x) % 5; }
  int act(int x) const { return (2 * x) % 5; }
  Rational height(int) const { return 0; }
  std::vector<int> enumerate(const Rational&) const { return {0, 1, 2, 3, 4}; }
  std::vector<int> torsion() const { return {0, 1, 2, 3, 4}; }
  Rational floor() const { return 0; }
  std::string key(int x) const { return std::to_string(x); }
};

static_assert(HeightModule<IntModule>);
static_assert(HeightModule<LatticeModule>);
static_assert(HeightModule<CyclicModule>);

// gcd of the 2x2 minors: the index of the span of vs in Z^2 (0 if rank < 2)
inline long long lattice_index(const std::vector<Vec2>& vs) {
  long long g = 0;
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t j = i + 1; j < vs.size(); ++j) g = std::gcd(g, vs[i][0] * vs[j][1] - vs[i][1] * vs[j][0]);
  return g;
}

// Z/3 x Z with h(r, n) = n^2 and a = 2
struct MixedModule {
  using Element = std::array<long long, 2>;
  Element zero() const { return {0, 0}; }
  Element add(const Element& x, const Element& y) const { return {(x[0] + y[0]) % 3, x[1] + y[1]}; }
  Element negate(const Element& x) const { return {(3 - x[0]) % 3, -x[1]}; }
  Element act(const Element& x) const { return {(2 * x[0]) % 3, 2 * x[1]}; }
  Rational height(const Element& x) const { return Rational(x[1] * x[1]); }
  std::vector<Element> enumerate(const Rational& D) const {
    std::vector<Element> out;
    for (long long r = 0; r < 3; ++r)
      for (long long n = -60; n <= 60; ++n)
        if (Rational(n * n) <= D) out.push_back({r, n});
    return out;
  }
  std::vector<Element> torsion() const { return {{0, 0}, {1, 0}, {2, 0}}; }
  Rational floor() const { return Rational(1, 2); }
  std::string key(const Element& x) const { return std::to_string(x[0]) + ":" + std::to_string(x[1]); }
};

static_assert(HeightModule<MixedModule>);

}  // namespace toy
