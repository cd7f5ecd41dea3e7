#include "doctest.h"
#include "generators.hpp"
#include "kperec/heights.hpp"
#include "kperec/localdata.hpp"

using namespace kperec;

namespace {

RatFunc R(const char* s, std::uint32_t p) { return parse_ratfunc(s, p); }

WeierstrassCurve short_curve(const char* a4, const char* a6, std::uint32_t p) {
  return WeierstrassCurve::short_form(R(a4, p), R(a6, p));
}

WeierstrassCurve E1() { return short_curve("1", "t^2-t^3-t", 5); }

// x(2P) straight from the b-invariants, independent of the group law code.
RatFunc dup_x(const WeierstrassCurve& E, const RatFunc& x) {
  const std::uint32_t p = E.prime();
  auto k = [p](long long c) { return RatFunc::constant(p, c); };
  RatFunc num = x * x * x * x - E.b4() * x * x - k(2) * E.b6() * x - E.b8();
  RatFunc den = k(4) * x * x * x + E.b2() * x * x + k(2) * E.b4() * x + E.b6();
  return num / den;
}

// sqrt(a) <= sqrt(b) + sqrt(c) for nonnegative rationals, decided exactly
bool sqrt_triangle(const Rational& a, const Rational& b, const Rational& c) {
  Rational d = a - b - c;
  if (d <= 0) return true;
  return d * d <= 4 * b * c;
}

Rational clamp0(const Rational& q) { return q < 0 ? Rational(0) : q; }

const Rational kEps = Rational(1, 1000000);

}  // namespace

TEST_CASE("naive heights") {
  auto E = E1();
  CHECK(naive_height(TowerPoint::infinity(E)) == 0);
  TowerPoint P(E, 0, Affine{R("t", 5), R("t", 5)});
  CHECK(naive_height(P) == 1);
  CHECK(naive_height_by_places(P) == 1);

  auto Ed = short_curve("(t^3+t)^2", "0", 5);
  const RatFunc e = R("t^3+t", 5);
  TowerPoint P1(Ed, 1, Affine{R("t", 5) * e.pow(5), e.pow(8)});
  REQUIRE(P1.level() == 1);
  CHECK(naive_height(P1) == Rational(16, 5));
  CHECK(naive_height_by_places(P1) == Rational(16, 5));
}

TEST_CASE("naive height agrees with the sum over places") {
  std::mt19937 rng(31);
  for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
    auto c = gen::curve_with_points(p, rng);
    for (int i = 0; i < 20; ++i) {
      TowerPoint P(c.curve, 0, gen::combo(c, 3, rng));
      CHECK(naive_height(P) == naive_height_by_places(P));
    }
  }
}

TEST_CASE("rational parsing") {
  CHECK(parse_rational("1e-6") == Rational(1, 1000000));
  CHECK(parse_rational("0.25") == Rational(1, 4));
  CHECK(parse_rational("3/2") == Rational(3, 2));
  CHECK(parse_rational("-7") == -7);
  CHECK(rational_to_string(Rational(6, 4)) == "3/2");
  CHECK_THROWS_AS(parse_rational("x"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
}

TEST_CASE("duplication bound holds on sampled x-coordinates") {
  std::mt19937 rng(37);
  std::vector<WeierstrassCurve> curves = {E1(), short_curve("1", "t", 5), short_curve("t/(t+1)", "1/t^2", 5)};
  for (std::uint32_t p : {2u, 3u, 7u}) curves.push_back(gen::curve_with_points(p, rng, 1, true).curve);
  for (const auto& E : curves) {
    const Rational C = duplication_height_bound(E);
    CHECK(C >= 0);
    std::int64_t worst = 0;
    for (int i = 0; i < 1000; ++i) {
      RatFunc x = gen::ratfunc(E.prime(), 1 + static_cast<int>(rng() % 4), rng);
      RatFunc den = E.b6() + x * (RatFunc::constant(E.prime(), 2) * E.b4() +
                                  x * (E.b2() + RatFunc::constant(E.prime(), 4) * x));
      if (den.is_zero()) continue;
      worst = std::max(worst, std::abs(dup_x(E, x).height() - 4 * x.height()));
    }
    CHECK(Rational(worst) <= C);
  }
}

TEST_CASE("resultant of the duplication forms is a constant times disc^2") {
  std::mt19937 rng(41);
  for (std::uint32_t p : {3u, 5u, 7u}) {
    auto E = gen::curve_with_points(p, rng).curve;
    DuplicationData d(E);
    RatFunc q = RatFunc(d.resultant()) / (d.integral_model().disc() * d.integral_model().disc());
    CHECK(q.is_constant());
  }
}

TEST_CASE("duplication constants scale with the Frobenius twist") {
  std::mt19937 rng(43);
  for (std::uint32_t p : {3u, 5u}) {
    auto E = gen::curve_with_points(p, rng).curve;
    DuplicationData d(E), dt(frobenius_twist(E, 1));
    CHECK(dt.upper() == static_cast<std::int64_t>(p) * d.upper());
    CHECK(dt.lower() == static_cast<std::int64_t>(p) * d.lower());
  }
}

TEST_CASE("local tracking reproduces exact doubling") {
  std::mt19937 rng(47);
  int compared = 0;
  for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
    auto c = gen::curve_with_points(p, rng);
    DuplicationData data(c.curve);
    for (int i = 0; i < 4; ++i) {
      TowerPoint P(c.curve, 0, gen::combo(c, 1, rng));
      if (P.is_infinity()) continue;
      // a coarse epsilon keeps the doubling count small enough for the group law
      for (Rational eps : {Rational(1), Rational(1, 16), Rational(1, 256)}) {
        auto h = canonical_height(P, eps);
        if (h.torsion) continue;
        CHECK(h.error <= eps);
        if (h.doublings <= 5) {
          CHECK(h.value == doubling_approximation(P, h.doublings));
          ++compared;
        }
      }
    }
  }
  CHECK(compared >= 10);
}

TEST_CASE("non-integral models give the same canonical height") {
  // x -> x/t^2, y -> y/t^3 maps E1 to a model with denominators
  auto E = E1();
  const RatFunc t = R("t", 5);
  auto a = E.coefficients();
  a[3] = a[3] / t.pow(4);
  a[4] = a[4] / t.pow(6);
  WeierstrassCurve F(a);
  Point P = Affine{R("t", 5), R("t", 5)};
  Point Pf = Affine{P->x / t.pow(2), P->y / t.pow(3)};
  REQUIRE(F.contains(Pf));
  auto h1 = canonical_height(TowerPoint(E, 0, P), kEps);
  auto h2 = canonical_height(TowerPoint(F, 0, Pf), kEps);
  CHECK(abs(h1.value - h2.value) <= h1.error + h2.error);
}

TEST_CASE("canonical height of (t, t) on E1") {
  auto E = E1();
  TowerPoint P(E, 0, Affine{R("t", 5), R("t", 5)});
  auto coarse = canonical_height(P, kEps);
  auto fine = canonical_height(P, Rational(1, 1000000000));
  CHECK(coarse.error <= kEps);
  CHECK(fine.error <= Rational(1, 1000000000));
  CHECK(abs(coarse.value - fine.value) <= coarse.error + fine.error);
  CHECK(coarse.value - coarse.error > 0);
  CHECK_FALSE(coarse.torsion);
  // from-scratch evaluation at a fixed higher doubling count
  auto deep = canonical_height(P, Rational(1, 1000000000000LL));
  CHECK(abs(deep.value - fine.value) <= deep.error + fine.error);
  CHECK(canonical_height(P, Rational(1, 4)).value == doubling_approximation(P, canonical_height(P, Rational(1, 4)).doublings));
}

TEST_CASE("torsion points have canonical height zero") {
  auto E = short_curve("1", "0", 5);
  for (const char* x : {"0", "2", "3"}) {
    TowerPoint T(E, 0, Affine{R(x, 5), R("0", 5)});
    auto h = canonical_height(T, kEps);
    CHECK(h.torsion);
    CHECK(h.value <= h.error);
  }
  CHECK(canonical_height(TowerPoint::infinity(E), kEps).torsion);
  CHECK_THROWS_AS(canonical_height(TowerPoint::infinity(E), Rational(0)), std::invalid_argument);
}

TEST_CASE("quadraticity of the canonical height") {
  std::mt19937 rng(53);
  for (std::uint32_t p : {3u, 5u, 7u}) {
    auto c = gen::curve_with_points(p, rng);
    for (int i = 0; i < 2; ++i) {
      TowerPoint P(c.curve, 0, gen::combo(c, 1, rng));
      auto h = canonical_height(P, kEps);
      if (h.torsion) continue;
      for (std::int64_t m : {std::int64_t{2}, std::int64_t{3}, static_cast<std::int64_t>(p)}) {
        auto hm = canonical_height(scalar_mul(m, P), kEps);
        CHECK(abs(hm.value - m * m * h.value) <= hm.error + m * m * h.error);
      }
      auto h2 = canonical_height(scalar_mul(2, P), kEps);
      CHECK(abs(h2.value - 4 * h.value) <= 5 * kEps);
    }
  }
}

TEST_CASE("square-root triangle inequality") {
  std::mt19937 rng(59);
  for (std::uint32_t p : {3u, 5u}) {
    auto c = gen::curve_with_points(p, rng);
    for (int i = 0; i < 4; ++i) {
      TowerPoint P(c.curve, 0, gen::combo(c, 1, rng)), Q(c.curve, 0, gen::combo(c, 1, rng));
      auto hp = canonical_height(P, kEps), hq = canonical_height(Q, kEps);
      for (const auto& S : {add(P, Q), add(P, negate(Q))}) {
        auto hs = canonical_height(S, kEps);
        CHECK(sqrt_triangle(clamp0(hs.value - hs.error), hp.value + hp.error, hq.value + hq.error));
      }
    }
  }
}

TEST_CASE("level scaling on the twist family") {
  auto Ed = short_curve("(t^3+t)^2", "0", 5);
  const RatFunc e = R("t^3+t", 5), t = R("t", 5);
  TowerPoint P0(Ed, 0, Affine{t * e, e * e});
  TowerPoint P1(Ed, 1, Affine{t * e.pow(5), e.pow(8)});
  auto h0 = canonical_height(P0, kEps), h1 = canonical_height(P1, kEps);
  CHECK(abs(h1.value - h0.value / 5) <= 2 * kEps);
  // tower-normalized value times p^n equals the twist representative's height over K
  const WeierstrassCurve twist = frobenius_twist(Ed, 1);
  TowerPoint rep(twist, 0, P1.rep());
  CHECK(naive_height(P1) * 5 == naive_height(rep));
  auto hr = canonical_height(rep, kEps);
  CHECK(abs(5 * h1.value - hr.value) <= 5 * h1.error + hr.error);
}

TEST_CASE("gs floor") {
  CHECK(gs_floor(short_curve("1", "t", 5)) == Rational(12, 10000000000000LL));
  CHECK(gs_floor(short_curve("1", "0", 5)) == 0);
  std::mt19937 rng(61);
  for (std::uint32_t p : {3u, 5u, 7u}) {
    auto E = gen::curve_with_points(p, rng).curve;
    CHECK(gs_floor(E) >= Rational(1, 10000000000000LL));
  }
}

TEST_CASE("certified non-torsion points clear zero") {
  std::mt19937 rng(67);
  for (std::uint32_t p : {2u, 3u, 5u}) {
    auto c = gen::curve_with_points(p, rng);
    TowerPoint P(c.curve, 0, c.points[0]);
    auto h = canonical_height(P, kEps);
    if (!h.torsion) CHECK(h.value - h.error > 0);
  }
}
