#include <cmath>
#include <set>

#include "doctest.h"
#include "generators.hpp"
#include "kperec/factor.hpp"
#include "kperec/descent.hpp"
#include "kperec/heights.hpp"
#include "kperec/torsion.hpp"

using namespace kperec;

namespace {

RatFunc R(const char* s, std::uint32_t p) { return parse_ratfunc(s, p); }

Place finite(const char* s, std::uint32_t p) { return parse_place(s, p); }

WeierstrassCurve short_curve(const char* a4, const char* a6, std::uint32_t p) {
  return WeierstrassCurve::short_form(R(a4, p), R(a6, p));
}

// y^2 + (1-c)xy - by = x^3 - bx^2, with (0, 0) on it
WeierstrassCurve tate_normal(const RatFunc& b, const RatFunc& c) {
  const std::uint32_t p = b.prime();
  return WeierstrassCurve({RatFunc::constant(p, 1) - c, -b, -b, RatFunc(p), RatFunc(p)});
}

// Brute force over all pairs (x, y) in F_p^2 after substituting t = c.
std::uint64_t brute_count(const WeierstrassCurve& E, Coeff c) {
  const std::uint32_t p = E.prime();
  const PrimeField F(p);
  std::array<Coeff, 5> a{};
  for (std::size_t i = 0; i < 5; ++i) {
    const auto& f = E.coefficients()[i];
    a[i] = F.mul(f.num().eval(c), F.inv(f.den().eval(c)));
  }
  std::uint64_t n = 1;
  for (Coeff x = 0; x < p; ++x)
    for (Coeff y = 0; y < p; ++y) {
      long long lhs = static_cast<long long>(y) * y + static_cast<long long>(a[0]) * x * y + static_cast<long long>(a[2]) * y;
      long long rhs = static_cast<long long>(x) * x * x + static_cast<long long>(a[1]) * x * x +
                      static_cast<long long>(a[3]) * x + a[4];
      if (F.reduce(lhs - rhs) == 0) ++n;
    }
  return n;
}

bool integral_with_unit_disc_at(const WeierstrassCurve& E, Coeff c) {
  for (const auto& f : E.coefficients())
    if (f.den().eval(c) == 0) return false;
  return E.disc().num().eval(c) != 0 && E.disc().den().eval(c) != 0;
}

std::vector<Place> places_up_to(std::uint32_t p, std::size_t d) {
  std::vector<Place> out;
  for (std::size_t k = 1; k <= d; ++k)
    for (const auto& pi : monic_irreducibles(p, k)) out.push_back(Place::finite(pi));
  out.push_back(Place::infinite());
  return out;
}

}  // namespace

TEST_CASE("point counts at the worked places") {
  auto E = short_curve("1", "t", 5);
  CHECK(count_points(E, finite("t", 5)) == 4);
  CHECK(count_points(E, finite("t-1", 5)) == 9);
  CHECK_THROWS_AS(count_points(E, finite("t^2+2", 5)), BadReductionError);
  FiniteCurve Et(E, finite("t", 5));
  CHECK(Et.field_size() == 5);
  CHECK(Et.coefficients()[4].is_zero());
}

TEST_CASE("point counts match brute force at degree-one places") {
  std::mt19937 rng(71);
  int compared = 0;
  for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
    for (int i = 0; i < 3; ++i) {
      auto E = gen::random_curve(p, rng);
      for (Coeff c = 0; c < p; ++c) {
        if (!integral_with_unit_disc_at(E, c)) continue;
        CHECK(count_points(E, Place::finite(Poly(p, {(p - c) % p, 1}))) == brute_count(E, c));
        ++compared;
      }
    }
  }
  CHECK(compared >= 20);
}

TEST_CASE("point counts lie in the Hasse window") {
  std::mt19937 rng(73);
  for (std::uint32_t p : {2u, 3u, 5u}) {
    auto E = gen::random_curve(p, rng);
    for (const auto& v : places_up_to(p, p == 5 ? 2 : 3)) {
      std::optional<FiniteCurve> reduced;
      try {
        reduced.emplace(E, v);
      } catch (const BadReductionError&) {
        continue;
      }
      const double q = static_cast<double>(reduced->field_size());
      const double n = static_cast<double>(reduced->count_points());
      CHECK(std::abs(n - q - 1) <= 2 * std::sqrt(q));
    }
  }
}

TEST_CASE("roots of polynomials over K") {
  std::mt19937 rng(79);
  for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
    for (int trial = 0; trial < 6; ++trial) {
      std::set<RatFunc> expected;
      KPoly f = KPoly::constant(gen::ratfunc(p, 2, rng));
      while (f[0].is_zero()) f = KPoly::constant(gen::ratfunc(p, 2, rng));
      for (int i = 0; i < 3; ++i) {
        RatFunc r = gen::ratfunc(p, 1 + static_cast<int>(rng() % 3), rng);
        expected.insert(r);
        f = f * KPoly::linear(r);
        if (i == 0) f = f * KPoly::linear(r);  // a repeated root
      }
      // an inseparable factor with a root, and a factor X^2 - t with none
      RatFunc s = gen::ratfunc(p, 1, rng);
      expected.insert(s);
      std::vector<RatFunc> insep(p + 1, RatFunc(p));
      insep[0] = -s.pow(p);
      insep[p] = RatFunc::constant(p, 1);
      f = f * KPoly(p, insep);
      f = f * KPoly(p, {-RatFunc::t(p), RatFunc(p), RatFunc::constant(p, 1)});
      auto roots = roots_in_K(f);
      CHECK(std::set<RatFunc>(roots.begin(), roots.end()) == expected);
      for (const auto& r : roots) CHECK(f.eval(r).is_zero());
    }
  }
}

TEST_CASE("division polynomials reproduce multiplication by n") {
  std::mt19937 rng(83);
  for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
    auto c = gen::curve_with_points(p, rng);
    const auto& E = c.curve;
    Point P = c.points[0];
    const RatFunc x = P->x;
    const RatFunc b = E.b6() + x * (RatFunc::constant(p, 2) * E.b4() + x * (E.b2() + RatFunc::constant(p, 4) * x));
    for (std::int64_t n = 2; n <= 7; ++n) {
      Point nP = E.multiply(n, P);
      RatFunc fn = division_polynomial(E, n).eval(x);
      RatFunc fm = division_polynomial(E, n - 1).eval(x), fp = division_polynomial(E, n + 1).eval(x);
      if (!nP) {
        CHECK(fn.is_zero());
        continue;
      }
      // x(nP) = x - psi_{n-1} psi_{n+1} / psi_n^2
      RatFunc expected = n % 2 ? x - b * fm * fp / (fn * fn) : x - fm * fp / (b * fn * fn);
      CHECK(nP->x == expected);
    }
  }
}

TEST_CASE("torsion of y^2 = x^3 + x + t over F_5(t) is trivial") {
  auto E = short_curve("1", "t", 5);
  TorsionOptions opts;
  opts.places = std::array<Place, 2>{finite("t", 5), finite("t-1", 5)};
  auto G = torsion_subgroup(E, opts);
  CHECK(G.structure.empty());
  CHECK(G.order() == 1);
  REQUIRE(G.counts.size() == 2);
  CHECK(G.counts[0].second == 4);
  CHECK(G.counts[1].second == 9);
  CHECK(torsion_subgroup(E).order() == 1);
}

TEST_CASE("torsion of the constant curve y^2 = x^3 + x") {
  auto E = short_curve("1", "0", 5);
  auto G = torsion_subgroup(E);
  CHECK(G.structure == std::vector<std::int64_t>{2, 2});
  CHECK(G.order() == 4);
  for (const char* x : {"0", "2", "3"}) CHECK(G.contains(TowerPoint(E, 0, Affine{R(x, 5), R("0", 5)})));
  CHECK(G.generator_orders == std::vector<std::int64_t>{2, 2});
}

TEST_CASE("2-torsion of E1 against a cubic root search") {
  auto E = short_curve("1", "t^2-t^3-t", 5);
  // a root of the monic cubic would be a polynomial of degree one
  bool has_root = false;
  for (Coeff a = 0; a < 5; ++a)
    for (Coeff b = 0; b < 5; ++b) {
      RatFunc x(Poly(5, {b, a}));
      if ((x * x * x + x + R("t^2-t^3-t", 5)).is_zero()) has_root = true;
    }
  auto G = torsion_subgroup(E);
  bool has_two_torsion = false;
  for (const auto& T : G.elements)
    if (!T.is_infinity() && T.rep()->y.is_zero()) has_two_torsion = true;
  CHECK(has_two_torsion == has_root);
}

TEST_CASE("torsion points of known order are found") {
  struct Case {
    WeierstrassCurve E;
    std::int64_t order;
  };
  std::vector<Case> cases;
  for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
    const RatFunc t = RatFunc::t(p);
    cases.push_back({tate_normal(t, RatFunc(p)), 4});
    if (p != 5) cases.push_back({tate_normal(t, t), 5});
    // y^2 + t xy + y = x^3: (0, 0) has order 3
    cases.push_back({WeierstrassCurve({t, RatFunc(p), RatFunc::constant(p, 1), RatFunc(p), RatFunc(p)}), 3});
  }
  cases.push_back({tate_normal(R("t", 5), R("t", 5)), 5});
  for (const auto& [E, order] : cases) {
    CAPTURE(E.to_string());
    const Point T = Affine{RatFunc(E.prime()), RatFunc(E.prime())};
    REQUIRE(point_order(E, T, 50) == order);
    auto G = torsion_subgroup(E);
    CHECK(G.contains(TowerPoint(E, 0, T)));
    CHECK(G.order() % order == 0);
    for (std::size_t i = 0; i < G.generators.size(); ++i)
      CHECK(point_order(G.generators[i].twist(), G.generators[i].rep(), 100) == G.generator_orders[i]);
  }
}

TEST_CASE("prime-to-p torsion injects under good reduction") {
  std::vector<WeierstrassCurve> curves;
  for (std::uint32_t p : {3u, 5u, 7u}) {
    const RatFunc t = RatFunc::t(p);
    curves.push_back(tate_normal(t, RatFunc(p)));
    if (p != 5) curves.push_back(tate_normal(t, t));
  }
  curves.push_back(short_curve("1", "0", 5));
  int checked = 0;
  for (const auto& E : curves) {
    const std::uint32_t p = E.prime();
    auto G = torsion_subgroup(E);
    for (const auto& T : G.elements) {
      auto m = point_order(E, T.rep(), 100);
      REQUIRE(m);
      if (*m % p == 0) continue;
      for (const auto& v : places_up_to(p, 3)) {
        if (v.is_infinite() || v.residue_degree() == 3 && v.poly()[0] > 2) continue;
        std::optional<FiniteCurve> Ev;
        try {
          Ev.emplace(E, v);
        } catch (const BadReductionError&) {
          continue;
        }
        for (std::int64_t k = 1; k < *m; ++k) CHECK_FALSE(Ev->reduces_to_identity(E.multiply(k, T.rep())));
        CHECK(Ev->reduces_to_identity(E.multiply(*m, T.rep())));
        ++checked;
      }
    }
  }
  CHECK(checked > 50);
}

TEST_CASE("prime-to-p torsion order divides counts at random good places") {
  std::mt19937 rng(89);
  std::vector<WeierstrassCurve> curves;
  for (std::uint32_t p : {3u, 7u}) curves.push_back(tate_normal(RatFunc::t(p), RatFunc::t(p)));
  curves.push_back(tate_normal(R("t", 5), R("0", 5)));
  for (const auto& E : curves) {
    const std::int64_t p = E.prime();
    std::int64_t n = torsion_subgroup(E).order();
    while (n % p == 0) n /= p;
    auto places = places_up_to(E.prime(), 2);
    for (int i = 0; i < 8; ++i) {
      const auto& v = places[rng() % places.size()];
      std::uint64_t count = 0;
      try {
        count = count_points(E, v);
      } catch (const BadReductionError&) {
        continue;
      }
      CHECK(count % static_cast<std::uint64_t>(n) == 0);
    }
  }
}

TEST_CASE("torsion over the perfect closure") {
  auto E = short_curve("1", "t", 5);
  auto T2 = torsion_perfect_closure(E, 2);
  CHECK(T2.group.order() == 1);
  CHECK(T2.stabilized_at == 0);
  CHECK(T2.p_part_orders == std::vector<std::int64_t>{1, 1, 1});

  auto Et = tate_normal(R("t", 5), R("t", 5));
  auto T0 = torsion_perfect_closure(Et, 0);
  auto G = torsion_subgroup(Et);
  CHECK(T0.group.structure == G.structure);
  CHECK(T0.group.order() == G.order());
  auto T1 = torsion_perfect_closure(Et, 1);
  CHECK(T1.p_part_orders.size() == 2);
  CHECK(T1.p_part_orders[0] <= T1.p_part_orders[1]);
  for (const auto& P : G.elements) CHECK(T1.group.contains(P));
  for (const auto& P : T1.group.elements) CHECK(scalar_mul(T1.group.order(), P).is_infinity());

  std::mt19937 rng(97);
  for (std::uint32_t p : {2u, 3u}) {
    auto R2 = torsion_perfect_closure(gen::random_curve(p, rng), 2);
    CHECK(R2.group.order() >= 1);
    CHECK(R2.stabilized_at <= 2);
  }
}

namespace {

// Torsion points have canonical height 0, so naive height at most C_E / 3; every
// enumerated point of zero canonical height and finite order must be in the group.
void exhaustive_check(const WeierstrassCurve& E) {
  const auto group = torsion_subgroup(E);
  const Rational eps(1, 1000000);
  std::set<std::string> found;
  for (const auto& P : bounded_height_points(E, 0, duplication_height_bound(E) / 3)) {
    const auto h = canonical_height(P, eps);
    if (h.value > h.error) continue;
    REQUIRE(point_order(E, P.rep(), 64).has_value());
    found.insert(P.to_string());
  }
  std::set<std::string> listed;
  for (const auto& T : group.elements) listed.insert(T.to_string());
  CHECK(found == listed);
}

}  // namespace

TEST_CASE("torsion agrees with an exhaustive bounded-height search") {
  exhaustive_check(short_curve("1", "0", 5));
  exhaustive_check(short_curve("1", "t", 5));
  exhaustive_check(short_curve("1", "t^2-t^3-t", 5));
  std::mt19937 rng(113);
  int checked = 0;
  while (checked < 8) {
    const std::uint32_t p = 3;
    auto linear = [&] { return RatFunc(gen::poly(p, 1, rng)); };
    try {
      WeierstrassCurve E({RatFunc(p), linear(), RatFunc(p), linear(), linear()});
      if (is_isotrivial(E)) continue;
      exhaustive_check(E);
      ++checked;
    } catch (const SingularCurveError&) {
    }
  }
}
