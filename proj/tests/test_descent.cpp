#include <numeric>

#include "doctest.h"
#include "generators.hpp"
#include "kperec/descent.hpp"
#include "kperec/isotrivial.hpp"
#include "toy_modules.hpp"

using namespace kperec;
using namespace toy;

namespace {

RatFunc R(const char* s, std::uint32_t p) { return parse_ratfunc(s, p); }

static_assert(HeightModule<EllipticModule>);

}  // namespace

TEST_CASE("hermite transform is unimodular and clears the bottom rows") {
  std::mt19937 rng(107);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t r = 1 + rng() % 3;
    std::vector<std::vector<std::int64_t>> A(r + 1, std::vector<std::int64_t>(r));
    for (auto& row : A)
      for (auto& v : row) v = static_cast<std::int64_t>(rng() % 21) - 10;
    auto U = hermite_transform(A);
    // U A
    std::vector<std::vector<std::int64_t>> H(r + 1, std::vector<std::int64_t>(r, 0));
    for (std::size_t i = 0; i <= r; ++i)
      for (std::size_t j = 0; j < r; ++j)
        for (std::size_t k = 0; k <= r; ++k) H[i][j] += U[i][k] * A[k][j];
    for (std::size_t i = 1; i <= r; ++i)
      for (std::size_t j = 0; j < std::min(i, r); ++j) CHECK(H[i][j] == 0);
    // |det U| = 1 by fraction-free elimination over doubles of small size
    std::vector<std::vector<double>> M(r + 1, std::vector<double>(r + 1));
    for (std::size_t i = 0; i <= r; ++i)
      for (std::size_t j = 0; j <= r; ++j) M[i][j] = static_cast<double>(U[i][j]);
    double det = 1;
    for (std::size_t c = 0; c <= r; ++c) {
      std::size_t piv = c;
      for (std::size_t i = c; i <= r; ++i)
        if (std::abs(M[i][c]) > std::abs(M[piv][c])) piv = i;
      std::swap(M[c], M[piv]);
      if (piv != c) det = -det;
      det *= M[c][c];
      if (M[c][c] == 0) break;
      for (std::size_t i = c + 1; i <= r; ++i) {
        double f = M[i][c] / M[c][c];
        for (std::size_t j = c; j <= r; ++j) M[i][j] -= f * M[c][j];
      }
    }
    CHECK(std::abs(std::abs(det) - 1) < 1e-6);
  }
}

TEST_CASE("descent on Z with h = x^2") {
  IntModule Z;
  auto res = descend(Z, {0, 1});
  CHECK(res.search_bound == 1);
  CHECK(res.rank == 1);
  CHECK(res.free_generators == std::vector<long long>{1});
  CHECK(res.torsion == std::vector<long long>{0});
  CHECK(res.stabilized);
  CHECK_FALSE(res.properties.triangle);
  CHECK(res.properties.quasi_triangle);
  CHECK(res.properties.scaling);
  CHECK_THROWS_AS(descend(Z, {0, 2}), CoveringError);
}

TEST_CASE("descent on Z^2 with the L1 norm") {
  LatticeModule M;
  std::vector<Vec2> reps;
  for (long long i = 0; i < 4; ++i)
    for (long long j = 0; j < 4; ++j) reps.push_back({i, j});
  auto res = descend(M, reps);
  CHECK(res.search_bound == 6);
  CHECK(res.rank == 2);
  CHECK(res.properties.triangle);
  // brute force: the span of the L1 ball of radius 6 has index 1
  CHECK(lattice_index(M.enumerate(6)) == 1);
  CHECK(std::abs(lattice_index(res.free_generators)) == 1);
  CHECK(res.stabilized);
}

TEST_CASE("descent on a sublattice, and idempotence") {
  std::mt19937 rng(109);
  for (int trial = 0; trial < 5; ++trial) {
    LatticeModule M;
    do {
      M.u = {static_cast<long long>(rng() % 5) - 2, static_cast<long long>(rng() % 5) - 2};
      M.v = {static_cast<long long>(rng() % 5) - 2, static_cast<long long>(rng() % 5) - 2};
    } while (M.u[0] * M.v[1] - M.u[1] * M.v[0] == 0);
    std::vector<Vec2> reps;
    for (long long i = 0; i < 4; ++i)
      for (long long j = 0; j < 4; ++j) reps.push_back(M.combo(i, j));
    auto res = descend(M, reps);
    CHECK(res.rank == 2);
    const long long det = std::abs(M.u[0] * M.v[1] - M.u[1] * M.v[0]);
    CHECK(std::abs(lattice_index(res.free_generators)) == det);
    for (const auto& x : M.enumerate(2 * res.search_bound)) CHECK(M.member(x));

    LatticeModule again;
    again.u = res.free_generators[0];
    again.v = res.free_generators[1];
    std::vector<Vec2> reps2;
    for (long long i = 0; i < 4; ++i)
      for (long long j = 0; j < 4; ++j) reps2.push_back(again.combo(i, j));
    auto res2 = descend(again, reps2);
    CHECK(res2.rank == res.rank);
    CHECK(res2.torsion.size() == res.torsion.size());
    CHECK(std::abs(lattice_index(res2.free_generators)) == det);
  }
}

TEST_CASE("descent on Z/5 is all torsion") {
  CyclicModule C;
  auto res = descend(C, {0, 1, 2, 3, 4});
  CHECK(res.rank == 0);
  CHECK(res.torsion.size() == 5);
  REQUIRE(res.torsion_generators.size() == 1);
  CHECK(res.torsion_generators[0] != 0);
}

TEST_CASE("bounded height points on E1") {
  auto E = WeierstrassCurve::short_form(R("1", 5), R("t^2-t^3-t", 5));
  auto pts = bounded_height_points(E, 0, 1);
  auto has = [&](const TowerPoint& P) { return std::find(pts.begin(), pts.end(), P) != pts.end(); };
  CHECK(has(TowerPoint::infinity(E)));
  CHECK(has(TowerPoint(E, 0, Affine{R("t", 5), R("t", 5)})));
  CHECK(has(TowerPoint(E, 0, Affine{R("t", 5), R("-t", 5)})));
  for (const auto& P : bounded_height_points(E, 0, 0)) {
    CHECK(naive_height(P) == 0);
    if (!P.is_infinity()) CHECK(P.rep()->x.is_constant());
  }
  auto bigger = bounded_height_points(E, 0, 2);
  for (const auto& P : pts) CHECK(std::find(bigger.begin(), bigger.end(), P) != bigger.end());
  for (const auto& P : bigger) CHECK(naive_height(P) <= 2);
  CHECK_THROWS_AS(bounded_height_points(E, 0, 40), BudgetExceededError);
}

TEST_CASE("bounded height points against a brute force over y") {
  // y^2 = x^3 + a2 x^2 + a4 x + a6 over F_3(t), coefficients of degree <= 2
  std::mt19937 rng(113);
  const std::uint32_t p = 3;
  // every y of height <= 4
  std::vector<RatFunc> ys;
  std::vector<Poly> vs, ds;
  for (int deg = -1; deg <= 4; ++deg) {
    if (deg < 0) {
      vs.push_back(Poly(p));
      continue;
    }
    for (int k = 0; k < 81 * 3; ++k) {
      std::vector<Coeff> c;
      int v = k;
      for (int i = 0; i <= deg; ++i, v /= 3) c.push_back(static_cast<Coeff>(v % 3));
      if (v != 0 || c.back() == 0) continue;
      vs.push_back(Poly(p, c));
    }
  }
  for (const auto& v : vs)
    if (!v.is_zero() && v.lead() == 1) ds.push_back(v);
  std::map<RatFunc, std::vector<RatFunc>> squares;
  for (const auto& v : vs)
    for (const auto& d : ds)
      if (d.deg() <= 2 && gcd(v, d).deg() == 0) {
        RatFunc y(v, d * d * d / gcd(d * d * d, v));
        RatFunc yy(v, d);
        squares[yy * yy].push_back(yy);
      }
  for (int trial = 0; trial < 3; ++trial) {
    WeierstrassCurve E = gen::random_curve(p, rng);
    for (;;) {
      try {
        E = WeierstrassCurve({RatFunc(p), RatFunc(gen::poly(p, 1, rng)), RatFunc(p), RatFunc(gen::poly(p, 2, rng)),
                              RatFunc(gen::poly(p, 2, rng))});
        if (!is_isotrivial(E)) break;
      } catch (const SingularCurveError&) {
      }
    }
    std::set<std::string> expected = {TowerPoint::infinity(E).to_string()};
    for (const auto& u : vs)
      for (const auto& w : ds) {
        if (u.deg() > 2 || w.deg() > 2) continue;
        if (u.is_zero() ? !w.is_one() : gcd(u, w).deg() > 0) continue;
        RatFunc x(u, w);
        RatFunc rhs = ((x + E.a2()) * x + E.a4()) * x + E.a6();
        if (auto it = squares.find(rhs); it != squares.end())
          for (const auto& y : it->second) expected.insert(TowerPoint(E, 0, Affine{x, y}).to_string());
      }
    std::set<std::string> got;
    for (const auto& P : bounded_height_points(E, 0, 2)) got.insert(P.to_string());
    CHECK(got == expected);
  }
}

TEST_CASE("tower containment for enumerated points") {
  auto E = WeierstrassCurve::short_form(R("1", 5), R("t^2-t^3-t", 5));
  for (std::uint32_t n : {1u, 2u}) {
    Rational D(2, n == 1 ? 5 : 25);
    auto pts = bounded_height_points(E, n, D);
    CHECK(pts.size() >= 1);
    std::int64_t pn = n == 1 ? 5 : 25;
    for (const auto& P : pts) CHECK(scalar_mul(pn, P).level() == 0);
  }
}

TEST_CASE("generators of E1 up to level 1") {
  auto E = WeierstrassCurve::short_form(R("1", 5), R("t^2-t^3-t", 5));
  ClosureOptions opts;
  auto rep = perfect_closure_generators(E, 1, Rational(2, 5), opts);
  REQUIRE(rep.levels.size() == 2);
  CHECK(rep.ranks[0] <= rep.ranks[1]);
  for (const auto& lv : rep.levels) {
    CHECK(lv.tower_containment);
    CHECK(lv.rank_bound >= lv.result.rank);
    for (const auto& g : lv.result.free_generators) CHECK(canonical_height(g, Rational(1, 1000000)).value > gs_floor(E));
  }
  auto rep1 = perfect_closure_generators(E, 0, 1);
  CHECK(rep1.ranks[0] >= 1);
  CHECK(rep1.ranks[0] <= rep.ranks[0] + 2);
}

TEST_CASE("elliptic module properties on a sample") {
  auto E = WeierstrassCurve::short_form(R("1", 5), R("t^2-t^3-t", 5));
  EllipticModule M(E, 0);
  std::vector<TowerPoint> sample;
  for (const auto& P : bounded_height_points(E, 0, 1)) sample.push_back(P);
  auto props = check_properties(M, sample);
  CHECK(props.torsion_vanishes);
  CHECK(props.scaling);
  CHECK(props.quasi_triangle);
  CHECK(props.floor == gs_floor(E));
}

TEST_CASE("isotrivial twist family: heights shrink and no level stabilizes") {
  const auto E = isotrivial_twist_curve(5);
  CHECK(is_isotrivial(E));
  const Rational eps(1, 1000000);
  std::vector<TowerPoint> family;
  for (std::uint32_t n = 0; n <= 2; ++n) {
    family.push_back(isotrivial_family_point(E, n));
    CHECK(family.back().level() == n);
  }
  CHECK(naive_height(family[0]) == 4);
  CHECK(naive_height(family[1]) == Rational(16, 5));
  const auto h0 = canonical_height(family[0], eps);
  CHECK(h0.value > 0);
  Rational scale = 1;
  for (std::uint32_t n = 1; n <= 2; ++n) {
    scale *= 5;
    const auto hn = canonical_height(family[n], eps);
    CHECK(abs(hn.value - h0.value / scale) <= 2 * eps);
    // p P_n drops at least one level
    CHECK(scalar_mul(5, family[n]).level() < n);
  }

  ClosureOptions opts;
  opts.extra_points = family;
  auto rep = perfect_closure_generators(E, 2, Rational(1, 25), opts);
  REQUIRE(rep.levels.size() == 3);
  CHECK_FALSE(rep.stabilized_at.has_value());
  for (const auto& lv : rep.levels) {
    CHECK(lv.tower_containment);
    CHECK(lv.result.rank >= 1);
  }
}
