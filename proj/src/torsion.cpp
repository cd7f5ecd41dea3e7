#include "kperec/torsion.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "kperec/factor.hpp"
#include "kperec/localdata.hpp"
#include "kperec/parallel.hpp"

namespace kperec {

namespace {

Poly residue(const RatFunc& f, const Poly& modulus) {
  if (f.is_zero()) return Poly(f.prime());
  return (f.num() * invmod(f.den() % modulus, modulus)) % modulus;
}

Place local_place(const Place& v, std::uint32_t p) { return v.is_infinite() ? Place::finite(Poly::t(p)) : v; }

}  // namespace

FiniteCurve::FiniteCurve(const WeierstrassCurve& E, const Place& v)
    : curve_(E), place_(v), modulus_(v.is_infinite() ? Poly::t(E.prime()) : v.poly()) {
  const std::uint32_t p = E.prime();
  ReductionData rd = local_minimal_data(E, v);
  if (rd.v_min_disc > 0) throw BadReductionError("bad reduction at " + v.to_string());
  model_ = rd.minimal_model;
  u_ = rd.transform.u;
  r_ = rd.transform.r;
  s_ = rd.transform.s;
  w_ = rd.transform.w;
  q_ = 1;
  for (std::int64_t i = 0; i < modulus_.deg(); ++i) q_ *= p;
  for (std::size_t i = 0; i < 5; ++i) a_[i] = residue(model_[i], modulus_);
}

std::uint64_t FiniteCurve::count_points() const {
  const std::uint32_t p = modulus_.prime();
  const std::size_t d = static_cast<std::size_t>(modulus_.deg());
  const auto& [a1, a2, a3, a4, a6] = a_;
  std::uint64_t total = 1;
  std::vector<Coeff> digits(d, 0);
  for (std::uint64_t i = 0; i < q_; ++i) {
    std::uint64_t k = i;
    for (std::size_t j = 0; j < d; ++j, k /= p) digits[j] = static_cast<Coeff>(k % p);
    const Poly x(p, digits);
    const Poly B = (a1 * x + a3) % modulus_;
    const Poly C = (((x + a2) * x % modulus_ + a4) * x + a6) % modulus_;
    if (p != 2) {
      const Poly D = (B * B + C.scaled(4 % p)) % modulus_;
      if (D.is_zero()) {
        total += 1;
      } else if (powmod(D, (q_ - 1) / 2, modulus_).is_one()) {
        total += 2;
      }
    } else if (B.is_zero()) {
      total += 1;
    } else {
      // y = Bz turns the equation into z^2 + z = C / B^2, solvable iff the trace vanishes
      Poly c = C * powmod(invmod(B, modulus_), 2, modulus_) % modulus_;
      Poly tr(p), power = c;
      for (std::size_t j = 0; j < d; ++j) {
        tr = tr + power;
        power = power * power % modulus_;
      }
      if (tr.is_zero()) total += 2;
    }
  }
  return total;
}

bool FiniteCurve::reduces_to_identity(const Point& P) const {
  if (!P) return true;
  const RatFunc x = place_.is_infinite() ? P->x.invert_variable() : P->x;
  const RatFunc xm = (x - r_) / (u_ * u_);
  if (xm.is_zero()) return false;
  return valuation(xm, local_place(place_, modulus_.prime())).value() < 0;
}

std::uint64_t count_points(const WeierstrassCurve& E, const Place& v) { return FiniteCurve(E, v).count_points(); }

std::vector<Place> good_places(const WeierstrassCurve& E, std::size_t count, std::size_t max_degree) {
  std::vector<Place> out;
  for (std::size_t d = 1; d <= max_degree && out.size() < count; ++d) {
    auto polys = monic_irreducibles(E.prime(), d);
    std::sort(polys.begin(), polys.end());
    for (const auto& pi : polys) {
      if (out.size() == count) break;
      Place v = Place::finite(pi);
      if (local_minimal_data(E, v).v_min_disc == 0) out.push_back(v);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// division polynomials

namespace {

class DivisionPolynomials {
 public:
  explicit DivisionPolynomials(const WeierstrassCurve& E) : p_(E.prime()) {
    auto k = [&](long long c) { return RatFunc::constant(p_, c); };
    const RatFunc &b2 = E.b2(), &b4 = E.b4(), &b6 = E.b6(), &b8 = E.b8();
    b_ = KPoly(p_, {b6, k(2) * b4, b2, k(4)});
    memo_.emplace(0, KPoly(p_));
    memo_.emplace(1, KPoly::constant(k(1)));
    memo_.emplace(2, KPoly::constant(k(1)));
    memo_.emplace(3, KPoly(p_, {b8, k(3) * b6, k(3) * b4, b2, k(3)}));
    memo_.emplace(4, KPoly(p_, {b4 * b8 - b6 * b6, b2 * b8 - b4 * b6, k(10) * b8, k(10) * b6, k(5) * b4, b2, k(2)}));
  }

  /// 4x^3 + b2 x^2 + 2 b4 x + b6 = psi_2^2
  const KPoly& b() const { return b_; }

  const KPoly& f(std::int64_t n) {
    if (auto it = memo_.find(n); it != memo_.end()) return it->second;
    KPoly r(p_);
    const std::int64_t m = n / 2;
    if (n % 2 == 1) {
      const KPoly bb = b_ * b_;
      KPoly left = f(m + 2) * cube(f(m)), right = f(m - 1) * cube(f(m + 1));
      if (m % 2 == 0) {
        left = bb * left;
      } else {
        right = bb * right;
      }
      r = left - right;
    } else {
      r = f(m) * (f(m + 2) * f(m - 1) * f(m - 1) - f(m - 2) * f(m + 1) * f(m + 1));
    }
    return memo_.emplace(n, std::move(r)).first->second;
  }

  /// x(nP) = numerator / denominator in x(P).
  std::pair<KPoly, KPoly> multiplication(std::int64_t n) {
    const KPoly x(p_, {RatFunc(p_), RatFunc::constant(p_, 1)});
    const KPoly fn = f(n), fm = f(n - 1), fp = f(n + 1);
    if (n % 2 == 1) return {x * fn * fn - b_ * fp * fm, fn * fn};
    return {x * b_ * fn * fn - fp * fm, b_ * fn * fn};
  }

 private:
  static KPoly cube(const KPoly& a) { return a * a * a; }
  std::uint32_t p_;
  KPoly b_{0};
  std::map<std::int64_t, KPoly> memo_;
};

}  // namespace

KPoly division_polynomial(const WeierstrassCurve& E, std::int64_t n) {
  if (n < 1) throw std::invalid_argument("division polynomial index must be positive");
  DivisionPolynomials d(E);
  return d.f(n);
}

namespace {

// Necessary for f to be a square in K: num * den has even degree, square leading
// coefficient, and square values at every degree-one place where it is a unit.
bool may_be_square(const RatFunc& f) {
  if (f.is_zero()) return true;
  const Poly g = f.num() * f.den();
  const PrimeField F = g.field();
  if (g.deg() % 2 != 0 || !F.is_square(g.lead())) return false;
  for (Coeff c = 0; c < F.p(); ++c)
    if (Coeff v = g.eval(c); v != 0 && !F.is_square(v)) return false;
  return true;
}

}  // namespace

std::vector<Point> points_with_x(const WeierstrassCurve& E, const RatFunc& x) {
  const std::uint32_t p = E.prime();
  const RatFunc B = E.a1() * x + E.a3();
  const RatFunc C = ((x + E.a2()) * x + E.a4()) * x + E.a6();
  std::vector<Point> out;
  if (p != 2 && !may_be_square(B * B + RatFunc::constant(p, 4) * C)) return out;
  for (const auto& y : roots_in_K(KPoly(p, {-C, B, RatFunc::constant(p, 1)}))) out.push_back(Affine{x, y});
  return out;
}

std::vector<Point> division_points(const WeierstrassCurve& E, const Point& T, std::int64_t ell) {
  if (ell < 1) throw std::invalid_argument("division by a non-positive integer");
  if (ell == 1) return {T};
  DivisionPolynomials d(E);
  std::vector<RatFunc> xs;
  std::vector<Point> out;
  if (!T) {
    out.push_back(std::nullopt);
    KPoly kernel = ell % 2 == 0 ? d.b() * d.f(ell) : d.f(ell);
    if (kernel.deg() >= 1) xs = roots_in_K(kernel);
  } else {
    auto [num, den] = d.multiplication(ell);
    xs = roots_in_K(num - den * T->x);
  }
  for (const auto& x : xs)
    for (const auto& Q : points_with_x(E, x))
      if (E.multiply(ell, Q) == T) out.push_back(Q);
  return out;
}

std::optional<std::int64_t> point_order(const WeierstrassCurve& E, const Point& P, std::int64_t limit) {
  Point Q = P;
  for (std::int64_t k = 1; k <= limit; ++k) {
    if (!Q) return k;
    Q = E.add(Q, P);
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// torsion subgroups

bool TorsionGroup::contains(const TowerPoint& P) const {
  return std::find(elements.begin(), elements.end(), P) != elements.end();
}

namespace {

std::vector<std::int64_t> prime_divisors(std::int64_t n) {
  std::vector<std::int64_t> out;
  for (std::int64_t d = 2; d * d <= n; ++d) {
    if (n % d) continue;
    out.push_back(d);
    while (n % d == 0) n /= d;
  }
  if (n > 1) out.push_back(n);
  return out;
}

std::int64_t ipow(std::int64_t b, int e) {
  std::int64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

// The ell-primary part of E(K), as Z/ell^small x Z/ell^large.
struct Primary {
  std::int64_t ell = 0;
  int small = 0, large = 0;
  std::vector<Point> elements;
  Point g_small, g_large;
};

// Layer j holds the points of exact order ell^j; each layer comes from dividing the last.
Primary primary_part(const WeierstrassCurve& E, std::int64_t ell, int max_exponent) {
  Primary out;
  out.ell = ell;
  out.elements = {std::nullopt};
  std::vector<Point> layer = {std::nullopt};
  std::vector<std::vector<Point>> layers;
  for (int j = 0; j < max_exponent && !layer.empty(); ++j) {
    std::vector<Point> next;
    for (const auto& T : layer)
      for (const auto& Q : division_points(E, T, ell))
        if (Q && std::find(out.elements.begin(), out.elements.end(), Q) == out.elements.end()) {
          out.elements.push_back(Q);
          next.push_back(Q);
        }
    if (!next.empty()) layers.push_back(next);
    layer = std::move(next);
  }
  if (layers.empty()) return out;
  out.large = static_cast<int>(layers.size());
  int total = 0;
  for (std::size_t n = out.elements.size(); n > 1; n /= static_cast<std::size_t>(ell)) ++total;
  out.small = total - out.large;
  out.g_large = layers.back().front();
  if (out.small > 0) {
    std::vector<Point> span;
    Point acc = std::nullopt;
    for (std::int64_t k = 0; k < ipow(ell, out.large); ++k) {
      span.push_back(acc);
      acc = E.add(acc, out.g_large);
    }
    for (const auto& Q : layers[static_cast<std::size_t>(out.small - 1)]) {
      Point bottom = E.multiply(ipow(ell, out.small - 1), Q);
      if (std::find(span.begin(), span.end(), bottom) == span.end()) {
        out.g_small = Q;
        break;
      }
    }
  }
  return out;
}

struct LiftedPrimary {
  Primary shape;
  std::vector<TowerPoint> elements;
  TowerPoint g_small, g_large;
};

LiftedPrimary lift(const Primary& part, const std::shared_ptr<const WeierstrassCurve>& base, std::uint32_t level) {
  auto tp = [&](const Point& P) { return TowerPoint(base, level, P); };
  LiftedPrimary out{part, {}, tp(part.g_small), tp(part.g_large)};
  for (const auto& P : part.elements) out.elements.push_back(tp(P));
  return out;
}

void verify_order(const TowerPoint& G, std::int64_t d) {
  if (!scalar_mul(d, G).is_infinity()) throw std::logic_error("torsion generator order check failed");
  for (auto ell : prime_divisors(d))
    if (scalar_mul(d / ell, G).is_infinity()) throw std::logic_error("torsion generator order check failed");
}

TorsionGroup assemble(const std::vector<LiftedPrimary>& parts, const WeierstrassCurve& E) {
  TorsionGroup g;
  std::int64_t d1 = 1, d2 = 1;
  TowerPoint G1 = TowerPoint::infinity(E), G2 = TowerPoint::infinity(E);
  g.elements = {TowerPoint::infinity(E)};
  for (const auto& part : parts) {
    if (part.shape.large == 0) continue;
    d2 *= ipow(part.shape.ell, part.shape.large);
    G2 = add(G2, part.g_large);
    if (part.shape.small > 0) {
      d1 *= ipow(part.shape.ell, part.shape.small);
      G1 = add(G1, part.g_small);
    }
    std::vector<TowerPoint> sums;
    for (const auto& a : g.elements)
      for (const auto& b : part.elements) sums.push_back(add(a, b));
    g.elements = std::move(sums);
  }
  if (d1 > 1) {
    verify_order(G1, d1);
    g.structure.push_back(d1);
    g.generators.push_back(G1);
    g.generator_orders.push_back(d1);
  }
  if (d2 > 1) {
    verify_order(G2, d2);
    g.structure.push_back(d2);
    g.generators.push_back(G2);
    g.generator_orders.push_back(d2);
  }
  if (d1 * d2 != g.order()) throw std::logic_error("torsion structure does not match the element count");
  return g;
}

struct PrimeToP {
  std::vector<std::pair<Place, std::uint64_t>> counts;
  std::uint64_t bound = 1;
};

PrimeToP prime_to_p_bound(const WeierstrassCurve& E, const TorsionOptions& opts) {
  std::vector<Place> places;
  if (opts.places) {
    places = {(*opts.places)[0], (*opts.places)[1]};
  } else {
    places = good_places(E, 2, opts.max_place_degree);
    if (places.size() < 2)
      throw std::runtime_error("fewer than two good places of degree <= " + std::to_string(opts.max_place_degree) +
                               "; raise the search degree");
  }
  std::vector<std::uint64_t> counts(places.size());
  parallel_for(places.size(), [&](std::size_t i) { counts[i] = count_points(E, places[i]); });
  PrimeToP out;
  std::uint64_t g = 0;
  for (std::size_t i = 0; i < places.size(); ++i) {
    out.counts.emplace_back(places[i], counts[i]);
    g = std::gcd(g, counts[i]);
  }
  while (g % E.prime() == 0) g /= E.prime();
  out.bound = g;
  return out;
}

int exponent_of(std::uint64_t n, std::uint64_t ell) {
  int e = 0;
  while (n % ell == 0) {
    n /= ell;
    ++e;
  }
  return e;
}

// cap on the depth of the p-power search; the layers run dry long before it
constexpr int kMaxPExponent = 32;

}  // namespace

TorsionGroup torsion_subgroup(const WeierstrassCurve& E, const TorsionOptions& opts) {
  const PrimeToP bound = prime_to_p_bound(E, opts);
  auto base = std::make_shared<const WeierstrassCurve>(E);
  std::vector<LiftedPrimary> parts;
  for (auto ell : prime_divisors(static_cast<std::int64_t>(bound.bound)))
    parts.push_back(lift(primary_part(E, ell, exponent_of(bound.bound, static_cast<std::uint64_t>(ell))), base, 0));
  parts.push_back(lift(primary_part(E, E.prime(), kMaxPExponent), base, 0));
  TorsionGroup g = assemble(parts, E);
  g.counts = bound.counts;
  return g;
}

PerfectTorsion torsion_perfect_closure(const WeierstrassCurve& E, std::uint32_t max_level, const TorsionOptions& opts) {
  const PrimeToP bound = prime_to_p_bound(E, opts);
  auto base = std::make_shared<const WeierstrassCurve>(E);
  std::vector<LiftedPrimary> parts;
  for (auto ell : prime_divisors(static_cast<std::int64_t>(bound.bound)))
    parts.push_back(lift(primary_part(E, ell, exponent_of(bound.bound, static_cast<std::uint64_t>(ell))), base, 0));

  PerfectTorsion out;
  std::optional<LiftedPrimary> top;
  for (std::uint32_t n = 0; n <= max_level; ++n) {
    const WeierstrassCurve twist = frobenius_twist(E, n);
    Primary part = primary_part(twist, E.prime(), kMaxPExponent);
    out.p_part_orders.push_back(static_cast<std::int64_t>(part.elements.size()));
    if (n == max_level) top = lift(part, base, n);
  }
  parts.push_back(*top);
  out.stabilized_at = max_level;
  while (out.stabilized_at > 0 && out.p_part_orders[out.stabilized_at - 1] == out.p_part_orders[max_level])
    --out.stabilized_at;
  out.group = assemble(parts, E);
  out.group.counts = bound.counts;
  return out;
}

}  // namespace kperec
