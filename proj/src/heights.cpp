#include "kperec/heights.hpp"

#include <algorithm>
#include <cctype>

#include "kperec/factor.hpp"
#include "kperec/localdata.hpp"

namespace kperec {

std::string rational_to_string(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

Rational parse_rational(const std::string& text) {
  auto bad = [&] { return std::invalid_argument("malformed rational number '" + text + "'"); };
  if (text.empty()) throw bad();
  if (auto slash = text.find('/'); slash != std::string::npos) {
    Rational a = parse_rational(text.substr(0, slash)), b = parse_rational(text.substr(slash + 1));
    if (b == 0) throw bad();
    return a / b;
  }
  std::size_t i = 0;
  bool neg = false;
  if (text[i] == '+' || text[i] == '-') neg = text[i++] == '-';
  BigInt mant = 0;
  std::int64_t exp10 = 0;
  bool digits = false, dot = false;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      mant = mant * 10 + (c - '0');
      digits = true;
      if (dot) --exp10;
    } else if (c == '.' && !dot) {
      dot = true;
    } else {
      break;
    }
  }
  if (!digits) throw bad();
  if (i < text.size()) {
    if (text[i] != 'e' && text[i] != 'E') throw bad();
    std::size_t used = 0;
    std::int64_t e = 0;
    try {
      e = std::stoll(text.substr(i + 1), &used);
    } catch (const std::exception&) {
      throw bad();
    }
    if (used != text.size() - i - 1) throw bad();
    exp10 += e;
  }
  Rational r(mant);
  BigInt ten = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(std::abs(exp10)));
  if (exp10 >= 0)
    r *= ten;
  else
    r /= ten;
  return neg ? -r : r;
}

namespace {

BigInt pow_big(std::uint64_t base, std::uint64_t e) {
  return boost::multiprecision::pow(BigInt(base), static_cast<unsigned>(e));
}

Rational p_power(std::uint32_t p, std::uint32_t n) { return Rational(pow_big(p, n)); }

}  // namespace

Rational naive_height(const TowerPoint& P) {
  if (P.is_infinity()) return 0;
  return Rational(P.rep()->x.height()) / p_power(P.base().prime(), P.level());
}

Rational naive_height_by_places(const TowerPoint& P) {
  if (P.is_infinity()) return 0;
  const RatFunc& x = P.rep()->x;
  std::int64_t poles = 0;
  for (const auto& v : support(x)) poles += v.residue_degree() * std::max<std::int64_t>(0, -valuation(x, v).value());
  return Rational(poles) / p_power(P.base().prime(), P.level());
}

// ---------------------------------------------------------------- duplication data

namespace {

// Gaussian elimination over K: returns det(S) and, for each right-hand side, the solution.
struct Solved {
  RatFunc det;
  std::vector<std::vector<RatFunc>> solutions;
};

Solved solve(std::vector<std::vector<RatFunc>> S, std::vector<std::vector<RatFunc>> rhs) {
  const std::size_t n = S.size();
  const std::uint32_t p = S[0][0].prime();
  RatFunc det = RatFunc::constant(p, 1);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && S[piv][col].is_zero()) ++piv;
    if (piv == n) return {RatFunc(p), {}};
    if (piv != col) {
      std::swap(S[piv], S[col]);
      for (auto& b : rhs) std::swap(b[piv], b[col]);
      det = -det;
    }
    det *= S[col][col];
    RatFunc inv = S[col][col].inverse();
    for (std::size_t r = col + 1; r < n; ++r) {
      if (S[r][col].is_zero()) continue;
      RatFunc f = S[r][col] * inv;
      for (std::size_t c = col; c < n; ++c) S[r][c] -= f * S[col][c];
      for (auto& b : rhs) b[r] -= f * b[col];
    }
  }
  std::vector<std::vector<RatFunc>> sols;
  for (auto& b : rhs) {
    std::vector<RatFunc> x(n, RatFunc(p));
    for (std::size_t i = n; i-- > 0;) {
      RatFunc acc = b[i];
      for (std::size_t c = i + 1; c < n; ++c) acc -= S[i][c] * x[c];
      x[i] = acc / S[i][i];
    }
    sols.push_back(std::move(x));
  }
  return {det, sols};
}

WeierstrassCurve make_integral_model(const WeierstrassCurve& E, RatFunc& scale) {
  const std::uint32_t p = E.prime();
  static constexpr int weights[5] = {1, 2, 3, 4, 6};
  Poly dens = Poly::constant(p, 1);
  for (const auto& c : E.coefficients()) dens = dens * c.den();
  scale = RatFunc::constant(p, 1);
  if (dens.is_constant()) return E;
  for (const auto& f : poly_factor(dens).factors) {
    Place v = Place::finite(f.poly);
    std::int64_t k = 0;
    for (std::size_t i = 0; i < 5; ++i) {
      const auto& c = E.coefficients()[i];
      if (c.is_zero()) continue;
      std::int64_t val = valuation(c, v).value();
      if (val < 0) k = std::max(k, (-val + weights[i] - 1) / weights[i]);
    }
    scale *= RatFunc(f.poly.pow(static_cast<std::uint64_t>(k)));
  }
  auto a = E.coefficients();
  for (std::size_t i = 0; i < 5; ++i) a[i] *= scale.pow(weights[i]);
  return WeierstrassCurve(a);
}

}  // namespace

DuplicationData::DuplicationData(const WeierstrassCurve& E) : curve_(E), model_(make_integral_model(E, scale_)) {
  const std::uint32_t p = E.prime();
  auto poly_of = [](const RatFunc& f) {
    if (!f.is_polynomial()) throw std::logic_error("integral model has a non-polynomial invariant");
    return f.num();
  };
  const Poly b2 = poly_of(model_.b2()), b4 = poly_of(model_.b4()), b6 = poly_of(model_.b6()),
             b8 = poly_of(model_.b8());
  const Poly one = Poly::constant(p, 1), zero(p);
  phi_ = {one, zero, -b4, -(b6.scaled(2)), -b8};
  den_ = {zero, Poly::constant(p, 4), b2, b4.scaled(2), b6};

  for (const auto& c : phi_) upper_ = std::max(upper_, c.deg());
  for (const auto& c : den_) upper_ = std::max(upper_, c.deg());

  // Sylvester matrix of the two quartic forms; column j < 4 multiplies Phi by X^{3-j} Z^j.
  std::vector<std::vector<RatFunc>> S(8, std::vector<RatFunc>(8, RatFunc(p)));
  for (std::size_t k = 0; k < 8; ++k) {
    for (std::size_t j = 0; j < 4; ++j) {
      if (k >= j && k - j <= 4) {
        S[k][j] = RatFunc(phi_[k - j]);
        S[k][4 + j] = RatFunc(den_[k - j]);
      }
    }
  }
  std::vector<RatFunc> e0(8, RatFunc(p)), e7(8, RatFunc(p));
  e0[0] = RatFunc::constant(p, 1);
  e7[7] = RatFunc::constant(p, 1);
  Solved sol = solve(S, {e0, e7});
  if (sol.det.is_zero()) throw std::logic_error("duplication forms have zero resultant");
  res_ = poly_of(sol.det);
  for (const auto& x : sol.solutions) {
    for (const auto& c : x) {
      RatFunc cof = c * sol.det;
      lower_ = std::max(lower_, poly_of(cof).deg());
    }
  }
  if (!res_.is_constant())
    for (const auto& f : poly_factor(res_).factors) primes_.push_back(f.poly);
}

Point DuplicationData::to_model(const Point& P) const {
  if (!P || scale_.is_one()) return P;
  RatFunc s2 = scale_ * scale_;
  return Affine{P->x * s2, P->y * s2 * scale_};
}

std::int64_t DuplicationData::constant() const {
  return std::max(upper_, lower_) + 10 * scale_.height();
}

Rational duplication_height_bound(const WeierstrassCurve& E) { return DuplicationData(E).constant(); }

// ---------------------------------------------------------------- local tracking

namespace {

// The projective pair (U : W) of x(2^k Q), known modulo pi^prec at one place.
class LocalOrbit {
 public:
  LocalOrbit(Poly pi, std::array<Poly, 5> phi, std::array<Poly, 5> den, Poly U, Poly W)
      : pi_(std::move(pi)), phi_(std::move(phi)), den_(std::move(den)), U0_(std::move(U)), W0_(std::move(W)) {
    is_t_ = pi_.deg() == 1 && pi_[0] == 0;
  }

  /// Valuations min(v(Phi(U, W)), v(D(U, W))) along `steps` doublings, or
  /// nothing if `prec` digits were not enough.
  std::optional<std::vector<std::int64_t>> run(int steps, std::size_t prec) const {
    const Poly M = is_t_ ? Poly::monomial(pi_.prime(), 1, prec) : pi_.pow(prec);
    auto red = [&](const Poly& f) { return is_t_ ? f.truncated(prec) : f % M; };
    auto mul = [&](const Poly& a, const Poly& b) { return is_t_ ? mul_trunc(a, b, prec) : (a * b) % M; };
    std::array<Poly, 5> phi, den;
    for (std::size_t i = 0; i < 5; ++i) {
      phi[i] = red(phi_[i]);
      den[i] = red(den_[i]);
    }
    Poly U = red(U0_), W = red(W0_);
    std::int64_t known = static_cast<std::int64_t>(prec);
    std::vector<std::int64_t> out;
    out.reserve(static_cast<std::size_t>(steps));
    for (int k = 0; k < steps; ++k) {
      // powers U^{4-i} W^i
      Poly U2 = mul(U, U), W2 = mul(W, W);
      std::array<Poly, 5> mono = {mul(U2, U2), mul(mul(U2, U), W), mul(U2, W2), mul(mul(W2, W), U), mul(W2, W2)};
      Poly F(pi_.prime()), D(pi_.prime());
      for (std::size_t i = 0; i < 5; ++i) {
        if (!phi[i].is_zero()) F += mul(phi[i], mono[i]);
        if (!den[i].is_zero()) D += mul(den[i], mono[i]);
      }
      const std::int64_t e = std::min(val(F, known), val(D, known));
      if (e >= known) return std::nullopt;
      U = divide(F, e);
      W = divide(D, e);
      known -= e;
      out.push_back(e);
    }
    return out;
  }

 private:
  std::int64_t val(const Poly& f, std::int64_t cap) const {
    if (f.is_zero()) return cap;
    if (is_t_) return std::min<std::int64_t>(cap, static_cast<std::int64_t>(f.t_adic_valuation()));
    Poly g = f;
    std::int64_t k = 0;
    while (k < cap) {
      auto [q, r] = divmod(g, pi_);
      if (!r.is_zero()) break;
      g = std::move(q);
      ++k;
    }
    return k;
  }

  Poly divide(const Poly& f, std::int64_t e) const {
    if (e == 0 || f.is_zero()) return f;
    if (is_t_) {
      std::vector<Coeff> c(f.coeffs().begin() + e, f.coeffs().end());
      return Poly(f.prime(), std::move(c));
    }
    return f / pi_.pow(static_cast<std::uint64_t>(e));
  }

  Poly pi_;
  std::array<Poly, 5> phi_, den_;
  Poly U0_, W0_;
  bool is_t_ = false;
};

std::vector<std::int64_t> orbit_valuations(const LocalOrbit& orbit, int steps, std::size_t start,
                                           std::size_t guaranteed) {
  std::size_t prec = std::min(start, guaranteed);
  for (;;) {
    if (auto r = orbit.run(steps, prec)) return *r;
    if (prec >= guaranteed) throw std::logic_error("local doubling orbit lost precision");
    prec = std::min(prec * 2, guaranteed);
  }
}

std::array<Poly, 5> shifted(const std::array<Poly, 5>& a, Coeff c) {
  std::array<Poly, 5> out;
  for (std::size_t i = 0; i < 5; ++i) out[i] = a[i].shift(c);
  return out;
}

std::array<Poly, 5> reversed_all(const std::array<Poly, 5>& a, std::int64_t A) {
  std::array<Poly, 5> out;
  for (std::size_t i = 0; i < 5; ++i) out[i] = a[i].reversed(static_cast<std::size_t>(A));
  return out;
}

}  // namespace

CanonicalHeight canonical_height(const DuplicationData& data, const Point& Q, std::uint32_t level,
                                 const Rational& eps, const HeightOptions& opts) {
  if (eps <= 0) throw std::invalid_argument("epsilon must be positive");
  const WeierstrassCurve& model = data.integral_model();
  const std::uint32_t p = model.prime();
  const Rational pn = p_power(p, level);
  CanonicalHeight out;

  // Exact doubling while the height is small enough to allow torsion.
  Point cur = data.to_model(Q);
  std::vector<Point> seen;
  int k = 0;
  for (;;) {
    if (!cur) {
      out.torsion = true;
      break;
    }
    if (3 * cur->x.height() > data.lower()) break;
    if (std::find(seen.begin(), seen.end(), cur) != seen.end()) {
      out.torsion = true;
      break;
    }
    seen.push_back(cur);
    cur = model.dbl(cur);
    ++k;
    if (k > opts.max_doublings) throw ResourceLimitError("doubling cap reached before the orbit resolved");
  }
  out.doublings = k;
  if (out.torsion) return out;

  const std::int64_t C = std::max(data.upper(), data.lower());
  int M = k;
  auto err = [&](int m) { return Rational(C) / (6 * Rational(pow_big(4, static_cast<std::uint64_t>(m))) * pn); };
  while (err(M) > eps) {
    ++M;
    if (M > opts.max_doublings)
      throw ResourceLimitError("epsilon needs more than " + std::to_string(opts.max_doublings) + " doublings");
  }
  const int steps = M - k;
  const Poly U = cur->x.num(), W = cur->x.den();
  const std::int64_t d = cur->x.height();
  const std::int64_t A = data.upper();
  const std::int64_t vres_total = data.resultant().deg();

  std::vector<std::int64_t> loss(static_cast<std::size_t>(steps), 0);
  if (steps > 0) {
    for (const Poly& pi : data.bad_primes()) {
      Poly r = data.resultant();
      const std::int64_t vR = static_cast<std::int64_t>(strip_factor(r, pi));
      const std::size_t start = static_cast<std::size_t>(vR + 1 + 2 * steps);
      const std::size_t guaranteed = static_cast<std::size_t>((steps + 1) * vR + 1);
      std::vector<std::int64_t> e;
      if (pi.deg() == 1) {
        // move the place to t = 0
        const Coeff c = pi.field().neg(pi[0]);
        LocalOrbit orbit(Poly::t(p), shifted(data.phi(), c), shifted(data.dup_den(), c), U.shift(c), W.shift(c));
        e = orbit_valuations(orbit, steps, start, guaranteed);
      } else {
        LocalOrbit orbit(pi, data.phi(), data.dup_den(), U, W);
        e = orbit_valuations(orbit, steps, start, guaranteed);
      }
      for (int i = 0; i < steps; ++i) loss[static_cast<std::size_t>(i)] += pi.deg() * e[static_cast<std::size_t>(i)];
    }
    // the infinite place in the variable s = 1/t
    const std::int64_t Linf = std::max<std::int64_t>(0, A + data.lower() - vres_total);
    LocalOrbit orbit(Poly::t(p), reversed_all(data.phi(), A), reversed_all(data.dup_den(), A),
                     U.reversed(static_cast<std::size_t>(d)), W.reversed(static_cast<std::size_t>(d)));
    auto e = orbit_valuations(orbit, steps, static_cast<std::size_t>(Linf + 1 + 2 * steps),
                              static_cast<std::size_t>((steps + 1) * Linf + 1));
    for (int i = 0; i < steps; ++i) loss[static_cast<std::size_t>(i)] += e[static_cast<std::size_t>(i)];
  }

  BigInt H = d;
  for (int i = 0; i < steps; ++i) H = 4 * H + A - loss[static_cast<std::size_t>(i)];
  out.doublings = M;
  out.value = Rational(H) / (2 * Rational(pow_big(4, static_cast<std::uint64_t>(M))) * pn);
  out.error = err(M);
  return out;
}

CanonicalHeight canonical_height(const TowerPoint& P, const Rational& eps, const HeightOptions& opts) {
  if (eps <= 0) throw std::invalid_argument("epsilon must be positive");
  if (P.is_infinity()) {
    CanonicalHeight h;
    h.torsion = true;
    return h;
  }
  return canonical_height(DuplicationData(P.twist()), P.rep(), P.level(), eps, opts);
}

Rational doubling_approximation(const TowerPoint& P, int m) {
  Point cur = P.rep();
  for (int i = 0; i < m && cur; ++i) cur = P.twist().dbl(cur);
  const std::int64_t H = cur ? cur->x.height() : 0;
  return Rational(H) /
         (2 * Rational(pow_big(4, static_cast<std::uint64_t>(m))) * p_power(P.base().prime(), P.level()));
}

Rational gs_floor(const WeierstrassCurve& E) {
  return Rational(minimal_discriminant_degree(E)) / Rational(pow_big(10, 13));
}

}  // namespace kperec
