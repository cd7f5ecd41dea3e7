#include "kperec/localdata.hpp"

#include <algorithm>
#include <limits>

#include "kperec/factor.hpp"

namespace kperec {

std::string Kodaira::to_string() const {
  switch (kind) {
    case KodairaKind::I0: return "I0";
    case KodairaKind::In: return "I" + std::to_string(n);
    case KodairaKind::II: return "II";
    case KodairaKind::III: return "III";
    case KodairaKind::IV: return "IV";
    case KodairaKind::I0Star: return "I0*";
    case KodairaKind::InStar: return "I" + std::to_string(n) + "*";
    case KodairaKind::IVStar: return "IV*";
    case KodairaKind::IIIStar: return "III*";
    case KodairaKind::IIStar: return "II*";
  }
  return "?";
}

CoordinateChange CoordinateChange::identity(std::uint32_t p) {
  return {RatFunc::constant(p, 1), RatFunc(p), RatFunc(p), RatFunc(p)};
}

CoordinateChange CoordinateChange::then(const CoordinateChange& n) const {
  RatFunc u2 = u * u;
  return {u * n.u, r + u2 * n.r, s + u * n.s, w + u2 * s * n.r + u2 * u * n.w};
}

std::array<RatFunc, 5> transform_coefficients(const std::array<RatFunc, 5>& a, const CoordinateChange& c) {
  const std::uint32_t p = a[0].prime();
  auto k = [p](long long v) { return RatFunc::constant(p, v); };
  const auto& [a1, a2, a3, a4, a6] = a;
  const RatFunc &r = c.r, &s = c.s, &t = c.w;
  RatFunc n1 = a1 + k(2) * s;
  RatFunc n2 = a2 - s * a1 + k(3) * r - s * s;
  RatFunc n3 = a3 + r * a1 + k(2) * t;
  RatFunc n4 = a4 - s * a3 + k(2) * r * a2 - (t + r * s) * a1 + k(3) * r * r - k(2) * s * t;
  RatFunc n6 = a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1;
  if (c.u.is_one()) return {n1, n2, n3, n4, n6};
  RatFunc ui = c.u.inverse(), ui2 = ui * ui, ui3 = ui2 * ui;
  return {n1 * ui, n2 * ui2, n3 * ui3, n4 * ui2 * ui2, n6 * ui3 * ui3};
}

namespace {

constexpr std::int64_t kInfiniteVal = std::numeric_limits<std::int64_t>::max() / 4;

// Arithmetic of the valuation ring at a finite place and its residue field F_p[t]/(pi).
class LocalRing {
 public:
  explicit LocalRing(Poly pi) : pi_(std::move(pi)), p_(pi_.prime()), place_(Place::finite(pi_)) {
    root_exp_ = 1;
    for (std::int64_t i = 1; i < pi_.deg(); ++i) root_exp_ *= p_;
  }

  std::uint32_t p() const { return p_; }
  RatFunc uniformizer() const { return RatFunc(pi_); }
  std::int64_t val(const RatFunc& x) const {
    auto v = valuation(x, place_);
    return v.is_infinite() ? kInfiniteVal : v.value();
  }
  bool pdiv(const RatFunc& x) const { return val(x) > 0; }
  RatFunc reduce(const RatFunc& x) const {
    if (val(x) < 0) throw std::logic_error("reduction of a non-integral element");
    return RatFunc((x.num() * invmod(x.den() % pi_, pi_)) % pi_);
  }
  RatFunc inv(const RatFunc& x) const { return RatFunc(invmod(reduce(x).num(), pi_)); }
  /// p-th root in the residue field: x^(q/p).
  RatFunc root(const RatFunc& x) const { return RatFunc(powmod(reduce(x).num(), root_exp_, pi_)); }
  RatFunc pow_pi(int e) const { return RatFunc(pi_.pow(static_cast<std::uint64_t>(e))); }

 private:
  Poly pi_;
  std::uint32_t p_;
  Place place_;
  std::uint64_t root_exp_;
};

struct Model {
  std::array<RatFunc, 5> a;
  CoordinateChange change;

  void apply(const CoordinateChange& c) {
    a = transform_coefficients(a, c);
    change = change.then(c);
  }
};

struct TateResult {
  Kodaira kodaira;
  std::int64_t v_disc;
  Model model;
};

TateResult tate(const LocalRing& R, Model m) {
  const std::uint32_t p = R.p();
  auto k = [p](long long v) { return RatFunc::constant(p, v); };
  const RatFunc pi = R.uniformizer();
  const RatFunc zero(p), one = k(1);
  const RatFunc half = p == 2 ? zero : k(1) / k(2);
  auto rst = [&](const RatFunc& r, const RatFunc& s, const RatFunc& t) { m.apply({one, r, s, t}); };

  for (int round = 0; round < 256; ++round) {
    WeierstrassCurve C(m.a);
    const std::int64_t vD = R.val(C.disc());
    if (vD == 0) return {{KodairaKind::I0, 0}, 0, m};

    // move a singular point of the reduction to (0, 0)
    RatFunc r(p), t(p);
    if (p == 2) {
      if (R.pdiv(C.b2())) {
        r = R.root(C.a4());
        t = R.root(((r + C.a2()) * r + C.a4()) * r + C.a6());
      } else {
        RatFunc inv_a1 = R.inv(C.a1());
        r = inv_a1 * C.a3();
        t = inv_a1 * (C.a4() + r * r);
      }
    } else if (p == 3) {
      r = R.pdiv(C.b2()) ? R.root(-C.b6()) : -R.inv(C.b2()) * C.b4();
      t = C.a1() * r + C.a3();
    } else {
      r = R.pdiv(C.c4()) ? -R.inv(k(12)) * C.b2() : -R.inv(k(12) * C.c4()) * (C.c6() + C.b2() * C.c4());
      t = -half * (C.a1() * r + C.a3());
    }
    rst(R.reduce(r), zero, R.reduce(t));
    C = WeierstrassCurve(m.a);

    if (!R.pdiv(C.c4())) return {{KodairaKind::In, static_cast<int>(vD)}, vD, m};
    if (R.val(C.a6()) < 2) return {{KodairaKind::II, 0}, vD, m};
    if (R.val(C.b8()) < 3) return {{KodairaKind::III, 0}, vD, m};
    if (R.val(C.b6()) < 3) return {{KodairaKind::IV, 0}, vD, m};

    // now pi | a1, a2; pi^2 | a3, a4; pi^3 | a6
    RatFunc s(p);
    if (p == 2) {
      s = R.root(C.a2());
      t = pi * R.root(C.a6() / R.pow_pi(2));
    } else if (p == 3) {
      s = C.a1();
      t = C.a3();
    } else {
      s = -C.a1() * half;
      t = -C.a3() * half;
    }
    rst(zero, s, t);
    auto a = m.a;

    // the cubic T^3 + b T^2 + c T + d
    RatFunc b = a[1] / pi, c = a[3] / R.pow_pi(2), d = a[4] / R.pow_pi(3);
    RatFunc bb = b * b, cc = c * c, bc = b * c;
    RatFunc w = k(27) * d * d - bb * cc + k(4) * b * bb * d - k(18) * bc * d + k(4) * c * cc;
    RatFunc x = k(3) * c - bb;
    const int roots_kind = R.pdiv(w) ? (R.pdiv(x) ? 3 : 2) : 1;

    if (roots_kind == 1) return {{KodairaKind::I0Star, 0}, vD, m};

    if (roots_kind == 2) {
      // a double root: move it to T = 0
      RatFunc rr = p == 2 ? R.root(c) : p == 3 ? c * R.inv(b) : (bc - k(9) * d) * R.inv(k(2) * x);
      rst(pi * R.reduce(rr), zero, zero);
      int ix = 3, iy = 3;
      RatFunc mx = pi * pi, my = mx;
      for (;;) {
        a = m.a;
        RatFunc a2t = a[1] / pi, a3t = a[2] / my, a4t = a[3] / pi / mx, a6t = a[4] / (mx * my);
        if (!R.pdiv(a3t * a3t + k(4) * a6t)) break;
        RatFunc tt = p == 2 ? my * R.root(a6t) : my * R.reduce(-a3t * half);
        rst(zero, zero, tt);
        a = m.a;
        my = my * pi;
        ++iy;
        a2t = a[1] / pi;
        a3t = a[2] / my;
        a4t = a[3] / pi / mx;
        a6t = a[4] / (mx * my);
        if (!R.pdiv(a4t * a4t - k(4) * a6t * a2t)) break;
        RatFunc rr2 = p == 2 ? mx * R.root(a6t * R.inv(a2t)) : mx * R.reduce(-a4t * R.inv(k(2) * a2t));
        rst(rr2, zero, zero);
        mx = mx * pi;
        ++ix;
      }
      return {{KodairaKind::InStar, ix + iy - 5}, vD, m};
    }

    // a triple root: move it to T = 0
    RatFunc rr = p == 2 ? b : p == 3 ? R.root(-d) : -b * R.inv(k(3));
    rst(pi * R.reduce(rr), zero, zero);
    a = m.a;
    RatFunc x3 = a[2] / R.pow_pi(2), x6 = a[4] / R.pow_pi(4);
    if (!R.pdiv(x3 * x3 + k(4) * x6)) return {{KodairaKind::IVStar, 0}, vD, m};
    RatFunc tt = p == 2 ? -pi * pi * R.root(x6) : pi * pi * R.reduce(-x3 * half);
    rst(zero, zero, tt);
    a = m.a;
    if (R.val(a[3]) < 4) return {{KodairaKind::IIIStar, 0}, vD, m};
    if (R.val(a[4]) < 6) return {{KodairaKind::IIStar, 0}, vD, m};

    // not minimal: divide through by pi
    m.apply({pi, zero, zero, zero});
  }
  throw std::logic_error("Tate's algorithm did not terminate");
}

}  // namespace

ReductionData local_minimal_data(const WeierstrassCurve& E, const Place& v) {
  const std::uint32_t p = E.prime();
  std::array<RatFunc, 5> a = E.coefficients();
  Poly pi = Poly::t(p);
  if (v.is_infinite()) {
    for (auto& c : a) c = c.invert_variable();
  } else {
    pi = v.poly();
  }
  LocalRing R(pi);
  Model m{a, CoordinateChange::identity(p)};

  // integral model: a_i -> a_i pi^{i k}
  static constexpr int weights[5] = {1, 2, 3, 4, 6};
  std::int64_t scale = 0;
  for (std::size_t i = 0; i < 5; ++i) {
    const std::int64_t val = R.val(a[i]);
    if (val < 0) scale = std::max(scale, (-val + weights[i] - 1) / weights[i]);
  }
  if (scale > 0) {
    RatFunc u = R.pow_pi(static_cast<int>(scale)).inverse();
    m.apply({u, RatFunc(p), RatFunc(p), RatFunc(p)});
  }

  TateResult res = tate(R, m);
  ReductionData out{v, res.kodaira, res.v_disc, ReductionClass::Good, res.model.change, res.model.a};
  if (res.kodaira.kind == KodairaKind::In)
    out.reduction_class = ReductionClass::Multiplicative;
  else if (res.kodaira.kind != KodairaKind::I0)
    out.reduction_class = ReductionClass::Additive;
  return out;
}

std::vector<Place> candidate_bad_places(const WeierstrassCurve& E) {
  Poly acc = E.disc().num() * E.disc().den();
  for (const auto& c : E.coefficients()) acc = acc * c.den();
  std::vector<Place> out;
  if (!acc.is_constant())
    for (const auto& f : poly_factor(acc).factors) out.push_back(Place::finite(f.poly));
  std::sort(out.begin(), out.end());
  out.push_back(Place::infinite());
  return out;
}

DiscriminantReport discriminant_report(const WeierstrassCurve& E) {
  DiscriminantReport rep;
  for (const auto& v : candidate_bad_places(E)) {
    ReductionData d = local_minimal_data(E, v);
    if (d.v_min_disc == 0) continue;
    rep.degree += v.residue_degree() * d.v_min_disc;
    if (d.reduction_class == ReductionClass::Additive) rep.semistable = false;
    rep.places.push_back(std::move(d));
  }
  return rep;
}

std::int64_t minimal_discriminant_degree(const WeierstrassCurve& E) { return discriminant_report(E).degree; }

Semistability is_semistable(const WeierstrassCurve& E) {
  Semistability s{true, {}};
  for (const auto& d : discriminant_report(E).places) {
    if (d.reduction_class == ReductionClass::Additive) {
      s.semistable = false;
      s.additive_places.push_back(d.place);
    }
  }
  return s;
}

}  // namespace kperec
