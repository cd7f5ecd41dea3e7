#include "kperec/kpoly.hpp"

#include <algorithm>
#include <stdexcept>

namespace kperec {

KPoly::KPoly(std::uint32_t p, std::vector<RatFunc> coeffs) : p_(p), c_(std::move(coeffs)) { trim(); }

KPoly KPoly::linear(const RatFunc& r) { return KPoly(r.prime(), {-r, RatFunc::constant(r.prime(), 1)}); }

void KPoly::trim() {
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

KPoly KPoly::monic() const {
  if (is_zero()) return *this;
  const RatFunc inv = lead().inverse();
  return *this * inv;
}

KPoly KPoly::derivative() const {
  std::vector<RatFunc> d;
  for (std::size_t i = 1; i < c_.size(); ++i) d.push_back(c_[i].scaled(static_cast<long long>(i % p_)));
  return KPoly(p_, std::move(d));
}

RatFunc KPoly::eval(const RatFunc& x) const {
  RatFunc r(p_);
  for (std::size_t i = c_.size(); i-- > 0;) r = r * x + c_[i];
  return r;
}

KPoly operator+(const KPoly& a, const KPoly& b) {
  std::vector<RatFunc> v(std::max(a.c_.size(), b.c_.size()), RatFunc(a.p_));
  for (std::size_t i = 0; i < a.c_.size(); ++i) v[i] += a.c_[i];
  for (std::size_t i = 0; i < b.c_.size(); ++i) v[i] += b.c_[i];
  return KPoly(a.p_, std::move(v));
}

KPoly operator-(const KPoly& a, const KPoly& b) {
  std::vector<RatFunc> v(std::max(a.c_.size(), b.c_.size()), RatFunc(a.p_));
  for (std::size_t i = 0; i < a.c_.size(); ++i) v[i] += a.c_[i];
  for (std::size_t i = 0; i < b.c_.size(); ++i) v[i] -= b.c_[i];
  return KPoly(a.p_, std::move(v));
}

KPoly operator*(const KPoly& a, const KPoly& b) {
  if (a.is_zero() || b.is_zero()) return KPoly(a.p_);
  std::vector<RatFunc> v(a.c_.size() + b.c_.size() - 1, RatFunc(a.p_));
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) v[i + j] += a.c_[i] * b.c_[j];
  return KPoly(a.p_, std::move(v));
}

KPoly KPoly::operator*(const RatFunc& c) const {
  std::vector<RatFunc> v;
  v.reserve(c_.size());
  for (const auto& x : c_) v.push_back(x * c);
  return KPoly(p_, std::move(v));
}

std::pair<KPoly, KPoly> divmod(const KPoly& a, const KPoly& b) {
  if (b.is_zero()) throw std::domain_error("KPoly division by zero");
  const std::uint32_t p = a.prime();
  if (a.deg() < b.deg()) return {KPoly(p), a};
  std::vector<RatFunc> q(static_cast<std::size_t>(a.deg() - b.deg()) + 1, RatFunc(p));
  std::vector<RatFunc> r = a.coeffs();
  const RatFunc inv = b.lead().inverse();
  const std::size_t nb = b.coeffs().size();
  for (std::size_t i = r.size(); i-- >= nb;) {
    if (r[i].is_zero()) continue;
    RatFunc f = r[i] * inv;
    const std::size_t s = i + 1 - nb;
    q[s] = f;
    for (std::size_t j = 0; j < nb; ++j) r[s + j] -= f * b[j];
  }
  r.resize(nb - 1, RatFunc(p));
  return {KPoly(p, std::move(q)), KPoly(p, std::move(r))};
}

KPoly gcd(const KPoly& a, const KPoly& b) {
  KPoly x = a, y = b;
  while (!y.is_zero()) {
    KPoly r = divmod(x, y).second;
    x = std::move(y);
    y = std::move(r);
  }
  return x.monic();
}

namespace {

using PolyVec = std::vector<Poly>;

// G(y) mod u^m for G with polynomial coefficients, low-to-high.
Poly eval_trunc(const PolyVec& g, const Poly& y, std::size_t m) {
  Poly r(y.prime());
  for (std::size_t i = g.size(); i-- > 0;) r = mul_trunc(r, y, m) + g[i].truncated(m);
  return r;
}

Poly eval_exact(const PolyVec& g, const Poly& y) {
  Poly r(y.prime());
  for (std::size_t i = g.size(); i-- > 0;) r = r * y + g[i];
  return r;
}

PolyVec derivative(const PolyVec& g) {
  PolyVec d;
  const std::uint32_t p = g.front().prime();
  for (std::size_t i = 1; i < g.size(); ++i) d.push_back(g[i].scaled(static_cast<Coeff>(i % p)));
  return d;
}

std::vector<Coeff> residue_coeffs(const PolyVec& g) {
  std::vector<Coeff> v;
  for (const auto& c : g) v.push_back(c[0]);
  return v;
}

bool squarefree_over_Fp(const PolyVec& g) {
  const std::uint32_t p = g.front().prime();
  Poly h(p, residue_coeffs(g));
  if (h.deg() + 1 != static_cast<std::int64_t>(g.size())) return false;
  Poly d = h.derivative();
  return !d.is_zero() && gcd(h, d).deg() == 0;
}

// Polynomial roots of a monic G over F_p[u] with degree at most bound.
std::vector<Poly> poly_roots_hensel(const PolyVec& g, std::size_t bound) {
  const std::uint32_t p = g.front().prime();
  const PolyVec dg = derivative(g);
  const Poly h(p, residue_coeffs(g));
  const std::size_t prec = bound + 1;
  std::vector<Poly> out;
  for (Coeff a = 0; a < p; ++a) {
    if (h.eval(a) != 0) continue;
    Poly y = Poly::constant(p, a);
    for (std::size_t m = 1; m < prec;) {
      m = std::min(2 * m, prec);
      Poly modulus = Poly::monomial(p, 1, m);
      Poly corr = mul_trunc(eval_trunc(g, y, m), invmod(eval_trunc(dg, y, m), modulus), m);
      y = (y - corr).truncated(m);
    }
    if (eval_exact(g, y).is_zero()) out.push_back(y);
  }
  return out;
}

void dfs(const PolyVec& g, std::size_t bound, const Poly& y, std::size_t j, std::vector<Poly>& out) {
  const std::uint32_t p = g.front().prime();
  if (j > bound) {
    if (eval_exact(g, y).is_zero()) out.push_back(y);
    return;
  }
  for (Coeff a = 0; a < p; ++a) {
    Poly z = y + Poly::monomial(p, a, j);
    if (eval_trunc(g, z, j + 1).is_zero()) dfs(g, bound, z, j + 1, out);
  }
}

std::vector<RatFunc> roots_squarefree(const KPoly& f) {
  const std::uint32_t p = f.prime();
  const std::size_t n = static_cast<std::size_t>(f.deg());
  if (n == 1) return {-f[0] / f[1]};
  if (n == 2 && p != 2) {
    const RatFunc disc = f[1] * f[1] - RatFunc::constant(p, 4) * f[2] * f[0];
    auto s = disc.sqrt();
    if (!s) return {};
    const RatFunc inv = (RatFunc::constant(p, 2) * f[2]).inverse();
    std::vector<RatFunc> r = {(-f[1] + *s) * inv, (-f[1] - *s) * inv};
    std::sort(r.begin(), r.end());
    return r;
  }
  // integral coefficients, then the monic G(Y) = lc^{n-1} F(Y / lc)
  Poly den = Poly::constant(p, 1);
  for (const auto& c : f.coeffs()) den = den / gcd(den, c.den()) * c.den();
  PolyVec c;
  for (const auto& x : f.coeffs()) c.push_back(x.num() * (den / x.den()));
  const Poly lc = c.back();
  PolyVec g(n + 1, Poly(p));
  g[n] = Poly::constant(p, 1);
  Poly lp = Poly::constant(p, 1);
  for (std::size_t k = n; k-- > 0;) {
    g[k] = c[k] * lp;
    lp = lp * lc;
  }
  std::int64_t bound = 0;
  for (std::size_t k = 0; k < n; ++k)
    if (!g[k].is_zero()) bound = std::max(bound, g[k].deg() / static_cast<std::int64_t>(n - k));

  // expand around a point t = c where the roots separate, if there is one
  Coeff best = 0;
  bool separable = false;
  for (Coeff a = 0; a < p && !separable; ++a) {
    PolyVec ga;
    for (const auto& x : g) ga.push_back(x.shift(a));
    if (squarefree_over_Fp(ga)) {
      best = a;
      separable = true;
    }
  }
  PolyVec gs;
  for (const auto& x : g) gs.push_back(x.shift(best));
  std::vector<Poly> ys;
  if (separable) {
    ys = poly_roots_hensel(gs, static_cast<std::size_t>(bound));
  } else {
    dfs(gs, static_cast<std::size_t>(bound), Poly(p), 0, ys);
  }
  std::vector<RatFunc> out;
  const RatFunc lcf(lc);
  for (const auto& y : ys) out.push_back(RatFunc(y.shift(static_cast<Coeff>((p - best) % p))) / lcf);
  return out;
}

}  // namespace

std::vector<RatFunc> roots_in_K(const KPoly& f) {
  if (f.is_zero()) throw std::invalid_argument("roots of the zero polynomial");
  const std::uint32_t p = f.prime();
  std::vector<RatFunc> out;
  if (f.deg() >= 1) {
    KPoly F = f.monic();
    KPoly d = F.derivative();
    if (d.is_zero()) {
      // F(X) = G(X^p)
      std::vector<RatFunc> gc;
      for (std::size_t i = 0; i < F.coeffs().size(); i += p) gc.push_back(F[i]);
      for (const auto& s : roots_in_K(KPoly(p, gc)))
        if (auto r = s.pth_root()) out.push_back(*r);
    } else {
      KPoly g = gcd(F, d);
      if (g.deg() >= 1) {
        out = roots_in_K(divmod(F, g).first);
        for (auto& r : roots_in_K(g)) out.push_back(std::move(r));
      } else {
        out = roots_squarefree(F);
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace kperec
