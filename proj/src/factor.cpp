#include "kperec/factor.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <random>

namespace kperec {

Poly Factorization::product() const {
  Poly r = Poly::constant(prime, leading);
  for (const auto& f : factors) r = r * f.poly.pow(f.exponent);
  return r;
}

std::vector<std::pair<Poly, std::size_t>> squarefree_decomposition(const Poly& f) {
  if (f.is_zero()) throw std::domain_error("squarefree decomposition of zero");
  const std::uint32_t p = f.prime();
  std::vector<std::pair<Poly, std::size_t>> out;
  if (f.is_constant()) return out;

  // Yun's algorithm adapted to characteristic p.
  Poly a = f.monic();
  std::vector<std::pair<Poly, std::size_t>> acc;
  std::function<void(const Poly&, std::size_t)> rec = [&](const Poly& g, std::size_t scale) {
    if (g.is_constant()) return;
    Poly d = g.derivative();
    if (d.is_zero()) {
      rec(*g.pth_root(), scale * p);
      return;
    }
    Poly c = gcd(g, d);
    Poly w = g / c;
    std::size_t i = 1;
    while (!w.is_constant()) {
      Poly y = gcd(w, c);
      Poly z = w / y;
      if (!z.is_constant()) acc.emplace_back(z.monic(), i * scale);
      ++i;
      w = y;
      c = c / y;
    }
    if (!c.is_constant()) rec(*c.monic().pth_root(), scale * p);
  };
  rec(a, 1);
  // Merge equal exponents.
  std::map<std::size_t, Poly> by_exp;
  for (auto& [g, e] : acc) {
    auto it = by_exp.find(e);
    if (it == by_exp.end())
      by_exp.emplace(e, g);
    else
      it->second = it->second * g;
  }
  for (auto& [e, g] : by_exp) out.emplace_back(g, e);
  return out;
}

namespace {

// Distinct-degree factorization of a monic squarefree polynomial.
std::vector<std::pair<Poly, std::size_t>> distinct_degree(const Poly& f) {
  const std::uint32_t p = f.prime();
  std::vector<std::pair<Poly, std::size_t>> out;
  Poly rest = f;
  Poly x = Poly::t(p);
  Poly h = x % rest;
  std::size_t d = 0;
  while (rest.deg() >= 2 * static_cast<std::int64_t>(d + 1)) {
    ++d;
    h = powmod(h, p, rest);
    Poly g = gcd(rest, h - x);
    if (!g.is_constant()) {
      out.emplace_back(g, d);
      rest = rest / g;
      h = h % rest;
    }
  }
  if (!rest.is_constant()) out.emplace_back(rest.monic(), static_cast<std::size_t>(rest.deg()));
  return out;
}

Poly random_poly(std::uint32_t p, std::size_t deg, std::mt19937_64& rng) {
  std::uniform_int_distribution<Coeff> dist(0, p - 1);
  std::vector<Coeff> v(deg + 1);
  for (auto& c : v) c = dist(rng);
  return Poly(p, std::move(v));
}

// Equal-degree splitting (Cantor-Zassenhaus; trace map for p = 2).
void equal_degree(const Poly& f, std::size_t d, std::mt19937_64& rng, std::vector<Poly>& out) {
  if (f.deg() == static_cast<std::int64_t>(d)) {
    out.push_back(f.monic());
    return;
  }
  const std::uint32_t p = f.prime();
  while (true) {
    Poly a = random_poly(p, static_cast<std::size_t>(f.deg() - 1), rng);
    if (a.is_constant()) continue;
    Poly g = gcd(a, f);
    if (!g.is_constant() && g.deg() < f.deg()) {
      equal_degree(g, d, rng, out);
      equal_degree(f / g, d, rng, out);
      return;
    }
    Poly b;
    if (p == 2) {
      // a + a^2 + ... + a^{2^{d-1}} lands in F_2 modulo each irreducible factor
      Poly term = a % f;
      b = term;
      for (std::size_t i = 1; i < d; ++i) {
        term = (term * term) % f;
        b = b + term;
      }
    } else {
      // a^{(p^d-1)/2} = (a * a^p * ... * a^{p^{d-1}})^{(p-1)/2}
      Poly conj = a % f, norm = a % f;
      for (std::size_t i = 1; i < d; ++i) {
        conj = powmod(conj, p, f);
        norm = (norm * conj) % f;
      }
      b = powmod(norm, (p - 1) / 2, f) - Poly::constant(p, 1);
    }
    g = gcd(b, f);
    if (!g.is_constant() && g.deg() < f.deg()) {
      equal_degree(g, d, rng, out);
      equal_degree(f / g, d, rng, out);
      return;
    }
  }
}

}  // namespace

Factorization poly_factor(const Poly& f) {
  if (f.is_zero()) throw std::domain_error("cannot factor the zero polynomial");
  Factorization result{f.prime(), f.lead(), {}};
  std::mt19937_64 rng(0x6b706572ULL ^ f.prime());
  for (const auto& [sq, e] : squarefree_decomposition(f)) {
    for (const auto& [g, d] : distinct_degree(sq)) {
      std::vector<Poly> parts;
      equal_degree(g, d, rng, parts);
      for (auto& q : parts) result.factors.push_back({std::move(q), e});
    }
  }
  std::sort(result.factors.begin(), result.factors.end(),
            [](const Factor& a, const Factor& b) { return a.poly < b.poly; });
  return result;
}

bool is_irreducible(const Poly& f) {
  if (f.deg() < 1) return false;
  if (f.deg() == 1) return true;
  auto fac = poly_factor(f);
  return fac.factors.size() == 1 && fac.factors[0].exponent == 1;
}

std::vector<Poly> monic_irreducibles(std::uint32_t p, std::size_t d) {
  std::vector<Poly> out;
  std::uint64_t count = 1;
  for (std::size_t i = 0; i < d; ++i) count *= p;
  for (std::uint64_t n = 0; n < count; ++n) {
    std::vector<Coeff> v(d + 1, 0);
    std::uint64_t m = n;
    for (std::size_t i = 0; i < d; ++i) {
      v[i] = static_cast<Coeff>(m % p);
      m /= p;
    }
    v[d] = 1;
    Poly cand(p, std::move(v));
    if (is_irreducible(cand)) out.push_back(std::move(cand));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace kperec
