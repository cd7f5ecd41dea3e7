#include "kperec/poly.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

namespace kperec {

// ---------------------------------------------------------------- PrimeField

bool PrimeField::is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

PrimeField::PrimeField(std::uint32_t p) : p_(p) {
  if (!is_prime(p)) throw std::invalid_argument("modulus " + std::to_string(p) + " is not prime");
}

Coeff PrimeField::reduce(long long v) const {
  long long r = v % static_cast<long long>(p_);
  if (r < 0) r += p_;
  return static_cast<Coeff>(r);
}

Coeff PrimeField::pow(Coeff a, std::uint64_t e) const {
  std::uint64_t result = 1 % p_, base = a % p_;
  while (e) {
    if (e & 1) result = result * base % p_;
    base = base * base % p_;
    e >>= 1;
  }
  return static_cast<Coeff>(result);
}

Coeff PrimeField::inv(Coeff a) const {
  if (a % p_ == 0) throw std::domain_error("inverse of zero in F_p");
  return pow(a, p_ - 2);
}

bool PrimeField::is_square(Coeff a) const {
  if (a == 0 || p_ == 2) return true;
  return pow(a, (p_ - 1) / 2) == 1;
}

std::optional<Coeff> PrimeField::sqrt(Coeff a) const {
  a %= p_;
  if (a == 0 || p_ == 2) return a;
  if (!is_square(a)) return std::nullopt;
  if (p_ % 4 == 3) return pow(a, (p_ + 1) / 4);
  // Tonelli-Shanks
  std::uint32_t q = p_ - 1, s = 0;
  while (q % 2 == 0) { q /= 2; ++s; }
  Coeff z = 2;
  while (is_square(z)) ++z;
  Coeff m = s, c = pow(z, q), t = pow(a, q), r = pow(a, (q + 1) / 2);
  while (t != 1) {
    Coeff i = 0, tt = t;
    while (tt != 1) { tt = mul(tt, tt); ++i; }
    Coeff b = c;
    for (Coeff j = 0; j + 1 < m - i; ++j) b = mul(b, b);
    m = i;
    c = mul(b, b);
    t = mul(t, c);
    r = mul(r, b);
  }
  return r;
}

// ---------------------------------------------------------------- Poly

void require_same_field(const Poly& a, const Poly& b) {
  if (a.prime() != b.prime())
    throw std::invalid_argument("polynomials over different prime fields (" +
                                std::to_string(a.prime()) + " vs " + std::to_string(b.prime()) + ")");
}

Poly::Poly(std::uint32_t p, std::vector<Coeff> coeffs) : p_(p), c_(std::move(coeffs)) {
  for (auto& c : c_) c %= p_;
  trim();
}

void Poly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Poly Poly::constant(std::uint32_t p, long long c) {
  return Poly(p, {PrimeField(p).reduce(c)});
}

Poly Poly::monomial(std::uint32_t p, Coeff c, std::size_t k) {
  std::vector<Coeff> v(k + 1, 0);
  v[k] = c % p;
  return Poly(p, std::move(v));
}

Poly Poly::from_ints(std::uint32_t p, const std::vector<long long>& coeffs) {
  PrimeField F(p);
  std::vector<Coeff> v;
  v.reserve(coeffs.size());
  for (long long c : coeffs) v.push_back(F.reduce(c));
  return Poly(p, std::move(v));
}

Poly Poly::monic() const {
  if (is_zero() || lead() == 1) return *this;
  return scaled(PrimeField(p_).inv(lead()));
}

Poly Poly::scaled(Coeff s) const {
  if (s % p_ == 0) return Poly(p_);
  Poly r(*this);
  for (auto& c : r.c_) c = static_cast<Coeff>(static_cast<std::uint64_t>(c) * s % p_);
  return r;
}

Poly Poly::derivative() const {
  if (c_.size() <= 1) return Poly(p_);
  std::vector<Coeff> d(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i)
    d[i - 1] = static_cast<Coeff>(static_cast<std::uint64_t>(c_[i]) * (i % p_) % p_);
  return Poly(p_, std::move(d));
}

Coeff Poly::eval(Coeff x) const {
  std::uint64_t r = 0;
  for (std::size_t i = c_.size(); i-- > 0;) r = (r * x + c_[i]) % p_;
  return static_cast<Coeff>(r);
}

Poly Poly::shift(Coeff c) const {
  // Horner in the ring: f(t + c)
  Poly lin(p_, {c % p_, 1});
  Poly r(p_);
  for (std::size_t i = c_.size(); i-- > 0;) r = r * lin + Poly(p_, {c_[i]});
  return r;
}

Poly Poly::reversed(std::size_t n) const {
  if (deg() > static_cast<std::int64_t>(n)) throw std::invalid_argument("reversed: n below degree");
  std::vector<Coeff> v(n + 1, 0);
  for (std::size_t i = 0; i < c_.size(); ++i) v[n - i] = c_[i];
  return Poly(p_, std::move(v));
}

Poly Poly::truncated(std::size_t n) const {
  if (c_.size() <= n) return *this;
  return Poly(p_, std::vector<Coeff>(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(n)));
}

Poly Poly::shifted_up(std::size_t k) const {
  if (is_zero()) return *this;
  std::vector<Coeff> v(k, 0);
  v.insert(v.end(), c_.begin(), c_.end());
  return Poly(p_, std::move(v));
}

std::size_t Poly::t_adic_valuation() const {
  if (is_zero()) throw std::domain_error("t-adic valuation of zero");
  std::size_t k = 0;
  while (c_[k] == 0) ++k;
  return k;
}

Poly Poly::frobenius() const {
  if (is_zero()) return *this;
  std::vector<Coeff> v((c_.size() - 1) * p_ + 1, 0);
  for (std::size_t i = 0; i < c_.size(); ++i) v[i * p_] = c_[i];
  return Poly(p_, std::move(v));
}

std::optional<Poly> Poly::pth_root() const {
  if (is_zero()) return *this;
  std::vector<Coeff> v((c_.size() - 1) / p_ + 1, 0);
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    if (i % p_ != 0) return std::nullopt;
    v[i / p_] = c_[i];
  }
  return Poly(p_, std::move(v));
}

Poly Poly::pow(std::uint64_t e) const {
  Poly result = Poly::constant(p_, 1), base = *this;
  while (e) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return result;
}

std::string Poly::to_string() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = c_.size(); i-- > 0;) {
    Coeff c = c_[i];
    if (c == 0) continue;
    if (!first) os << '+';
    first = false;
    if (i == 0) {
      os << c;
      continue;
    }
    if (c != 1) os << c << '*';
    os << 't';
    if (i > 1) os << '^' << i;
  }
  return os.str();
}

std::strong_ordering operator<=>(const Poly& a, const Poly& b) {
  if (auto c = a.p_ <=> b.p_; c != 0) return c;
  if (auto c = a.c_.size() <=> b.c_.size(); c != 0) return c;
  for (std::size_t i = a.c_.size(); i-- > 0;)
    if (auto c = a.c_[i] <=> b.c_[i]; c != 0) return c;
  return std::strong_ordering::equal;
}

Poly operator+(const Poly& a, const Poly& b) {
  require_same_field(a, b);
  const std::uint32_t p = a.p_;
  std::vector<Coeff> v(std::max(a.c_.size(), b.c_.size()), 0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    Coeff s = a[i] + b[i];
    v[i] = s >= p ? s - p : s;
  }
  return Poly(p, std::move(v));
}

Poly operator-(const Poly& a) {
  Poly r(a);
  for (auto& c : r.c_) c = c == 0 ? 0 : a.p_ - c;
  return r;
}

Poly operator-(const Poly& a, const Poly& b) {
  require_same_field(a, b);
  const std::uint32_t p = a.p_;
  std::vector<Coeff> v(std::max(a.c_.size(), b.c_.size()), 0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    Coeff x = a[i], y = b[i];
    v[i] = x >= y ? x - y : x + p - y;
  }
  return Poly(p, std::move(v));
}

namespace {

// Schoolbook product into 64-bit accumulators. For p < 2^16 the sum of up to
// 2^32 products of residues cannot overflow, so reduction happens once at the end.
std::vector<Coeff> raw_mul(const std::vector<Coeff>& a, const std::vector<Coeff>& b,
                           std::uint32_t p, std::size_t limit) {
  std::size_t n = std::min(a.size() + b.size() - 1, limit);
  std::vector<std::uint64_t> acc(n, 0);
  const bool lazy = p < (1u << 16);
  for (std::size_t i = 0; i < a.size() && i < n; ++i) {
    const std::uint64_t ai = a[i];
    if (ai == 0) continue;
    const std::size_t jmax = std::min(b.size(), n - i);
    std::uint64_t* out = acc.data() + i;
    if (lazy) {
      for (std::size_t j = 0; j < jmax; ++j) out[j] += ai * b[j];
    } else {
      for (std::size_t j = 0; j < jmax; ++j) out[j] = (out[j] + ai * b[j]) % p;
    }
  }
  std::vector<Coeff> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<Coeff>(acc[i] % p);
  return v;
}

}  // namespace

Poly operator*(const Poly& a, const Poly& b) {
  require_same_field(a, b);
  if (a.is_zero() || b.is_zero()) return Poly(a.p_);
  return Poly(a.p_, raw_mul(a.c_, b.c_, a.p_, a.c_.size() + b.c_.size() - 1));
}

Poly mul_trunc(const Poly& a, const Poly& b, std::size_t n) {
  require_same_field(a, b);
  if (a.is_zero() || b.is_zero() || n == 0) return Poly(a.prime());
  return Poly(a.prime(), raw_mul(a.coeffs(), b.coeffs(), a.prime(), n));
}

std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
  require_same_field(a, b);
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  const std::uint32_t p = a.prime();
  if (a.deg() < b.deg()) return {Poly(p), a};
  PrimeField F(p);
  std::vector<Coeff> r = a.coeffs();
  const auto& bc = b.coeffs();
  const std::size_t db = bc.size() - 1;
  const Coeff binv = F.inv(b.lead());
  std::vector<Coeff> q(r.size() - db, 0);
  for (std::size_t i = r.size(); i-- > db;) {
    Coeff c = r[i];
    if (c == 0) continue;
    c = F.mul(c, binv);
    q[i - db] = c;
    const Coeff nc = F.neg(c);
    for (std::size_t j = 0; j <= db; ++j)
      r[i - db + j] = static_cast<Coeff>((r[i - db + j] + static_cast<std::uint64_t>(nc) * bc[j]) % p);
  }
  r.resize(db);
  return {Poly(p, std::move(q)), Poly(p, std::move(r))};
}

Poly operator/(const Poly& a, const Poly& b) { return divmod(a, b).first; }
Poly operator%(const Poly& a, const Poly& b) { return divmod(a, b).second; }

Poly gcd(const Poly& a, const Poly& b) {
  require_same_field(a, b);
  Poly x = a, y = b;
  while (!y.is_zero()) {
    Poly r = x % y;
    x = std::move(y);
    y = std::move(r);
  }
  return x.monic();
}

ExtGcd ext_gcd(const Poly& a, const Poly& b) {
  require_same_field(a, b);
  const std::uint32_t p = a.prime();
  Poly r0 = a, r1 = b;
  Poly s0 = Poly::constant(p, 1), s1(p);
  Poly u0(p), u1 = Poly::constant(p, 1);
  while (!r1.is_zero()) {
    auto [q, r] = divmod(r0, r1);
    r0 = std::move(r1);
    r1 = std::move(r);
    Poly s2 = s0 - q * s1;
    s0 = std::move(s1);
    s1 = std::move(s2);
    Poly u2 = u0 - q * u1;
    u0 = std::move(u1);
    u1 = std::move(u2);
  }
  if (r0.is_zero()) return {r0, s0, u0};
  Coeff li = PrimeField(p).inv(r0.lead());
  return {r0.scaled(li), s0.scaled(li), u0.scaled(li)};
}

Poly powmod(const Poly& base, std::uint64_t e, const Poly& m) {
  Poly result = Poly::constant(base.prime(), 1) % m, b = base % m;
  while (e) {
    if (e & 1) result = (result * b) % m;
    e >>= 1;
    if (e) b = (b * b) % m;
  }
  return result;
}

Poly invmod(const Poly& a, const Poly& m) {
  auto eg = ext_gcd(a % m, m);
  if (!eg.g.is_one()) throw std::domain_error("element not invertible modulo " + m.to_string());
  return eg.s % m;
}

std::size_t strip_factor(Poly& a, const Poly& f) {
  if (a.is_zero()) throw std::domain_error("strip_factor of zero");
  std::size_t k = 0;
  while (true) {
    auto [q, r] = divmod(a, f);
    if (!r.is_zero()) break;
    a = std::move(q);
    ++k;
  }
  return k;
}

std::optional<Poly> poly_sqrt(const Poly& f) {
  const std::uint32_t p = f.prime();
  if (f.is_zero()) return f;
  if (p == 2) {
    return f.pth_root();
  }
  if (f.deg() % 2 != 0) return std::nullopt;
  PrimeField F(p);
  auto lead_root = F.sqrt(f.lead());
  if (!lead_root) return std::nullopt;
  const std::size_t m = static_cast<std::size_t>(f.deg() / 2);
  std::vector<Coeff> s(m + 1, 0);
  s[m] = *lead_root;
  const Coeff inv2s = F.inv(F.mul(2, s[m]));
  // Match coefficients of t^{2m-j} for j = 1..m, top down.
  for (std::size_t j = 1; j <= m; ++j) {
    const std::size_t k = 2 * m - j;
    std::uint64_t acc = 0;
    for (std::size_t i = m - j + 1; i < m; ++i) {
      const std::size_t other = k - i;
      if (other > m || other <= m - j) continue;
      acc = (acc + static_cast<std::uint64_t>(s[i]) * s[other]) % p;
    }
    s[m - j] = F.mul(F.sub(f[k], static_cast<Coeff>(acc)), inv2s);
  }
  Poly root(p, std::move(s));
  if (root * root != f) return std::nullopt;
  return root;
}

std::ostream& operator<<(std::ostream& os, const Poly& f) { return os << f.to_string(); }

}  // namespace kperec
