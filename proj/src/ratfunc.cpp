#include "kperec/ratfunc.hpp"

#include <algorithm>
#include <cctype>
#include <ostream>

#include "kperec/factor.hpp"

namespace kperec {

// ---------------------------------------------------------------- RatFunc

RatFunc::RatFunc(Poly num) : num_(std::move(num)), den_(Poly::constant(num_.prime(), 1)) {}

RatFunc::RatFunc(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
  require_same_field(num_, den_);
  if (den_.is_zero()) throw std::domain_error("rational function with zero denominator");
  normalize();
}

void RatFunc::normalize() {
  const std::uint32_t p = num_.prime();
  if (num_.is_zero()) {
    den_ = Poly::constant(p, 1);
    return;
  }
  if (!den_.is_constant()) {
    Poly g = gcd(num_, den_);
    if (!g.is_one()) {
      num_ = num_ / g;
      den_ = den_ / g;
    }
  }
  if (den_.lead() != 1) {
    Coeff li = PrimeField(p).inv(den_.lead());
    num_ = num_.scaled(li);
    den_ = den_.scaled(li);
  }
}

std::int64_t RatFunc::height() const {
  if (is_zero()) return 0;
  return std::max(num_.deg(), den_.deg());
}

RatFunc RatFunc::inverse() const {
  if (is_zero()) throw std::domain_error("inverse of zero rational function");
  return RatFunc(den_, num_);
}

RatFunc RatFunc::pow(std::int64_t e) const {
  if (e < 0) return inverse().pow(-e);
  RatFunc r(Poly::constant(prime(), 1));
  // num and den stay coprime under powers.
  r.num_ = num_.pow(static_cast<std::uint64_t>(e));
  r.den_ = den_.pow(static_cast<std::uint64_t>(e));
  return r;
}

RatFunc RatFunc::frobenius() const {
  RatFunc r(*this);
  r.num_ = num_.frobenius();
  r.den_ = den_.frobenius();
  return r;
}

RatFunc RatFunc::frobenius(std::uint32_t n) const {
  RatFunc r(*this);
  for (std::uint32_t i = 0; i < n; ++i) r = r.frobenius();
  return r;
}

std::optional<RatFunc> RatFunc::pth_root() const {
  auto n = num_.pth_root();
  if (!n) return std::nullopt;
  auto d = den_.pth_root();
  if (!d) return std::nullopt;
  RatFunc r(*this);
  r.num_ = std::move(*n);
  r.den_ = std::move(*d);
  return r;
}

std::optional<RatFunc> RatFunc::sqrt() const {
  if (prime() == 2) return pth_root();
  auto n = poly_sqrt(num_);
  if (!n) return std::nullopt;
  auto d = poly_sqrt(den_);
  if (!d) return std::nullopt;
  return RatFunc(std::move(*n), std::move(*d));
}

RatFunc RatFunc::invert_variable() const {
  if (is_zero()) return *this;
  const std::int64_t dn = num_.deg(), dd = den_.deg();
  const auto n = static_cast<std::size_t>(std::max(dn, dd));
  // num(1/s)/den(1/s) = s^{n-dn} rev(num) / (s^{n-dd} rev(den))
  return RatFunc(num_.reversed(static_cast<std::size_t>(dn)).shifted_up(n - static_cast<std::size_t>(dn)),
                 den_.reversed(static_cast<std::size_t>(dd)).shifted_up(n - static_cast<std::size_t>(dd)));
}

namespace {
bool single_term(const Poly& f) {
  return std::count_if(f.coeffs().begin(), f.coeffs().end(), [](Coeff c) { return c != 0; }) <= 1;
}
}  // namespace

std::string RatFunc::to_string() const {
  if (den_.is_one()) return num_.to_string();
  std::string n = num_.to_string(), d = den_.to_string();
  if (!single_term(num_)) n = "(" + n + ")";
  if (!single_term(den_)) d = "(" + d + ")";
  return n + "/" + d;
}

RatFunc operator+(const RatFunc& a, const RatFunc& b) {
  if (a.den_ == b.den_) return RatFunc(a.num_ + b.num_, a.den_);
  return RatFunc(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

RatFunc operator-(const RatFunc& a, const RatFunc& b) {
  if (a.den_ == b.den_) return RatFunc(a.num_ - b.num_, a.den_);
  return RatFunc(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
}

RatFunc operator-(const RatFunc& a) {
  RatFunc r(a);
  r.num_ = -a.num_;
  return r;
}

RatFunc operator*(const RatFunc& a, const RatFunc& b) {
  if (a.is_zero() || b.is_zero()) return RatFunc(a.prime());
  if (a.den_.is_one() && b.den_.is_one()) return RatFunc(a.num_ * b.num_);
  // Cross-cancel first to keep intermediate degrees small.
  Poly g1 = gcd(a.num_, b.den_), g2 = gcd(b.num_, a.den_);
  RatFunc r(a.prime());
  r.num_ = (a.num_ / g1) * (b.num_ / g2);
  r.den_ = (a.den_ / g2) * (b.den_ / g1);
  r.normalize();
  return r;
}

RatFunc operator/(const RatFunc& a, const RatFunc& b) { return a * b.inverse(); }

RatFunc RatFunc::scaled(long long c) const {
  RatFunc r(*this);
  r.num_ = num_.scaled(PrimeField(prime()).reduce(c));
  if (r.num_.is_zero()) r.den_ = Poly::constant(prime(), 1);
  return r;
}

// ---------------------------------------------------------------- places

std::int64_t Valuation::value() const {
  if (!v) throw std::logic_error("valuation is +infinity");
  return *v;
}

Place Place::finite(const Poly& pi) {
  if (!pi.is_monic() || !is_irreducible(pi))
    throw std::invalid_argument("place polynomial " + pi.to_string() + " is not monic irreducible");
  return Place(pi);
}

const Poly& Place::poly() const {
  if (is_infinite()) throw std::logic_error("infinite place has no polynomial");
  return std::get<Poly>(kind_);
}

std::int64_t Place::residue_degree() const { return is_infinite() ? 1 : poly().deg(); }

std::string Place::to_string() const { return is_infinite() ? "inf" : poly().to_string(); }

bool operator<(const Place& a, const Place& b) {
  if (a.is_infinite()) return false;
  if (b.is_infinite()) return true;
  return a.poly() < b.poly();
}

Valuation valuation(const RatFunc& f, const Place& v) {
  if (f.is_zero()) return {};
  if (v.is_infinite()) return {f.den().deg() - f.num().deg()};
  Poly n = f.num(), d = f.den();
  auto a = static_cast<std::int64_t>(strip_factor(n, v.poly()));
  auto b = static_cast<std::int64_t>(strip_factor(d, v.poly()));
  return {a - b};
}

std::int64_t residue_degree(const Place& v) { return v.residue_degree(); }

std::optional<RatFunc> pth_root(const RatFunc& f) { return f.pth_root(); }

std::int64_t func_height(const RatFunc& f) { return f.height(); }

std::vector<Place> support(const RatFunc& f) {
  std::vector<Place> out;
  if (f.is_zero()) return out;
  for (const Poly* part : {&f.num(), &f.den()}) {
    if (part->is_constant()) continue;
    for (const auto& fac : poly_factor(*part).factors) out.push_back(Place::finite(fac.poly));
  }
  std::sort(out.begin(), out.end());
  if (f.num().deg() != f.den().deg()) out.push_back(Place::infinite());
  return out;
}

// ---------------------------------------------------------------- perfect closure

PerfElement::PerfElement(RatFunc rep, std::uint32_t level) : rep_(std::move(rep)), level_(level) {
  while (level_ > 0) {
    auto r = rep_.pth_root();
    if (!r) break;
    rep_ = std::move(*r);
    --level_;
  }
}

RatFunc PerfElement::rep_at(std::uint32_t L) const {
  if (L < level_) throw std::invalid_argument("rep_at: target level below element level");
  return rep_.frobenius(L - level_);
}

PerfElement PerfElement::pow_p() const {
  if (level_ > 0) return PerfElement(rep_, level_ - 1);
  return PerfElement(rep_.frobenius(), 0);
}

PerfElement perf_arith(const PerfElement& a, const PerfElement& b, PerfOp op) {
  const std::uint32_t L = std::max(a.level(), b.level());
  RatFunc x = a.rep_at(L), y = b.rep_at(L);
  switch (op) {
    case PerfOp::Add: return PerfElement(x + y, L);
    case PerfOp::Sub: return PerfElement(x - y, L);
    case PerfOp::Mul: return PerfElement(x * y, L);
    case PerfOp::Div:
      if (y.is_zero()) throw std::domain_error("division by zero in the perfect closure");
      return PerfElement(x / y, L);
  }
  throw std::logic_error("unknown PerfOp");
}

// ---------------------------------------------------------------- parsing

namespace {

class Parser {
 public:
  Parser(std::string_view s, std::uint32_t p) : s_(s), p_(p), F_(p) {}

  RatFunc parse() {
    RatFunc r = expr();
    skip();
    if (pos_ != s_.size()) throw ParseError(std::string("unexpected '") + s_[pos_] + "'", pos_);
    return r;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  RatFunc expr() {
    RatFunc r = term();
    while (true) {
      if (eat('+'))
        r = r + term();
      else if (eat('-'))
        r = r - term();
      else
        return r;
    }
  }

  RatFunc term() {
    RatFunc r = unary();
    while (true) {
      if (eat('*')) {
        r = r * unary();
      } else if (eat('/')) {
        std::size_t at = pos_;
        RatFunc d = unary();
        if (d.is_zero()) throw ParseError("division by zero", at);
        r = r / d;
      } else {
        return r;
      }
    }
  }

  RatFunc unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }

  RatFunc power() {
    RatFunc base = atom();
    if (!eat('^')) return base;
    skip();
    bool neg = eat('-');
    skip();
    std::size_t start = pos_;
    std::int64_t e = 0;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      e = e * 10 + (s_[pos_] - '0');
      if (e > 1'000'000) throw ParseError("exponent too large", start);
      ++pos_;
    }
    if (pos_ == start) throw ParseError("expected exponent", pos_);
    if (neg && base.is_zero()) throw ParseError("negative power of zero", start);
    return base.pow(neg ? -e : e);
  }

  RatFunc atom() {
    skip();
    if (pos_ >= s_.size()) throw ParseError("unexpected end of input", pos_);
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      RatFunc r = expr();
      if (!eat(')')) throw ParseError("expected ')'", pos_);
      return r;
    }
    if (c == 't') {
      ++pos_;
      return RatFunc::t(p_);
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::uint64_t v = 0;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        v = (v * 10 + static_cast<std::uint64_t>(s_[pos_] - '0')) % p_;
        ++pos_;
      }
      return RatFunc::constant(p_, static_cast<long long>(v));
    }
    throw ParseError(std::string("unexpected '") + c + "'", pos_);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  std::uint32_t p_;
  PrimeField F_;
};

}  // namespace

RatFunc parse_ratfunc(std::string_view text, std::uint32_t p) { return Parser(text, p).parse(); }

Place parse_place(std::string_view text, std::uint32_t p) {
  if (text == "inf") return Place::infinite();
  RatFunc f = parse_ratfunc(text, p);
  if (!f.is_polynomial()) throw std::invalid_argument("place must be a polynomial: " + std::string(text));
  return Place::finite(f.num());
}

std::ostream& operator<<(std::ostream& os, const RatFunc& f) { return os << f.to_string(); }
std::ostream& operator<<(std::ostream& os, const Place& v) { return os << v.to_string(); }

}  // namespace kperec
