#include "kperec/curve.hpp"

namespace kperec {

namespace {
RatFunc k(std::uint32_t p, long long c) { return RatFunc::constant(p, c); }
}  // namespace

Point frobenius(const Point& P, std::uint32_t n) {
  if (!P || n == 0) return P;
  return Affine{P->x.frobenius(n), P->y.frobenius(n)};
}

std::string point_to_string(const Point& P) {
  if (!P) return "O";
  return "(" + P->x.to_string() + ", " + P->y.to_string() + ")";
}

// ---------------------------------------------------------------- WeierstrassCurve

WeierstrassCurve::WeierstrassCurve(std::array<RatFunc, 5> a) : a_(std::move(a)) {
  const std::uint32_t p = a_[0].prime();
  for (const auto& c : a_)
    if (c.prime() != p) throw std::invalid_argument("curve coefficients over different fields");
  const auto& [a1, a2, a3, a4, a6] = a_;
  b2_ = a1 * a1 + k(p, 4) * a2;
  b4_ = k(p, 2) * a4 + a1 * a3;
  b6_ = a3 * a3 + k(p, 4) * a6;
  b8_ = a1 * a1 * a6 + k(p, 4) * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
  c4_ = b2_ * b2_ - k(p, 24) * b4_;
  c6_ = -(b2_ * b2_ * b2_) + k(p, 36) * b2_ * b4_ - k(p, 216) * b6_;
  disc_ = -(b2_ * b2_ * b8_) - k(p, 8) * b4_ * b4_ * b4_ - k(p, 27) * b6_ * b6_ +
          k(p, 9) * b2_ * b4_ * b6_;
  if (disc_.is_zero()) throw SingularCurveError(disc_.to_string());
  j_ = c4_ * c4_ * c4_ / disc_;
}

WeierstrassCurve WeierstrassCurve::short_form(const RatFunc& a4, const RatFunc& a6) {
  RatFunc z(a4.prime());
  return WeierstrassCurve({z, z, z, a4, a6});
}

bool WeierstrassCurve::contains(const Point& P) const {
  if (!P) return true;
  const auto& [x, y] = *P;
  return y * y + a1() * x * y + a3() * y == x * x * x + a2() * x * x + a4() * x + a6();
}

Point WeierstrassCurve::negate(const Point& P) const {
  if (!P) return P;
  return Affine{P->x, -P->y - a1() * P->x - a3()};
}

Point WeierstrassCurve::add(const Point& P, const Point& Q) const {
  if (!P) return Q;
  if (!Q) return P;
  const std::uint32_t p = prime();
  const auto& [x1, y1] = *P;
  const auto& [x2, y2] = *Q;
  RatFunc lambda(p), nu(p);
  if (x1 == x2) {
    RatFunc denom = y1 + y2 + a1() * x2 + a3();
    if (denom.is_zero()) return std::nullopt;
    // Q = P here, so denom = 2y + a1 x + a3.
    lambda = (k(p, 3) * x1 * x1 + k(p, 2) * a2() * x1 + a4() - a1() * y1) / denom;
    nu = (-(x1 * x1 * x1) + a4() * x1 + k(p, 2) * a6() - a3() * y1) / denom;
  } else {
    RatFunc dx = x2 - x1;
    lambda = (y2 - y1) / dx;
    nu = (y1 * x2 - y2 * x1) / dx;
  }
  RatFunc x3 = lambda * lambda + a1() * lambda - a2() - x1 - x2;
  RatFunc y3 = -(lambda + a1()) * x3 - nu - a3();
  return Affine{std::move(x3), std::move(y3)};
}

Point WeierstrassCurve::multiply(std::int64_t m, const Point& P) const {
  if (m < 0) return multiply(-m, negate(P));
  Point result, base = P;
  auto e = static_cast<std::uint64_t>(m);
  while (e) {
    if (e & 1) result = add(result, base);
    e >>= 1;
    if (e) base = dbl(base);
  }
  return result;
}

std::string WeierstrassCurve::to_string() const {
  std::string s = "[";
  for (std::size_t i = 0; i < a_.size(); ++i) {
    if (i) s += ", ";
    s += a_[i].to_string();
  }
  return s + "]";
}

WeierstrassCurve frobenius_twist(const WeierstrassCurve& E, std::uint32_t n) {
  if (n == 0) return E;
  auto a = E.coefficients();
  for (auto& c : a) c = c.frobenius(n);
  return WeierstrassCurve(std::move(a));
}

bool is_isotrivial(const WeierstrassCurve& E) { return E.j().is_constant(); }

// ---------------------------------------------------------------- TowerPoint

TowerPoint::TowerPoint(const WeierstrassCurve& base, std::uint32_t level, Point rep)
    : TowerPoint(std::make_shared<const WeierstrassCurve>(base), level, std::move(rep)) {}

TowerPoint::TowerPoint(std::shared_ptr<const WeierstrassCurve> base, std::uint32_t level, Point rep)
    : base_(std::move(base)), level_(level), rep_(std::move(rep)) {
  twist_ = level_ == 0 ? base_ : std::make_shared<const WeierstrassCurve>(frobenius_twist(*base_, level_));
  if (!twist_->contains(rep_))
    throw std::invalid_argument("point " + point_to_string(rep_) + " is not on the level-" +
                                std::to_string(level_) + " twist");
  normalize();
}

TowerPoint::TowerPoint(Trusted, std::shared_ptr<const WeierstrassCurve> base,
                       std::shared_ptr<const WeierstrassCurve> twist, std::uint32_t level, Point rep)
    : base_(std::move(base)), twist_(std::move(twist)), level_(level), rep_(std::move(rep)) {
  normalize();
}

TowerPoint TowerPoint::infinity(const WeierstrassCurve& base) { return TowerPoint(base, 0, std::nullopt); }

void TowerPoint::normalize() {
  if (!rep_) {
    level_ = 0;
    twist_ = base_;
    return;
  }
  const std::uint32_t start = level_;
  while (level_ > 0) {
    auto x = rep_->x.pth_root();
    if (!x) break;
    auto y = rep_->y.pth_root();
    if (!y) break;
    rep_ = Affine{std::move(*x), std::move(*y)};
    --level_;
  }
  if (level_ != start)
    twist_ = level_ == 0 ? base_ : std::make_shared<const WeierstrassCurve>(frobenius_twist(*base_, level_));
}

Point TowerPoint::rep_at(std::uint32_t L) const {
  if (L < level_) throw std::invalid_argument("rep_at: target level below point level");
  return frobenius(rep_, L - level_);
}

std::string TowerPoint::to_string() const {
  return "level " + std::to_string(level_) + " " + point_to_string(rep_);
}

bool operator==(const TowerPoint& a, const TowerPoint& b) {
  return a.level_ == b.level_ && a.rep_ == b.rep_ &&
         (a.base_ == b.base_ || *a.base_ == *b.base_);
}

namespace {
void require_same_base(const TowerPoint& P, const TowerPoint& Q) {
  if (P.base_ptr() != Q.base_ptr() && P.base() != Q.base())
    throw std::invalid_argument("points on different base curves");
}
}  // namespace

TowerPoint add(const TowerPoint& P, const TowerPoint& Q) {
  require_same_base(P, Q);
  const TowerPoint& hi = P.level_ >= Q.level_ ? P : Q;
  const std::uint32_t L = hi.level_;
  Point sum = hi.twist_->add(P.rep_at(L), Q.rep_at(L));
  return TowerPoint(TowerPoint::Trusted{}, P.base_, hi.twist_, L, std::move(sum));
}

TowerPoint negate(const TowerPoint& P) {
  return TowerPoint(TowerPoint::Trusted{}, P.base_, P.twist_, P.level_, P.twist_->negate(P.rep_));
}

TowerPoint scalar_mul(std::int64_t m, const TowerPoint& P) {
  return TowerPoint(TowerPoint::Trusted{}, P.base_, P.twist_, P.level_, P.twist_->multiply(m, P.rep_));
}

TowerPoint frobenius_map(const TowerPoint& P) {
  auto next = std::make_shared<const WeierstrassCurve>(frobenius_twist(P.base(), 1));
  if (P.level_ == 0) return TowerPoint(TowerPoint::Trusted{}, next, next, 0, frobenius(P.rep_));
  // The twist of E^{(p)} at level n-1 is the twist of E at level n.
  return TowerPoint(TowerPoint::Trusted{}, next, P.level_ == 1 ? next : P.twist_, P.level_ - 1, P.rep_);
}

TowerPoint frobenius_inverse(const WeierstrassCurve& E, const Point& Q) {
  auto base = std::make_shared<const WeierstrassCurve>(E);
  auto twist = std::make_shared<const WeierstrassCurve>(frobenius_twist(E, 1));
  if (!twist->contains(Q)) throw std::invalid_argument("point is not on the Frobenius twist");
  return TowerPoint(TowerPoint::Trusted{}, base, twist, 1, Q);
}

TowerPoint verschiebung(const WeierstrassCurve& E, const Point& Q) {
  TowerPoint R = scalar_mul(E.prime(), frobenius_inverse(E, Q));
  if (R.level() != 0)
    throw std::logic_error("Verschiebung image " + R.to_string() + " is not K-rational");
  return R;
}

}  // namespace kperec
