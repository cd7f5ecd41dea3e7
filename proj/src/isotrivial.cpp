#include "kperec/isotrivial.hpp"

#include <stdexcept>

namespace kperec {

namespace {

RatFunc cubic_part(std::uint32_t p) {
  const RatFunc t = RatFunc::t(p);
  return t.pow(3) + t;
}

std::int64_t prime_power(std::uint32_t p, std::uint32_t n) {
  std::int64_t q = 1;
  for (std::uint32_t i = 0; i < n; ++i) q *= p;
  return q;
}

}  // namespace

WeierstrassCurve isotrivial_twist_curve(std::uint32_t p) {
  if (p == 2)
    throw std::invalid_argument(
        "p = 2 is not supported: this family needs p odd, and the p = 2 analogue is not implemented");
  return WeierstrassCurve::short_form(cubic_part(p).pow(2), RatFunc(p));
}

TowerPoint isotrivial_family_point(const WeierstrassCurve& curve, std::uint32_t n) {
  const std::uint32_t p = curve.prime();
  const RatFunc e = cubic_part(p);
  const std::int64_t q = prime_power(p, n);
  Affine rep{RatFunc::t(p) * e.pow(q), e.pow((3 * q + 1) / 2)};
  return TowerPoint(curve, n, rep);
}

}  // namespace kperec
