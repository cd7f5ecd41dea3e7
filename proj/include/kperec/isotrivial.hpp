#pragma once

// The isotrivial twist family E_d: Y^2 = X^3 + (t^3+t)^2 X and its points
// P_n = (s e^{p^n}, e^{(3p^n+1)/2}) with s = t^{1/p^n}, e = s^3 + s.

#include <cstdint>

#include "kperec/curve.hpp"

namespace kperec {

/// Throws std::invalid_argument for p = 2.
WeierstrassCurve isotrivial_twist_curve(std::uint32_t p);

/// P_n as a level-n point; its twist representative is
/// (t (t^3+t)^{p^n}, (t^3+t)^{(3p^n+1)/2}).
TowerPoint isotrivial_family_point(const WeierstrassCurve& curve, std::uint32_t n);

}  // namespace kperec
