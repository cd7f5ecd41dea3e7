#pragma once

// Factorization of polynomials over F_p: squarefree decomposition,
// distinct-degree and equal-degree splitting.

#include <cstdint>
#include <vector>

#include "kperec/poly.hpp"

namespace kperec {

struct Factor {
  Poly poly;  // monic irreducible
  std::size_t exponent;
};

struct Factorization {
  std::uint32_t prime;
  Coeff leading;
  std::vector<Factor> factors;  // sorted by Poly ordering

  Poly product() const;
};

/// Complete factorization; throws std::domain_error on the zero polynomial.
Factorization poly_factor(const Poly& f);

bool is_irreducible(const Poly& f);

/// Monic squarefree factors g_i with f = lc * prod g_i^i.
std::vector<std::pair<Poly, std::size_t>> squarefree_decomposition(const Poly& f);

/// All monic irreducible polynomials of degree d in increasing Poly order.
/// Enumerates p^d candidates, so only meant for small d.
std::vector<Poly> monic_irreducibles(std::uint32_t p, std::size_t d);

}  // namespace kperec
