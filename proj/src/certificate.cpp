#include "kperec/certificate.hpp"

#include <sstream>

#include "kperec/localdata.hpp"

namespace kperec {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass:
      return "pass";
    case Verdict::Torsion:
      return "torsion";
    case Verdict::Fail:
      return "fail";
  }
  return "fail";
}

GsCertificate lehmer_certificate(const TowerPoint& P, const Rational& eps, const std::string& curve_id,
                                 const HeightOptions& opts) {
  const WeierstrassCurve& E = P.base();
  const std::int64_t deg = minimal_discriminant_degree(E);
  GsCertificate cert{curve_id, deg, Rational(deg) / Rational(BigInt(10000000000000LL)), P, {}, Verdict::Fail, {}, {}};
  if (P.is_infinity()) {
    cert.verdict = Verdict::Torsion;
    cert.height.torsion = true;
    return cert;
  }
  if (eps <= 0) throw std::invalid_argument("epsilon must be positive");
  if (cert.floor > 0 && cert.floor < 2 * eps)
    throw EpsTooCoarseError("epsilon " + rational_to_string(eps) + " cannot separate the floor " +
                            rational_to_string(cert.floor) + "; use epsilon below half the floor");
  cert.height = canonical_height(P, eps, opts);
  if (cert.floor > 0) cert.ratio = cert.height.value / cert.floor;
  if (cert.height.value <= eps) {
    // the representative lies in E^{(p^n)}(K), whose torsion is that of E(K^{1/p^n})
    const WeierstrassCurve& twist = P.twist();
    if (torsion_subgroup(twist).contains(TowerPoint(twist, 0, P.rep()))) {
      cert.verdict = Verdict::Torsion;
      return cert;
    }
  }
  if (cert.height.value - cert.height.error >= cert.floor) {
    cert.verdict = Verdict::Pass;
    return cert;
  }
  std::ostringstream os;
  os << "Goldfeld-Szpiro floor violated on " << E.to_string() << " at " << P.to_string() << ": value "
     << rational_to_string(cert.height.value) << ", error " << rational_to_string(cert.height.error) << ", floor "
     << rational_to_string(cert.floor) << ", deg disc " << deg << ", doublings " << cert.height.doublings;
  cert.diagnostics = os.str();
  return cert;
}

}  // namespace kperec
