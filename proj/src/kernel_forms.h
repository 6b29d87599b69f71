#pragma once

#include <cmath>
#include <complex>

// Shared scalar building blocks for the contour denominators. Everything here
// returns D = R*E - 1 assembled as (R-1)*E + (E-1): near p = 0 both factors
// approach 1 and the naive product would cancel away all the signal.

namespace temode::detail {

using Cx = std::complex<double>;

// square root of z on the branch Im >= 0; ties (Im == 0) keep Re >= 0
inline Cx sqrt_upper(Cx z) {
  Cx s = std::sqrt(z);
  if (s.imag() < 0.0) s = -s;
  return s;
}

// e^{i phi} - 1 without cancellation at small phi
inline Cx cis_m1(double phi) {
  const double sh = std::sin(0.5 * phi);
  return {-2.0 * sh * sh, std::sin(phi)};
}

// dielectric C1: R = ((s+p)/(s-p))^2, E = e^{-i theta p}
inline Cx d1_dielectric(Cx eps, double theta, double p) {
  const Cx s = sqrt_upper(eps - 1.0 + p * p);
  const Cx d = s - p;
  const Cx rm1 = 4.0 * p * s / (d * d);
  const Cx em1 = std::conj(cis_m1(theta * p));
  return rm1 * (1.0 + em1) + em1;
}

// dielectric C2 at p = iq, u = theta q: E = e^{+u} grows, 1/D decays
inline Cx d2_dielectric(Cx eps, double q, double u) {
  const Cx iq(0.0, q);
  const Cx s = sqrt_upper(eps - 1.0 - q * q);
  const Cx d = s - iq;
  const Cx rm1 = 4.0 * iq * s / (d * d);
  const double em1 = std::expm1(u);
  return rm1 * (1.0 + em1) + em1;
}

// impedance C1: the eigenvalue bracket at K = i kappa, kappa = omega p / c,
// phi = 2 kappa a; R = ((alpha+K)/(alpha-K))^2, E = e^{2Ka} = e^{i phi}
inline Cx d1_impedance(Cx alpha, double kappa, double phi) {
  const Cx iK(0.0, kappa);
  const Cx d = alpha - iK;
  const Cx rm1 = 4.0 * alpha * iK / (d * d);
  const Cx em1 = cis_m1(phi);
  return rm1 * (1.0 + em1) + em1;
}

// impedance C2: K = -k real with k = u/(2a); E = e^{-u} decays and D -> 0
// linearly at u -> 0 (the integrand vanishes there, no pole)
inline Cx d2_impedance(Cx alpha, double k, double u) {
  const Cx d = alpha + k;
  const Cx rm1 = -4.0 * alpha * k / (d * d);
  const double em1 = std::expm1(-u);
  return rm1 * (1.0 + em1) + em1;
}

}  // namespace temode::detail
