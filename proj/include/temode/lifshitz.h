#pragma once

#include <complex>
#include <variant>

#include "temode/constants.h"
#include "temode/optical.h"
#include "temode/quadrature.h"

namespace temode {

// Bose occupation 1/(e^{hbar w / kT} - 1); exact zero past the exp-overflow
// point, which is below every tolerance used downstream.
double thermal_g(double omega, double temperature);

// sqrt(eps - 1 + p^2) on the branch Im(s) >= 0 (decay into the metal for the
// e^{-iwt} convention); ties Im(s) = 0 resolve toward Re(s) >= 0.
std::complex<double> lifshitz_s(std::complex<double> eps,
                                std::complex<double> p);

// ((s+p)/(s-p))^2; throws when s == p exactly (vacuum plate, no reflection)
std::complex<double> te_ratio_dielectric(std::complex<double> s,
                                         std::complex<double> p);

// Surface-impedance boundary coefficient (1+i)*sqrt(w/(8 pi sigma))*(w/c),
// in cm^-1. phase_sign = -1 selects the mirrored root of the same square.
std::complex<double> surface_alpha(double omega, const ConductorParams& cond,
                                   double phase_sign = 1.0);

// the impedance description neglects displacement current; usable band w << sigma
bool surface_alpha_in_band(double omega, const ConductorParams& cond);

// ((alpha + iwp/c)/(alpha - iwp/c))^2; throws on the exact pole
std::complex<double> te_ratio_impedance(std::complex<double> alpha,
                                        double omega, std::complex<double> p);

// mode function ((alpha+K)/(alpha-K))^2 e^{2Ka} - 1; throws when alpha == K
std::complex<double> g_te(std::complex<double> K, std::complex<double> alpha,
                          double separation_a);

struct PerfectConductor {};
struct Dielectric {
  DrudeLikeParams params{};
};
struct SurfaceImpedance {
  ConductorParams cond{};
  double phase_sign = 1.0;
};
using BoundaryModel = std::variant<PerfectConductor, Dielectric, SurfaceImpedance>;

enum class Contour { C1, C2 };

// C1: p = coordinate (real, 0..1); C2: p = i * coordinate
struct ContourPoint {
  Contour contour = Contour::C1;
  double coordinate = 0.0;
};

// p^2 / D at one contour point. D is R e^{-2ip w a/c} - 1 with R = 1 for the
// perfect conductor and the dielectric ratio for the drude-like model; the
// impedance model uses the eigenvalue bracket p^2 / g_te(iwp/c, alpha, a),
// whose exponent carries the opposite sign under the same substitution.
std::complex<double> spectral_integrand(const BoundaryModel& model,
                                        double omega, const ContourPoint& pt,
                                        const PlateGeometry& geom);

struct SpectralSample {
  double f_c1 = 0.0;  // real-angle contour contribution, prefactor-free
  double f_c2 = 0.0;  // imaginary-angle contour contribution
};

// Frequency spectrum of the TE correction at one omega:
//   f_c1 = -w^3 g(w) * Int_0^1 Re(p^2/D) dp   (sign calibrated so the
//          perfect-conductor C1 spectrum is attractive, i.e. +w^3 g/6)
//   f_c2 = +w^3 g(w) * Int_0^qmax q^2 Im(1/D) dq, qmax = max(20, -ln eps_cut)/theta
// Throws NonConvergence (with the best estimate) if the quadrature budget runs out.
SpectralSample spectral_density(const BoundaryModel& model, double omega,
                                const PlateGeometry& geom,
                                const QuadratureSettings& quad = {});

}  // namespace temode
