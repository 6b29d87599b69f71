#pragma once

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "temode/constants.h"
#include "temode/quadrature.h"

namespace temode {

struct DrudeLikeParams {
  double amp1 = 1.48e4;    // eps1 amplitude, dimensionless
  double amp2 = 1.8e18;    // eps2 amplitude, s^-1
  double omega0 = 3.3e13;  // s^-1
};

// eps1 amplitude implied by the eps2 fit through the Kramers-Kronig relation.
// The printed amp1 default is 3.7x smaller than this; kk_eps1 measures the gap.
inline constexpr double kk_closure_amp1(const DrudeLikeParams& p) {
  return p.amp2 / p.omega0;
}

// eps1 = -amp1/(1+(w/w0)^2), eps2 = amp2/(w(1+(w/w0)^2))
std::complex<double> drude_like_eps(double omega, const DrudeLikeParams& p);

struct ConductorParams {
  double sigma = 3e17;  // s^-1
  double mu = 1.0;
};

// Alternate conductivity preset implied by the low-frequency limit of the
// dielectric fit (eps2 -> 4 pi sigma / omega).
inline constexpr double sigma_from_eps2_fit(const DrudeLikeParams& p) {
  return p.amp2 / (4.0 * 3.14159265358979323846);
}

class TabulatedEps2 {
 public:
  // strictly ascending omega, at least 4 samples, eps2 >= 0
  TabulatedEps2(std::vector<double> omega, std::vector<double> eps2);

  // two-column CSV, header "omega,eps2", '#' comments allowed; errors name
  // the offending line
  static TabulatedEps2 load_csv(const std::string& path);

  double omega_min() const { return omega_.front(); }
  double omega_max() const { return omega_.back(); }
  const std::vector<double>& omega() const { return omega_; }
  const std::vector<double>& eps2() const { return eps2_; }

  // linear interpolation; x must lie within [omega_min, omega_max]
  double operator()(double x) const;

 private:
  std::vector<double> omega_, eps2_;
};

// 1 + (2/pi) PV int_0^inf x eps2(x)/(x^2 - w^2) dx with eps2 interpolated
// inside the table, extended below by a 1/x law and above by a 1/x^3 law
// (both anchored at the table ends). Everything is integrated in closed
// form, cell by cell, so the only approximation left is the interpolant
// itself. omega must lie strictly inside the table support.
double kk_eps1(const TabulatedEps2& table, double omega,
               bool extrapolate_tails = true);

// c / sqrt(2 pi mu sigma omega)
double skin_depth(double omega, const ConductorParams& cond);

struct ValidityReport {
  std::vector<std::pair<double, double>> skin_depth_curve;  // (omega, delta cm)
  double mean_free_path = 3e-6;                             // cm
  double dielectric_model_fails_above = 0.0;  // smallest grid w with delta <= mfp
  double boyer_limit = 4e14;                  // s^-1, fixed evaluated limit
  double thick_film_above = 0.0;              // smallest grid w with delta < d
};

ValidityReport validity_report(const ConductorParams& cond,
                               const PlateGeometry& geom, double omega_lo,
                               double omega_hi, double mean_free_path = 3e-6);

}  // namespace temode
