#include "temode/lifshitz.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "kernel_forms.h"
#include "temode/kernels.h"

namespace temode {

using detail::Cx;

double thermal_g(double omega, double temperature) {
  if (!(omega > 0.0) || !(temperature > 0.0))
    throw std::invalid_argument("thermal_g: omega and T must be positive");
  const double x = hbar * omega / (k_boltzmann * temperature);
  if (x > 700.0) return 0.0;
  return 1.0 / std::expm1(x);
}

std::complex<double> lifshitz_s(std::complex<double> eps,
                                std::complex<double> p) {
  return detail::sqrt_upper(eps - 1.0 + p * p);
}

std::complex<double> te_ratio_dielectric(std::complex<double> s,
                                         std::complex<double> p) {
  if (s == p)
    throw std::invalid_argument("te_ratio_dielectric: s == p (vacuum plate)");
  const Cx r = (s + p) / (s - p);
  return r * r;
}

std::complex<double> surface_alpha(double omega, const ConductorParams& cond,
                                   double phase_sign) {
  if (!(omega > 0.0))
    throw std::invalid_argument("surface_alpha: omega must be positive");
  const double amp = std::sqrt(omega / (8.0 * std::numbers::pi * cond.sigma)) *
                     (omega / c_light);
  return {phase_sign * amp, phase_sign * amp};
}

bool surface_alpha_in_band(double omega, const ConductorParams& cond) {
  return omega < cond.sigma / 10.0;
}

std::complex<double> te_ratio_impedance(std::complex<double> alpha,
                                        double omega, std::complex<double> p) {
  const Cx ikp = Cx(0.0, 1.0) * (omega / c_light) * p;
  if (alpha == ikp)
    throw std::invalid_argument("te_ratio_impedance: alpha == i w p / c (pole)");
  const Cx r = (alpha + ikp) / (alpha - ikp);
  return r * r;
}

std::complex<double> g_te(std::complex<double> K, std::complex<double> alpha,
                          double separation_a) {
  if (alpha == K)
    throw std::invalid_argument("g_te: alpha == K (pole)");
  const Cx r = (alpha + K) / (alpha - K);
  return r * r * std::exp(2.0 * K * separation_a) - 1.0;
}

std::complex<double> spectral_integrand(const BoundaryModel& model,
                                        double omega, const ContourPoint& pt,
                                        const PlateGeometry& geom) {
  const double theta = 2.0 * omega * geom.separation_a / c_light;
  const double x = pt.coordinate;
  const Cx p2 = pt.contour == Contour::C1 ? Cx(x * x, 0.0) : Cx(-x * x, 0.0);

  struct Visitor {
    double omega, theta, x;
    Contour contour;
    const PlateGeometry& geom;

    Cx operator()(const PerfectConductor&) const {
      if (contour == Contour::C1) return std::conj(detail::cis_m1(theta * x));
      return {std::expm1(theta * x), 0.0};
    }
    Cx operator()(const Dielectric& d) const {
      const Cx eps = drude_like_eps(omega, d.params);
      const Cx p = contour == Contour::C1 ? Cx(x, 0.0) : Cx(0.0, x);
      const Cx s = lifshitz_s(eps, p);
      if (s == p)
        throw std::invalid_argument("spectral_integrand: s == p (vacuum plate)");
      if (contour == Contour::C1) return detail::d1_dielectric(eps, theta, x);
      return detail::d2_dielectric(eps, x, theta * x);
    }
    Cx operator()(const SurfaceImpedance& si) const {
      const Cx alpha = surface_alpha(omega, si.cond, si.phase_sign);
      if (contour == Contour::C1) {
        const double kappa = omega * x / c_light;
        if (alpha == Cx(0.0, kappa))
          throw std::invalid_argument("spectral_integrand: alpha == K (pole)");
        return detail::d1_impedance(alpha, kappa, theta * x);
      }
      const double k = omega * x / c_light;
      if (alpha == Cx(-k, 0.0))
        throw std::invalid_argument("spectral_integrand: alpha == K (pole)");
      return detail::d2_impedance(alpha, k, theta * x);
    }
  };

  const Cx d = std::visit(Visitor{omega, theta, x, pt.contour, geom}, model);
  return p2 / d;
}

SpectralSample spectral_density(const BoundaryModel& model, double omega,
                                const PlateGeometry& geom,
                                const QuadratureSettings& quad) {
  if (!(omega > 0.0))
    throw std::invalid_argument("spectral_density: omega must be positive");
  const double g = thermal_g(omega, geom.temperature_T);
  const double w3g = omega * omega * omega * g;
  if (w3g == 0.0) return {0.0, 0.0};  // thermal occupation underflowed

  const double theta = 2.0 * omega * geom.separation_a / c_light;
  const double u_max = std::max(20.0, -std::log(quad.c2_cutoff_eps));

  struct Visitor {
    double omega, theta, u_max, w3g;
    const PlateGeometry& geom;
    const QuadratureSettings& quad;

    SpectralSample operator()(const PerfectConductor&) const {
      // Re(1/(e^{-i phi} - 1)) = -1/2 identically, so the C1 integral is
      // exactly -1/6; the C2 bracket is real and contributes nothing.
      return {w3g / 6.0, 0.0};
    }
    SpectralSample operator()(const Dielectric& d) const {
      const Cx eps = drude_like_eps(omega, d.params);
      BatchFn f1 = [&](std::span<const double> xs, std::span<double> out) {
        kernels::c1_dielectric(eps, theta, xs, out);
      };
      const IntegrationResult r1 = integrate_finite(f1, 0.0, 1.0, quad, theta);
      BatchFn f2 = [&](std::span<const double> xs, std::span<double> out) {
        kernels::c2_dielectric(eps, theta, xs, out);
      };
      const IntegrationResult r2 = integrate_finite(f2, 0.0, u_max, quad);
      return {-w3g * r1.value, w3g * r2.value / (theta * theta * theta)};
    }
    SpectralSample operator()(const SurfaceImpedance& si) const {
      const Cx alpha = surface_alpha(omega, si.cond, si.phase_sign);
      BatchFn f1 = [&](std::span<const double> xs, std::span<double> out) {
        kernels::c1_impedance(alpha, omega / c_light, geom.separation_a, xs, out);
      };
      const IntegrationResult r1 = integrate_finite(f1, 0.0, 1.0, quad, theta);
      BatchFn f2 = [&](std::span<const double> xs, std::span<double> out) {
        kernels::c2_impedance(alpha, geom.separation_a, xs, out);
      };
      const IntegrationResult r2 = integrate_finite(f2, 0.0, u_max, quad);
      return {-w3g * r1.value, w3g * r2.value / (theta * theta * theta)};
    }
  };

  return std::visit(Visitor{omega, theta, u_max, w3g, geom, quad}, model);
}

}  // namespace temode
