#include "temode/kernels.h"

#include "kernel_forms.h"

namespace temode::kernels {

namespace scalar {

void c1_dielectric(std::complex<double> eps, double theta,
                   std::span<const double> p, std::span<double> out) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double pi_ = p[i];
    if (pi_ == 0.0) {
      out[i] = 0.0;  // removable: p^2/D ~ p
      continue;
    }
    const detail::Cx d = detail::d1_dielectric(eps, theta, pi_);
    out[i] = pi_ * pi_ * d.real() / std::norm(d);
  }
}

void c2_dielectric(std::complex<double> eps, double theta,
                   std::span<const double> u, std::span<double> out) {
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double ui = u[i];
    if (ui == 0.0) {
      out[i] = 0.0;
      continue;
    }
    const detail::Cx d = detail::d2_dielectric(eps, ui / theta, ui);
    out[i] = -ui * ui * d.imag() / std::norm(d);
  }
}

void c1_impedance(std::complex<double> alpha, double omega_over_c,
                  double separation_a, std::span<const double> p,
                  std::span<double> out) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double pi_ = p[i];
    if (pi_ == 0.0) {
      out[i] = 0.0;
      continue;
    }
    const double kappa = omega_over_c * pi_;
    const detail::Cx d =
        detail::d1_impedance(alpha, kappa, 2.0 * kappa * separation_a);
    out[i] = pi_ * pi_ * d.real() / std::norm(d);
  }
}

void c2_impedance(std::complex<double> alpha, double separation_a,
                  std::span<const double> u, std::span<double> out) {
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double ui = u[i];
    if (ui == 0.0) {
      out[i] = 0.0;
      continue;
    }
    const detail::Cx d =
        detail::d2_impedance(alpha, ui / (2.0 * separation_a), ui);
    out[i] = -ui * ui * d.imag() / std::norm(d);
  }
}

}  // namespace scalar

#ifdef TEMODE_AVX2_TU
namespace avx2 {
void c1_dielectric(std::complex<double> eps, double theta,
                   std::span<const double> p, std::span<double> out);
void c2_dielectric(std::complex<double> eps, double theta,
                   std::span<const double> u, std::span<double> out);
void c1_impedance(std::complex<double> alpha, double omega_over_c,
                  double separation_a, std::span<const double> p,
                  std::span<double> out);
void c2_impedance(std::complex<double> alpha, double separation_a,
                  std::span<const double> u, std::span<double> out);
}  // namespace avx2

bool simd_active() {
  static const bool v = __builtin_cpu_supports("avx2");
  return v;
}
#else
bool simd_active() { return false; }
#endif

void c1_dielectric(std::complex<double> eps, double theta,
                   std::span<const double> p, std::span<double> out) {
#ifdef TEMODE_AVX2_TU
  if (simd_active()) return avx2::c1_dielectric(eps, theta, p, out);
#endif
  scalar::c1_dielectric(eps, theta, p, out);
}

void c2_dielectric(std::complex<double> eps, double theta,
                   std::span<const double> u, std::span<double> out) {
#ifdef TEMODE_AVX2_TU
  if (simd_active()) return avx2::c2_dielectric(eps, theta, u, out);
#endif
  scalar::c2_dielectric(eps, theta, u, out);
}

void c1_impedance(std::complex<double> alpha, double omega_over_c,
                  double separation_a, std::span<const double> p,
                  std::span<double> out) {
#ifdef TEMODE_AVX2_TU
  if (simd_active())
    return avx2::c1_impedance(alpha, omega_over_c, separation_a, p, out);
#endif
  scalar::c1_impedance(alpha, omega_over_c, separation_a, p, out);
}

void c2_impedance(std::complex<double> alpha, double separation_a,
                  std::span<const double> u, std::span<double> out) {
#ifdef TEMODE_AVX2_TU
  if (simd_active()) return avx2::c2_impedance(alpha, separation_a, u, out);
#endif
  scalar::c2_impedance(alpha, separation_a, u, out);
}

}  // namespace temode::kernels
