#pragma once

#include <complex>
#include <span>

namespace temode::kernels {

// Batched contour integrands at fixed omega, the hot loop under the adaptive
// quadrature. C1 batches take the real momentum parameter p and return
// Re(p^2 / D); C2 batches take the scaled coordinate u = 2*omega*a*q/c and
// return u^2 * Im(1/D). D is the mode denominator R*E - 1, assembled from
// R - 1 and E - 1 so that nothing cancels when both factors sit near 1.
//
// The public entry points route to an AVX2 implementation when the build
// carries one and the cpu agrees; kernels::scalar always holds the reference.

void c1_dielectric(std::complex<double> eps, double theta,
                   std::span<const double> p, std::span<double> out);
void c2_dielectric(std::complex<double> eps, double theta,
                   std::span<const double> u, std::span<double> out);
void c1_impedance(std::complex<double> alpha, double omega_over_c,
                  double separation_a, std::span<const double> p,
                  std::span<double> out);
void c2_impedance(std::complex<double> alpha, double separation_a,
                  std::span<const double> u, std::span<double> out);

// true when the vectorized path is compiled in and selected at runtime
bool simd_active();

namespace scalar {
void c1_dielectric(std::complex<double> eps, double theta,
                   std::span<const double> p, std::span<double> out);
void c2_dielectric(std::complex<double> eps, double theta,
                   std::span<const double> u, std::span<double> out);
void c1_impedance(std::complex<double> alpha, double omega_over_c,
                  double separation_a, std::span<const double> p,
                  std::span<double> out);
void c2_impedance(std::complex<double> alpha, double separation_a,
                  std::span<const double> u, std::span<double> out);
}  // namespace scalar

}  // namespace temode::kernels
