#include <experimental/simd>

#include "temode/kernels.h"

// Four-lane implementations of the batch kernels. The complex arithmetic is
// spelled out on (re, im) lane pairs; the branch rule of the square root is
// applied with a mask instead of a branch. Lane order of operations differs
// from the scalar path, so results agree to rounding, not bitwise.

namespace stdx = std::experimental;

namespace temode::kernels::avx2 {

namespace {

using V = stdx::native_simd<double>;
inline constexpr std::size_t W = V::size();

struct CV {
  V re, im;
};

// sqrt on the Im >= 0 branch: principal lane sqrt, then flip negative-Im lanes
inline CV csqrt_upper(V x, V y) {
  const V r = stdx::sqrt(x * x + y * y);
  V sr = stdx::sqrt(stdx::max(V(0.0), 0.5 * (r + x)));
  V si = stdx::copysign(stdx::sqrt(stdx::max(V(0.0), 0.5 * (r - x))), y);
  const auto flip = si < 0.0;
  stdx::where(flip, sr) = -sr;
  stdx::where(flip, si) = -si;
  return {sr, si};
}

// n / d for lane complexes, via conj(d)/|d|^2
inline CV cdiv(CV n, CV d) {
  const V den = d.re * d.re + d.im * d.im;
  return {(n.re * d.re + n.im * d.im) / den,
          (n.im * d.re - n.re * d.im) / den};
}

inline CV csqr(CV z) { return {z.re * z.re - z.im * z.im, 2.0 * z.re * z.im}; }

}  // namespace

void c1_dielectric(std::complex<double> eps, double theta,
                   std::span<const double> p, std::span<double> out) {
  const double er = eps.real() - 1.0, ei = eps.imag();
  std::size_t i = 0;
  for (; i + W <= p.size(); i += W) {
    V pv;
    pv.copy_from(&p[i], stdx::element_aligned);
    const CV s = csqrt_upper(er + pv * pv, V(ei));
    const CV rm1 = cdiv({4.0 * pv * s.re, 4.0 * pv * s.im},
                        csqr({s.re - pv, s.im}));
    const V phi = theta * pv;
    const V sh = stdx::sin(0.5 * phi);
    const V em1r = -2.0 * sh * sh, em1i = -stdx::sin(phi);
    const V Er = 1.0 + em1r;
    const V Dr = rm1.re * Er - rm1.im * em1i + em1r;
    const V Di = rm1.re * em1i + rm1.im * Er + em1i;
    V res = pv * pv * Dr / (Dr * Dr + Di * Di);
    stdx::where(pv == 0.0, res) = 0.0;
    res.copy_to(&out[i], stdx::element_aligned);
  }
  if (i < p.size()) scalar::c1_dielectric(eps, theta, p.subspan(i), out.subspan(i));
}

void c2_dielectric(std::complex<double> eps, double theta,
                   std::span<const double> u, std::span<double> out) {
  const double er = eps.real() - 1.0, ei = eps.imag();
  std::size_t i = 0;
  for (; i + W <= u.size(); i += W) {
    V uv;
    uv.copy_from(&u[i], stdx::element_aligned);
    const V qv = uv / theta;
    const CV s = csqrt_upper(er - qv * qv, V(ei));
    const CV rm1 = cdiv({-4.0 * qv * s.im, 4.0 * qv * s.re},
                        csqr({s.re, s.im - qv}));
    const V em1 = stdx::expm1(uv);
    const V E = 1.0 + em1;
    const V Dr = rm1.re * E + em1;
    const V Di = rm1.im * E;
    V res = -uv * uv * Di / (Dr * Dr + Di * Di);
    stdx::where(uv == 0.0, res) = 0.0;
    res.copy_to(&out[i], stdx::element_aligned);
  }
  if (i < u.size()) scalar::c2_dielectric(eps, theta, u.subspan(i), out.subspan(i));
}

void c1_impedance(std::complex<double> alpha, double omega_over_c,
                  double separation_a, std::span<const double> p,
                  std::span<double> out) {
  const double ar = alpha.real(), ai = alpha.imag();
  std::size_t i = 0;
  for (; i + W <= p.size(); i += W) {
    V pv;
    pv.copy_from(&p[i], stdx::element_aligned);
    const V kappa = omega_over_c * pv;
    const CV rm1 = cdiv({-4.0 * kappa * ai, 4.0 * kappa * ar},
                        csqr({V(ar), ai - kappa}));
    const V phi = 2.0 * separation_a * kappa;
    const V sh = stdx::sin(0.5 * phi);
    const V em1r = -2.0 * sh * sh, em1i = stdx::sin(phi);
    const V Er = 1.0 + em1r;
    const V Dr = rm1.re * Er - rm1.im * em1i + em1r;
    const V Di = rm1.re * em1i + rm1.im * Er + em1i;
    V res = pv * pv * Dr / (Dr * Dr + Di * Di);
    stdx::where(pv == 0.0, res) = 0.0;
    res.copy_to(&out[i], stdx::element_aligned);
  }
  if (i < p.size())
    scalar::c1_impedance(alpha, omega_over_c, separation_a, p.subspan(i),
                         out.subspan(i));
}

void c2_impedance(std::complex<double> alpha, double separation_a,
                  std::span<const double> u, std::span<double> out) {
  const double ar = alpha.real(), ai = alpha.imag();
  std::size_t i = 0;
  for (; i + W <= u.size(); i += W) {
    V uv;
    uv.copy_from(&u[i], stdx::element_aligned);
    const V kv = uv / (2.0 * separation_a);
    const CV rm1 =
        cdiv({-4.0 * kv * ar, -4.0 * kv * ai}, csqr({ar + kv, V(ai)}));
    const V em1 = stdx::expm1(-uv);
    const V E = 1.0 + em1;
    const V Dr = rm1.re * E + em1;
    const V Di = rm1.im * E;
    V res = -uv * uv * Di / (Dr * Dr + Di * Di);
    stdx::where(uv == 0.0, res) = 0.0;
    res.copy_to(&out[i], stdx::element_aligned);
  }
  if (i < u.size())
    scalar::c2_impedance(alpha, separation_a, u.subspan(i), out.subspan(i));
}

}  // namespace temode::kernels::avx2
