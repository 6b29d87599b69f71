#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace temode {

struct QuadratureSettings {
  double rel_tol = 1e-8;       // inner integrals; the outer omega grid uses 1e-4
  double abs_tol = 1e-30;      // floor, in integrand units
  int max_subdivisions = 2000; // splits beyond the initial panelling
  double c2_cutoff_eps = 1e-16;
  int outer_points_per_decade = 40;
};

struct IntegrationResult {
  double value = 0.0;
  double error = 0.0;
};

// Integrands are evaluated a panel at a time (15 nodes per call, more for the
// outer grid), so vectorized kernels can be plugged in without an adapter.
using BatchFn = std::function<void(std::span<const double>, std::span<double>)>;

// Wraps a pointwise function for callers that have nothing to batch.
BatchFn batch_of(std::function<double(double)> f);

class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(const std::string& what, IntegrationResult best)
      : std::runtime_error(what), best_estimate(best) {}
  IntegrationResult best_estimate;
};

// Adaptive Gauss7/Kronrod15 on [lo, hi]. phase_span pre-panels oscillatory
// integrands: initial panel count = max(16, ceil(phase_span/pi)). Worst panel
// is split first; the final sum runs in ascending-interval order, so results
// are bit-stable across runs. Throws NonConvergence when the split budget is
// exhausted with the tolerance still unmet.
IntegrationResult integrate_finite(const BatchFn& f, double lo, double hi,
                                   const QuadratureSettings& s,
                                   double phase_span = 0.0);

// For |f(q)| <~ M exp(-decay_rate q): integrates [0, q_max] with
// q_max = -ln(c2_cutoff_eps)/decay_rate and adds |f(q_max)|/decay_rate
// to the error as the tail bound.
IntegrationResult integrate_semi_infinite(const BatchFn& f, double decay_rate,
                                          const QuadratureSettings& s);

// PV integral of f(x)/(x - pole) over [lo, hi], pole strictly inside. The
// singularity is removed analytically: a symmetric window of half-width
// w = min(pole-lo, hi-pole)/2 is integrated as (f(pole+u)-f(pole-u))/u,
// the remainder by ordinary adaptive quadrature.
IntegrationResult integrate_pv(const BatchFn& f, double pole, double lo,
                               double hi, const QuadratureSettings& s);

// Uniform grid in ln(omega), endpoints included; the panel count is rounded
// up to an even number so that every point of the half-density grid lands on
// the full grid.
std::vector<double> log_grid(double lo, double hi, int points_per_decade);

// Composite trapezoid in ln(omega) over samples taken on log_grid(), with one
// Richardson step against the half-density grid. Integrates f d(omega), not
// f d(ln omega); the Jacobian is applied internally. This is the same rule
// integrate_log_grid uses, exposed so stored spectra can be re-integrated.
IntegrationResult integrate_log_samples(std::span<const double> omega,
                                        std::span<const double> f);

IntegrationResult integrate_log_grid(const BatchFn& f, double lo, double hi,
                                     const QuadratureSettings& s);

}  // namespace temode
