#include "temode/quadrature.h"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numbers>
#include <queue>

namespace temode {

namespace {

// Gauss 7 / Kronrod 15 pair (QUADPACK dqk15 nodes and weights).
constexpr double xgk[8] = {
    0.9914553711208126392068547, 0.9491079123427585245261897,
    0.8648644233597690727897128, 0.7415311855993944398638648,
    0.5860872354676911302941448, 0.4058451513773971669066064,
    0.2077849550078984676006894, 0.0};
constexpr double wgk[8] = {
    0.0229353220105292249637320, 0.0630920926299785532907007,
    0.1047900103222501838398763, 0.1406532597155259187451896,
    0.1690047266392679028265834, 0.1903505780647854099132564,
    0.2044329400752988924141620, 0.2094821410847278280129992};
constexpr double wg[4] = {
    0.1294849661688696932706114, 0.2797053914892766679014678,
    0.3818300505051189449503698, 0.4179591836734693877551020};

struct Panel {
  double lo, hi, value, error;
};

Panel eval_panel(const BatchFn& f, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double hw = 0.5 * (hi - lo);
  double xs[15], ys[15];
  for (int j = 0; j < 7; ++j) xs[j] = center - hw * xgk[j];
  xs[7] = center;
  for (int j = 0; j < 7; ++j) xs[8 + j] = center + hw * xgk[6 - j];
  f(std::span<const double>(xs, 15), std::span<double>(ys, 15));

  const double fc = ys[7];
  double resk = wgk[7] * fc;
  double resg = wg[3] * fc;
  double resabs = wgk[7] * std::abs(fc);
  for (int j = 0; j < 7; ++j) {
    resk += wgk[j] * (ys[j] + ys[14 - j]);
    resabs += wgk[j] * (std::abs(ys[j]) + std::abs(ys[14 - j]));
  }
  for (int j = 0; j < 3; ++j) {
    const int k = 2 * j + 1;
    resg += wg[j] * (ys[k] + ys[14 - k]);
  }
  const double reskh = 0.5 * resk;
  double resasc = wgk[7] * std::abs(fc - reskh);
  for (int j = 0; j < 7; ++j)
    resasc +=
        wgk[j] * (std::abs(ys[j] - reskh) + std::abs(ys[14 - j] - reskh));

  const double ahw = std::abs(hw);
  double err = std::abs((resk - resg) * hw);
  resabs *= ahw;
  resasc *= ahw;
  if (resasc != 0.0 && err != 0.0)
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  const double eps50 = 50.0 * DBL_EPSILON;
  if (resabs > DBL_MIN / eps50) err = std::max(eps50 * resabs, err);
  return {lo, hi, resk * hw, err};
}

void check_settings(const QuadratureSettings& s) {
  if (!(s.rel_tol > 0.0) || !(s.abs_tol > 0.0))
    throw std::invalid_argument("quadrature tolerances must be positive");
  if (s.max_subdivisions < 16)
    throw std::invalid_argument("max_subdivisions must be at least 16");
  if (!(s.c2_cutoff_eps > 0.0) || !(s.c2_cutoff_eps < 1.0))
    throw std::invalid_argument("c2_cutoff_eps must lie in (0, 1)");
  if (s.outer_points_per_decade < 1)
    throw std::invalid_argument("outer_points_per_decade must be at least 1");
}

IntegrationResult accumulate_sorted(std::vector<Panel>& panels) {
  std::sort(panels.begin(), panels.end(),
            [](const Panel& a, const Panel& b) { return a.lo < b.lo; });
  IntegrationResult r;
  for (const Panel& p : panels) {
    r.value += p.value;
    r.error += p.error;
  }
  return r;
}

}  // namespace

BatchFn batch_of(std::function<double(double)> f) {
  return [f = std::move(f)](std::span<const double> xs, std::span<double> ys) {
    for (std::size_t i = 0; i < xs.size(); ++i) ys[i] = f(xs[i]);
  };
}

IntegrationResult integrate_finite(const BatchFn& f, double lo, double hi,
                                   const QuadratureSettings& s,
                                   double phase_span) {
  check_settings(s);
  if (!(lo < hi)) throw std::invalid_argument("integrate_finite: lo < hi required");

  int n0 = 16;
  if (phase_span > 0.0) {
    const double want = std::ceil(phase_span / std::numbers::pi);
    n0 = std::max(n0, static_cast<int>(std::min(want, 1e6)));
  }

  std::vector<Panel> panels;
  panels.reserve(static_cast<std::size_t>(n0) + 64);
  // heap entries: (panel error, panel id); worst error first, lower id on ties
  using Entry = std::pair<double, int>;
  auto cmp = [](const Entry& a, const Entry& b) {
    if (a.first != b.first) return a.first < b.first;
    return a.second > b.second;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(cmp)> heap(cmp);

  double total_v = 0.0, total_e = 0.0;
  const double width = hi - lo;
  for (int i = 0; i < n0; ++i) {
    const double a = (i == 0) ? lo : lo + width * i / n0;
    const double b = (i == n0 - 1) ? hi : lo + width * (i + 1) / n0;
    panels.push_back(eval_panel(f, a, b));
    total_v += panels.back().value;
    total_e += panels.back().error;
    heap.push({panels.back().error, i});
  }

  int splits = 0;
  while (true) {
    const double tol = std::max(s.abs_tol, s.rel_tol * std::abs(total_v));
    if (total_e <= tol) break;
    if (heap.empty() || splits >= s.max_subdivisions) {
      IntegrationResult best = accumulate_sorted(panels);
      if (best.error <= std::max(s.abs_tol, s.rel_tol * std::abs(best.value)))
        return best;
      throw NonConvergence("integrate_finite: subdivision budget exhausted", best);
    }
    const int idx = heap.top().second;
    heap.pop();
    const Panel worst = panels[idx];
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(worst.lo < mid && mid < worst.hi)) continue;  // panel at ulp width
    const Panel left = eval_panel(f, worst.lo, mid);
    const Panel right = eval_panel(f, mid, worst.hi);
    total_v += left.value + right.value - worst.value;
    total_e += left.error + right.error - worst.error;
    panels[idx] = left;
    heap.push({left.error, idx});
    panels.push_back(right);
    heap.push({right.error, static_cast<int>(panels.size()) - 1});
    ++splits;
  }
  return accumulate_sorted(panels);
}

IntegrationResult integrate_semi_infinite(const BatchFn& f, double decay_rate,
                                          const QuadratureSettings& s) {
  check_settings(s);
  if (!(decay_rate > 0.0))
    throw std::invalid_argument("integrate_semi_infinite: decay_rate must be positive");
  const double q_max = -std::log(s.c2_cutoff_eps) / decay_rate;
  IntegrationResult r = integrate_finite(f, 0.0, q_max, s);
  double tail_sample = 0.0;
  f(std::span<const double>(&q_max, 1), std::span<double>(&tail_sample, 1));
  r.error += std::abs(tail_sample) / decay_rate;
  return r;
}

IntegrationResult integrate_pv(const BatchFn& f, double pole, double lo,
                               double hi, const QuadratureSettings& s) {
  check_settings(s);
  if (!(lo < pole && pole < hi))
    throw std::invalid_argument("integrate_pv: pole must lie strictly inside [lo, hi]");
  const double w = std::min(pole - lo, hi - pole) / 2.0;

  // symmetric window: the 1/(x - pole) kernel is removed analytically
  BatchFn symmetrized = [&f, pole](std::span<const double> us,
                                   std::span<double> out) {
    const std::size_t n = us.size();
    std::vector<double> xs(2 * n), ys(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
      xs[2 * i] = pole + us[i];
      xs[2 * i + 1] = pole - us[i];
    }
    f(xs, ys);
    for (std::size_t i = 0; i < n; ++i)
      out[i] = (ys[2 * i] - ys[2 * i + 1]) / us[i];
  };
  IntegrationResult inside = integrate_finite(symmetrized, 0.0, w, s);

  BatchFn shifted = [&f, pole](std::span<const double> xs,
                               std::span<double> out) {
    f(xs, out);
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] /= (xs[i] - pole);
  };
  // A remainder piece can span many decades (Kramers-Kronig tables); uniform
  // panelling would miss narrow features, so wide positive pieces are cut
  // geometrically first.
  auto add_piece = [&](IntegrationResult& acc, double a, double b) {
    int n = 1;
    if (a > 0.0 && b / a > 4.0)
      n = static_cast<int>(std::ceil(std::log(b / a) / std::log(4.0)));
    const double ratio = std::pow(b / a, 1.0 / n);
    double left_edge = a;
    for (int k = 0; k < n; ++k) {
      const double right_edge = (k == n - 1) ? b : a * std::pow(ratio, k + 1);
      IntegrationResult piece = integrate_finite(shifted, left_edge, right_edge, s);
      acc.value += piece.value;
      acc.error += piece.error;
      left_edge = right_edge;
    }
  };
  IntegrationResult r = inside;
  if (lo < pole - w) add_piece(r, lo, pole - w);
  if (pole + w < hi) add_piece(r, pole + w, hi);
  return r;
}

std::vector<double> log_grid(double lo, double hi, int points_per_decade) {
  if (!(0.0 < lo && lo < hi))
    throw std::invalid_argument("log_grid: require 0 < lo < hi");
  if (points_per_decade < 1)
    throw std::invalid_argument("log_grid: points_per_decade must be at least 1");
  const double decades = std::log10(hi / lo);
  int m = static_cast<int>(std::ceil(decades * points_per_decade - 1e-9));
  m = std::max(m, 2);
  if (m % 2 != 0) ++m;
  const double t0 = std::log(lo), t1 = std::log(hi);
  std::vector<double> grid(static_cast<std::size_t>(m) + 1);
  for (int i = 0; i <= m; ++i)
    grid[static_cast<std::size_t>(i)] = std::exp(t0 + (t1 - t0) * i / m);
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

IntegrationResult integrate_log_samples(std::span<const double> omega,
                                        std::span<const double> f) {
  const std::size_t n = omega.size();
  if (n != f.size())
    throw std::invalid_argument("integrate_log_samples: size mismatch");
  if (n < 3 || n % 2 == 0)
    throw std::invalid_argument(
        "integrate_log_samples: need an odd point count (even panel count)");
  const double h = std::log(omega[n - 1] / omega[0]) / static_cast<double>(n - 1);

  // trapezoid in t = ln(omega); integrand f dOmega = (f * omega) dt
  double fine = 0.5 * (f[0] * omega[0] + f[n - 1] * omega[n - 1]);
  for (std::size_t i = 1; i + 1 < n; ++i) fine += f[i] * omega[i];
  fine *= h;

  double coarse = 0.5 * (f[0] * omega[0] + f[n - 1] * omega[n - 1]);
  for (std::size_t i = 2; i + 1 < n; i += 2) coarse += f[i] * omega[i];
  coarse *= 2.0 * h;

  return {(4.0 * fine - coarse) / 3.0, std::abs(fine - coarse) / 3.0};
}

IntegrationResult integrate_log_grid(const BatchFn& f, double lo, double hi,
                                     const QuadratureSettings& s) {
  check_settings(s);
  const std::vector<double> grid = log_grid(lo, hi, s.outer_points_per_decade);
  std::vector<double> ys(grid.size());
  f(grid, ys);
  return integrate_log_samples(grid, ys);
}

}  // namespace temode
