#include "temode/optical.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

namespace temode {

std::complex<double> drude_like_eps(double omega, const DrudeLikeParams& p) {
  if (!(omega > 0.0))
    throw std::invalid_argument("drude_like_eps: omega must be positive");
  const double x2 = (omega / p.omega0) * (omega / p.omega0);
  const double eps1 = -p.amp1 / (1.0 + x2);
  const double eps2 = p.amp2 / (omega * (1.0 + x2));
  return {eps1, eps2};
}

TabulatedEps2::TabulatedEps2(std::vector<double> omega, std::vector<double> eps2)
    : omega_(std::move(omega)), eps2_(std::move(eps2)) {
  if (omega_.size() != eps2_.size())
    throw std::invalid_argument("TabulatedEps2: column length mismatch");
  if (omega_.size() < 4)
    throw std::invalid_argument("TabulatedEps2: need at least 4 samples");
  for (std::size_t i = 0; i < omega_.size(); ++i) {
    if (!(omega_[i] > 0.0))
      throw std::invalid_argument("TabulatedEps2: omega must be positive at row " +
                                  std::to_string(i + 1));
    if (i > 0 && !(omega_[i] > omega_[i - 1]))
      throw std::invalid_argument(
          "TabulatedEps2: omega not strictly increasing at row " +
          std::to_string(i + 1));
    if (eps2_[i] < 0.0)
      throw std::invalid_argument("TabulatedEps2: negative eps2 at row " +
                                  std::to_string(i + 1));
  }
}

TabulatedEps2 TabulatedEps2::load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<double> w, e;
  std::string line;
  int lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    if (!header_seen) {
      std::string compact;
      for (char c : line)
        if (!std::isspace(static_cast<unsigned char>(c))) compact += c;
      if (compact != "omega,eps2")
        throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                 ": expected header 'omega,eps2'");
      header_seen = true;
      continue;
    }
    std::istringstream ss(line);
    std::string a, b;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b))
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected two comma-separated columns");
    try {
      std::size_t used = 0;
      double wv = std::stod(a, &used);
      double ev = std::stod(b);
      w.push_back(wv);
      e.push_back(ev);
    } catch (const std::exception&) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": cannot parse numbers");
    }
    if (w.size() > 1 && !(w.back() > w[w.size() - 2]))
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": omega not strictly increasing");
  }
  try {
    return TabulatedEps2(std::move(w), std::move(e));
  } catch (const std::invalid_argument& ex) {
    throw std::runtime_error(path + ": " + ex.what());
  }
}

double TabulatedEps2::operator()(double x) const {
  if (!(x >= omega_.front() && x <= omega_.back()))
    throw std::out_of_range("TabulatedEps2: x outside table support");
  auto it = std::upper_bound(omega_.begin(), omega_.end(), x);
  if (it == omega_.begin()) return eps2_.front();
  if (it == omega_.end()) return eps2_.back();
  const std::size_t hi = static_cast<std::size_t>(it - omega_.begin());
  const std::size_t lo = hi - 1;
  const double t = (x - omega_[lo]) / (omega_[hi] - omega_[lo]);
  return eps2_[lo] + t * (eps2_[hi] - eps2_[lo]);
}

double kk_eps1(const TabulatedEps2& table, double omega, bool extrapolate_tails) {
  const std::vector<double>& xs = table.omega();
  const std::vector<double>& es = table.eps2();
  const double x1 = xs.front();
  const double x2 = xs.back();
  if (x2 / x1 < 1e2)
    throw std::invalid_argument(
        "kk_eps1: table spans less than two decades; wider data needed");
  if (!(omega > x1 && omega < x2))
    throw std::invalid_argument(
        "kk_eps1: omega must lie strictly inside the table support");

  // On each cell eps2 = a + b*x, and
  //   x (a + b x) / (x^2 - w^2) = b + (a+bw)/2 * 1/(x-w) + (a-bw)/2 * 1/(x+w),
  // so the cell integral is b*dx plus logs evaluated at the endpoints. The
  // pole cell needs no special casing: the principal value IS the endpoint
  // form. When w sits exactly on a shared node the two divergent logs carry
  // equal and opposite coefficients, so both are dropped.
  //
  // Far from the pole the log coefficients grow like b*w while the three
  // terms of a cell cancel down to O((x/w)^2) of their size, so the logs of
  // near-1 ratios must be taken with log1p or the cancellation amplifies
  // their last-bit error by many orders.
  const auto ratio_log = [](double dx, double den) {
    const double u = dx / den;  // ln|(den+dx)/den|
    if (u > -0.5 && u < 1.0) return std::log1p(u);
    return std::log(std::abs((den + dx) / den));
  };
  double pv = 0.0;
  for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
    const double xl = xs[k], xh = xs[k + 1];
    const double dx = xh - xl;
    const double b = (es[k + 1] - es[k]) / dx;
    const double a = es[k] - b * xl;
    const double cp = 0.5 * (a + b * omega);
    const double cm = 0.5 * (a - b * omega);
    double v = b * dx + cm * ratio_log(dx, xl + omega);
    if (xl != omega && xh != omega)
      v += cp * ratio_log(dx, xl - omega);
    else if (xl == omega)
      v += cp * std::log(std::abs(xh - omega));
    else
      v -= cp * std::log(std::abs(xl - omega));
    pv += v;
  }

  // atanh(r) - r without the subtractive cancellation at small r
  const auto atanh_minus = [](double r) {
    if (std::abs(r) >= 0.25) return std::atanh(r) - r;
    const double r2 = r * r;
    double term = r * r2 / 3.0, sum = term;
    for (int k = 5; std::abs(term) > 1e-18 * std::abs(sum); k += 2) {
      term *= r2 * (k - 2.0) / k;
      sum += term;
    }
    return sum;
  };

  double tails = 0.0;
  if (extrapolate_tails) {
    // below the table: eps2 ~ e1*x1/x, so x*eps2/(x^2-w^2) integrates to a
    // log, ln|(x1-w)/(x1+w)| = -2 atanh(x1/w)
    const double e1 = es.front();
    tails -= e1 * x1 * std::atanh(x1 / omega) / omega;
    // above: eps2 ~ e2*(x2/x)^3; partial fractions of 1/(x^2(x^2-w^2)) give
    // a bracket that collapses to (atanh(w/x2) - w/x2)/w
    const double e2 = es.back();
    tails += e2 * x2 * x2 * x2 * atanh_minus(omega / x2) /
             (omega * omega * omega);
  }
  return 1.0 + 2.0 / std::numbers::pi * (pv + tails);
}

double skin_depth(double omega, const ConductorParams& cond) {
  if (!(omega > 0.0)) throw std::invalid_argument("skin_depth: omega must be positive");
  if (!(cond.sigma > 0.0) || !(cond.mu > 0.0))
    throw std::invalid_argument("skin_depth: sigma and mu must be positive");
  return c_light / std::sqrt(2.0 * std::numbers::pi * cond.mu * cond.sigma * omega);
}

ValidityReport validity_report(const ConductorParams& cond,
                               const PlateGeometry& geom, double omega_lo,
                               double omega_hi, double mean_free_path) {
  ValidityReport rep;
  rep.mean_free_path = mean_free_path;
  const auto grid = log_grid(omega_lo, omega_hi, 40);
  rep.skin_depth_curve.reserve(grid.size());
  rep.dielectric_model_fails_above = std::numeric_limits<double>::infinity();
  rep.thick_film_above = std::numeric_limits<double>::infinity();
  for (double w : grid) {
    const double d = skin_depth(w, cond);
    rep.skin_depth_curve.emplace_back(w, d);
    if (d <= mean_free_path && w < rep.dielectric_model_fails_above)
      rep.dielectric_model_fails_above = w;
    if (d < geom.film_thickness_d && w < rep.thick_film_above)
      rep.thick_film_above = w;
  }
  return rep;
}

}  // namespace temode
