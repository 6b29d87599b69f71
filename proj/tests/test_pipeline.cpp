#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "temode/constants.h"
#include "temode/pipeline.h"

using namespace temode;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
}

}  // namespace

TEST_CASE("fingerprints react to every numeric setting") {
  const PlateGeometry geom{};
  const QuadratureSettings s{};
  const std::string m = describe(BoundaryModel{PerfectConductor{}});
  const auto base = settings_fingerprint(geom, s, 1e9, 2e15, m);
  CHECK(base == settings_fingerprint(geom, s, 1e9, 2e15, m));  // stable

  PlateGeometry g2 = geom;
  g2.temperature_T = 301.0;
  CHECK(settings_fingerprint(g2, s, 1e9, 2e15, m) != base);
  QuadratureSettings s2 = s;
  s2.rel_tol *= 2.0;
  CHECK(settings_fingerprint(geom, s2, 1e9, 2e15, m) != base);
  CHECK(settings_fingerprint(geom, s, 1e9, 1e15, m) != base);
  const std::string m2 = describe(BoundaryModel{default_dielectric()});
  CHECK(settings_fingerprint(geom, s, 1e9, 2e15, m2) != base);
}

TEST_CASE("model descriptors are lossless one-liners") {
  CHECK(describe(BoundaryModel{PerfectConductor{}}) == "perfect_conductor");
  const std::string d = describe(BoundaryModel{default_dielectric()});
  CHECK(d.find("dielectric") == 0);
  CHECK(d.find("amp1=54545.45") != std::string::npos);
  const std::string i = describe(BoundaryModel{SurfaceImpedance{}});
  CHECK(i.find("surface_impedance") == 0);
  CHECK(i.find("sigma=3e+17") != std::string::npos);
}

TEST_CASE("perfect conductor totals") {
  const PlateGeometry geom{};
  const SpectrumResult r = sweep(PerfectConductor{}, geom, 1e9, 2e15);
  REQUIRE(r.omega.size() == r.samples.size());
  CHECK(r.omega.size() > 200);
  for (std::size_t k = 1; k < r.omega.size(); ++k)
    CHECK(r.omega[k] > r.omega[k - 1]);

  // closed form: integral of w^3 g / 6 is (kT/hbar)^4 (pi^4/15) / 6 up to
  // truncation of both tails, which are below 1e-10 of the total here
  const double wt = thermal_frequency(geom.temperature_T);
  const double analytic =
      std::pow(wt, 4.0) * std::pow(std::numbers::pi, 4.0) / 15.0 / 6.0;
  CHECK(r.total_c1 == doctest::Approx(analytic).epsilon(1e-4));
  CHECK(r.total_c1 == doctest::Approx(2.575561e54).epsilon(1e-4));
  CHECK(r.total_c2 == 0.0);

  // band-limited total used as the matched denominator of the whole-model
  // impedance ratio
  const SpectrumResult band = sweep(PerfectConductor{}, geom, 1e9, 1e14);
  CHECK(band.total_c1 == doctest::Approx(7.571253e53).epsilon(1e-4));
}

TEST_CASE("thermal underflow zeroes a whole sweep") {
  PlateGeometry cold{};
  cold.temperature_T = 1e-6;
  const SpectrumResult r = sweep(default_dielectric(), cold, 1e9, 1e10);
  for (const SpectralSample& s : r.samples) {
    CHECK(s.f_c1 == 0.0);
    CHECK(s.f_c2 == 0.0);
  }
  CHECK(r.total_c1 == 0.0);
  CHECK(r.total_c2 == 0.0);
}

TEST_CASE("sweep failures name the offending frequency") {
  QuadratureSettings starved;
  starved.rel_tol = 1e-16;
  starved.max_subdivisions = 16;
  const PlateGeometry geom{};
  try {
    sweep(default_dielectric(), geom, 1e12, 1.2e12, starved);
    FAIL("expected NonConvergence");
  } catch (const NonConvergence& e) {
    const std::string msg = e.what();
    CHECK(msg.find("omega") != std::string::npos);
    CHECK(msg.find("1") != std::string::npos);
    CHECK(std::isfinite(e.best_estimate.value));
  }
  CHECK_THROWS_AS(sweep(PerfectConductor{}, geom, 0.0, 1e10),
                  std::invalid_argument);
}

TEST_CASE("comparison ratios against pinned sweep values") {
  const PlateGeometry geom{};
  const RatioReport rep = ratio_report(geom);

  CHECK(rep.r_dielectric_c1 == doctest::Approx(0.9307).epsilon(2e-3));
  CHECK(rep.r_dielectric_c2 == doctest::Approx(-141.30).epsilon(2e-3));
  CHECK(rep.r_impedance_c2_over_c1 == doctest::Approx(-4.9293).epsilon(2e-3));
  CHECK(rep.r_impedance_total == doctest::Approx(1.4129).epsilon(2e-3));

  CHECK(rep.dielectric_range[0] == 1e9);
  CHECK(rep.dielectric_range[1] == 2e15);
  CHECK(rep.impedance_range[1] == 1e14);
  CHECK(rep.fingerprint != 0);

  // the underlying impedance totals, pinned separately so a compensating
  // pair of errors cannot hide behind the quotient
  const SpectrumResult im = sweep(SurfaceImpedance{}, geom, 1e9, 1e14);
  CHECK(im.total_c1 == doctest::Approx(-2.722405e53).epsilon(1e-3));
  CHECK(im.total_c2 == doctest::Approx(1.341962e54).epsilon(1e-3));
}

TEST_CASE("ratios are grid-converged at the default density") {
  const PlateGeometry geom{};
  QuadratureSettings dense{};
  dense.outer_points_per_decade *= 2;
  const RatioReport a = ratio_report(geom);
  const RatioReport b = ratio_report(geom, dense);
  CHECK(b.r_dielectric_c1 ==
        doctest::Approx(a.r_dielectric_c1).epsilon(1e-3));
  CHECK(b.r_dielectric_c2 ==
        doctest::Approx(a.r_dielectric_c2).epsilon(1e-3));
  CHECK(b.r_impedance_c2_over_c1 ==
        doctest::Approx(a.r_impedance_c2_over_c1).epsilon(1e-3));
  CHECK(b.r_impedance_total ==
        doctest::Approx(a.r_impedance_total).epsilon(1e-3));
}

TEST_CASE("force scale and prefactor modes") {
  CHECK(total_force(SpectrumResult{}) == 0.0);

  const PlateGeometry geom{};
  SpectrumResult r = sweep(PerfectConductor{}, geom, 1e9, 2e15);
  CHECK(total_force(r) > 0.0);  // attractive
  const double f2 = total_force(r);
  r.prefactor_mode = PrefactorMode::Pi;
  const double f1 = total_force(r);
  CHECK(f1 == doctest::Approx(f2 * std::numbers::pi).epsilon(1e-14));

  CHECK(ideal_te_reference(1e-4) ==
        doctest::Approx(6.5006247368e-3).epsilon(1e-9));
  CHECK(ideal_te_reference(2e-4) ==
        doctest::Approx(ideal_te_reference(1e-4) / 16.0).epsilon(1e-14));
  CHECK(ideal_te_reference(1e4) < 1e-30);
  CHECK_THROWS_AS(ideal_te_reference(0.0), std::invalid_argument);
}

TEST_CASE("spectrum files round-trip and stay recomputable") {
  const PlateGeometry geom{};
  const SpectrumResult r = sweep(default_dielectric(), geom, 1e11, 1e12);
  const std::string csv = "/tmp/temode_rt.csv";
  const std::string js = "/tmp/temode_rt.json";
  save_spectrum_csv(r, csv);
  save_spectrum_json(r, js);

  for (const std::string& path : {csv, js}) {
    std::string warning = "sentinel";
    const SpectrumResult back = load_spectrum(path, &warning);
    CHECK(warning.empty());
    CHECK(back.model == r.model);
    CHECK(back.geometry.separation_a == r.geometry.separation_a);
    CHECK(back.geometry.temperature_T == r.geometry.temperature_T);
    CHECK(back.settings.rel_tol == r.settings.rel_tol);
    CHECK(back.settings.outer_points_per_decade ==
          r.settings.outer_points_per_decade);
    CHECK(back.omega_lo == r.omega_lo);
    CHECK(back.omega_hi == r.omega_hi);
    CHECK(back.prefactor_mode == r.prefactor_mode);
    CHECK(back.fingerprint == r.fingerprint);
    CHECK(back.total_c1 == r.total_c1);
    CHECK(back.total_c2 == r.total_c2);
    REQUIRE(back.omega.size() == r.omega.size());
    for (std::size_t k = 0; k < r.omega.size(); ++k) {
      CHECK(back.omega[k] == r.omega[k]);
      CHECK(back.samples[k].f_c1 == r.samples[k].f_c1);
      CHECK(back.samples[k].f_c2 == r.samples[k].f_c2);
    }

    // totals recomputed from the stored samples match the stored totals
    std::vector<double> f1, f2;
    for (const SpectralSample& s : back.samples) {
      f1.push_back(s.f_c1);
      f2.push_back(s.f_c2);
    }
    CHECK(integrate_log_samples(back.omega, f1).value ==
          doctest::Approx(back.total_c1).epsilon(1e-14));
    CHECK(integrate_log_samples(back.omega, f2).value ==
          doctest::Approx(back.total_c2).epsilon(1e-14));
  }
}

TEST_CASE("malformed spectrum files fail with a located error") {
  const PlateGeometry geom{};
  const SpectrumResult r = sweep(PerfectConductor{}, geom, 1e11, 1e12);
  const std::string path = "/tmp/temode_bad.csv";
  save_spectrum_csv(r, path);

  // chop the last data row down to two fields
  std::string text = slurp(path);
  const auto last_comma = text.find_last_of(',');
  spit(path, text.substr(0, last_comma));
  try {
    load_spectrum(path);
    FAIL("expected a parse error");
  } catch (const std::runtime_error& e) {
    const std::string msg = e.what();
    CHECK(msg.find(path + ":") != std::string::npos);  // names the line
    CHECK(msg.find("three comma-separated") != std::string::npos);
  }

  // out-of-order omegas are rejected, not silently reordered
  save_spectrum_csv(r, path);
  text = slurp(path);
  const auto header = text.find("omega,f_c1,f_c2\n");
  const auto first_row_end = text.find('\n', header + 16);
  const std::string first_row = text.substr(header + 16, first_row_end - header - 16);
  spit(path, text + first_row + "\n");
  CHECK_THROWS_WITH_AS(load_spectrum(path),
                       doctest::Contains("strictly ascending"),
                       std::runtime_error);
}

TEST_CASE("edited settings trip the fingerprint warning but still load") {
  const PlateGeometry geom{};
  const SpectrumResult r = sweep(PerfectConductor{}, geom, 1e11, 1e12);
  const std::string path = "/tmp/temode_tamper.csv";
  save_spectrum_csv(r, path);

  std::string text = slurp(path);
  const std::string needle = "# temperature_K: 300";
  const auto at = text.find(needle);
  REQUIRE(at != std::string::npos);
  text.replace(at, needle.size(), "# temperature_K: 301");
  spit(path, text);

  std::string warning;
  const SpectrumResult back = load_spectrum(path, &warning);
  CHECK_FALSE(warning.empty());
  CHECK(warning.find("fingerprint") != std::string::npos);
  CHECK(back.geometry.temperature_T == 301.0);  // data still returned
  CHECK(back.omega.size() == r.omega.size());
}

TEST_CASE("ratio reports persist losslessly") {
  RatioReport rep;
  rep.r_dielectric_c1 = 0.93;
  rep.r_dielectric_c2 = -141.3;
  rep.r_impedance_c2_over_c1 = -4.93;
  rep.r_impedance_total = 1.41;
  rep.dielectric_model = "dielectric amp1=1 amp2=2 omega0=3";
  rep.impedance_model = "surface_impedance sigma=3e+17 mu=1 phase=1";
  rep.fingerprint = 0xdeadbeefcafef00dull;
  const std::string path = "/tmp/temode_ratio.json";
  save_ratio_json(rep, path);
  const RatioReport back = load_ratio(path);
  CHECK(back.r_dielectric_c1 == rep.r_dielectric_c1);
  CHECK(back.r_dielectric_c2 == rep.r_dielectric_c2);
  CHECK(back.r_impedance_c2_over_c1 == rep.r_impedance_c2_over_c1);
  CHECK(back.r_impedance_total == rep.r_impedance_total);
  CHECK(back.dielectric_model == rep.dielectric_model);
  CHECK(back.impedance_model == rep.impedance_model);
  CHECK(back.fingerprint == rep.fingerprint);
  CHECK(back.impedance_range == rep.impedance_range);
}
