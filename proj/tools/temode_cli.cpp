// Command-line front end. Laboratory units (um, K) are converted here and
// never reach the core; every output file embeds the resolved configuration
// so a result is reproducible from its own metadata.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "temode/constants.h"
#include "temode/optical.h"
#include "temode/pipeline.h"

using namespace temode;
using nlohmann::json;

namespace {

std::string fmt(double v, const char* spec = "%.10g") {
  char buf[48];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

// "1um", "0.5cm", bare number = cm
double parse_length(const std::string& text) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  std::string suffix(end);
  if (end == text.c_str() || !(v > 0.0))
    throw CLI::ValidationError("length", "expected a positive length, got '" + text + "'");
  if (suffix.empty() || suffix == "cm") return v;
  if (suffix == "um") return v * 1e-4;
  if (suffix == "nm") return v * 1e-7;
  throw CLI::ValidationError("length", "unknown unit '" + suffix + "' (use um, nm or cm)");
}

double parse_temperature(const std::string& text) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  std::string suffix(end);
  if (end == text.c_str() || !(v > 0.0) || (!suffix.empty() && suffix != "K"))
    throw CLI::ValidationError("temperature", "expected kelvin, got '" + text + "'");
  return v;
}

struct Opts {
  std::string config;
  std::string model;
  std::string separation = "1e-4cm";
  std::string temperature = "300";
  std::string film_thickness = "1e-4cm";
  double sigma = 3e17;
  double mu = 1.0;
  double alpha_phase = 1.0;
  double amp1 = std::numeric_limits<double>::quiet_NaN();  // NaN = closure default
  double amp2 = 1.8e18;
  double omega0 = 3.3e13;
  double omega_min = 1e9;
  double omega_max = 0.0;  // 0 = model default
  int ppd = 40;
  double rel_tol = 1e-8;
  int max_subdivisions = 2000;
  std::string prefactor = "pi2";
  double mfp = 3e-6;
};

// Flat key-value JSON; keys mirror the long flag names. Flags given on the
// command line override anything set here.
void apply_config_file(const std::string& path, Opts& o) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("--config", "cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw CLI::ValidationError("--config", path + ": " + e.what());
  }
  if (!j.is_object())
    throw CLI::ValidationError("--config", path + ": expected a JSON object");

  auto text = [](const json& v) -> std::string {
    return v.is_string() ? v.get<std::string>() : v.dump();
  };
  for (const auto& [key, value] : j.items()) {
    if (key == "model") o.model = text(value);
    else if (key == "separation") o.separation = text(value);
    else if (key == "temperature") o.temperature = text(value);
    else if (key == "film-thickness") o.film_thickness = text(value);
    else if (key == "sigma") o.sigma = value.get<double>();
    else if (key == "mu") o.mu = value.get<double>();
    else if (key == "alpha-phase") o.alpha_phase = value.get<double>();
    else if (key == "eps1-amplitude") o.amp1 = value.get<double>();
    else if (key == "eps2-amplitude") o.amp2 = value.get<double>();
    else if (key == "omega0") o.omega0 = value.get<double>();
    else if (key == "omega-min") o.omega_min = value.get<double>();
    else if (key == "omega-max") o.omega_max = value.get<double>();
    else if (key == "points-per-decade") o.ppd = value.get<int>();
    else if (key == "rel-tol") o.rel_tol = value.get<double>();
    else if (key == "max-subdivisions") o.max_subdivisions = value.get<int>();
    else if (key == "prefactor") o.prefactor = text(value);
    else if (key == "mfp") o.mfp = value.get<double>();
    else
      throw CLI::ValidationError("--config", path + ": unknown key '" + key + "'");
  }
}

PlateGeometry make_geometry(const Opts& o) {
  PlateGeometry g;
  g.separation_a = parse_length(o.separation);
  g.temperature_T = parse_temperature(o.temperature);
  g.film_thickness_d = parse_length(o.film_thickness);
  return g;
}

QuadratureSettings make_settings(const Opts& o) {
  QuadratureSettings s;
  if (!(o.rel_tol > 0.0))
    throw CLI::ValidationError("--rel-tol", "must be > 0");
  if (o.ppd < 4)
    throw CLI::ValidationError("--points-per-decade", "must be >= 4");
  if (o.max_subdivisions < 16)
    throw CLI::ValidationError("--max-subdivisions", "must be >= 16");
  s.rel_tol = o.rel_tol;
  s.outer_points_per_decade = o.ppd;
  s.max_subdivisions = o.max_subdivisions;
  return s;
}

Dielectric make_dielectric(const Opts& o) {
  DrudeLikeParams p{};
  p.amp2 = o.amp2;
  p.omega0 = o.omega0;
  p.amp1 = std::isnan(o.amp1) ? kk_closure_amp1(p) : o.amp1;
  return Dielectric{p};
}

SurfaceImpedance make_impedance(const Opts& o) {
  if (o.alpha_phase != 1.0 && o.alpha_phase != -1.0)
    throw CLI::ValidationError("--alpha-phase", "must be +1 or -1");
  return SurfaceImpedance{ConductorParams{o.sigma, o.mu}, o.alpha_phase};
}

BoundaryModel make_model(const Opts& o) {
  if (o.model == "perfect" || o.model == "perfect_conductor")
    return PerfectConductor{};
  if (o.model == "dielectric") return make_dielectric(o);
  if (o.model == "impedance" || o.model == "surface_impedance" ||
      o.model == "metal")
    return make_impedance(o);
  throw CLI::ValidationError(
      "--model", "unknown model '" + o.model +
                     "' (choose perfect, dielectric or impedance)");
}

double default_omega_max(const Opts& o) {
  if (o.omega_max > 0.0) return o.omega_max;
  const bool metallic = o.model == "impedance" ||
                        o.model == "surface_impedance" || o.model == "metal";
  // treating the plates as conducting metals fails above 1e14 s^-1
  return metallic ? 1e14 : 2e15;
}

PrefactorMode make_prefactor(const Opts& o) {
  if (o.prefactor == "pi2" || o.prefactor == "pi_squared")
    return PrefactorMode::PiSquared;
  if (o.prefactor == "pi") return PrefactorMode::Pi;
  throw CLI::ValidationError("--prefactor", "choose pi2 or pi");
}

void atomic_write_text(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path tmp(path);
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  fs::rename(tmp, path);
}

// ---- SVG plotting ----------------------------------------------------------

struct SvgSegment {
  bool negative = false;
  std::vector<std::pair<double, double>> pts;  // (omega, |f|)
};

// split a sampled curve into same-sign runs so the stroke style can encode
// the sign; zeros terminate runs and are not plotted (log axis)
std::vector<SvgSegment> sign_segments(const std::vector<double>& w,
                                      const std::vector<double>& f) {
  std::vector<SvgSegment> segs;
  SvgSegment cur;
  int sign = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const int s = f[i] > 0.0 ? 1 : f[i] < 0.0 ? -1 : 0;
    if (s == 0 || s != sign) {
      if (cur.pts.size() > 1) segs.push_back(cur);
      cur = SvgSegment{};
      sign = s;
      if (s == 0) continue;
      cur.negative = s < 0;
    }
    cur.pts.emplace_back(w[i], std::abs(f[i]));
  }
  if (cur.pts.size() > 1) segs.push_back(cur);
  return segs;
}

std::string render_spectrum_svg(const SpectrumResult& r) {
  const double x0 = 80, x1 = 800, y0 = 60, y1 = 480;  // plot box
  std::vector<double> f1(r.omega.size()), f2(r.omega.size());
  for (std::size_t i = 0; i < r.omega.size(); ++i) {
    f1[i] = r.samples[i].f_c1;
    f2[i] = r.samples[i].f_c2;
  }

  double fmax = 0.0;
  for (double v : f1) fmax = std::max(fmax, std::abs(v));
  for (double v : f2) fmax = std::max(fmax, std::abs(v));
  if (fmax == 0.0) fmax = 1.0;
  const double ly1 = std::ceil(std::log10(fmax));
  const double ly0 = ly1 - 14.0;  // show 14 decades below the peak
  const double lx0 = std::log10(r.omega_lo), lx1 = std::log10(r.omega_hi);

  auto X = [&](double w) { return x0 + (std::log10(w) - lx0) / (lx1 - lx0) * (x1 - x0); };
  auto Y = [&](double v) {
    const double ly = std::max(ly0, std::min(ly1, std::log10(v)));
    return y1 - (ly - ly0) / (ly1 - ly0) * (y1 - y0);
  };

  std::ostringstream s;
  s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
       "width=\"840\" height=\"560\" viewBox=\"0 0 840 560\">\n"
    << "<rect width=\"840\" height=\"560\" fill=\"white\"/>\n"
    << "<text x=\"80\" y=\"28\" font-family=\"sans-serif\" font-size=\"15\">"
    << "spectral density, " << r.model << "</text>\n"
    << "<text x=\"80\" y=\"46\" font-family=\"sans-serif\" font-size=\"12\" "
       "fill=\"#555\">a = "
    << fmt(r.geometry.separation_a) << " cm, T = "
    << fmt(r.geometry.temperature_T)
    << " K; solid = positive (attractive), dashed = negative</text>\n";

  // grid and tick labels, one per decade in omega, every two in |f|
  for (int e = static_cast<int>(std::ceil(lx0)); e <= static_cast<int>(std::floor(lx1)); ++e) {
    const double px = X(std::pow(10.0, e));
    s << "<line x1=\"" << fmt(px) << "\" y1=\"" << y0 << "\" x2=\"" << fmt(px)
      << "\" y2=\"" << y1 << "\" stroke=\"#ddd\"/>\n";
    s << "<text x=\"" << fmt(px) << "\" y=\"" << y1 + 18
      << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">1e"
      << e << "</text>\n";
  }
  for (int e = static_cast<int>(ly0); e <= static_cast<int>(ly1); e += 2) {
    const double py = Y(std::pow(10.0, e));
    s << "<line x1=\"" << x0 << "\" y1=\"" << fmt(py) << "\" x2=\"" << x1
      << "\" y2=\"" << fmt(py) << "\" stroke=\"#ddd\"/>\n";
    s << "<text x=\"" << x0 - 6 << "\" y=\"" << fmt(py + 4)
      << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">1e"
      << e << "</text>\n";
  }
  s << "<rect x=\"" << x0 << "\" y=\"" << y0 << "\" width=\"" << x1 - x0
    << "\" height=\"" << y1 - y0 << "\" fill=\"none\" stroke=\"#333\"/>\n";
  s << "<text x=\"440\" y=\"528\" font-family=\"sans-serif\" font-size=\"12\" "
       "text-anchor=\"middle\">omega (s^-1)</text>\n";
  s << "<text x=\"22\" y=\"270\" font-family=\"sans-serif\" font-size=\"12\" "
       "transform=\"rotate(-90 22 270)\" text-anchor=\"middle\">|f| "
       "(prefactor-free)</text>\n";

  const struct {
    const std::vector<double>* data;
    const char* color;
    const char* label;
  } series[] = {{&f1, "#1f77b4", "f_c1"}, {&f2, "#d62728", "f_c2"}};
  double legend_y = 80;
  for (const auto& sr : series) {
    for (const SvgSegment& seg : sign_segments(r.omega, *sr.data)) {
      s << "<polyline fill=\"none\" stroke=\"" << sr.color
        << "\" stroke-width=\"1.6\"";
      if (seg.negative) s << " stroke-dasharray=\"6 4\"";
      s << " points=\"";
      for (const auto& [w, v] : seg.pts)
        s << fmt(X(w), "%.2f") << ',' << fmt(Y(v), "%.2f") << ' ';
      s << "\"/>\n";
    }
    s << "<line x1=\"640\" y1=\"" << legend_y << "\" x2=\"680\" y2=\""
      << legend_y << "\" stroke=\"" << sr.color << "\" stroke-width=\"2\"/>\n"
      << "<text x=\"688\" y=\"" << legend_y + 4
      << "\" font-family=\"sans-serif\" font-size=\"12\">" << sr.label
      << "</text>\n";
    legend_y += 20;
  }
  s << "</svg>\n";
  return s.str();
}

// ---- subcommands -----------------------------------------------------------

int cmd_spectrum(const Opts& o, const std::string& out_prefix,
                 const std::string& svg_path) {
  const PlateGeometry geom = make_geometry(o);
  const QuadratureSettings settings = make_settings(o);
  const BoundaryModel model = make_model(o);
  const double hi = default_omega_max(o);
  if (!(o.omega_min > 0.0) || !(hi > o.omega_min))
    throw CLI::ValidationError("--omega-min/--omega-max",
                               "need 0 < omega-min < omega-max");

  SpectrumResult r = sweep(model, geom, o.omega_min, hi, settings);
  r.prefactor_mode = make_prefactor(o);

  save_spectrum_csv(r, out_prefix + ".csv");
  save_spectrum_json(r, out_prefix + ".json");
  if (!svg_path.empty()) atomic_write_text(svg_path, render_spectrum_svg(r));

  double peak_w = 0.0, peak = -1.0;
  for (std::size_t i = 0; i < r.omega.size(); ++i)
    if (std::abs(r.samples[i].f_c2) > peak) {
      peak = std::abs(r.samples[i].f_c2);
      peak_w = r.omega[i];
    }
  std::cout << "model: " << r.model << "\n"
            << "range_s^-1: [" << fmt(r.omega_lo) << ", " << fmt(r.omega_hi)
            << "] x " << settings.outer_points_per_decade
            << " points/decade\n"
            << "samples: " << r.omega.size() << "\n"
            << "total_c1: " << fmt(r.total_c1) << "\n"
            << "total_c2: " << fmt(r.total_c2) << "\n"
            << "peak_|f_c2|_at_s^-1: " << fmt(peak_w) << "\n"
            << "wrote: " << out_prefix << ".csv, " << out_prefix << ".json"
            << (svg_path.empty() ? "" : (", " + svg_path)) << "\n";
  return 0;
}

int cmd_force(const Opts& o, const std::string& json_path) {
  const PlateGeometry geom = make_geometry(o);
  const QuadratureSettings settings = make_settings(o);
  const BoundaryModel model = make_model(o);
  const double hi = default_omega_max(o);
  if (!(o.omega_min > 0.0) || !(hi > o.omega_min))
    throw CLI::ValidationError("--omega-min/--omega-max",
                               "need 0 < omega-min < omega-max");

  SpectrumResult r = sweep(model, geom, o.omega_min, hi, settings);
  r.prefactor_mode = make_prefactor(o);
  if (!json_path.empty()) save_spectrum_json(r, json_path);

  const double force = total_force(r);
  const double ideal = ideal_te_reference(geom.separation_a);
  std::cout << "model: " << r.model << "\n"
            << "range_s^-1: [" << fmt(r.omega_lo) << ", " << fmt(r.omega_hi)
            << "]\n"
            << "total_c1: " << fmt(r.total_c1) << "\n"
            << "total_c2: " << fmt(r.total_c2) << "\n"
            << "prefactor_mode: "
            << (r.prefactor_mode == PrefactorMode::PiSquared ? "pi_squared"
                                                             : "pi")
            << "\n"
            << "force_dyn_cm2: " << fmt(force, "%.17g") << "\n"
            << "ideal_te_dyn_cm2: " << fmt(ideal) << "\n"
            << "fraction_of_ideal: " << fmt(force / ideal) << "\n";
  if (!json_path.empty()) std::cout << "wrote: " << json_path << "\n";
  return 0;
}

void print_ratio_block(const RatioReport& rep, double sigma) {
  struct Row {
    const char* name;
    double reference;
    double computed;
  } rows[] = {
      {"dielectric_c1_over_perfect_c1", 0.95, rep.r_dielectric_c1},
      {"dielectric_c2_over_perfect_c1", -169.0, rep.r_dielectric_c2},
      {"impedance_c2_over_c1", 1.47, rep.r_impedance_c2_over_c1},
      {"impedance_total_over_perfect", 1.75, rep.r_impedance_total},
  };
  std::printf("sigma = %.6g s^-1\n", sigma);
  std::printf("  %-32s %10s %12s\n", "ratio", "reference", "computed");
  for (const Row& r : rows)
    std::printf("  %-32s %10g %12.6g\n", r.name, r.reference, r.computed);
  std::printf("  ranges: perfect+dielectric [%g, %g], impedance [%g, %g] s^-1\n",
              rep.dielectric_range[0], rep.dielectric_range[1],
              rep.impedance_range[0], rep.impedance_range[1]);
}

int cmd_compare(const Opts& o, bool sigma_given, const std::string& json_prefix) {
  const PlateGeometry geom = make_geometry(o);
  const QuadratureSettings settings = make_settings(o);
  const Dielectric diel = make_dielectric(o);
  if (!(o.omega_min > 0.0))
    throw CLI::ValidationError("--omega-min", "must be > 0");

  std::array<double, 2> diel_range{o.omega_min,
                                   o.omega_max > 0.0 ? o.omega_max : 2e15};
  std::array<double, 2> imp_range{
      o.omega_min, std::min(o.omega_max > 0.0 ? o.omega_max : 1e14, 1e14)};
  if (!(diel_range[1] > diel_range[0]) || !(imp_range[1] > imp_range[0]))
    throw CLI::ValidationError("--omega-max", "must exceed --omega-min");

  std::vector<double> sigmas;
  if (sigma_given) {
    sigmas.push_back(o.sigma);
  } else {
    sigmas.push_back(o.sigma);                       // tabulated metal value
    sigmas.push_back(sigma_from_eps2_fit(diel.params));  // low-omega fit limit
  }

  for (double sg : sigmas) {
    Opts oi = o;
    oi.sigma = sg;
    const RatioReport rep = ratio_report(geom, settings, diel,
                                         make_impedance(oi), diel_range,
                                         imp_range);
    print_ratio_block(rep, sg);
    if (!json_prefix.empty()) {
      const std::string path = json_prefix + "-sigma" + fmt(sg, "%.4g") + ".json";
      save_ratio_json(rep, path);
      std::cout << "  wrote: " << path << "\n";
    }
  }
  return 0;
}

int cmd_kk(const std::string& input, const std::string& output,
           double grid_min, double grid_max, int grid_points) {
  TabulatedEps2 table = TabulatedEps2::load_csv(input);
  // default grid: log-uniform, strictly inside the table support
  const double lo = grid_min > 0.0 ? grid_min : table.omega_min() * 1.01;
  const double hi = grid_max > 0.0 ? grid_max : table.omega_max() * 0.99;
  if (!(lo > 0.0) || !(hi > lo))
    throw CLI::ValidationError("--grid-min/--grid-max", "need 0 < min < max");
  if (grid_points < 2)
    throw CLI::ValidationError("--grid-points", "need at least 2");

  std::ostringstream out;
  out << "# dispersion-relation transform\n";
  out << "# source: " << input << "\n";
  out << "# table_rows: " << table.omega().size() << "\n";
  out << "# grid: log [" << fmt(lo, "%.17g") << ", " << fmt(hi, "%.17g")
      << "], " << grid_points << " points\n";
  out << "omega,eps1,eps2\n";
  const double step = std::log(hi / lo) / (grid_points - 1);
  for (int i = 0; i < grid_points; ++i) {
    const double w = i == grid_points - 1 ? hi : lo * std::exp(step * i);
    double e1;
    try {
      e1 = kk_eps1(table, w);
    } catch (const std::exception& e) {
      throw std::runtime_error("kk transform failed at omega = " +
                               fmt(w, "%.17g") + ": " + e.what());
    }
    out << fmt(w, "%.17g") << ',' << fmt(e1, "%.17g") << ','
        << fmt(table(w), "%.17g") << "\n";
  }
  atomic_write_text(output, out.str());
  std::cout << "wrote: " << output << " (" << grid_points << " rows)\n";
  return 0;
}

int cmd_validate(const Opts& o, const std::string& json_path) {
  const PlateGeometry geom = make_geometry(o);
  const ConductorParams cond{o.sigma, o.mu};
  const double lo = o.omega_min;
  const double hi = o.omega_max > 0.0 ? o.omega_max : 1e15;
  if (!(lo > 0.0) || !(hi > lo))
    throw CLI::ValidationError("--omega-min/--omega-max",
                               "need 0 < omega-min < omega-max");

  const ValidityReport rep = validity_report(cond, geom, lo, hi, o.mfp);

  std::cout << "sigma_s^-1: " << fmt(o.sigma) << ", mu: " << fmt(o.mu) << "\n"
            << "skin_depth_at_1e11_um: " << fmt(skin_depth(1e11, cond) * 1e4)
            << "\n"
            << "dielectric_model_fails_above_s^-1: "
            << fmt(rep.dielectric_model_fails_above)
            << "  (skin depth <= mean free path "
            << fmt(rep.mean_free_path) << " cm)\n"
            << "impedance_model_fails_above_s^-1: " << fmt(rep.boyer_limit)
            << "\n"
            << "thick_film_above_s^-1: " << fmt(rep.thick_film_above)
            << "  (skin depth < film thickness "
            << fmt(geom.film_thickness_d) << " cm)\n";

  if (!json_path.empty()) {
    json j;
    j["sigma"] = o.sigma;
    j["mu"] = o.mu;
    j["separation_a_cm"] = geom.separation_a;
    j["film_thickness_cm"] = geom.film_thickness_d;
    j["mean_free_path_cm"] = rep.mean_free_path;
    j["range"] = {lo, hi};
    j["dielectric_model_fails_above"] = rep.dielectric_model_fails_above;
    j["impedance_model_fails_above"] = rep.boyer_limit;
    j["thick_film_above"] = rep.thick_film_above;
    json curve = json::array();
    for (const auto& [w, d] : rep.skin_depth_curve) curve.push_back({w, d});
    j["skin_depth_curve"] = std::move(curve);
    atomic_write_text(json_path, j.dump(2) + "\n");
    std::cout << "wrote: " << json_path << "\n";
  }
  return 0;
}

int run(int argc, char** argv) {
  Opts o;
  // config file first, so flags parsed below take precedence
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc) apply_config_file(argv[i + 1], o);
    else if (arg.rfind("--config=", 0) == 0) apply_config_file(arg.substr(9), o);
  }

  CLI::App app{"TE-mode thermal correction to the force between parallel plates"};
  app.require_subcommand(1);

  std::string out_prefix = "spectrum", svg_path, force_json, compare_json = "ratios";
  std::string kk_input, kk_output = "kk_out.csv", validate_json;
  double kk_grid_min = 0.0, kk_grid_max = 0.0;
  int kk_grid_points = 200;

  auto add_physics = [&](CLI::App* sub, bool with_model) {
    sub->add_option("--config", o.config,
                    "JSON config file (flags override its values)");
    sub->add_option("--separation", o.separation,
                    "plate separation, e.g. 1um or 1e-4cm");
    sub->add_option("--temperature", o.temperature, "temperature in K");
    sub->add_option("--film-thickness", o.film_thickness,
                    "metal film thickness, e.g. 1um");
    sub->add_option("--sigma", o.sigma, "conductivity in s^-1");
    sub->add_option("--mu", o.mu, "permeability");
    sub->add_option("--alpha-phase", o.alpha_phase,
                    "surface-coefficient root: +1 or -1");
    sub->add_option("--eps1-amplitude", o.amp1,
                    "dielectric eps1 amplitude (default: value implied by "
                    "the eps2 fit)");
    sub->add_option("--eps2-amplitude", o.amp2, "dielectric eps2 amplitude, s^-1");
    sub->add_option("--omega0", o.omega0, "dielectric knee frequency, s^-1");
    sub->add_option("--omega-min", o.omega_min, "sweep lower cutoff, s^-1");
    sub->add_option("--omega-max", o.omega_max,
                    "sweep upper cutoff, s^-1 (0 = model default)");
    sub->add_option("--points-per-decade", o.ppd, "outer grid density");
    sub->add_option("--rel-tol", o.rel_tol, "inner quadrature tolerance");
    sub->add_option("--max-subdivisions", o.max_subdivisions,
                    "inner quadrature split budget");
    sub->add_option("--prefactor", o.prefactor, "force prefactor: pi2 or pi");
    if (with_model) {
      CLI::Option* mo =
          sub->add_option("--model", o.model,
                          "boundary model: perfect, dielectric or impedance");
      // a config file may already have provided the model
      if (o.model.empty()) mo->required();
    }
  };

  CLI::App* sp = app.add_subcommand(
      "spectrum", "sweep the spectrum, write CSV + JSON (and optional SVG)");
  add_physics(sp, true);
  sp->add_option("-o,--output", out_prefix, "output path prefix")
      ->capture_default_str();
  sp->add_option("--svg", svg_path, "write a log-log SVG plot here");

  CLI::App* fo = app.add_subcommand("force", "integrate the spectrum to a force");
  add_physics(fo, true);
  fo->add_option("--json", force_json, "also write the spectrum as JSON");

  CLI::App* cm = app.add_subcommand(
      "compare", "compute the four comparison ratios against references");
  add_physics(cm, false);
  cm->add_option("--json", compare_json,
                 "ratio report JSON path prefix (empty = no files)")
      ->capture_default_str();

  CLI::App* kk = app.add_subcommand(
      "kk", "reconstruct eps1 from a tabulated eps2 via the dispersion relation");
  kk->add_option("--config", o.config, "JSON config file");
  kk->add_option("--input", kk_input, "CSV with header omega,eps2")
      ->required()
      ->check(CLI::ExistingFile);
  kk->add_option("--output", kk_output, "output CSV path")->capture_default_str();
  kk->add_option("--grid-min", kk_grid_min, "output grid start, s^-1 (0 = auto)");
  kk->add_option("--grid-max", kk_grid_max, "output grid end, s^-1 (0 = auto)");
  kk->add_option("--grid-points", kk_grid_points, "output grid size")
      ->capture_default_str();

  CLI::App* va = app.add_subcommand(
      "validate", "report where each boundary description stops being valid");
  add_physics(va, false);
  va->add_option("--mfp", o.mfp, "electron mean free path, cm")
      ->capture_default_str();
  va->add_option("--json", validate_json, "also write the report as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (app.got_subcommand(sp)) return cmd_spectrum(o, out_prefix, svg_path);
  if (app.got_subcommand(fo)) return cmd_force(o, force_json);
  if (app.got_subcommand(cm))
    return cmd_compare(o, cm->get_option("--sigma")->count() > 0, compare_json);
  if (app.got_subcommand(kk))
    return cmd_kk(kk_input, kk_output, kk_grid_min, kk_grid_max, kk_grid_points);
  if (app.got_subcommand(va)) return cmd_validate(o, validate_json);
  return 2;  // unreachable with require_subcommand(1)
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NonConvergence& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
