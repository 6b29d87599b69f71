#include "temode/pipeline.h"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "temode/constants.h"
#include "temode/optical.h"

namespace temode {
namespace {

using nlohmann::json;

template <class... Ts>
struct Visitor : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Visitor(Ts...) -> Visitor<Ts...>;

// Lossless double -> text; strtod of the output reproduces the exact value,
// which both the fingerprint and the CSV round-trip rely on.
std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string canonical_settings(const PlateGeometry& g,
                               const QuadratureSettings& s, double lo,
                               double hi, const std::string& model) {
  return "a=" + fmt(g.separation_a) + ";T=" + fmt(g.temperature_T) +
         ";d=" + fmt(g.film_thickness_d) + ";rel=" + fmt(s.rel_tol) +
         ";abs=" + fmt(s.abs_tol) + ";sub=" + std::to_string(s.max_subdivisions) +
         ";cut=" + fmt(s.c2_cutoff_eps) +
         ";ppd=" + std::to_string(s.outer_points_per_decade) +
         ";lo=" + fmt(lo) + ";hi=" + fmt(hi) + ";model=" + model;
}

std::string hex16(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
  return buf;
}

void atomic_write(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  fs::rename(tmp, target);
}

const char* prefactor_name(PrefactorMode m) {
  return m == PrefactorMode::PiSquared ? "pi_squared" : "pi";
}

PrefactorMode prefactor_from_name(const std::string& name) {
  if (name == "pi_squared") return PrefactorMode::PiSquared;
  if (name == "pi") return PrefactorMode::Pi;
  throw std::runtime_error("unknown prefactor_mode '" + name + "'");
}

}  // namespace

std::string describe(const BoundaryModel& model) {
  return std::visit(
      Visitor{[](const PerfectConductor&) {
                return std::string("perfect_conductor");
              },
              [](const Dielectric& d) {
                return "dielectric amp1=" + fmt(d.params.amp1) +
                       " amp2=" + fmt(d.params.amp2) +
                       " omega0=" + fmt(d.params.omega0);
              },
              [](const SurfaceImpedance& s) {
                return "surface_impedance sigma=" + fmt(s.cond.sigma) +
                       " mu=" + fmt(s.cond.mu) +
                       " phase=" + fmt(s.phase_sign);
              }},
      model);
}

std::uint64_t settings_fingerprint(const PlateGeometry& geom,
                                   const QuadratureSettings& settings,
                                   double omega_lo, double omega_hi,
                                   const std::string& model_descriptor) {
  return fnv1a(canonical_settings(geom, settings, omega_lo, omega_hi,
                                  model_descriptor));
}

Dielectric default_dielectric() {
  DrudeLikeParams p{};
  p.amp1 = kk_closure_amp1(p);
  return Dielectric{p};
}

SpectrumResult sweep(const BoundaryModel& model, const PlateGeometry& geom,
                     double omega_lo, double omega_hi,
                     const QuadratureSettings& settings) {
  if (!(omega_lo > 0.0) || !(omega_hi > omega_lo))
    throw std::invalid_argument("sweep: need 0 < omega_lo < omega_hi");

  SpectrumResult r;
  r.model = describe(model);
  r.geometry = geom;
  r.settings = settings;
  r.omega_lo = omega_lo;
  r.omega_hi = omega_hi;
  r.fingerprint =
      settings_fingerprint(geom, settings, omega_lo, omega_hi, r.model);
  r.omega = log_grid(omega_lo, omega_hi, settings.outer_points_per_decade);
  r.samples.resize(r.omega.size());

  const std::size_t n = r.omega.size();
  auto eval_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      try {
        r.samples[i] = spectral_density(model, r.omega[i], geom, settings);
      } catch (const NonConvergence& e) {
        throw NonConvergence("sweep aborted at omega = " + fmt(r.omega[i]) +
                                 " s^-1: " + e.what(),
                             e.best_estimate);
      }
    }
  };

  unsigned workers = std::thread::hardware_concurrency();
  if (workers > 8) workers = 8;
  if (workers <= 1 || n < 64) {
    eval_range(0, n);
  } else {
    // each worker owns a contiguous index block, so output order is fixed
    // regardless of scheduling; the lowest failing block wins error reporting
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::size_t b = std::min(n, w * chunk);
      const std::size_t e = std::min(n, b + chunk);
      pool.emplace_back([&, w, b, e] {
        try {
          eval_range(b, e);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& err : errors)
      if (err) std::rethrow_exception(err);
  }

  std::vector<double> f1(n), f2(n);
  for (std::size_t i = 0; i < n; ++i) {
    f1[i] = r.samples[i].f_c1;
    f2[i] = r.samples[i].f_c2;
  }
  r.total_c1 = integrate_log_samples(r.omega, f1).value;
  r.total_c2 = integrate_log_samples(r.omega, f2).value;
  return r;
}

RatioReport ratio_report(const PlateGeometry& geom,
                         const QuadratureSettings& settings,
                         const Dielectric& dielectric,
                         const SurfaceImpedance& impedance,
                         std::array<double, 2> dielectric_range,
                         std::array<double, 2> impedance_range) {
  RatioReport rep;
  rep.geometry = geom;
  rep.settings = settings;
  rep.dielectric_range = dielectric_range;
  rep.impedance_range = impedance_range;
  rep.dielectric_model = describe(dielectric);
  rep.impedance_model = describe(impedance);

  const SpectrumResult pc = sweep(PerfectConductor{}, geom,
                                  rep.dielectric_range[0],
                                  rep.dielectric_range[1], settings);
  const SpectrumResult di = sweep(dielectric, geom, rep.dielectric_range[0],
                                  rep.dielectric_range[1], settings);
  const SpectrumResult im = sweep(impedance, geom, rep.impedance_range[0],
                                  rep.impedance_range[1], settings);
  const SpectrumResult pc_matched = sweep(PerfectConductor{}, geom,
                                          rep.impedance_range[0],
                                          rep.impedance_range[1], settings);

  if (pc.total_c1 == 0.0 || pc_matched.total_c1 == 0.0 || im.total_c1 == 0.0)
    throw std::runtime_error("ratio_report: zero denominator");

  rep.r_dielectric_c1 = di.total_c1 / pc.total_c1;
  rep.r_dielectric_c2 = di.total_c2 / pc.total_c1;
  rep.r_impedance_c2_over_c1 = im.total_c2 / im.total_c1;
  rep.r_impedance_total = (im.total_c1 + im.total_c2) / pc_matched.total_c1;

  rep.fingerprint = settings_fingerprint(
      geom, settings, rep.dielectric_range[0], rep.dielectric_range[1],
      rep.dielectric_model + "|" + rep.impedance_model + "|imp=[" +
          fmt(rep.impedance_range[0]) + "," + fmt(rep.impedance_range[1]) +
          "]");
  return rep;
}

double force_prefactor(PrefactorMode mode) {
  const double pi = std::numbers::pi;
  const double base =
      hbar / (pi * pi * c_light * c_light * c_light);  // PiSquared
  return mode == PrefactorMode::PiSquared ? base : base * pi;
}

double total_force(const SpectrumResult& result) {
  return (result.total_c1 + result.total_c2) *
         force_prefactor(result.prefactor_mode);
}

double ideal_te_reference(double separation_a) {
  if (!(separation_a > 0.0))
    throw std::invalid_argument("ideal_te_reference: separation must be > 0");
  const double pi = std::numbers::pi;
  const double a2 = separation_a * separation_a;
  return pi * pi * hbar * c_light / (480.0 * a2 * a2);
}

namespace {

std::string spectrum_metadata_block(const SpectrumResult& r) {
  std::ostringstream out;
  out << "# temode spectrum v1\n";
  out << "# model: " << r.model << "\n";
  out << "# separation_a_cm: " << fmt(r.geometry.separation_a) << "\n";
  out << "# temperature_K: " << fmt(r.geometry.temperature_T) << "\n";
  out << "# film_thickness_cm: " << fmt(r.geometry.film_thickness_d) << "\n";
  out << "# omega_lo: " << fmt(r.omega_lo) << "\n";
  out << "# omega_hi: " << fmt(r.omega_hi) << "\n";
  out << "# rel_tol: " << fmt(r.settings.rel_tol) << "\n";
  out << "# abs_tol: " << fmt(r.settings.abs_tol) << "\n";
  out << "# max_subdivisions: " << r.settings.max_subdivisions << "\n";
  out << "# c2_cutoff_eps: " << fmt(r.settings.c2_cutoff_eps) << "\n";
  out << "# outer_points_per_decade: " << r.settings.outer_points_per_decade
      << "\n";
  out << "# prefactor_mode: " << prefactor_name(r.prefactor_mode) << "\n";
  out << "# fingerprint: " << hex16(r.fingerprint) << "\n";
  out << "# total_c1: " << fmt(r.total_c1) << "\n";
  out << "# total_c2: " << fmt(r.total_c2) << "\n";
  return out.str();
}

double parse_double(const std::string& text, const std::string& where) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0')
    throw std::runtime_error(where + ": bad number '" + text + "'");
  return v;
}

SpectrumResult spectrum_from_json(const json& j, const std::string& path,
                                  std::string* warning);

SpectrumResult spectrum_from_csv(std::istream& in, const std::string& path,
                                 std::string* warning) {
  SpectrumResult r;
  std::map<std::string, std::string> meta;
  std::string line;
  int lineno = 0;
  bool header_seen = false;

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string at = path + ":" + std::to_string(lineno);
    if (line[0] == '#') {
      const auto colon = line.find(':', 1);
      if (colon == std::string::npos) continue;  // free-form comment
      std::string key = line.substr(1, colon - 1);
      std::string val = line.substr(colon + 1);
      auto strip = [](std::string& s) {
        const auto b = s.find_first_not_of(" \t");
        const auto e = s.find_last_not_of(" \t");
        s = b == std::string::npos ? "" : s.substr(b, e - b + 1);
      };
      strip(key);
      strip(val);
      meta[key] = val;
      continue;
    }
    if (!header_seen) {
      if (line != "omega,f_c1,f_c2")
        throw std::runtime_error(at + ": expected header 'omega,f_c1,f_c2'");
      header_seen = true;
      continue;
    }
    double vals[3];
    std::size_t pos = 0;
    for (int k = 0; k < 3; ++k) {
      const auto comma = line.find(',', pos);
      const bool last = k == 2;
      if (last != (comma == std::string::npos))
        throw std::runtime_error(at + ": expected three comma-separated values");
      const std::string field =
          line.substr(pos, last ? std::string::npos : comma - pos);
      vals[k] = parse_double(field, at);
      pos = last ? pos : comma + 1;
    }
    if (!r.omega.empty() && vals[0] <= r.omega.back())
      throw std::runtime_error(at + ": omega not strictly ascending");
    r.omega.push_back(vals[0]);
    r.samples.push_back({vals[1], vals[2]});
  }
  if (!header_seen)
    throw std::runtime_error(path + ": missing 'omega,f_c1,f_c2' header");

  auto need = [&](const char* key) -> const std::string& {
    const auto it = meta.find(key);
    if (it == meta.end())
      throw std::runtime_error(path + ": missing metadata key '" +
                               std::string(key) + "'");
    return it->second;
  };
  r.model = need("model");
  r.geometry.separation_a = parse_double(need("separation_a_cm"), path);
  r.geometry.temperature_T = parse_double(need("temperature_K"), path);
  r.geometry.film_thickness_d = parse_double(need("film_thickness_cm"), path);
  r.omega_lo = parse_double(need("omega_lo"), path);
  r.omega_hi = parse_double(need("omega_hi"), path);
  r.settings.rel_tol = parse_double(need("rel_tol"), path);
  r.settings.abs_tol = parse_double(need("abs_tol"), path);
  r.settings.max_subdivisions =
      static_cast<int>(parse_double(need("max_subdivisions"), path));
  r.settings.c2_cutoff_eps = parse_double(need("c2_cutoff_eps"), path);
  r.settings.outer_points_per_decade =
      static_cast<int>(parse_double(need("outer_points_per_decade"), path));
  r.prefactor_mode = prefactor_from_name(need("prefactor_mode"));
  r.total_c1 = parse_double(need("total_c1"), path);
  r.total_c2 = parse_double(need("total_c2"), path);

  const std::string stored = need("fingerprint");
  r.fingerprint = settings_fingerprint(r.geometry, r.settings, r.omega_lo,
                                       r.omega_hi, r.model);
  if (stored != hex16(r.fingerprint) && warning)
    *warning = path + ": stored fingerprint " + stored +
               " does not match settings (recomputed " + hex16(r.fingerprint) +
               "); file may have been edited";
  return r;
}

SpectrumResult spectrum_from_json(const json& j, const std::string& path,
                                  std::string* warning) {
  SpectrumResult r;
  r.model = j.at("model").get<std::string>();
  const json& g = j.at("geometry");
  r.geometry.separation_a = g.at("separation_a_cm").get<double>();
  r.geometry.temperature_T = g.at("temperature_K").get<double>();
  r.geometry.film_thickness_d = g.at("film_thickness_cm").get<double>();
  const json& rg = j.at("range");
  r.omega_lo = rg.at("omega_lo").get<double>();
  r.omega_hi = rg.at("omega_hi").get<double>();
  const json& s = j.at("settings");
  r.settings.rel_tol = s.at("rel_tol").get<double>();
  r.settings.abs_tol = s.at("abs_tol").get<double>();
  r.settings.max_subdivisions = s.at("max_subdivisions").get<int>();
  r.settings.c2_cutoff_eps = s.at("c2_cutoff_eps").get<double>();
  r.settings.outer_points_per_decade =
      s.at("outer_points_per_decade").get<int>();
  r.prefactor_mode =
      prefactor_from_name(j.at("prefactor_mode").get<std::string>());
  r.total_c1 = j.at("totals").at("c1").get<double>();
  r.total_c2 = j.at("totals").at("c2").get<double>();
  for (const json& row : j.at("samples")) {
    if (!row.is_array() || row.size() != 3)
      throw std::runtime_error(path + ": sample rows must be [omega,f_c1,f_c2]");
    const double w = row[0].get<double>();
    if (!r.omega.empty() && w <= r.omega.back())
      throw std::runtime_error(path + ": omega not strictly ascending");
    r.omega.push_back(w);
    r.samples.push_back({row[1].get<double>(), row[2].get<double>()});
  }
  const std::string stored = j.at("fingerprint").get<std::string>();
  r.fingerprint = settings_fingerprint(r.geometry, r.settings, r.omega_lo,
                                       r.omega_hi, r.model);
  if (stored != hex16(r.fingerprint) && warning)
    *warning = path + ": stored fingerprint " + stored +
               " does not match settings (recomputed " + hex16(r.fingerprint) +
               "); file may have been edited";
  return r;
}

}  // namespace

void save_spectrum_csv(const SpectrumResult& result, const std::string& path) {
  std::ostringstream out;
  out << spectrum_metadata_block(result);
  out << "omega,f_c1,f_c2\n";
  for (std::size_t i = 0; i < result.omega.size(); ++i)
    out << fmt(result.omega[i]) << ',' << fmt(result.samples[i].f_c1) << ','
        << fmt(result.samples[i].f_c2) << "\n";
  atomic_write(path, out.str());
}

void save_spectrum_json(const SpectrumResult& result, const std::string& path) {
  json j;
  j["format"] = "temode-spectrum-v1";
  j["model"] = result.model;
  j["geometry"] = {{"separation_a_cm", result.geometry.separation_a},
                   {"temperature_K", result.geometry.temperature_T},
                   {"film_thickness_cm", result.geometry.film_thickness_d}};
  j["range"] = {{"omega_lo", result.omega_lo}, {"omega_hi", result.omega_hi}};
  j["settings"] = {
      {"rel_tol", result.settings.rel_tol},
      {"abs_tol", result.settings.abs_tol},
      {"max_subdivisions", result.settings.max_subdivisions},
      {"c2_cutoff_eps", result.settings.c2_cutoff_eps},
      {"outer_points_per_decade", result.settings.outer_points_per_decade}};
  j["prefactor_mode"] = prefactor_name(result.prefactor_mode);
  j["fingerprint"] = hex16(result.fingerprint);
  j["totals"] = {{"c1", result.total_c1}, {"c2", result.total_c2}};
  json rows = json::array();
  for (std::size_t i = 0; i < result.omega.size(); ++i)
    rows.push_back({result.omega[i], result.samples[i].f_c1,
                    result.samples[i].f_c2});
  j["samples"] = std::move(rows);
  atomic_write(path, j.dump(2) + "\n");
}

SpectrumResult load_spectrum(const std::string& path, std::string* warning) {
  if (warning) warning->clear();
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  // sniff: JSON files start with '{'
  int first = in.peek();
  while (first == ' ' || first == '\n' || first == '\r' || first == '\t') {
    in.get();
    first = in.peek();
  }
  if (first == '{') {
    json j;
    try {
      in >> j;
    } catch (const json::parse_error& e) {
      throw std::runtime_error(path + ": " + e.what());
    }
    return spectrum_from_json(j, path, warning);
  }
  return spectrum_from_csv(in, path, warning);
}

void save_ratio_json(const RatioReport& report, const std::string& path) {
  json j;
  j["format"] = "temode-ratios-v1";
  j["ratios"] = {{"dielectric_c1", report.r_dielectric_c1},
                 {"dielectric_c2", report.r_dielectric_c2},
                 {"impedance_c2_over_c1", report.r_impedance_c2_over_c1},
                 {"impedance_total", report.r_impedance_total}};
  j["geometry"] = {{"separation_a_cm", report.geometry.separation_a},
                   {"temperature_K", report.geometry.temperature_T},
                   {"film_thickness_cm", report.geometry.film_thickness_d}};
  j["settings"] = {
      {"rel_tol", report.settings.rel_tol},
      {"abs_tol", report.settings.abs_tol},
      {"max_subdivisions", report.settings.max_subdivisions},
      {"c2_cutoff_eps", report.settings.c2_cutoff_eps},
      {"outer_points_per_decade", report.settings.outer_points_per_decade}};
  j["ranges"] = {{"dielectric", report.dielectric_range},
                 {"impedance", report.impedance_range}};
  j["models"] = {{"dielectric", report.dielectric_model},
                 {"impedance", report.impedance_model}};
  j["fingerprint"] = hex16(report.fingerprint);
  atomic_write(path, j.dump(2) + "\n");
}

RatioReport load_ratio(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  RatioReport r;
  const json& ra = j.at("ratios");
  r.r_dielectric_c1 = ra.at("dielectric_c1").get<double>();
  r.r_dielectric_c2 = ra.at("dielectric_c2").get<double>();
  r.r_impedance_c2_over_c1 = ra.at("impedance_c2_over_c1").get<double>();
  r.r_impedance_total = ra.at("impedance_total").get<double>();
  const json& g = j.at("geometry");
  r.geometry.separation_a = g.at("separation_a_cm").get<double>();
  r.geometry.temperature_T = g.at("temperature_K").get<double>();
  r.geometry.film_thickness_d = g.at("film_thickness_cm").get<double>();
  const json& s = j.at("settings");
  r.settings.rel_tol = s.at("rel_tol").get<double>();
  r.settings.abs_tol = s.at("abs_tol").get<double>();
  r.settings.max_subdivisions = s.at("max_subdivisions").get<int>();
  r.settings.c2_cutoff_eps = s.at("c2_cutoff_eps").get<double>();
  r.settings.outer_points_per_decade =
      s.at("outer_points_per_decade").get<int>();
  r.dielectric_range = j.at("ranges").at("dielectric").get<std::array<double, 2>>();
  r.impedance_range = j.at("ranges").at("impedance").get<std::array<double, 2>>();
  r.dielectric_model = j.at("models").at("dielectric").get<std::string>();
  r.impedance_model = j.at("models").at("impedance").get<std::string>();
  r.fingerprint = std::stoull(j.at("fingerprint").get<std::string>(), nullptr, 16);
  return r;
}

}  // namespace temode
