#include "eitcav/run.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <json.hpp>

#include "eitcav/csv.hpp"
#include "eitcav/dynamics.hpp"
#include "eitcav/errors.hpp"
#include "eitcav/fullsim.hpp"
#include "eitcav/parallel.hpp"
#include "eitcav/simd.hpp"
#include "eitcav/spectra.hpp"
#include "eitcav/susceptibility.hpp"
#include "eitcav/validation.hpp"

#ifndef EITCAV_VERSION
#define EITCAV_VERSION "0.0.0"
#endif

namespace eitcav {
namespace {

using json = nlohmann::ordered_json;

// Non-finite values are written as null.
json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json params_json(const SystemParams& p) {
  const auto& a = p.atomic;
  const auto& c = p.cavity;
  const auto& d = p.detuning;
  return {
      {"units", "MHz_linear"},
      {"atomic",
       {{"g_p", to_mhz(a.g_p)},
        {"g_c", to_mhz(a.g_c)},
        {"g_s", to_mhz(a.g_s)},
        {"gamma_31", to_mhz(a.gamma_31)},
        {"gamma_32", to_mhz(a.gamma_32)},
        {"gamma_42", to_mhz(a.gamma_42)},
        {"gamma_0", to_mhz(a.gamma_0)}}},
      {"cavity",
       {{"kappa_H", to_mhz(c.kappa_H)},
        {"kappa_L", to_mhz(c.kappa_L)},
        {"kappa_A", to_mhz(c.kappa_A)},
        {"tau", c.tau},
        {"reflection_port", c.reflection_port == ReflectionPort::kHighMirror ? "kappa_H" : "kappa_L"}}},
      {"drive",
       {{"omega_c", to_mhz(p.drive.omega_c)},
        {"omega_s", to_mhz(p.drive.omega_s)},
        {"a_p_in", {p.drive.a_p_in.real(), p.drive.a_p_in.imag()}}}},
      {"detuning",
       {{"delta", to_mhz(d.delta)},
        {"delta_c", to_mhz(d.delta_c)},
        {"delta_s", to_mhz(d.delta_s)},
        {"delta_p_c", to_mhz(d.delta_p_c)},
        {"delta_c_c", to_mhz(d.delta_c_c)},
        {"delta_s_c", to_mhz(d.delta_s_c)}}},
      {"ensemble", {{"g_p_sqrt_N", to_mhz(p.ensemble.g_p_sqrt_N)}, {"geometry", to_string(p.ensemble.geometry)}}},
  };
}

json derived_json(const SystemParams& p) {
  const auto r = derived(p);
  return {{"gamma_MHz", to_mhz(r.gamma)},
          {"gamma_s_MHz", to_mhz(r.gamma_s)},
          {"kappa_MHz", to_mhz(r.kappa)},
          {"N", num(r.N)},
          {"cooperativity", num(r.cooperativity)},
          {"gbar_p_MHz", to_mhz(r.gbar_p)},
          {"gbar_c_MHz", to_mhz(r.gbar_c)},
          {"gbar_s_MHz", to_mhz(r.gbar_s)}};
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

ChiFunction chi_source(const SpectrumBlock& s) {
  switch (s.chi) {
    case ChiSource::kQuadrature: {
      const int n = s.quadrature_nodes;
      return [n](double d, const SystemParams& p) { return chi_quadrature(d, p, n); };
    }
    case ChiSource::kTwoLevel:
      return [](double d, const SystemParams& p) { return chi_two_level(d, p); };
    case ChiSource::kClosedForm:
      break;
  }
  return {};
}

json peaks_json(const std::vector<Peak>& peaks) {
  json out = json::array();
  for (const auto& pk : peaks) out.push_back({{"delta_MHz", to_mhz(pk.delta)}, {"value", pk.value}});
  return out;
}

std::vector<double> spectrum_grid(const SpectrumBlock& s) {
  auto grid = linspace(s.min, s.max, s.points);
  if (s.dense_insert) {
    auto dense = linspace(std::max(s.min, from_mhz(-1.0)), std::min(s.max, from_mhz(1.0)), 2001);
    grid.insert(grid.end(), dense.begin(), dense.end());
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  }
  return grid;
}

json run_spectrum(const RunConfig& cfg, const RunOptions& opt, const char* file, json& outputs) {
  const auto table = scan(spectrum_grid(cfg.spectrum), cfg.params, chi_source(cfg.spectrum), opt.threads);
  auto out = open_output(opt.out_dir / file);
  write_csv(out, table);
  outputs.push_back(file);

  json res = {{"rows", table.rows.size()},
              {"peaks_T_norm", peaks_json(find_peaks(table, Observable::kTNorm, 1e-3))}};
  const auto p0 = cfg.params;
  const ChiFunction fn = chi_source(cfg.spectrum);
  const cplx c0 = fn ? fn(0.0, p0) : chi(0.0, p0);
  res["at_resonance"] = {{"T", num(transmission(0.0, c0, p0))},
                         {"R", num(reflection(0.0, c0, p0))},
                         {"T_norm", num(normalized_transmission(0.0, c0, p0))}};
  if (p0.drive.omega_c > 0.0 && p0.drive.omega_s == 0.0 && cfg.spectrum.chi == ChiSource::kClosedForm) {
    try {
      res["eit_hwhm_MHz"] = to_mhz(eit_linewidth(p0, LinewidthMethod::kNumericHWHM));
    } catch (const Error& e) {
      res["eit_hwhm_MHz"] = nullptr;
      res["eit_hwhm_note"] = e.what();
    }
  }
  return res;
}

json run_dynamics(const RunConfig& cfg, const RunOptions& opt, json& outputs) {
  const auto& d = cfg.dynamics;
  const auto t = linspace(0.0, d.t_end, d.points);
  const auto grid = dynamics_grid(cfg.params, d.radial_nodes);
  TimeTrace main;
  json res;
  if (d.method == DynamicsMethod::kBoth) {
    const auto td = invert_laplace(t, cfg.params, InversionMethod::kTimeDomain, grid);
    const auto ni = invert_laplace(t, cfg.params, InversionMethod::kNumericInversion, grid);
    double worst = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) worst = std::max(worst, std::abs(td.T_norm[i] - ni.T_norm[i]));
    res["cross_check_max_abs_diff"] = worst;
    auto out = open_output(opt.out_dir / "dynamics_inversion.csv");
    write_csv(out, ni);
    outputs.push_back("dynamics_inversion.csv");
    main = td;
    if (!(worst <= d.cross_check_tol)) {
      auto o2 = open_output(opt.out_dir / "dynamics.csv");
      write_csv(o2, main);
      outputs.push_back("dynamics.csv");
      throw CrossCheckError("time-domain and inverted traces differ by " + csv::format(worst) + " > " +
                            csv::format(d.cross_check_tol));
    }
  } else {
    main = invert_laplace(t, cfg.params,
                          d.method == DynamicsMethod::kTimeDomain ? InversionMethod::kTimeDomain
                                                                  : InversionMethod::kNumericInversion,
                          grid);
  }
  auto out = open_output(opt.out_dir / "dynamics.csv");
  write_csv(out, main);
  outputs.push_back("dynamics.csv");

  res["plateau_T_norm"] = main.T_norm.back();
  try {
    res["buildup_time_us"] = buildup_time(main);
  } catch (const NotConvergedError& e) {
    res["buildup_time_us"] = nullptr;
    res["buildup_note"] = e.what();
  }
  try {
    res["t90_us"] = time_to_fraction(main, 0.9);
  } catch (const Error&) {
    res["t90_us"] = nullptr;
  }
  return res;
}

json run_sweep(const RunConfig& cfg, const RunOptions& opt, json& outputs) {
  const auto& s = cfg.sweep;
  json res;
  if (!s.n_s.empty()) {
    const auto rows = switching_sweep(s.n_s, s.delta_s, cfg.params, s.fullsim, opt.threads);
    auto out = open_output(opt.out_dir / "switch_sweep.csv");
    write_sweep_csv(out, rows);
    outputs.push_back("switch_sweep.csv");
    res["points"] = rows.size();
  }
  if (s.find_n_star) {
    const auto n = minimal_switching_photons(s.delta_s, cfg.params, s.fullsim);
    res["n_star"] = n.n_star;
    res["baseline_T_norm"] = n.baseline;
    res["estimate_gamma0"] = n.estimate_gamma0;
    res["estimate_kappa_eit"] = n.estimate_kappa_eit;
    res["evaluations"] = n.evaluations;
  }
  return res;
}

}  // namespace

const char* version() { return EITCAV_VERSION; }

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return kExitConfig;
  if (dynamic_cast<const NotConvergedError*>(&e)) return kExitNotConverged;
  return kExitNumeric;
}

int run(const RunConfig& cfg, const RunOptions& options, std::ostream& log) {
  const auto start = std::chrono::steady_clock::now();
  RunOptions opt = options;
  opt.threads = resolve_threads(options.threads);
  std::filesystem::create_directories(opt.out_dir);

  for (const auto& w : cfg.warnings) log << "warning: " << w << '\n';

  json outputs = json::array();
  json results;
  int code = kExitOk;
  switch (cfg.scenario) {
    case Scenario::kSpectrum:
      results = run_spectrum(cfg, opt, "spectrum.csv", outputs);
      break;
    case Scenario::kReflection:
      results = run_spectrum(cfg, opt, "reflection.csv", outputs);
      break;
    case Scenario::kDynamics:
      results = run_dynamics(cfg, opt, outputs);
      break;
    case Scenario::kSwitchSweep:
      results = run_sweep(cfg, opt, outputs);
      break;
    case Scenario::kValidate: {
      const auto checks = run_validation(opt.threads);
      const bool ok = print_validation(log, checks);
      results["checks"] = json::array();
      for (const auto& c : checks) {
        results["checks"].push_back({{"name", c.name},
                                     {"passed", c.passed},
                                     {"value", num(c.value)},
                                     {"tolerance", c.tolerance},
                                     {"detail", c.detail}});
      }
      results["all_passed"] = ok;
      code = ok ? kExitOk : kExitNumeric;
      break;
    }
  }

  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  json manifest = {{"tool", "eitcav"},
                   {"version", version()},
                   {"scenario", to_string(cfg.scenario)},
                   {"simd_backend", simd::to_string(simd::active_backend())},
                   {"threads", opt.threads},
                   {"wall_time_s", wall},
                   {"parameters", params_json(cfg.params)},
                   {"derived", derived_json(cfg.params)},
                   {"outputs", outputs},
                   {"results", results},
                   {"warnings", cfg.warnings}};
  auto out = open_output(opt.out_dir / "manifest.json");
  out << manifest.dump(2) << '\n';
  log << to_string(cfg.scenario) << ": wrote " << outputs.size() << " table(s) and manifest.json to "
      << opt.out_dir.string() << " in " << wall << " s\n";
  return code;
}

}  // namespace eitcav
