#include "eitcav/validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <random>

#include "eitcav/dynamics.hpp"
#include "eitcav/errors.hpp"
#include "eitcav/fullsim.hpp"
#include "eitcav/simd.hpp"
#include "eitcav/spectra.hpp"
#include "eitcav/susceptibility.hpp"
#include "kernels/kernels.hpp"

namespace eitcav {
namespace {

double rel_err(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

double max_over_grid(const std::vector<double>& grid, const std::function<double(double)>& f) {
  double worst = 0.0;
  for (double d : grid) worst = std::max(worst, f(d));
  return worst;
}

struct Suite {
  std::vector<CheckResult> results;

  void add(const std::string& name, double tolerance, const std::function<double(std::string&)>& body) {
    const auto start = std::chrono::steady_clock::now();
    CheckResult r{name, false, 0.0, tolerance, "", 0.0};
    try {
      r.value = body(r.detail);
      r.passed = r.value <= tolerance;
    } catch (const std::exception& e) {
      r.detail = std::string("error: ") + e.what();
      r.value = std::numeric_limits<double>::infinity();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    results.push_back(std::move(r));
  }
};

double kernel_equivalence(std::string& detail) {
  using namespace kernels;
  if (!simd::available(simd::Backend::kAvx2)) {
    detail = "only the scalar backend is available";
    return 0.0;
  }
#if defined(EITCAV_HAVE_AVX2)
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  double worst = 0.0;
  for (std::size_t n : {1u, 3u, 4u, 7u, 64u, 129u}) {
    std::vector<double> w(n), v(n);
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = 0.5 + 0.5 * U(rng);
      v[i] = 0.5 + 0.5 * U(rng);
    }
    const MobiusCoeffs c{{U(rng), U(rng)}, {U(rng), U(rng)}, {2.0 + U(rng), U(rng)}, {U(rng), U(rng)}};
    worst = std::max(worst, rel_err(avx2::mobius_sum(w.data(), v.data(), n, c), scalar::mobius_sum(w.data(), v.data(), n, c)));

    std::vector<double> y(kBlocks * n), d1(y.size()), d2(y.size()), cp(n), cc(n), cs(n), fp(n), fc(n), fs(n);
    for (auto& x : y) x = U(rng);
    for (std::size_t i = 0; i < n; ++i) {
      cp[i] = U(rng), cc[i] = U(rng), cs[i] = U(rng), fp[i] = U(rng), fc[i] = U(rng), fs[i] = U(rng);
    }
    const ShellCouplings sc{cp.data(), cc.data(), cs.data(), fp.data(), fc.data(), fs.data(), n};
    const BlochRates r{70.0, 69.0, 0.004, 70.0, 70.0, 138.0, 1.0, -0.5, 2.0};
    const auto s1 = scalar::shell_rhs(y.data(), d1.data(), sc, {0.3, 0.1}, {2.0, -1.0}, {0.5, 0.2}, r);
    const auto s2 = avx2::shell_rhs(y.data(), d2.data(), sc, {0.3, 0.1}, {2.0, -1.0}, {0.5, 0.2}, r);
    double scale = 0.0;
    for (double x : d1) scale = std::max(scale, std::abs(x));
    for (std::size_t i = 0; i < y.size(); ++i) worst = std::max(worst, std::abs(d1[i] - d2[i]) / scale);
    worst = std::max({worst, std::abs(s1.p - s2.p) / std::max(std::abs(s1.p), 1.0),
                      std::abs(s1.c - s2.c) / std::max(std::abs(s1.c), 1.0),
                      std::abs(s1.s - s2.s) / std::max(std::abs(s1.s), 1.0)});
  }
  detail = "scalar vs avx2, random inputs";
  return worst;
#else
  return 0.0;
#endif
}

}  // namespace

std::vector<CheckResult> run_validation(int threads) {
  Suite s;
  const auto grid = default_grid();
  const auto eit_all = presets::eit_spectrum(Geometry::kAllCavityDelocalized);
  const auto eit_std = presets::eit_spectrum(Geometry::kStandard);
  const auto eit_loc = presets::eit_spectrum(Geometry::kAllCavityLocalized);
  const auto sw_all = presets::switching_spectrum(Geometry::kAllCavityDelocalized);
  const auto sw_std = presets::switching_spectrum(Geometry::kStandard);

  s.add("chi_eit_all vs radial quadrature (64 nodes)", 1e-8, [&](std::string& d) {
    d = "max relative error over 2001 detunings";
    return max_over_grid(grid, [&](double x) { return rel_err(chi_eit_all(x, eit_all), chi_quadrature(x, eit_all, 64)); });
  });
  s.add("chi_sw_all vs radial quadrature (64 nodes)", 1e-8, [&](std::string& d) {
    d = "max relative error over 2001 detunings";
    return max_over_grid(grid, [&](double x) { return rel_err(chi_sw_all(x, sw_all), chi_quadrature(x, sw_all, 64)); });
  });
  s.add("chi_eit_localized vs 2-D quadrature (32x32 nodes)", 1e-6, [&](std::string& d) {
    d = "max relative error over 2001 detunings";
    return max_over_grid(grid,
                         [&](double x) { return rel_err(chi_eit_localized(x, eit_loc), chi_quadrature(x, eit_loc, 32)); });
  });
  s.add("single-shell quadrature vs chi_sw_standard", 1e-13, [&](std::string& d) {
    d = "max relative error over 2001 detunings";
    return max_over_grid(grid, [&](double x) {
      return rel_err(chi_quadrature(x, sw_std, RadialGrid::single_shell()), chi_sw_standard(x, sw_std));
    });
  });
  s.add("reduction chain (switching -> EIT -> two-level)", 1e-12, [&](std::string& d) {
    d = "Omega_s = 0 and Omega_c = 0 limits, all geometries";
    double worst = 0.0;
    for (auto g : {Geometry::kAllCavityDelocalized, Geometry::kStandard, Geometry::kAllCavityLocalized}) {
      auto p = presets::eit_spectrum(g);
      auto q = p;
      q.drive.omega_c = 0.0;
      for (double x : grid) {
        if (g != Geometry::kAllCavityLocalized) {
          const cplx sw = g == Geometry::kStandard ? chi_sw_standard(x, p) : chi_sw_all(x, p);
          const cplx eit = g == Geometry::kStandard ? chi_eit_standard(x, p) : chi_eit_all(x, p);
          worst = std::max(worst, rel_err(sw, eit));
        }
        const cplx eit0 = g == Geometry::kStandard ? chi_eit_standard(x, q)
                          : g == Geometry::kAllCavityDelocalized ? chi_eit_all(x, q)
                                                                 : chi_eit_localized(x, q);
        worst = std::max(worst, rel_err(eit0, chi_two_level(x, q)));
      }
    }
    return worst;
  });
  s.add("EIT conjugation symmetry chi(-D) = -conj chi(D)", 1e-12, [&](std::string& d) {
    d = "all three EIT forms";
    double worst = 0.0;
    for (double x : grid) {
      worst = std::max(worst, rel_err(chi_eit_all(-x, eit_all), -std::conj(chi_eit_all(x, eit_all))));
      worst = std::max(worst, rel_err(chi_eit_standard(-x, eit_std), -std::conj(chi_eit_standard(x, eit_std))));
      worst = std::max(worst, rel_err(chi_eit_localized(-x, eit_loc), -std::conj(chi_eit_localized(x, eit_loc))));
    }
    return worst;
  });
  s.add("passive medium (Im chi >= 0) and T + R <= 1", 1e-12, [&](std::string& d) {
    d = "all closed forms, reflection parameter set";
    double worst = 0.0;
    for (const auto& p : {eit_all, eit_std, eit_loc, sw_all, sw_std}) {
      auto q = p;
      q.cavity.kappa_H = from_mhz(1.5);
      q.cavity.kappa_L = from_mhz(0.3);
      q.cavity.kappa_A = from_mhz(0.4);
      for (double x : grid) {
        const cplx c = chi(x, q);
        worst = std::max(worst, -c.imag());
        worst = std::max(worst, transmission(x, c, q) + reflection(x, c, q) - 1.0);
      }
    }
    return std::max(worst, 0.0);
  });
  s.add("SIMD kernel equivalence", 1e-13, kernel_equivalence);

  const std::vector<double> times = [] {
    std::vector<double> t;
    for (int i = 1; i <= 200; ++i) t.push_back(0.25 * i);
    return t;
  }();
  s.add("dynamics: time domain vs Laplace inversion (standard)", 1e-6, [&](std::string& d) {
    d = "max |dT_norm| over 0.25..50 us";
    return cross_check(times, eit_std, 1.0).max_abs_diff;
  });
  s.add("dynamics: time domain vs Laplace inversion (all-cavity)", 1e-6, [&](std::string& d) {
    d = "max |dT_norm| over 0.25..50 us";
    return cross_check(times, eit_all, 1.0).max_abs_diff;
  });
  s.add("dynamics: long-time limit vs steady-state spectrum", 1e-8, [&](std::string& d) {
    d = "standard geometry, t = 400 us";
    const auto tr = invert_laplace({400.0}, eit_std, InversionMethod::kTimeDomain);
    return std::abs(tr.T_norm.back() - normalized_transmission(0.0, chi(0.0, eit_std), eit_std));
  });

  s.add("fullsim weak probe vs analytic T_norm (standard EIT)", 0.01, [&](std::string& d) {
    auto p = presets::low_light_switching();
    p.drive.a_p_in = input_for_photons(p, 0.01);
    const auto r = steady_state(p);
    const double analytic = normalized_transmission(0.0, chi(0.0, p), p);
    d = "fullsim " + std::to_string(r.T_norm) + ", analytic " + std::to_string(analytic);
    return std::abs(r.T_norm / analytic - 1.0);
  });
  s.add("fullsim trace conservation", 1e-8, [&](std::string& d) {
    auto p = presets::low_light_switching();
    const auto sched = PulseSchedule::from_params(p);
    std::vector<double> ts;
    for (int i = 1; i <= 50; ++i) ts.push_back(1.0 * i);
    const auto traj = integrate(FullsimModel(p).ground_state(), sched, 50.0, p, ts);
    double worst = 0.0;
    for (const auto& pt : traj) worst = std::max(worst, trace_error(pt.state));
    d = "max over 50 us, one probe photon";
    return worst;
  });
  (void)threads;
  return s.results;
}

bool print_validation(std::ostream& out, const std::vector<CheckResult>& results) {
  bool all = true;
  for (const auto& r : results) {
    all = all && r.passed;
    out << (r.passed ? "PASS " : "FAIL ") << std::left << std::setw(58) << r.name << " value=" << std::setprecision(3)
        << std::scientific << r.value << " tol=" << r.tolerance << std::defaultfloat << " (" << std::fixed
        << std::setprecision(2) << r.seconds << " s)" << std::defaultfloat;
    if (!r.detail.empty()) out << "  " << r.detail;
    out << '\n';
  }
  out << (all ? "all checks passed" : "some checks FAILED") << " (" << results.size() << " checks)\n";
  return all;
}

}  // namespace eitcav
