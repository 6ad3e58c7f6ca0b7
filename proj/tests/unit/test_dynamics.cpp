#include <doctest.h>

#include <cmath>
#include <sstream>

#include "eitcav/dynamics.hpp"
#include "eitcav/errors.hpp"
#include "eitcav/spectra.hpp"
#include "eitcav/susceptibility.hpp"

using namespace eitcav;

namespace {

SystemParams empty_cavity() {
  auto p = presets::eit_spectrum();
  p.ensemble.g_p_sqrt_N = 0.0;
  p.drive.omega_c = 0.0;
  return p;
}

}  // namespace

TEST_CASE("empty cavity fills as (1 - exp(-kappa t))^2") {
  const auto p = empty_cavity();
  const double k = derived(p).kappa;
  const auto t = linspace(0.0, 6.0 / k, 61);
  for (auto m : {InversionMethod::kTimeDomain, InversionMethod::kNumericInversion}) {
    const auto tr = invert_laplace(t, p, m);
    REQUIRE(tr.T_norm.size() == t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double e = 1.0 - std::exp(-k * t[i]);
      CHECK(tr.T_norm[i] == doctest::Approx(e * e).epsilon(1e-7).scale(1.0));
    }
  }
}

TEST_CASE("empty cavity build-up time") {
  const auto p = empty_cavity();
  const double k = derived(p).kappa;
  const auto tr = invert_laplace(linspace(0.0, 20.0 / k, 4001), p, InversionMethod::kTimeDomain);
  const double expect = -std::log(1.0 - std::sqrt(1.0 - std::exp(-1.0))) / k;
  CHECK(buildup_time(tr) == doctest::Approx(expect).epsilon(1e-4));
  CHECK(time_to_fraction(tr, 0.9) == doctest::Approx(-std::log(1.0 - std::sqrt(0.9)) / k).epsilon(1e-4));
}

TEST_CASE("a trace that has not settled is rejected") {
  const auto p = empty_cavity();
  const double k = derived(p).kappa;
  const auto tr = invert_laplace(linspace(0.0, 0.5 / k, 51), p, InversionMethod::kTimeDomain);
  CHECK_THROWS_AS(buildup_time(tr), NotConvergedError);
}

TEST_CASE("long-time limit matches the steady spectrum") {
  const auto p = presets::eit_spectrum(Geometry::kStandard);
  const auto tr = invert_laplace({0.0, 400.0}, p, InversionMethod::kTimeDomain);
  CHECK(tr.T_norm.front() == 0.0);
  CHECK(tr.T_norm.back() == doctest::Approx(normalized_transmission(0.0, chi(0.0, p), p)).epsilon(1e-8));
}

TEST_CASE("all-cavity final value matches the susceptibility on the same grid") {
  // Shells near the beam edge have slow dark-state poles, so the time-domain
  // approach to the plateau is algebraic; compare through s -> 0 instead.
  const auto p = presets::eit_spectrum(Geometry::kAllCavityDelocalized);
  const auto grid = dynamics_grid(p);
  const cplx s = 1e-10;
  const double T = std::norm(laplace_amplitude(s, p, grid) / laplace_amplitude(s, empty_cavity()));
  CHECK(T == doctest::Approx(normalized_transmission(0.0, chi_quadrature(0.0, p, grid), p)).epsilon(1e-6));
}

TEST_CASE("final value of the Laplace amplitude") {
  const auto p = presets::eit_spectrum(Geometry::kStandard);
  const double k = derived(p).kappa;
  const cplx s = 1e-9;
  const cplx a_inf = s * laplace_amplitude(s, p);
  const cplx empty = s * laplace_amplitude(s, empty_cavity());
  const double ratio = std::norm(a_inf / empty);
  CHECK(ratio == doctest::Approx(normalized_transmission(0.0, chi(0.0, p), p)).epsilon(1e-6));
  CHECK(std::abs(empty) > 0.0);
  CHECK(k > 0.0);
}

TEST_CASE("both methods agree") {
  for (auto g : {Geometry::kStandard, Geometry::kAllCavityDelocalized}) {
    const auto p = presets::eit_spectrum(g);
    const auto r = cross_check(linspace(0.0, 40.0, 201), p, 1e-6);
    CHECK(r.max_abs_diff < 1e-6);
  }
}

TEST_CASE("cross-check failure is reported") {
  const auto p = presets::eit_spectrum(Geometry::kAllCavityDelocalized);
  CHECK_THROWS_AS(cross_check(linspace(0.0, 40.0, 201), p, 0.0), CrossCheckError);
}

TEST_CASE("dominant pole approaches -kappa_EIT deep in the adiabatic regime") {
  auto p = presets::eit_spectrum(Geometry::kStandard);
  p.ensemble.g_p_sqrt_N = from_mhz(50.0);
  const double k_eit = eit_linewidth(p, LinewidthMethod::kAnalyticStandard);
  const cplx s = dominant_pole(p, dynamics_grid(p));
  CHECK(std::abs(s.imag()) < 1e-6 * k_eit);
  CHECK(-s.real() == doctest::Approx(k_eit).epsilon(0.03));
}

TEST_CASE("fitted build-up rate equals the dominant pole in the standard geometry") {
  const auto p = presets::eit_spectrum(Geometry::kStandard);
  const cplx s = dominant_pole(p, dynamics_grid(p));
  const auto tr = invert_laplace(linspace(0.0, 60.0, 3001), p, InversionMethod::kTimeDomain);
  const double T_inf = normalized_transmission(0.0, chi(0.0, p), p);
  const auto fit = fit_exponential(tr, T_inf);
  CHECK(fit.points > 10);
  CHECK(fit.rate == doctest::Approx(-s.real()).epsilon(0.02));
}

TEST_CASE("time grid must start at zero and increase") {
  const auto p = presets::eit_spectrum();
  CHECK_THROWS_AS(invert_laplace({1.0, 0.5}, p, InversionMethod::kTimeDomain), PreconditionError);
  CHECK_THROWS_AS(invert_laplace({-1.0, 0.5}, p, InversionMethod::kTimeDomain), PreconditionError);
}

TEST_CASE("dynamics require resonant control") {
  auto p = presets::eit_spectrum();
  p.detuning.delta_c = 1.0;
  CHECK_THROWS(invert_laplace({0.0, 1.0}, p, InversionMethod::kTimeDomain));
}

TEST_CASE("trace CSV") {
  std::ostringstream os;
  write_csv(os, TimeTrace{{0.0, 0.5}, {0.0, 0.25}});
  CHECK(os.str() == "t_us,T_norm\n0,0\n0.5,0.25\n");
}
