#include <doctest.h>

#include <array>
#include <cmath>
#include <random>
#include <sstream>

#include "eitcav/dynamics.hpp"
#include "eitcav/errors.hpp"
#include "eitcav/fullsim.hpp"
#include "eitcav/spectra.hpp"
#include "eitcav/susceptibility.hpp"

using namespace eitcav;

namespace {

using Mat = std::array<std::array<cplx, 4>, 4>;

Mat mul(const Mat& a, const Mat& b) {
  Mat c{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) c[i][j] += a[i][k] * b[k][j];
  return c;
}

Mat dagger(const Mat& a) {
  Mat c{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) c[i][j] = std::conj(a[j][i]);
  return c;
}

Mat op(int i, int j, cplx v = 1.0) {
  Mat m{};
  m[i][j] = v;
  return m;
}

Mat add(Mat a, const Mat& b, cplx s = 1.0) {
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) a[i][j] += s * b[i][j];
  return a;
}

// Master equation for one atom in the rotating frame, levels 1..4 at indices 0..3.
Mat lindblad(const Mat& rho, cplx P, cplx C, cplx S, const SystemParams& p) {
  const auto& a = p.atomic;
  const auto& d = p.detuning;
  Mat H{};
  H[2][2] = -d.delta;
  H[1][1] = -(d.delta - d.delta_c);
  H[3][3] = -(d.delta - d.delta_c + d.delta_s);
  H[2][0] = -P;
  H[0][2] = -std::conj(P);
  H[2][1] = -C;
  H[1][2] = -std::conj(C);
  H[3][1] = -S;
  H[1][3] = -std::conj(S);
  Mat out = add(mul(H, rho), mul(rho, H), -1.0);
  for (auto& row : out)
    for (auto& x : row) x *= cplx(0.0, -1.0);
  const Mat P34 = add(op(2, 2), op(3, 3));
  const std::pair<Mat, double> jumps[] = {{op(0, 2), a.gamma_31}, {op(1, 2), a.gamma_32}, {op(1, 3), a.gamma_42},
                                          {op(0, 0), a.gamma_0},  {op(1, 1), a.gamma_0},  {P34, a.gamma_0}};
  for (const auto& [L, rate] : jumps) {
    const Mat Ld = dagger(L), LdL = mul(Ld, L);
    out = add(out, mul(mul(L, rho), Ld), rate);
    out = add(out, add(mul(LdL, rho), mul(rho, LdL)), -0.5 * rate);
  }
  return out;
}

// s_ij stores rho_ji.
Mat to_rho(const ShellState& s) {
  Mat r{};
  r[0][0] = s.p11;
  r[1][1] = s.p22;
  r[2][2] = s.p33;
  r[3][3] = s.p44;
  const std::tuple<int, int, cplx> coh[] = {{0, 1, s.s12}, {0, 2, s.s13}, {0, 3, s.s14},
                                             {1, 2, s.s23}, {1, 3, s.s24}, {2, 3, s.s34}};
  for (const auto& [i, j, v] : coh) {
    r[j][i] = v;
    r[i][j] = std::conj(v);
  }
  return r;
}

SystemParams low_light(Geometry g, double photons) {
  auto p = presets::low_light_switching();
  p.ensemble.geometry = g;
  p.drive.a_p_in = input_for_photons(p, photons);
  return p;
}

SystemParams two_level(SystemParams p) {
  p.drive.omega_c = 0.0;
  p.atomic.gamma_31 += p.atomic.gamma_32;
  p.atomic.gamma_32 = 0.0;
  return p;
}

}  // namespace

TEST_CASE("mean-value equations match the single-atom master equation") {
  auto p = presets::low_light_switching();
  p.atomic.gamma_42 = from_mhz(9.0);
  p.atomic.gamma_31 = from_mhz(7.0);
  p.detuning.delta = 1.3;
  p.detuning.delta_c = -0.7;
  p.detuning.delta_s = 4.1;
  p.detuning.delta_p_c = 0.2;
  const auto d = derived(p);

  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  auto rc = [&] { return cplx(U(rng), U(rng)); };
  SystemState st;
  ShellState sh{0.4, 0.3, 0.2, 0.1, rc(), rc(), rc(), rc(), rc(), rc()};
  st.shells = {sh};
  st.a_p = rc();
  st.a_c = 3.0 * rc();
  st.a_s = 2.0 * rc();
  PulseSchedule none;
  const auto ds = derivative(st, none, 0.0, p).shells.at(0);

  const Mat ref = lindblad(to_rho(sh), d.gbar_p * st.a_p, d.gbar_c * st.a_c, d.gbar_s * st.a_s, p);
  const double tol = 1e-12 * 300.0;
  CHECK(std::abs(ds.p11 - ref[0][0].real()) < tol);
  CHECK(std::abs(ds.p22 - ref[1][1].real()) < tol);
  CHECK(std::abs(ds.p33 - ref[2][2].real()) < tol);
  CHECK(std::abs(ds.p44 - ref[3][3].real()) < tol);
  CHECK(std::abs(ds.s12 - ref[1][0]) < tol);
  CHECK(std::abs(ds.s13 - ref[2][0]) < tol);
  CHECK(std::abs(ds.s14 - ref[3][0]) < tol);
  CHECK(std::abs(ds.s23 - ref[2][1]) < tol);
  CHECK(std::abs(ds.s24 - ref[3][1]) < tol);
  CHECK(std::abs(ds.s34 - ref[3][2]) < tol);
}

TEST_CASE("cavity field equation") {
  auto p = presets::low_light_switching();
  p.detuning.delta_p_c = 0.3;
  const auto d = derived(p);
  SystemState st;
  st.shells = {ShellState{}};
  st.shells[0].s13 = {0.01, -0.02};
  st.a_p = {0.5, 0.2};
  PulseSchedule s;
  s.probe = {0.0, {1.5, 0.0}};
  const cplx da = derivative(st, s, 0.0, p).a_p;
  const double drive = std::sqrt(2 * p.cavity.kappa_H / p.cavity.tau);
  const cplx expect = -cplx(d.kappa, -0.3) * st.a_p + kI * 2.0 * d.N * d.gbar_p * st.shells[0].s13 + drive * 1.5;
  CHECK(std::abs(da - expect) < 1e-12 * std::abs(expect));
}

TEST_CASE("ground state without inputs is stationary") {
  const auto p = presets::low_light_switching();
  FullsimModel m(p);
  const auto y = m.pack(m.ground_state());
  std::vector<double> dy(y.size());
  m.derivative(y.data(), 0.0, PulseSchedule{}, dy.data());
  for (double x : dy) CHECK(x == 0.0);
}

TEST_CASE("excited state decays with the right branching") {
  auto p = presets::low_light_switching();
  p.atomic.gamma_31 = 3.0;
  p.atomic.gamma_32 = 1.0;
  SystemState st;
  st.shells = {ShellState{0.0, 0.0, 1.0, 0.0}};
  const auto ds = derivative(st, PulseSchedule{}, 0.0, p).shells[0];
  CHECK(ds.p33 == doctest::Approx(-4.0));
  CHECK(ds.p11 == doctest::Approx(3.0));
  CHECK(ds.p22 == doctest::Approx(1.0));
}

TEST_CASE("pack and unpack are inverse") {
  const auto p = presets::eit_spectrum();
  FullsimModel m(p, FullsimOptions{.radial_nodes = 5});
  CHECK(m.shells() == 5);
  double sum = 0.0;
  for (double w : m.shell_weight()) sum += w;
  CHECK(sum == doctest::Approx(1.0));
  auto st = m.ground_state();
  st.a_c = {1.0, 2.0};
  st.shells[3].s24 = {0.1, -0.4};
  const auto back = m.unpack(m.pack(st));
  CHECK(back.a_c == st.a_c);
  CHECK(back.shells[3].s24 == st.shells[3].s24);
  CHECK_THROWS_AS(m.unpack(std::vector<double>(3)), PreconditionError);
}

TEST_CASE("localized model uses the phase rule") {
  const auto p = presets::eit_spectrum(Geometry::kAllCavityLocalized);
  FullsimModel m(p, FullsimOptions{.radial_nodes = 4, .phase_nodes = 8});
  CHECK(m.shells() == 32);
  double sum = 0.0;
  for (double w : m.shell_weight()) sum += w;
  CHECK(sum == doctest::Approx(1.0));
}

TEST_CASE("empty cavity reaches the calibrated amplitude") {
  auto p = low_light(Geometry::kStandard, 1.0);
  p.ensemble.g_p_sqrt_N = 0.0;
  const auto r = steady_state(p);
  CHECK(r.T_norm == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(std::norm(r.state.a_p) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(std::abs(r.state.a_c) == doctest::Approx(p.drive.omega_c / p.atomic.g_c).epsilon(1e-8));
}

TEST_CASE("one-photon probe: two-level absorption and EIT") {
  const auto eit = low_light(Geometry::kStandard, 1.0);
  const auto tl = steady_state(two_level(eit));
  CHECK(tl.T_norm < 0.01);
  CHECK(tl.trace_error < 1e-8);
  const auto r = steady_state(eit);
  CHECK(r.T_norm > 0.85);
  CHECK(r.trace_error < 1e-8);
  CHECK(positivity_violations(r.state) == 0);
}

TEST_CASE("weak probe agrees with the linear response") {
  const auto p = low_light(Geometry::kStandard, 0.01);
  const auto r = steady_state(p);
  const double analytic = normalized_transmission(0.0, chi(0.0, p), p);
  CHECK(r.T_norm == doctest::Approx(analytic).epsilon(1e-3));
}

TEST_CASE("weak-probe build-up follows the linear dynamics") {
  const auto p = low_light(Geometry::kStandard, 0.01);
  const double t_on = 3.0;
  const auto sched = PulseSchedule::from_params(p, t_on);
  const auto rel = linspace(0.0, 6.0, 61);
  std::vector<double> times;
  for (double t : rel) times.push_back(t_on + t);
  const auto traj = integrate(FullsimModel(p).ground_state(), sched, times.back(), p, times);
  const auto lin = invert_laplace(rel, p, InversionMethod::kTimeDomain);
  FullsimModel m(p);
  REQUIRE(traj.size() == rel.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < rel.size(); ++i) {
    const double T = probe_normalized_transmission(traj[i].state, m, sched);
    worst = std::max(worst, std::abs(T - lin.T_norm[i]));
  }
  CHECK(worst < 0.01);
}

TEST_CASE("switching sweep") {
  const auto p = low_light(Geometry::kStandard, 0.01);
  const double ds = from_mhz(110.0);
  const auto rows = switching_sweep({0.0, 10.0, 100.0, 1000.0}, ds, p, {}, 2);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].T_norm == doctest::Approx(steady_state(p).T_norm).epsilon(1e-6));
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].T_norm < rows[i - 1].T_norm);
  const auto serial = switching_sweep({0.0, 10.0, 100.0, 1000.0}, ds, p, {}, 1);
  for (std::size_t i = 0; i < rows.size(); ++i) CHECK(rows[i].T_norm == serial[i].T_norm);
  CHECK_THROWS_AS(switching_sweep({10.0, 1.0}, ds, p), PreconditionError);
  std::ostringstream os;
  write_sweep_csv(os, {{1.0, 0.5}});
  CHECK(os.str() == "n_s,T_norm\n1,0.5\n");
}

TEST_CASE("switching photons scale as 1 / g_s^2") {
  const auto p = low_light(Geometry::kStandard, 0.01);
  auto q = p;
  q.atomic.g_s *= 2.0;
  const double ds = from_mhz(110.0);
  const auto a = switching_sweep({400.0}, ds, p);
  const auto b = switching_sweep({100.0}, ds, q);
  CHECK(b[0].T_norm == doctest::Approx(a[0].T_norm).epsilon(0.02));
}

TEST_CASE("n_star needs a transparent baseline") {
  const auto p = two_level(low_light(Geometry::kStandard, 0.01));
  CHECK_THROWS_AS(minimal_switching_photons(from_mhz(110.0), p), PreconditionError);
}

TEST_CASE("steady state gives up past the time limit") {
  const auto p = low_light(Geometry::kStandard, 0.01);
  FullsimOptions o;
  o.steady_t_max = 0.1;
  CHECK_THROWS_AS(steady_state(p, o), NotConvergedError);
}

TEST_CASE("schedule edges") {
  PulseSchedule s;
  s.probe.t_on = 2.0;
  s.switching.t_on = 2.0;
  s.control.t_on = 0.0;
  CHECK(s.edges() == std::vector<double>{2.0});
  s.control.t_on = -1.0;
  CHECK_THROWS_AS(s.edges(), PreconditionError);
}

TEST_CASE("trajectory CSV header") {
  const auto p = low_light(Geometry::kStandard, 0.01);
  const auto sched = PulseSchedule::from_params(p);
  FullsimModel m(p);
  const auto traj = integrate(m.ground_state(), sched, 1.0, p);
  std::ostringstream os;
  write_trajectory_csv(os, traj, m, sched);
  CHECK(os.str().rfind("t_us,re_ap,im_ap,re_ac,im_ac,re_as,im_as,p11,p22,p33,p44,T_norm\n", 0) == 0);
}
