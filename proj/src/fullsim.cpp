#include "eitcav/fullsim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "eitcav/csv.hpp"
#include "eitcav/errors.hpp"
#include "eitcav/parallel.hpp"
#include "eitcav/spectra.hpp"
#include "kernels/kernels.hpp"

namespace eitcav {
namespace {

struct Inputs {
  cplx p, c, s;
};

Inputs inputs_at(const PulseSchedule& s, double t) {
  auto on = [t](const FieldPulse& f) { return t >= f.t_on ? f.amplitude : cplx(0.0); };
  return {on(s.probe), on(s.control), on(s.switching)};
}

kernels::BlochRates bloch_rates(const SystemParams& p) {
  const auto d = derived(p);
  const auto& a = p.atomic;
  return {d.gamma, d.gamma_s, a.gamma_0, a.gamma_31, a.gamma_32, a.gamma_42,
          p.detuning.delta, p.detuning.delta_c, p.detuning.delta_s};
}

void rhs_with_inputs(const FullsimModel& m, const double* y, const Inputs& in, double* dy, const double* cp,
                     const double* cc, const double* cs, const double* fp, const double* fc, const double* fs,
                     double drive, double kappa) {
  const auto& p = m.params();
  const cplx ap(y[0], y[1]), ac(y[2], y[3]), as(y[4], y[5]);
  const kernels::ShellCouplings sc{cp, cc, cs, fp, fc, fs, m.shells()};
  const auto sums = kernels::shell_rhs(y + 6, dy + 6, sc, ap, ac, as, bloch_rates(p));
  const auto& det = p.detuning;
  const cplx dap = -cplx(kappa, -det.delta_p_c) * ap + kI * sums.p + drive * in.p;
  const cplx dac = -cplx(kappa, -det.delta_c_c) * ac + kI * sums.c + drive * in.c;
  const cplx das = -cplx(kappa, -det.delta_s_c) * as + kI * sums.s + drive * in.s;
  dy[0] = dap.real();
  dy[1] = dap.imag();
  dy[2] = dac.real();
  dy[3] = dac.imag();
  dy[4] = das.real();
  dy[5] = das.imag();
}

}  // namespace

PulseSchedule PulseSchedule::from_params(const SystemParams& p, double probe_on) {
  PulseSchedule s;
  auto calibrated = [&](double omega, double g, double cavity_detuning, const char* name) -> double {
    if (omega == 0.0) return 0.0;
    if (g <= 0.0) throw ConfigError(std::string("a nonzero ") + name + " Rabi frequency needs a positive coupling");
    const double photons = std::pow(omega / g, 2);
    return input_for_photons(p, photons, cavity_detuning);
  };
  s.control = {0.0, calibrated(p.drive.omega_c, p.atomic.g_c, p.detuning.delta_c_c, "control")};
  s.switching = {0.0, calibrated(p.drive.omega_s, p.atomic.g_s, p.detuning.delta_s_c, "switching")};
  s.probe = {probe_on, p.drive.a_p_in};
  return s;
}

std::vector<double> PulseSchedule::edges() const {
  std::vector<double> out;
  for (double t : {probe.t_on, control.t_on, switching.t_on}) {
    if (t < 0.0) throw PreconditionError("turn-on times must be non-negative");
    if (t > 0.0) out.push_back(t);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

FullsimModel::FullsimModel(const SystemParams& params, const FullsimOptions& options) : params_(params) {
  validate(params);
  const auto d = derived(params);
  const auto& a = params.atomic;
  kappa_ = d.kappa;
  drive_ = std::sqrt(2.0 * params.cavity.kappa_H / params.cavity.tau);

  auto add_shell = [&](double cp, double cc, double cs, double atoms, double weight) {
    cp_.push_back(cp);
    cc_.push_back(cc);
    cs_.push_back(cs);
    fp_.push_back(atoms * cp);
    fc_.push_back(atoms * cc);
    fs_.push_back(atoms * cs);
    weight_.push_back(weight);
  };

  switch (params.ensemble.geometry) {
    case Geometry::kStandard:
      add_shell(d.gbar_p, d.gbar_c, d.gbar_s, 2.0 * d.N, 1.0);
      break;
    case Geometry::kAllCavityDelocalized:
    case Geometry::kAllCavityLocalized: {
      RadialGrid grid;
      if (options.radial_scheme == RadialScheme::kClustered) {
        const double B = 0.5 * params.drive.omega_c * params.drive.omega_c;
        const double scale = B > 0.0 ? std::clamp(d.gamma * a.gamma_0 / B, 1e-12, 1.0) : 1.0;
        grid = RadialGrid::clustered(options.radial_nodes, scale);
      } else {
        grid = RadialGrid::gauss_legendre(options.radial_nodes);
      }
      if (params.ensemble.geometry == Geometry::kAllCavityDelocalized) {
        for (std::size_t k = 0; k < grid.size(); ++k) {
          const double psi = grid.psi(k);
          add_shell(d.gbar_p * psi, d.gbar_c * psi, d.gbar_s * psi, grid.atoms(k, d.N), grid.weight[k]);
        }
      } else {
        // Phase phi = kz on a midpoint rule over [0, pi/2]; the mean of
        // cos^2 over the rule is exactly 1/2.
        const int nphi = options.phase_nodes;
        if (nphi < 1) throw PreconditionError("phase_nodes must be positive");
        for (std::size_t k = 0; k < grid.size(); ++k) {
          const double psi = grid.psi(k);
          for (int j = 0; j < nphi; ++j) {
            const double c = std::cos((j + 0.5) * 0.5 * std::numbers::pi / nphi);
            add_shell(a.g_p * psi * c, a.g_c * psi * c, a.g_s * psi * c, grid.atoms(k, d.N) / nphi,
                      2.0 * c * c * grid.weight[k] / nphi);
          }
        }
      }
      break;
    }
  }
  K_ = cp_.size();
}

std::vector<double> FullsimModel::pack(const SystemState& s) const {
  if (s.shells.size() != K_) throw PreconditionError("state has the wrong number of shells");
  std::vector<double> y(dim());
  y[0] = s.a_p.real();
  y[1] = s.a_p.imag();
  y[2] = s.a_c.real();
  y[3] = s.a_c.imag();
  y[4] = s.a_s.real();
  y[5] = s.a_s.imag();
  double* b = y.data() + 6;
  for (std::size_t k = 0; k < K_; ++k) {
    const auto& sh = s.shells[k];
    const double vals[16] = {sh.p11, sh.p22, sh.p33, sh.p44, sh.s12.real(), sh.s12.imag(),
                             sh.s13.real(), sh.s13.imag(), sh.s14.real(), sh.s14.imag(), sh.s23.real(),
                             sh.s23.imag(), sh.s24.real(), sh.s24.imag(), sh.s34.real(), sh.s34.imag()};
    for (std::size_t blk = 0; blk < kernels::kBlocks; ++blk) b[blk * K_ + k] = vals[blk];
  }
  return y;
}

SystemState FullsimModel::unpack(const std::vector<double>& y) const {
  if (y.size() != dim()) throw PreconditionError("vector has the wrong dimension");
  SystemState s;
  s.a_p = {y[0], y[1]};
  s.a_c = {y[2], y[3]};
  s.a_s = {y[4], y[5]};
  s.shells.resize(K_);
  const double* b = y.data() + 6;
  auto at = [&](std::size_t blk, std::size_t k) { return b[blk * K_ + k]; };
  for (std::size_t k = 0; k < K_; ++k) {
    auto& sh = s.shells[k];
    sh.p11 = at(0, k);
    sh.p22 = at(1, k);
    sh.p33 = at(2, k);
    sh.p44 = at(3, k);
    sh.s12 = {at(4, k), at(5, k)};
    sh.s13 = {at(6, k), at(7, k)};
    sh.s14 = {at(8, k), at(9, k)};
    sh.s23 = {at(10, k), at(11, k)};
    sh.s24 = {at(12, k), at(13, k)};
    sh.s34 = {at(14, k), at(15, k)};
  }
  return s;
}

SystemState FullsimModel::ground_state() const {
  SystemState s;
  s.shells.assign(K_, ShellState{});
  return s;
}

void FullsimModel::derivative(const double* y, double t, const PulseSchedule& schedule, double* dy) const {
  rhs_with_inputs(*this, y, inputs_at(schedule, t), dy, cp_.data(), cc_.data(), cs_.data(), fp_.data(), fc_.data(),
                  fs_.data(), drive_, kappa_);
}

cplx FullsimModel::empty_probe_amplitude(const PulseSchedule& schedule) const {
  return drive_ * schedule.probe.amplitude / cplx(kappa_, -params_.detuning.delta_p_c);
}

SystemState derivative(const SystemState& state, const PulseSchedule& schedule, double t, const SystemParams& params,
                       const FullsimOptions& options) {
  const FullsimModel model(params, options);
  const auto y = model.pack(state);
  std::vector<double> dy(y.size());
  model.derivative(y.data(), t, schedule, dy.data());
  return model.unpack(dy);
}

namespace {

/// Integrator over a model whose inputs are held fixed between schedule edges.
class Runner {
 public:
  Runner(const FullsimModel& model, const PulseSchedule& schedule, const FullsimOptions& options)
      : model_(model), schedule_(schedule), edges_(schedule.edges()),
        integrator_([this](double, const double* y, double* dy) { model_.derivative(y, piece_start_, schedule_, dy); },
                    model.dim(), options.ode) {}

  /// Advances to t_end, stopping at every schedule edge so inputs switch exactly there.
  void advance(std::vector<double>& y, double& t, double t_end) {
    while (t < t_end) {
      double stop = t_end;
      for (double e : edges_) {
        if (e > t && e < stop) stop = e;
      }
      piece_start_ = t;
      integrator_.advance(y, t, stop);
    }
  }

 private:
  const FullsimModel& model_;
  const PulseSchedule& schedule_;
  std::vector<double> edges_;
  double piece_start_ = 0.0;
  ode::Integrator integrator_;
};

}  // namespace

Trajectory integrate(const SystemState& initial, const PulseSchedule& schedule, double t_end,
                     const SystemParams& params, const std::vector<double>& sample_times,
                     const FullsimOptions& options) {
  if (!(t_end > 0.0)) throw PreconditionError("t_end must be positive");
  std::vector<double> samples = sample_times.empty() ? std::vector<double>{t_end} : sample_times;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i] < 0.0 || samples[i] > t_end || (i > 0 && samples[i] <= samples[i - 1])) {
      throw PreconditionError("sample times must be increasing within [0, t_end]");
    }
  }
  const FullsimModel model(params, options);
  Runner runner(model, schedule, options);
  auto y = model.pack(initial);
  double t = 0.0;
  Trajectory out;
  out.reserve(samples.size());
  for (double ts : samples) {
    runner.advance(y, t, ts);
    out.push_back({ts, model.unpack(y)});
  }
  return out;
}

double depletion(const SystemState& s) {
  double worst = 0.0;
  for (const auto& sh : s.shells) worst = std::max(worst, 1.0 - sh.p11);
  return worst;
}

double trace_error(const SystemState& s) {
  double worst = 0.0;
  for (const auto& sh : s.shells) worst = std::max(worst, std::abs(sh.p11 + sh.p22 + sh.p33 + sh.p44 - 1.0));
  return worst;
}

std::size_t positivity_violations(const SystemState& s, double slack) {
  std::size_t count = 0;
  for (const auto& sh : s.shells) {
    const double p[4] = {sh.p11, sh.p22, sh.p33, sh.p44};
    for (double x : p) count += (x < -slack || x > 1.0 + slack) ? 1 : 0;
    auto check = [&](cplx c, double a, double b) { count += std::norm(c) > a * b + slack ? 1 : 0; };
    check(sh.s12, p[0], p[1]);
    check(sh.s13, p[0], p[2]);
    check(sh.s14, p[0], p[3]);
    check(sh.s23, p[1], p[2]);
    check(sh.s24, p[1], p[3]);
    check(sh.s34, p[2], p[3]);
  }
  return count;
}

double probe_normalized_transmission(const SystemState& state, const FullsimModel& model,
                                     const PulseSchedule& schedule) {
  const cplx empty = model.empty_probe_amplitude(schedule);
  if (std::abs(empty) == 0.0) throw PreconditionError("probe input is zero; transmission undefined");
  return std::norm(state.a_p) / std::norm(empty);
}

SteadyStateResult steady_state(const PulseSchedule& schedule, const SystemParams& params,
                               const FullsimOptions& options) {
  const FullsimModel model(params, options);
  Runner runner(model, schedule, options);
  auto y = model.pack(model.ground_state());
  double t = 0.0;
  const auto edges = schedule.edges();
  const double t_inputs = edges.empty() ? 0.0 : edges.back();
  const double kappa = derived(params).kappa;
  if (!(kappa > 0.0)) throw PreconditionError("steady state needs a positive cavity decay rate");
  const double window = 5.0 / kappa;

  double horizon = t_inputs + 2.0 * window;
  double residual = 1.0;
  for (;;) {
    runner.advance(y, t, horizon);
    const auto before = y;
    runner.advance(y, t, horizon + window);
    residual = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      residual = std::max(residual, std::abs(y[i] - before[i]) / (std::abs(y[i]) + options.steady_floor));
    }
    if (residual <= options.steady_tol) break;
    if (horizon > options.steady_t_max) {
      std::ostringstream msg;
      msg << "no steady state by t = " << t << " us (largest relative change over " << window
          << " us: " << residual << ")";
      throw NotConvergedError(msg.str(), residual);
    }
    horizon = t_inputs + 2.0 * (horizon - t_inputs);
  }
  SteadyStateResult r;
  r.state = model.unpack(y);
  r.t = t;
  r.residual = residual;
  r.T_norm = probe_normalized_transmission(r.state, model, schedule);
  r.depletion = depletion(r.state);
  r.trace_error = trace_error(r.state);
  return r;
}

SteadyStateResult steady_state(const SystemParams& params, const FullsimOptions& options) {
  return steady_state(PulseSchedule::from_params(params), params, options);
}

namespace {

SystemParams with_switching(const SystemParams& params, double delta_s, double n_s) {
  SystemParams p = params;
  p.detuning.delta_s = delta_s;
  p.drive.omega_s = p.atomic.g_s * std::sqrt(n_s);
  return p;
}

}  // namespace

std::vector<SweepRow> switching_sweep(const std::vector<double>& n_s_grid, double delta_s,
                                      const SystemParams& params, const FullsimOptions& options, int threads) {
  for (std::size_t i = 0; i < n_s_grid.size(); ++i) {
    if (n_s_grid[i] < 0.0 || (i > 0 && !(n_s_grid[i] > n_s_grid[i - 1]))) {
      throw PreconditionError("switching photon grid must be increasing and non-negative");
    }
  }
  std::vector<SweepRow> rows(n_s_grid.size());
  parallel_for(n_s_grid.size(), threads, [&](std::size_t i) {
    rows[i] = {n_s_grid[i], steady_state(with_switching(params, delta_s, n_s_grid[i]), options).T_norm};
  });
  return rows;
}

SwitchingPhotons minimal_switching_photons(double delta_s, const SystemParams& params, const FullsimOptions& options,
                                           double rel_tol) {
  SwitchingPhotons out{};
  const auto d = derived(params);
  const double g_s = params.atomic.g_s;
  if (!(g_s > 0.0)) throw PreconditionError("switching needs g_s > 0");
  const double detuning = std::max(std::abs(delta_s), d.gamma_s);
  out.estimate_gamma0 = 400.0 * params.atomic.gamma_0 * detuning / (g_s * g_s);
  out.estimate_kappa_eit = 10.0 * detuning * eit_linewidth(params, LinewidthMethod::kAnalyticStandard) / (g_s * g_s);

  auto T = [&](double n) {
    ++out.evaluations;
    return steady_state(with_switching(params, delta_s, n), options).T_norm;
  };
  out.baseline = T(0.0);
  if (out.baseline < 0.9) {
    throw PreconditionError("EIT baseline transmission " + csv::format(out.baseline) + " is below 90%");
  }
  constexpr double kTarget = 0.1;
  double lo = out.estimate_kappa_eit, hi = lo;
  if (T(lo) > kTarget) {
    do {
      lo = hi;
      hi *= 3.0;
      if (hi > 1e12) throw NotConvergedError("transmission does not fall to 10% below 1e12 photons", hi);
    } while (T(hi) > kTarget);
  } else {
    do {
      hi = lo;
      lo /= 3.0;
      if (lo < 1e-6) throw NotConvergedError("transmission already below 10% at 1e-6 photons", lo);
    } while (T(lo) <= kTarget);
  }
  while (hi / lo - 1.0 > rel_tol) {
    const double mid = std::sqrt(lo * hi);
    (T(mid) > kTarget ? lo : hi) = mid;
  }
  out.n_star = std::sqrt(lo * hi);
  return out;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "n_s,T_norm\n";
  for (const auto& r : rows) csv::write_row(out, {r.n_s, r.T_norm});
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory, const FullsimModel& model,
                          const PulseSchedule& schedule) {
  out << "t_us,re_ap,im_ap,re_ac,im_ac,re_as,im_as,p11,p22,p33,p44,T_norm\n";
  const auto& w = model.shell_weight();
  const cplx empty = model.empty_probe_amplitude(schedule);
  for (const auto& pt : trajectory) {
    double p[4] = {0, 0, 0, 0};
    for (std::size_t k = 0; k < pt.state.shells.size(); ++k) {
      const auto& sh = pt.state.shells[k];
      p[0] += w[k] * sh.p11;
      p[1] += w[k] * sh.p22;
      p[2] += w[k] * sh.p33;
      p[3] += w[k] * sh.p44;
    }
    const double tn = std::abs(empty) > 0.0 ? std::norm(pt.state.a_p) / std::norm(empty) : 0.0;
    const auto& s = pt.state;
    csv::write_row(out, {pt.t, s.a_p.real(), s.a_p.imag(), s.a_c.real(), s.a_c.imag(), s.a_s.real(), s.a_s.imag(),
                         p[0], p[1], p[2], p[3], tn});
  }
}

}  // namespace eitcav
