#pragma once

// Full nonlinear mean-value equations for four-level atoms on a radial (and,
// for localized atoms, standing-wave phase) grid, coupled to the three cavity
// fields.

#include <functional>
#include <ostream>
#include <vector>

#include "eitcav/ode.hpp"
#include "eitcav/params.hpp"
#include "eitcav/quadrature.hpp"

namespace eitcav {

struct ShellState {
  double p11 = 1.0, p22 = 0.0, p33 = 0.0, p44 = 0.0;
  cplx s12, s13, s14, s23, s24, s34;
};

struct SystemState {
  std::vector<ShellState> shells;
  cplx a_p, a_c, a_s;
};

/// Input amplitude switched on as a step at t_on.
struct FieldPulse {
  double t_on = 0.0;
  cplx amplitude;
};

struct PulseSchedule {
  FieldPulse probe, control, switching;

  /// Control and switching at t = 0, probe at `probe_on`; control and
  /// switching inputs calibrated on the empty cavity so that |a_c| = Omega_c / g_c
  /// and |a_s| = Omega_s / g_s; probe input params.drive.a_p_in.
  static PulseSchedule from_params(const SystemParams& params, double probe_on = 0.5);

  /// Distinct positive turn-on times, sorted.
  std::vector<double> edges() const;
};

enum class RadialScheme {
  kGaussLegendre,  ///< plain Gauss-Legendre in u
  kClustered,      ///< Gauss-Legendre in a sinh-mapped u, refined towards u = 0
};

struct FullsimOptions {
  int radial_nodes = 16;
  int phase_nodes = 8;  ///< localized geometry only
  RadialScheme radial_scheme = RadialScheme::kGaussLegendre;
  ode::Options ode{};
  double steady_tol = 1e-8;
  double steady_floor = 1e-3;  ///< added to |x| in the relative-change test; keeps it above integrator noise
  double steady_t_max = 2e4;    ///< us
};

/// Discretized ensemble for one parameter set: shell couplings and atom
/// numbers, state packing and the right-hand side.
class FullsimModel {
 public:
  explicit FullsimModel(const SystemParams& params, const FullsimOptions& options = {});

  std::size_t shells() const { return K_; }
  std::size_t dim() const { return 6 + 16 * K_; }
  const SystemParams& params() const { return params_; }

  /// Relative weight of each shell in the probe coupling (sums to 1).
  const std::vector<double>& shell_weight() const { return weight_; }

  std::vector<double> pack(const SystemState& s) const;
  SystemState unpack(const std::vector<double>& y) const;

  /// All atoms in |1>, empty cavity.
  SystemState ground_state() const;

  void derivative(const double* y, double t, const PulseSchedule& schedule, double* dy) const;

  /// Empty-cavity steady probe amplitude for the schedule's probe input.
  cplx empty_probe_amplitude(const PulseSchedule& schedule) const;

 private:
  SystemParams params_;
  std::size_t K_ = 0;
  std::vector<double> cp_, cc_, cs_, fp_, fc_, fs_, weight_;
  double drive_ = 0.0;
  double kappa_ = 0.0;
};

/// Rate of change of every component (populations stay real).
SystemState derivative(const SystemState& state, const PulseSchedule& schedule, double t, const SystemParams& params,
                       const FullsimOptions& options = {});

struct TrajectoryPoint {
  double t;
  SystemState state;
};

using Trajectory = std::vector<TrajectoryPoint>;

/// Integrates from `initial` at t = 0, sampling at the requested times
/// (default: t_end only). Inputs switch on exactly at the schedule edges.
Trajectory integrate(const SystemState& initial, const PulseSchedule& schedule, double t_end,
                     const SystemParams& params, const std::vector<double>& sample_times = {},
                     const FullsimOptions& options = {});

struct SteadyStateResult {
  SystemState state;
  double t;          ///< time at which convergence was declared
  double residual;   ///< largest relative change over the last window
  double T_norm;     ///< |a_p|^2 relative to the empty-cavity steady value
  double depletion;  ///< max over shells of 1 - p11
  double trace_error;
};

/// Integrates from the ground state until every component changes by less than
/// tol (|x| + floor) over a window 5 / kappa. Throws NotConvergedError past
/// options.steady_t_max.
SteadyStateResult steady_state(const PulseSchedule& schedule, const SystemParams& params,
                               const FullsimOptions& options = {});
SteadyStateResult steady_state(const SystemParams& params, const FullsimOptions& options = {});

double probe_normalized_transmission(const SystemState& state, const FullsimModel& model,
                                     const PulseSchedule& schedule);

/// Max over shells of 1 - p11.
double depletion(const SystemState& state);

/// Max over shells of |p11 + p22 + p33 + p44 - 1|.
double trace_error(const SystemState& state);

/// Populations outside [0, 1] or coherences with |s_ij|^2 > p_ii p_jj, beyond `slack`.
std::size_t positivity_violations(const SystemState& state, double slack = 1e-9);

struct SweepRow {
  double n_s;
  double T_norm;
};

/// Steady probe transmission versus intracavity switching photon number
/// (Omega_s = g_s sqrt(n_s)) at switching detuning delta_s.
std::vector<SweepRow> switching_sweep(const std::vector<double>& n_s_grid, double delta_s,
                                      const SystemParams& params, const FullsimOptions& options = {},
                                      int threads = 1);

struct SwitchingPhotons {
  double n_star;              ///< photons bringing T_norm to 10%
  double baseline;            ///< T_norm without switching field
  double estimate_gamma0;     ///< 400 gamma_0 Delta_s / g_s^2
  double estimate_kappa_eit;  ///< 10 Delta_s kappa_EIT / g_s^2
  int evaluations;
};

/// Bisection (in log n_s) for the 10% crossing. |Delta_s| below gamma_s is
/// replaced by gamma_s in the estimates. Throws PreconditionError if the
/// baseline is below 90%.
SwitchingPhotons minimal_switching_photons(double delta_s, const SystemParams& params,
                                           const FullsimOptions& options = {}, double rel_tol = 1e-3);

/// Header `n_s,T_norm`.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

/// Header `t_us,re_ap,im_ap,re_ac,im_ac,re_as,im_as,p11,p22,p33,p44,T_norm`;
/// populations are averaged over shells with the probe-coupling weights.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory, const FullsimModel& model,
                          const PulseSchedule& schedule);

}  // namespace eitcav
