#pragma once

// Build-up of the intracavity probe on EIT resonance after the probe is
// switched on at t = 0 with the control field already present.
//
// Both methods discretize the transverse mode on the same radial grid, so they
// differ only by integration and inversion error.

#include <ostream>
#include <vector>

#include "eitcav/params.hpp"
#include "eitcav/quadrature.hpp"

namespace eitcav {

struct TimeTrace {
  std::vector<double> t;       ///< us
  std::vector<double> T_norm;  ///< |a_p(t)|^2 relative to the empty-cavity steady state
};

/// Radial grid used by the dynamics for the given geometry: one shell for the
/// standard geometry, otherwise `n_nodes` Gauss-Legendre nodes clustered on the
/// scale of the resonant dark-state pole.
RadialGrid dynamics_grid(const SystemParams& params, int n_nodes = 64);

/// Laplace transform of a_p(t) for a step input a_p^in / s. Requires Delta = 0.
/// When s hits a pole it is moved by a relative 1e-12; `perturbed` reports it.
cplx laplace_amplitude(cplx s, const SystemParams& params, const RadialGrid& grid, bool* perturbed = nullptr);
cplx laplace_amplitude(cplx s, const SystemParams& params);

enum class InversionMethod { kTimeDomain, kNumericInversion };

/// T_norm(t) on an increasing grid with t >= 0.
TimeTrace invert_laplace(const std::vector<double>& t_grid, const SystemParams& params, InversionMethod method,
                         const RadialGrid& grid);
TimeTrace invert_laplace(const std::vector<double>& t_grid, const SystemParams& params, InversionMethod method);

struct CrossCheckResult {
  TimeTrace time_domain;
  TimeTrace inversion;
  double max_abs_diff;
};

/// Runs both methods; throws CrossCheckError (message carries both traces'
/// worst row) if they differ by more than `tol` anywhere.
CrossCheckResult cross_check(const std::vector<double>& t_grid, const SystemParams& params, double tol = 1e-6);

/// Dominant (slowest) pole of the Laplace amplitude, found by Newton iteration
/// from the adiabatic estimate -kappa_EIT.
cplx dominant_pole(const SystemParams& params, const RadialGrid& grid);

/// First time T_norm crosses (1 - 1/e) of its plateau, linearly interpolated.
/// Throws NotConvergedError if the last tenth of the trace still varies by 1% or more.
double buildup_time(const TimeTrace& trace);

/// First time T_norm crosses `fraction` of `plateau` (plateau <= 0: last sample).
double time_to_fraction(const TimeTrace& trace, double fraction, double plateau = 0.0);

struct ExponentialFit {
  double rate;          ///< 1/us
  double rms_residual;  ///< of ln(1 - sqrt(T/T_inf)) about the fitted line
  std::size_t points;
};

/// Fits sqrt(T_norm / T_inf) = 1 - exp(-rate t) over the samples whose
/// amplitude fraction lies in [lo, hi].
ExponentialFit fit_exponential(const TimeTrace& trace, double T_inf, double lo = 0.2, double hi = 0.95);

/// Header `t_us,T_norm`.
void write_csv(std::ostream& out, const TimeTrace& trace);

}  // namespace eitcav
