#include "eitcav/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "eitcav/csv.hpp"
#include "eitcav/errors.hpp"
#include "eitcav/ode.hpp"
#include "kernels/kernels.hpp"

namespace eitcav {
namespace {

constexpr int kTalbotTerms = 36;

void require_resonance(const SystemParams& p) {
  if (p.detuning.delta != 0.0 || p.detuning.delta_c != 0.0) {
    throw PreconditionError("build-up dynamics are defined on resonance (Delta = delta_c = 0)");
  }
}

/// Laplace transform of a(t) for unit drive sqrt(2 kappa_H / tau) a_in = 1.
cplx unit_laplace(cplx s, const SystemParams& p, const RadialGrid& grid, bool* perturbed) {
  const auto d = derived(p);
  const double B = 0.5 * p.drive.omega_c * p.drive.omega_c;
  auto denominator_ok = [&](cplx z) {
    if (z == 0.0) return false;
    const cplx g0 = p.atomic.gamma_0 + z;
    const cplx q = (d.gamma + z) * g0;
    for (double u : grid.u) {
      if (q + B * u == 0.0) return false;
    }
    return g0 != 0.0 || B == 0.0;
  };
  if (!denominator_ok(s)) {
    s += 1e-12 * (1.0 + std::abs(s));
    if (perturbed != nullptr) *perturbed = true;
  }
  const cplx g0 = p.atomic.gamma_0 + s;
  const kernels::MobiusCoeffs c{g0, 0.0, (d.gamma + s) * g0, B};
  const cplx medium = d.g2N * kernels::mobius_sum(grid.weight.data(), grid.u.data(), grid.size(), c);
  return 1.0 / (s * (d.kappa + s + medium));
}

/// Fixed Talbot inversion of a real-valued time function.
double talbot(double t, const std::function<cplx(cplx)>& F) {
  const int M = kTalbotTerms;
  const double r = 2.0 * M / (5.0 * t);
  double sum = 0.5 * std::exp(r * t) * F(r).real();
  for (int k = 1; k < M; ++k) {
    const double theta = k * std::numbers::pi / M;
    const double cot = 1.0 / std::tan(theta);
    const cplx s = r * theta * cplx(cot, 1.0);
    const double sigma = theta + (theta * cot - 1.0) * cot;
    sum += (std::exp(t * s) * F(s) * cplx(1.0, sigma)).real();
  }
  return r / M * sum;
}

/// Reduced linear system per shell with polarizations weighted by atom number:
///   a'   = -kappa a + i sum_k y13_k + 1
///   y13' = -gamma y13 + i g^2 N w_k a + i Omega_k y12
///   y12' = -gamma_0 y12 + i Omega_k y13
/// with Omega_k = (Omega_c / sqrt 2) sqrt(u_k).
TimeTrace time_domain(const std::vector<double>& t_grid, const SystemParams& p, const RadialGrid& grid) {
  const auto d = derived(p);
  const std::size_t K = grid.size();
  std::vector<double> omega(K), coupling(K);
  for (std::size_t k = 0; k < K; ++k) {
    omega[k] = p.drive.omega_c / std::numbers::sqrt2 * std::sqrt(grid.u[k]);
    coupling[k] = d.g2N * grid.weight[k];
  }
  const double kappa = d.kappa, gamma = d.gamma, gamma0 = p.atomic.gamma_0;
  auto rhs = [&](double, const double* y, double* dy) {
    const double ar = y[0], ai = y[1];
    double pr = 0.0, pi = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
      const double* s = y + 2 + 4 * k;  // re13 im13 re12 im12
      double* ds = dy + 2 + 4 * k;
      pr += s[0];
      pi += s[1];
      ds[0] = -gamma * s[0] - coupling[k] * ai - omega[k] * s[3];
      ds[1] = -gamma * s[1] + coupling[k] * ar + omega[k] * s[2];
      ds[2] = -gamma0 * s[2] - omega[k] * s[1];
      ds[3] = -gamma0 * s[3] + omega[k] * s[0];
    }
    dy[0] = -kappa * ar - pi + 1.0;
    dy[1] = -kappa * ai + pr;
  };
  ode::Options opt;
  opt.method = ode::Method::kExplicit;
  ode::Integrator integrator(rhs, 2 + 4 * K, opt);
  std::vector<double> y(2 + 4 * K, 0.0);
  double t = 0.0;
  TimeTrace trace;
  for (double target : t_grid) {
    integrator.advance(y, t, target);
    trace.t.push_back(target);
    trace.T_norm.push_back(kappa * kappa * (y[0] * y[0] + y[1] * y[1]));
  }
  return trace;
}

void check_grid(const std::vector<double>& t_grid) {
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (t_grid[i] < 0.0 || (i > 0 && !(t_grid[i] > t_grid[i - 1]))) {
      throw PreconditionError("time grid must be increasing and start at t >= 0");
    }
  }
}

double plateau_of(const TimeTrace& trace) {
  if (trace.T_norm.size() < 10) throw NotConvergedError("trace too short to identify a plateau", 1.0);
  const std::size_t start = trace.T_norm.size() - std::max<std::size_t>(trace.T_norm.size() / 10, 2);
  const auto [lo, hi] = std::minmax_element(trace.T_norm.begin() + static_cast<std::ptrdiff_t>(start), trace.T_norm.end());
  const double last = trace.T_norm.back();
  const double variation = last > 0.0 ? (*hi - *lo) / last : 1.0;
  if (!(variation < 0.01)) {
    throw NotConvergedError("trace has not reached a plateau: last tenth varies by " + csv::format(100.0 * variation) + "%",
                            variation);
  }
  return last;
}

}  // namespace

RadialGrid dynamics_grid(const SystemParams& p, int n_nodes) {
  if (p.ensemble.geometry == Geometry::kStandard) return RadialGrid::single_shell();
  if (p.ensemble.geometry == Geometry::kAllCavityLocalized) {
    throw PreconditionError("build-up dynamics are implemented for the delocalized and standard geometries");
  }
  const auto d = derived(p);
  const double B = 0.5 * p.drive.omega_c * p.drive.omega_c;
  const double scale = B > 0.0 ? std::clamp(d.gamma * p.atomic.gamma_0 / B, 1e-12, 1.0) : 1.0;
  return RadialGrid::clustered(n_nodes, scale);
}

cplx laplace_amplitude(cplx s, const SystemParams& p, const RadialGrid& grid, bool* perturbed) {
  require_resonance(p);
  return std::sqrt(2.0 * p.cavity.kappa_H / p.cavity.tau) * p.drive.a_p_in * unit_laplace(s, p, grid, perturbed);
}

cplx laplace_amplitude(cplx s, const SystemParams& p) { return laplace_amplitude(s, p, dynamics_grid(p)); }

TimeTrace invert_laplace(const std::vector<double>& t_grid, const SystemParams& p, InversionMethod method,
                         const RadialGrid& grid) {
  require_resonance(p);
  check_grid(t_grid);
  if (method == InversionMethod::kTimeDomain) return time_domain(t_grid, p, grid);
  const double kappa = derived(p).kappa;
  TimeTrace trace;
  for (double t : t_grid) {
    double a = 0.0;
    if (t > 0.0) a = talbot(t, [&](cplx s) { return unit_laplace(s, p, grid, nullptr); });
    trace.t.push_back(t);
    trace.T_norm.push_back(kappa * kappa * a * a);
  }
  return trace;
}

TimeTrace invert_laplace(const std::vector<double>& t_grid, const SystemParams& p, InversionMethod method) {
  return invert_laplace(t_grid, p, method, dynamics_grid(p));
}

CrossCheckResult cross_check(const std::vector<double>& t_grid, const SystemParams& p, double tol) {
  const auto grid = dynamics_grid(p);
  CrossCheckResult r{invert_laplace(t_grid, p, InversionMethod::kTimeDomain, grid),
                     invert_laplace(t_grid, p, InversionMethod::kNumericInversion, grid), 0.0};
  std::size_t worst = 0;
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    const double diff = std::abs(r.time_domain.T_norm[i] - r.inversion.T_norm[i]);
    if (diff > r.max_abs_diff) {
      r.max_abs_diff = diff;
      worst = i;
    }
  }
  if (!(r.max_abs_diff <= tol)) {
    std::ostringstream msg;
    msg << "time-domain and Laplace-inversion traces differ by " << r.max_abs_diff << " at t = " << t_grid[worst]
        << " us (time domain " << r.time_domain.T_norm[worst] << ", inversion " << r.inversion.T_norm[worst] << ")";
    throw CrossCheckError(msg.str());
  }
  return r;
}

cplx dominant_pole(const SystemParams& p, const RadialGrid& grid) {
  const auto d = derived(p);
  const double B = 0.5 * p.drive.omega_c * p.drive.omega_c;
  // Zero of kappa + s + g^2 N sum_k w_k (gamma_0 + s) / ((gamma + s)(gamma_0 + s) + B u_k).
  auto f = [&](cplx s) {
    const cplx g0 = p.atomic.gamma_0 + s;
    const kernels::MobiusCoeffs c{g0, 0.0, (d.gamma + s) * g0, B};
    return d.kappa + s + d.g2N * kernels::mobius_sum(grid.weight.data(), grid.u.data(), grid.size(), c);
  };
  cplx s = -(d.g2N > 0.0 ? p.atomic.gamma_0 + d.kappa * B / d.g2N : d.kappa);
  for (int it = 0; it < 100; ++it) {
    const double h = 1e-7 * std::max(1.0, std::abs(s));
    const cplx df = (f(s + h) - f(s - h)) / (2.0 * h);
    const cplx step = f(s) / df;
    s -= step;
    if (std::abs(step) < 1e-14 * std::max(1.0, std::abs(s))) return s;
  }
  throw NotConvergedError("dominant pole search did not converge", std::abs(f(s)));
}

double time_to_fraction(const TimeTrace& trace, double fraction, double plateau) {
  if (trace.t.empty()) throw PreconditionError("empty trace");
  const double target = fraction * (plateau > 0.0 ? plateau : trace.T_norm.back());
  for (std::size_t i = 1; i < trace.t.size(); ++i) {
    const double y0 = trace.T_norm[i - 1], y1 = trace.T_norm[i];
    if (y0 < target && y1 >= target) {
      return trace.t[i - 1] + (target - y0) / (y1 - y0) * (trace.t[i] - trace.t[i - 1]);
    }
  }
  if (trace.T_norm.front() >= target) return trace.t.front();
  throw NotConvergedError("trace never reaches the requested fraction of its plateau", fraction);
}

double buildup_time(const TimeTrace& trace) {
  const double plateau = plateau_of(trace);
  return time_to_fraction(trace, 1.0 - 1.0 / std::numbers::e, plateau);
}

ExponentialFit fit_exponential(const TimeTrace& trace, double T_inf, double lo, double hi) {
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < trace.t.size(); ++i) {
    const double frac = std::sqrt(std::max(trace.T_norm[i], 0.0) / T_inf);
    if (frac >= lo && frac <= hi) {
      xs.push_back(trace.t[i]);
      ys.push_back(std::log(1.0 - frac));
    }
  }
  if (xs.size() < 3) throw PreconditionError("too few samples in the fit window");
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double icpt = (sy - slope * sx) / n;
  double ss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) ss += std::pow(ys[i] - (icpt + slope * xs[i]), 2);
  return {-slope, std::sqrt(ss / n), xs.size()};
}

void write_csv(std::ostream& out, const TimeTrace& trace) {
  out << "t_us,T_norm\n";
  for (std::size_t i = 0; i < trace.t.size(); ++i) csv::write_row(out, {trace.t[i], trace.T_norm[i]});
}

}  // namespace eitcav
