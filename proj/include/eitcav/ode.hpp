#pragma once

// Adaptive integrators for real ODE systems y' = f(t, y).
//
// The explicit path is the Dormand-Prince 5(4) pair with the usual stiffness
// detector. When the detector fires, or the step size underflows, the
// integrator switches to a fourth-order L-stable Rosenbrock method with a
// finite-difference Jacobian. The Rosenbrock path treats f as autonomous over
// each advance() call; callers with time-dependent forcing integrate piecewise
// between discontinuities.

#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

namespace eitcav::ode {

using Rhs = std::function<void(double t, const double* y, double* dydt)>;

enum class Method { kAuto, kExplicit, kRosenbrock };

struct Options {
  double rtol = 1e-9;
  double atol = 1e-12;
  double h_init = 0.0;  ///< 0: chosen from the initial derivative
  double h_max = std::numeric_limits<double>::infinity();
  double h_min_rel = 1e-13;  ///< smallest step relative to max(|t|, interval)
  std::size_t max_steps = 50'000'000;
  Method method = Method::kAuto;
};

struct Stats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t rhs_evals = 0;
  std::size_t jacobians = 0;
  bool switched_to_rosenbrock = false;
};

class Integrator {
 public:
  Integrator(Rhs rhs, std::size_t dim, Options options = {});

  /// Advances (t, y) to exactly t_end >= t. Throws StiffnessError when the
  /// step size underflows on the implicit path as well.
  void advance(std::vector<double>& y, double& t, double t_end);

  const Stats& stats() const { return stats_; }
  Method method() const { return active_; }
  void force_method(Method m) { active_ = m; }
  double last_step() const { return h_; }

 private:
  bool explicit_step(std::vector<double>& y, double t, double h, double& err);
  bool rosenbrock_step(std::vector<double>& y, double t, double h, double& err);
  double error_norm(const std::vector<double>& err, const std::vector<double>& y0,
                    const std::vector<double>& y1) const;
  double initial_step(const std::vector<double>& y, double t, double span);
  void jacobian(const std::vector<double>& y, double t);
  void eval(double t, const double* y, double* dy);

  Rhs rhs_;
  std::size_t n_;
  Options opt_;
  Stats stats_;
  Method active_;
  double h_ = 0.0;
  bool fsal_valid_ = false;
  bool jac_valid_ = false;
  int stiff_count_ = 0;
  int nonstiff_count_ = 0;
  double last_stiff_ratio_ = 0.0;

  std::vector<double> k1_, k2_, k3_, k4_, k5_, k6_, k7_, tmp_, ynew_, err_;
  std::vector<double> jac_;  // column-major n x n
};

/// Largest |eigenvalue| of the Jacobian of f at (t, y), by power iteration on
/// finite-difference Jacobian-vector products.
double estimate_spectral_radius(const Rhs& rhs, double t, const std::vector<double>& y, int iterations = 40);

}  // namespace eitcav::ode
