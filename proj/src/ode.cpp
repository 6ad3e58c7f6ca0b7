#include "eitcav/ode.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "eitcav/errors.hpp"

namespace eitcav::ode {
namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

// Below the real-axis boundary (3.3) because near the imaginary axis, where
// weakly damped detuned coherences sit, the stable region ends at |h lambda| ~ 1.5.
constexpr double kStiffBoundary = 1.2;
constexpr int kStiffSteps = 15;
constexpr int kNonstiffReset = 6;

}  // namespace

Integrator::Integrator(Rhs rhs, std::size_t dim, Options options)
    : rhs_(std::move(rhs)), n_(dim), opt_(options),
      active_(options.method == Method::kRosenbrock ? Method::kRosenbrock : Method::kExplicit) {
  for (auto* v : {&k1_, &k2_, &k3_, &k4_, &k5_, &k6_, &k7_, &tmp_, &ynew_, &err_}) v->assign(n_, 0.0);
  h_ = options.h_init;
}

void Integrator::eval(double t, const double* y, double* dy) {
  ++stats_.rhs_evals;
  rhs_(t, y, dy);
}

double Integrator::error_norm(const std::vector<double>& err, const std::vector<double>& y0,
                              const std::vector<double>& y1) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    const double sc = opt_.atol + opt_.rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double r = err[i] / sc;
    sum += r * r;
  }
  return std::sqrt(sum / static_cast<double>(std::max<std::size_t>(n_, 1)));
}

double Integrator::initial_step(const std::vector<double>& y, double t, double span) {
  eval(t, y.data(), k1_.data());
  double d0 = 0.0, d1 = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    const double sc = opt_.atol + opt_.rtol * std::abs(y[i]);
    d0 += std::pow(y[i] / sc, 2);
    d1 += std::pow(k1_[i] / sc, 2);
  }
  d0 = std::sqrt(d0 / n_);
  d1 = std::sqrt(d1 / n_);
  double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 * span : 0.01 * d0 / d1;
  h0 = std::min(h0, span);
  for (std::size_t i = 0; i < n_; ++i) tmp_[i] = y[i] + h0 * k1_[i];
  eval(t + h0, tmp_.data(), k2_.data());
  double d2 = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    const double sc = opt_.atol + opt_.rtol * std::abs(y[i]);
    d2 += std::pow((k2_[i] - k1_[i]) / sc, 2);
  }
  d2 = std::sqrt(d2 / n_) / h0;
  const double dm = std::max(d1, d2);
  const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
  fsal_valid_ = true;
  return std::min({100.0 * h0, h1, opt_.h_max, span});
}

bool Integrator::explicit_step(std::vector<double>& y, double t, double h, double& err) {
  if (!fsal_valid_) {
    eval(t, y.data(), k1_.data());
    fsal_valid_ = true;
  }
  const std::size_t n = n_;
  for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + h * a21 * k1_[i];
  eval(t + c2 * h, tmp_.data(), k2_.data());
  for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + h * (a31 * k1_[i] + a32 * k2_[i]);
  eval(t + c3 * h, tmp_.data(), k3_.data());
  for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + h * (a41 * k1_[i] + a42 * k2_[i] + a43 * k3_[i]);
  eval(t + c4 * h, tmp_.data(), k4_.data());
  for (std::size_t i = 0; i < n; ++i)
    tmp_[i] = y[i] + h * (a51 * k1_[i] + a52 * k2_[i] + a53 * k3_[i] + a54 * k4_[i]);
  eval(t + c5 * h, tmp_.data(), k5_.data());
  for (std::size_t i = 0; i < n; ++i)
    tmp_[i] = y[i] + h * (a61 * k1_[i] + a62 * k2_[i] + a63 * k3_[i] + a64 * k4_[i] + a65 * k5_[i]);
  eval(t + h, tmp_.data(), k6_.data());
  for (std::size_t i = 0; i < n; ++i)
    ynew_[i] = y[i] + h * (a71 * k1_[i] + a73 * k3_[i] + a74 * k4_[i] + a75 * k5_[i] + a76 * k6_[i]);
  eval(t + h, ynew_.data(), k7_.data());
  for (std::size_t i = 0; i < n; ++i)
    err_[i] = h * (e1 * k1_[i] + e3 * k3_[i] + e4 * k4_[i] + e5 * k5_[i] + e6 * k6_[i] + e7 * k7_[i]);
  err = error_norm(err_, y, ynew_);
  if (!(err <= 1.0)) return false;

  // Stiffness estimate h |lambda| from the last two stages, which share t + h.
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    num += std::pow(k7_[i] - k6_[i], 2);
    den += std::pow(ynew_[i] - tmp_[i], 2);
  }
  last_stiff_ratio_ = den > 0.0 ? h * std::sqrt(num / den) : 0.0;
  if (last_stiff_ratio_ > kStiffBoundary) {
    nonstiff_count_ = 0;
    ++stiff_count_;
  } else if (++nonstiff_count_ == kNonstiffReset) {
    stiff_count_ = 0;
  }

  y.swap(ynew_);
  k1_.swap(k7_);
  return true;
}

void Integrator::jacobian(const std::vector<double>& y, double t) {
  ++stats_.jacobians;
  jac_.resize(n_ * n_);
  tmp_ = y;
  for (std::size_t j = 0; j < n_; ++j) {
    // Central differences; the Bloch right-hand sides are quadratic, for which
    // this is exact up to rounding, so a large increment is preferred.
    const double dj = 1e-4 * std::max(std::abs(y[j]), 1.0);
    tmp_[j] = y[j] + dj;
    eval(t, tmp_.data(), k5_.data());
    tmp_[j] = y[j] - dj;
    eval(t, tmp_.data(), k6_.data());
    tmp_[j] = y[j];
    double* col = jac_.data() + j * n_;
    for (std::size_t i = 0; i < n_; ++i) col[i] = (k5_[i] - k6_[i]) / (2.0 * dj);
  }
}

bool Integrator::rosenbrock_step(std::vector<double>& y, double t, double h, double& err) {
  // Shampine's L-stable fourth-order Rosenbrock method with an embedded
  // third-order solution. The fourth stage reuses the third evaluation.
  constexpr double gam = 1.0 / 2, a21 = 2.0, a31 = 48.0 / 25, a32 = 6.0 / 25;
  constexpr double c21 = -8.0, c31 = 372.0 / 25, c32 = 12.0 / 5;
  constexpr double c41 = -112.0 / 125, c42 = -54.0 / 125, c43 = -2.0 / 5;
  constexpr double b1 = 19.0 / 9, b2 = 1.0 / 2, b3 = 25.0 / 108, b4 = 125.0 / 108;
  constexpr double e1 = 17.0 / 54, e2 = 7.0 / 36, e3 = 0.0, e4 = 125.0 / 108;
  constexpr double a2x = 1.0, a3x = 3.0 / 5;
  const auto n = static_cast<Eigen::Index>(n_);

  if (!fsal_valid_) {
    eval(t, y.data(), k1_.data());
    fsal_valid_ = true;
  }
  if (!jac_valid_) {
    jacobian(y, t);
    jac_valid_ = true;
  }
  Eigen::Map<const Eigen::MatrixXd> J(jac_.data(), n, n);
  Eigen::MatrixXd W = -J;
  W.diagonal().array() += 1.0 / (gam * h);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(W);

  auto vec = [n](std::vector<double>& v) { return Eigen::Map<Eigen::VectorXd>(v.data(), n); };
  Eigen::Map<const Eigen::VectorXd> y0(y.data(), n);

  const Eigen::VectorXd g1 = lu.solve(vec(k1_));
  vec(tmp_) = y0 + a21 * g1;
  eval(t + a2x * h, tmp_.data(), k2_.data());
  const Eigen::VectorXd g2 = lu.solve(vec(k2_) + (c21 / h) * g1);
  vec(tmp_) = y0 + a31 * g1 + a32 * g2;
  eval(t + a3x * h, tmp_.data(), k3_.data());
  const Eigen::VectorXd g3 = lu.solve(vec(k3_) + (c31 * g1 + c32 * g2) / h);
  const Eigen::VectorXd g4 = lu.solve(vec(k3_) + (c41 * g1 + c42 * g2 + c43 * g3) / h);
  vec(ynew_) = y0 + b1 * g1 + b2 * g2 + b3 * g3 + b4 * g4;
  vec(err_) = e1 * g1 + e2 * g2 + e3 * g3 + e4 * g4;
  err = error_norm(err_, y, ynew_);
  if (!(err <= 1.0)) return false;
  y.swap(ynew_);
  eval(t + h, y.data(), k1_.data());
  jac_valid_ = false;
  return true;
}

void Integrator::advance(std::vector<double>& y, double& t, double t_end) {
  if (y.size() != n_) throw PreconditionError("state dimension does not match the integrator");
  if (t_end < t) throw PreconditionError("cannot integrate backwards in time");
  if (t_end == t) return;
  fsal_valid_ = false;
  jac_valid_ = false;
  const double span = t_end - t;
  if (!(h_ > 0.0)) h_ = initial_step(y, t, span);
  const double h_min = opt_.h_min_rel * std::max(std::abs(t_end), span);

  while (t < t_end) {
    if (stats_.accepted + stats_.rejected >= opt_.max_steps) {
      throw StiffnessError("maximum number of steps exceeded", estimate_spectral_radius(rhs_, t, y));
    }
    double h = std::min(h_, opt_.h_max);
    bool last = false;
    if (t + h >= t_end || t_end - (t + h) < 0.01 * h) {
      h = t_end - t;
      last = true;
    }
    double err = 0.0;
    const bool ok = active_ == Method::kRosenbrock ? rosenbrock_step(y, t, h, err) : explicit_step(y, t, h, err);
    const double order = active_ == Method::kRosenbrock ? 4.0 : 5.0;
    double factor = (std::isfinite(err) && err > 0.0) ? 0.9 * std::pow(err, -1.0 / order) : (std::isfinite(err) ? 5.0 : 0.2);
    if (ok) {
      ++stats_.accepted;
      t = last ? t_end : t + h;
      factor = std::clamp(factor, 0.2, active_ == Method::kRosenbrock ? 5.0 : 10.0);
      // A step shortened to hit t_end says nothing about the step we could take.
      h_ = last ? std::max(h_, h * factor) : h * factor;
      if (active_ == Method::kExplicit && opt_.method == Method::kAuto && stiff_count_ >= kStiffSteps) {
        active_ = Method::kRosenbrock;
        stats_.switched_to_rosenbrock = true;
      }
    } else {
      ++stats_.rejected;
      h_ = h * std::clamp(factor, 0.1, 0.9);
      if (h_ < h_min) {
        if (active_ == Method::kExplicit && opt_.method == Method::kAuto) {
          active_ = Method::kRosenbrock;
          stats_.switched_to_rosenbrock = true;
          h_ = std::max(h_min * 10.0, h);
          fsal_valid_ = false;
          jac_valid_ = false;
          continue;
        }
        std::ostringstream msg;
        msg << "step size underflow at t = " << t << " (h = " << h_ << ")";
        throw StiffnessError(msg.str(), estimate_spectral_radius(rhs_, t, y));
      }
    }
  }
}

double estimate_spectral_radius(const Rhs& rhs, double t, const std::vector<double>& y, int iterations) {
  const std::size_t n = y.size();
  if (n == 0) return 0.0;
  std::vector<double> f0(n), f1(n), v(n, 1.0 / std::sqrt(static_cast<double>(n))), yp(n);
  rhs(t, y.data(), f0.data());
  double ynorm = 0.0;
  for (double x : y) ynorm += x * x;
  const double eps = 1e-7 * std::max(1.0, std::sqrt(ynorm));
  double log_growth = 0.0;
  int counted = 0;
  for (int it = 0; it < iterations; ++it) {
    for (std::size_t i = 0; i < n; ++i) yp[i] = y[i] + eps * v[i];
    rhs(t, yp.data(), f1.data());
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      v[i] = (f1[i] - f0[i]) / eps;
      norm += v[i] * v[i];
    }
    norm = std::sqrt(norm);
    if (!(norm > 0.0) || !std::isfinite(norm)) return norm;
    for (double& x : v) x /= norm;
    // Complex pairs make the iterate rotate; the mean growth still converges to |lambda|.
    if (it >= iterations / 2) {
      log_growth += std::log(norm);
      ++counted;
    }
  }
  return std::exp(log_growth / std::max(counted, 1));
}

}  // namespace eitcav::ode
