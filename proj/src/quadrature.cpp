#include "eitcav/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace eitcav {
namespace {

QuadratureRule compute_gauss_legendre(int n) {
  QuadratureRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.nodes[n / 2] = 0.0;
  return r;
}

}  // namespace

const QuadratureRule& gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("Gauss-Legendre rule needs at least one node");
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<QuadratureRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<QuadratureRule>(compute_gauss_legendre(n));
  return *slot;
}

QuadratureRule gauss_legendre(int n, double lo, double hi) {
  const auto& ref = gauss_legendre(n);
  const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
  QuadratureRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    r.nodes[i] = mid + half * ref.nodes[i];
    r.weights[i] = half * ref.weights[i];
  }
  return r;
}

QuadratureRule sinh_gauss_legendre(int n, double lo, double hi, std::complex<double> pole) {
  const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
  // Work on [-1, 1].
  double a = (pole.real() - mid) / half;
  double b = std::abs(pole.imag()) / half;
  if (a < -1.0 || a > 1.0) {
    const double end = a < -1.0 ? -1.0 : 1.0;
    b = std::hypot(a - end, b);
    a = end;
  }
  if (!(b < 1.0) || !std::isfinite(a)) return gauss_legendre(n, lo, hi);
  b = std::max(b, 1e-300);
  const double left = std::asinh((-1.0 - a) / b);
  const double right = std::asinh((1.0 - a) / b);
  const double A = 0.5 * (right - left), B = 0.5 * (right + left);
  const auto& ref = gauss_legendre(n);
  QuadratureRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    const double s = A * ref.nodes[i] + B;
    r.nodes[i] = mid + half * (a + b * std::sinh(s));
    r.weights[i] = half * ref.weights[i] * A * b * std::cosh(s);
  }
  return r;
}

double RadialGrid::psi(std::size_t k) const { return std::sqrt(u[k]); }

RadialGrid RadialGrid::gauss_legendre(int n) {
  const auto rule = eitcav::gauss_legendre(n, 0.0, 1.0);
  return RadialGrid{rule.nodes, rule.weights};
}

RadialGrid RadialGrid::clustered(int n, double scale) {
  const auto rule = sinh_gauss_legendre(n, 0.0, 1.0, {0.0, scale});
  return RadialGrid{rule.nodes, rule.weights};
}

RadialGrid RadialGrid::single_shell() { return RadialGrid{{1.0}, {1.0}}; }

}  // namespace eitcav
