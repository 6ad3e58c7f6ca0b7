#include "eitcav/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "eitcav/csv.hpp"
#include "eitcav/errors.hpp"
#include "eitcav/parallel.hpp"

namespace eitcav {
namespace {

cplx cavity_denominator(double delta, cplx chi, const SystemParams& p) {
  const cplx den = derived(p).kappa - kI * delta - kI * chi;
  if (std::abs(den) == 0.0) throw SingularInputError("cavity denominator kappa - i Delta - i chi vanishes");
  return den;
}

}  // namespace

cplx intracavity_amplitude(double delta, cplx chi, const SystemParams& p) {
  return std::sqrt(2.0 * p.cavity.kappa_H / p.cavity.tau) * p.drive.a_p_in / cavity_denominator(delta, chi, p);
}

double transmission(double delta, cplx chi, const SystemParams& p) {
  const cplx den = cavity_denominator(delta, chi, p);
  return std::norm(2.0 * std::sqrt(p.cavity.kappa_H * p.cavity.kappa_L) / den);
}

double reflection(double delta, cplx chi, const SystemParams& p) {
  const cplx den = cavity_denominator(delta, chi, p);
  const auto& c = p.cavity;
  const double port = c.reflection_port == ReflectionPort::kHighMirror ? 2.0 * c.kappa_H
                                                                       : 2.0 * std::sqrt(c.kappa_H * c.kappa_L);
  return std::norm((port - den) / den);
}

double normalized_transmission(double delta, cplx chi, const SystemParams& p) {
  const cplx den = cavity_denominator(delta, chi, p);
  return std::norm(derived(p).kappa / den);
}

std::pair<double, double> half_maximum_points(const SystemParams& p) {
  const auto d = derived(p);
  auto t_norm = [&](double delta) { return normalized_transmission(delta, chi(delta, p), p); };
  const double peak = t_norm(0.0);
  const double half = 0.5 * peak;
  const double limit = std::max(0.5 * std::sqrt(d.g2N + 0.5 * p.drive.omega_c * p.drive.omega_c), 10.0 * d.kappa);
  const double first = std::max({1e-6 * d.kappa, 1e-3 * p.atomic.gamma_0, 1e-12});

  auto side = [&](double sign) {
    double inner = 0.0, outer = first;
    while (t_norm(sign * outer) > half) {
      inner = outer;
      outer *= 1.25;
      if (outer > limit) {
        throw NoTransparencyWindowError("T_norm does not fall to half its resonant value within " +
                                        csv::format(to_mhz(limit)) + " MHz");
      }
    }
    for (int it = 0; it < 200 && outer - inner > 1e-13 * outer; ++it) {
      const double mid = 0.5 * (inner + outer);
      (t_norm(sign * mid) > half ? inner : outer) = mid;
    }
    return sign * 0.5 * (inner + outer);
  };
  return {side(-1.0), side(1.0)};
}

double eit_linewidth(const SystemParams& p, LinewidthMethod method) {
  if (method == LinewidthMethod::kAnalyticStandard) {
    const auto d = derived(p);
    if (d.g2N <= 0.0) throw DomainError("analytic EIT linewidth needs g_p sqrt(N) > 0");
    return p.atomic.gamma_0 + d.kappa * 0.5 * p.drive.omega_c * p.drive.omega_c / d.g2N;
  }
  const auto [lo, hi] = half_maximum_points(p);
  return 0.5 * (hi - lo);
}

double effective_rabi_scaling(const SystemParams& p) {
  const double C = derived(p).cooperativity;
  if (!(C > 0.5)) throw DomainError("effective Rabi scaling needs cooperativity C > 1/2");
  const double L2 = std::pow(std::log(2.0 * C), 2);
  constexpr double pi = std::numbers::pi;
  const double bracket = (std::sqrt(2.0 * pi * pi + 4.0 * L2) - pi) / (0.5 * pi * pi + 2.0 * L2);
  return 1.0 / std::sqrt(bracket);
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return out;
}

std::vector<double> default_grid(bool dense_insert) {
  auto grid = linspace(from_mhz(-30.0), from_mhz(30.0), 2001);
  if (!dense_insert) return grid;
  const auto dense = linspace(from_mhz(-1.0), from_mhz(1.0), 2001);
  grid.insert(grid.end(), dense.begin(), dense.end());
  std::sort(grid.begin(), grid.end());
  const double tol = 1e-9 * from_mhz(1.0);
  grid.erase(std::unique(grid.begin(), grid.end(), [tol](double a, double b) { return b - a < tol; }), grid.end());
  return grid;
}

SpectrumTable scan(const std::vector<double>& grid, const SystemParams& p, const ChiFunction& chi_fn, int threads) {
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw PreconditionError("scan grid must be strictly increasing");
  }
  const ChiFunction fn = chi_fn ? chi_fn : ChiFunction([](double d, const SystemParams& q) { return chi(d, q); });
  SpectrumTable table;
  table.rows.resize(grid.size());
  parallel_for(grid.size(), threads, [&](std::size_t i) {
    const double delta = grid[i];
    try {
      const cplx x = fn(delta, p);
      table.rows[i] = {delta, transmission(delta, x, p), reflection(delta, x, p), normalized_transmission(delta, x, p)};
    } catch (const SingularInputError& e) {
      std::ostringstream msg;
      msg << "row " << i << " (delta = " << csv::format(to_mhz(delta)) << " MHz): " << e.what();
      throw SingularInputError(msg.str());
    }
  });
  return table;
}

std::vector<Peak> find_peaks(const SpectrumTable& table, Observable column, double min_value) {
  auto value = [&](std::size_t i) {
    const auto& r = table.rows[i];
    switch (column) {
      case Observable::kT: return r.T;
      case Observable::kR: return r.R;
      case Observable::kTNorm: return r.T_norm;
    }
    return r.T_norm;
  };
  std::vector<Peak> peaks;
  for (std::size_t i = 1; i + 1 < table.rows.size(); ++i) {
    const double y0 = value(i - 1), y1 = value(i), y2 = value(i + 1);
    if (!(y1 > y0 && y1 >= y2) || y1 < min_value) continue;
    const double x0 = table.rows[i - 1].delta, x1 = table.rows[i].delta, x2 = table.rows[i + 1].delta;
    // Parabola through the three samples, in divided-difference form.
    const double d01 = (y1 - y0) / (x1 - x0), d12 = (y2 - y1) / (x2 - x1);
    const double a = (d12 - d01) / (x2 - x0);
    Peak pk{x1, y1};
    if (a < 0.0) {
      const double b = d01 - a * (x0 + x1);
      const double xv = -b / (2.0 * a);
      if (xv > x0 && xv < x2) pk = {xv, y0 + (xv - x0) * (d01 + a * (xv - x1))};
    }
    peaks.push_back(pk);
  }
  return peaks;
}

void write_csv(std::ostream& out, const SpectrumTable& table) {
  out << "delta_MHz,T,R,T_norm\n";
  for (const auto& r : table.rows) csv::write_row(out, {to_mhz(r.delta), r.T, r.R, r.T_norm});
}

}  // namespace eitcav
