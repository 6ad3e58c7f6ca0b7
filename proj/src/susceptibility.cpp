#include "eitcav/susceptibility.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "eitcav/errors.hpp"
#include "kernels/kernels.hpp"

namespace eitcav {
namespace {

constexpr double kSeriesThreshold = 1e-4;

/// log(1 + z) without cancellation for small |z|.
cplx log1p(cplx z) {
  const double x = z.real(), y = z.imag();
  return {0.5 * std::log1p(2.0 * x + x * x + y * y), std::atan2(y, 1.0 + x)};
}

/// ln(1 + t) / t
cplx log_ratio(cplx t) {
  if (std::abs(t) < kSeriesThreshold) return 1.0 - t / 2.0 + t * t / 3.0 - t * t * t / 4.0;
  return log1p(t) / t;
}

/// 2 ln[(1 + sqrt(1 + 2t)) / 2] / t
cplx localized_ratio(cplx t) {
  if (std::abs(t) < kSeriesThreshold) return 1.0 - 0.75 * t + (5.0 / 6.0) * t * t - (35.0 / 32.0) * t * t * t;
  return 2.0 * log1p(t / (1.0 + std::sqrt(1.0 + 2.0 * t))) / t;
}

/// (ln(1 + s) - s) / s^2
cplx log_remainder(cplx s) {
  if (std::abs(s) < 0.1) {
    cplx sum = 0.0, pow = 1.0;
    for (int k = 0; k < 16; ++k) {
      sum += ((k % 2 == 0) ? -1.0 : 1.0) * pow / (k + 2.0);
      pow *= s;
    }
    return sum;
  }
  return (log1p(s) - s) / (s * s);
}

void require_resonant_control(const SystemParams& p) {
  if (p.detuning.delta_c != 0.0) {
    throw PreconditionError("closed-form susceptibilities assume delta_c = 0");
  }
}

void require_geometry(const SystemParams& p, Geometry g, const char* what) {
  if (p.ensemble.geometry != g) {
    throw PreconditionError(std::string(what) + " requires geometry " + to_string(g) + ", got " +
                            to_string(p.ensemble.geometry));
  }
}

cplx prefactor(double delta, const SystemParams& p) {
  const auto d = derived(p);
  const cplx A(d.gamma, -delta);
  if (A == 0.0) {
    if (d.g2N == 0.0) return 0.0;
    throw SingularInputError("two-level response is singular at gamma = 0, Delta = 0");
  }
  return kI * d.g2N / A;
}

bool dark_resonance_singular(double delta, const SystemParams& p) {
  return p.atomic.gamma_0 == 0.0 && delta == 0.0;
}

}  // namespace

SaturationParams saturation(double delta, const SystemParams& p) {
  const auto d = derived(p);
  const cplx A(d.gamma, -delta), Cc(p.atomic.gamma_0, -delta), E(d.gamma_s, -p.detuning.delta_s - delta);
  const double B = 0.5 * p.drive.omega_c * p.drive.omega_c;
  const double Ds = 0.5 * p.drive.omega_s * p.drive.omega_s;
  return {B == 0.0 ? cplx(0.0) : B / (A * Cc), Ds == 0.0 ? cplx(0.0) : Ds / (E * Cc)};
}

ComplexSusceptibility chi_two_level(double delta, const SystemParams& p) { return prefactor(delta, p); }

ComplexSusceptibility chi_eit_all(double delta, const SystemParams& p) {
  require_geometry(p, Geometry::kAllCavityDelocalized, "chi_eit_all");
  require_resonant_control(p);
  const cplx pre = prefactor(delta, p);
  if (p.drive.omega_c > 0.0 && dark_resonance_singular(delta, p)) return 0.0;
  return pre * log_ratio(saturation(delta, p).theta);
}

ComplexSusceptibility chi_eit_standard(double delta, const SystemParams& p) {
  require_geometry(p, Geometry::kStandard, "chi_eit_standard");
  require_resonant_control(p);
  const cplx pre = prefactor(delta, p);
  if (p.drive.omega_c > 0.0 && dark_resonance_singular(delta, p)) return 0.0;
  const cplx den = 1.0 + saturation(delta, p).theta;
  if (std::abs(den) == 0.0) throw SingularInputError("1 + Theta = 0");
  return pre / den;
}

ComplexSusceptibility chi_eit_localized(double delta, const SystemParams& p, LocalizedConvention convention) {
  require_geometry(p, Geometry::kAllCavityLocalized, "chi_eit_localized");
  require_resonant_control(p);
  const cplx pre = prefactor(delta, p);
  if (p.drive.omega_c > 0.0 && dark_resonance_singular(delta, p)) return 0.0;
  cplx theta = saturation(delta, p).theta;
  if (convention == LocalizedConvention::kAveragedCoupling) theta *= 0.5;
  return pre * localized_ratio(theta);
}

ComplexSusceptibility chi_sw_all(double delta, const SystemParams& p) {
  require_geometry(p, Geometry::kAllCavityDelocalized, "chi_sw_all");
  require_resonant_control(p);
  const cplx pre = prefactor(delta, p);
  const auto d = derived(p);
  if (dark_resonance_singular(delta, p) && (p.drive.omega_c > 0.0 || p.drive.omega_s > 0.0)) {
    // Theta and Theta_s both diverge; only their ratio survives.
    const cplx A(d.gamma, -delta), E(d.gamma_s, -p.detuning.delta_s - delta);
    const double B = 0.5 * p.drive.omega_c * p.drive.omega_c, Ds = 0.5 * p.drive.omega_s * p.drive.omega_s;
    return pre * Ds * A / (Ds * A + B * E);
  }
  const auto sat = saturation(delta, p);
  // Theta ln(1+S)/S^2 + Theta_s/S rewritten as 1 + Theta (ln(1+S) - S)/S^2, S = Theta + Theta_s.
  return pre * (1.0 + sat.theta * log_remainder(sat.theta + sat.theta_s));
}

ComplexSusceptibility chi_sw_standard(double delta, const SystemParams& p) {
  require_geometry(p, Geometry::kStandard, "chi_sw_standard");
  require_resonant_control(p);
  const cplx pre = prefactor(delta, p);
  const auto d = derived(p);
  if (dark_resonance_singular(delta, p) && (p.drive.omega_c > 0.0 || p.drive.omega_s > 0.0)) {
    const cplx A(d.gamma, -delta), E(d.gamma_s, -p.detuning.delta_s - delta);
    const double B = 0.5 * p.drive.omega_c * p.drive.omega_c, Ds = 0.5 * p.drive.omega_s * p.drive.omega_s;
    return pre * Ds * A / (Ds * A + B * E);
  }
  const auto sat = saturation(delta, p);
  const cplx inner = 1.0 + sat.theta_s;
  if (std::abs(inner) == 0.0) throw SingularInputError("1 + Theta_s = 0");
  const cplx den = 1.0 + sat.theta / inner;
  if (std::abs(den) == 0.0) throw SingularInputError("switching susceptibility denominator vanishes");
  return pre / den;
}

ComplexSusceptibility chi(double delta, const SystemParams& p) {
  const bool switching = p.drive.omega_s > 0.0;
  switch (p.ensemble.geometry) {
    case Geometry::kStandard:
      return switching ? chi_sw_standard(delta, p) : chi_eit_standard(delta, p);
    case Geometry::kAllCavityDelocalized:
      return switching ? chi_sw_all(delta, p) : chi_eit_all(delta, p);
    case Geometry::kAllCavityLocalized:
      return switching ? chi_quadrature(delta, p) : chi_eit_localized(delta, p);
  }
  return chi_two_level(delta, p);
}

namespace {

struct Response {
  kernels::MobiusCoeffs coeffs;
  double g2N;
};

/// Per-atom response (P + D v) / (Q + R v) where v is the local control
/// (and switching) intensity relative to the antinode value in the centre.
Response response(double delta, const SystemParams& p, double intensity_scale) {
  const auto d = derived(p);
  const cplx A(d.gamma, -delta), Cc(p.atomic.gamma_0, -(delta - p.detuning.delta_c));
  const double B = intensity_scale * 0.5 * p.drive.omega_c * p.drive.omega_c;
  cplx E = 1.0;
  double Ds = 0.0;
  if (p.drive.omega_s > 0.0) {
    E = cplx(d.gamma_s, -(p.detuning.delta_s - p.detuning.delta_c + delta));
    Ds = intensity_scale * 0.5 * p.drive.omega_s * p.drive.omega_s;
  }
  return {{Cc * E, Ds, A * Cc * E, A * Ds + B * E}, d.g2N};
}

cplx pole_of(const kernels::MobiusCoeffs& c) {
  if (c.R == 0.0) return {2.0, 0.0};  // constant integrand; any far pole gives plain Gauss-Legendre
  return -c.Q / c.R;
}

cplx sum_rule(const std::vector<double>& w, const std::vector<double>& v, const kernels::MobiusCoeffs& c) {
  return kernels::mobius_sum(w.data(), v.data(), w.size(), c);
}

}  // namespace

ComplexSusceptibility chi_quadrature(double delta, const SystemParams& p, int n_nodes,
                                     LocalizedConvention convention) {
  if (n_nodes < 2) throw PreconditionError("chi_quadrature needs at least two nodes");
  switch (p.ensemble.geometry) {
    case Geometry::kStandard:
      return chi_quadrature(delta, p, RadialGrid::single_shell());
    case Geometry::kAllCavityDelocalized:
      return chi_quadrature(delta, p, n_nodes, std::function<double(double)>{});
    case Geometry::kAllCavityLocalized:
      break;
  }
  // Localized: v = u c with c = cos^2(phi), phi uniform on [0, pi/2]; the
  // atom sum weights each node with 2c so that the mean coupling is g^2 N.
  const double scale = convention == LocalizedConvention::kFullCoupling ? 2.0 : 1.0;
  const auto r = response(delta, p, scale);
  const cplx c_pole = pole_of(r.coeffs);
  const cplx phi_pole = std::acos(std::sqrt(c_pole));
  const auto phi_rule = sinh_gauss_legendre(n_nodes, 0.0, 0.5 * std::numbers::pi, phi_pole);
  std::vector<double> w, v;
  w.reserve(static_cast<std::size_t>(n_nodes) * n_nodes);
  v.reserve(w.capacity());
  for (std::size_t j = 0; j < phi_rule.size(); ++j) {
    const double c = std::pow(std::cos(phi_rule.nodes[j]), 2);
    const double wphi = phi_rule.weights[j] / (0.5 * std::numbers::pi);
    const auto u_rule = sinh_gauss_legendre(n_nodes, 0.0, 1.0, c > 0.0 ? c_pole / c : cplx(2.0, 0.0));
    for (std::size_t k = 0; k < u_rule.size(); ++k) {
      w.push_back(2.0 * c * wphi * u_rule.weights[k]);
      v.push_back(u_rule.nodes[k] * c);
    }
  }
  return kI * r.g2N * sum_rule(w, v, r.coeffs);
}

ComplexSusceptibility chi_quadrature(double delta, const SystemParams& p, const RadialGrid& grid) {
  const auto r = response(delta, p, 1.0);
  return kI * r.g2N * sum_rule(grid.weight, grid.u, r.coeffs);
}

ComplexSusceptibility chi_quadrature(double delta, const SystemParams& p, int n_nodes,
                                     const std::function<double(double)>& density) {
  if (n_nodes < 2) throw PreconditionError("chi_quadrature needs at least two nodes");
  const auto r = response(delta, p, 1.0);
  auto rule = sinh_gauss_legendre(n_nodes, 0.0, 1.0, pole_of(r.coeffs));
  if (density) {
    for (std::size_t k = 0; k < rule.size(); ++k) rule.weights[k] *= density(rule.nodes[k]);
  }
  return kI * r.g2N * sum_rule(rule.weights, rule.nodes, r.coeffs);
}

double min_absorption_rabi_scaling(const SystemParams& p) {
  const auto d = derived(p);
  const double arg = p.drive.omega_c * p.drive.omega_c / (d.gamma * p.atomic.gamma_0);
  if (!(arg > std::numbers::e)) {
    throw DomainError("min_absorption_rabi_scaling needs Omega_c^2 > e gamma gamma_0");
  }
  return std::sqrt(std::log(arg));
}

}  // namespace eitcav
