#include "eitcav/params.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "eitcav/errors.hpp"

namespace eitcav {

AtomicParams AtomicParams::from_linewidths(double g_p, double g_c, double g_s, double gamma,
                                           double gamma_s, double gamma_0, double branching_31) {
  if (gamma < gamma_0 || gamma_s < gamma_0) {
    throw ConfigError("optical linewidths must not be smaller than gamma_0");
  }
  AtomicParams a;
  a.g_p = g_p;
  a.g_c = g_c;
  a.g_s = g_s;
  const double total = 2.0 * (gamma - gamma_0);
  a.gamma_31 = branching_31 * total;
  a.gamma_32 = (1.0 - branching_31) * total;
  a.gamma_42 = 2.0 * (gamma_s - gamma_0);
  a.gamma_0 = gamma_0;
  return a;
}

EnsembleParams EnsembleParams::from_density(double rho, double waist, double half_length,
                                            double g_p, Geometry geometry) {
  const double n = rho * std::numbers::pi * waist * waist * half_length / 2.0;
  return EnsembleParams{g_p * std::sqrt(n), geometry};
}

DerivedRates derived(const SystemParams& p) {
  DerivedRates d;
  const auto& a = p.atomic;
  d.gamma = 0.5 * (a.gamma_31 + a.gamma_32) + a.gamma_0;
  d.gamma_s = 0.5 * a.gamma_42 + a.gamma_0;
  d.kappa = p.cavity.kappa_H + p.cavity.kappa_L + p.cavity.kappa_A;
  d.g2N = p.ensemble.g_p_sqrt_N * p.ensemble.g_p_sqrt_N;
  d.N = a.g_p > 0.0 ? d.g2N / (a.g_p * a.g_p) : 0.0;
  d.cooperativity = (d.kappa > 0.0 && d.gamma > 0.0) ? d.g2N / (2.0 * d.kappa * d.gamma) : 0.0;
  d.gbar_p = a.g_p / std::numbers::sqrt2;
  d.gbar_c = a.g_c / std::numbers::sqrt2;
  d.gbar_s = a.g_s / std::numbers::sqrt2;
  return d;
}

void validate(const SystemParams& p) {
  const auto& a = p.atomic;
  const auto& c = p.cavity;
  auto nonneg = [](double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw ConfigError(std::string(name) + " must be a finite, non-negative rate");
    }
  };
  nonneg(a.g_p, "g_p");
  nonneg(a.g_c, "g_c");
  nonneg(a.g_s, "g_s");
  nonneg(a.gamma_31, "gamma_31");
  nonneg(a.gamma_32, "gamma_32");
  nonneg(a.gamma_42, "gamma_42");
  nonneg(a.gamma_0, "gamma_0");
  nonneg(c.kappa_H, "kappa_H");
  nonneg(c.kappa_L, "kappa_L");
  nonneg(c.kappa_A, "kappa_A");
  nonneg(p.drive.omega_c, "omega_c");
  nonneg(p.drive.omega_s, "omega_s");
  nonneg(p.ensemble.g_p_sqrt_N, "g_p_sqrt_N");
  if (!(c.tau > 0.0)) throw ConfigError("tau must be positive");
  if (p.ensemble.g_p_sqrt_N > 0.0 && a.g_p <= 0.0) {
    throw ConfigError("g_p must be positive to derive the atom number from g_p_sqrt_N");
  }
  const bool injected = std::abs(p.drive.a_p_in) > 0.0 || p.drive.omega_c > 0.0 || p.drive.omega_s > 0.0;
  if (injected && c.kappa_H <= 0.0) {
    throw ConfigError("kappa_H must be positive when fields are injected through the input mirror");
  }
}

std::vector<std::string> assumption_warnings(const SystemParams& p) {
  std::vector<std::string> out;
  const auto& a = p.atomic;
  const double smallest = std::min({a.gamma_31 + a.gamma_32, a.gamma_42});
  if (a.gamma_0 > 0.0 && smallest > 0.0 && a.gamma_0 > 0.01 * smallest) {
    out.emplace_back("gamma_0 is not small compared to the optical decay rates");
  }
  const auto d = derived(p);
  if (d.kappa > 0.0 && p.cavity.kappa_H > 0.0 && p.drive.omega_c > 0.0) {
    const double a_p = std::sqrt(2.0 * p.cavity.kappa_H / p.cavity.tau) * std::abs(p.drive.a_p_in) / d.kappa;
    if (a.g_p * a_p > 0.1 * p.drive.omega_c) {
      out.emplace_back("weak-probe condition g_p|a_p| << Omega_c is not satisfied");
    }
  }
  return out;
}

const char* to_string(Geometry g) {
  switch (g) {
    case Geometry::kAllCavityDelocalized: return "all_cavity_delocalized";
    case Geometry::kAllCavityLocalized: return "all_cavity_localized";
    case Geometry::kStandard: return "standard";
  }
  return "unknown";
}

Geometry geometry_from_string(const std::string& s) {
  if (s == "all_cavity_delocalized" || s == "AllCavityDelocalized") return Geometry::kAllCavityDelocalized;
  if (s == "all_cavity_localized" || s == "AllCavityLocalized") return Geometry::kAllCavityLocalized;
  if (s == "standard" || s == "Standard") return Geometry::kStandard;
  throw ConfigError("unknown geometry '" + s + "'");
}

double input_for_photons(const SystemParams& p, double photons, double cavity_detuning) {
  const double kappa = derived(p).kappa;
  const double coupling = std::sqrt(2.0 * p.cavity.kappa_H / p.cavity.tau);
  if (coupling <= 0.0) throw PreconditionError("input mirror coupling is zero");
  return std::abs(cplx(kappa, -cavity_detuning)) * std::sqrt(photons) / coupling;
}

namespace presets {
namespace {

constexpr double kTau = 0.02 / 299.792458;  // 1 cm linear cavity, us

SystemParams base(Geometry geometry) {
  SystemParams p;
  p.atomic = AtomicParams::from_linewidths(from_mhz(0.53), from_mhz(0.22), from_mhz(0.18),
                                           from_mhz(11.2), from_mhz(11.0), from_mhz(6e-4));
  p.cavity.tau = kTau;
  p.ensemble.g_p_sqrt_N = from_mhz(16.0);
  p.ensemble.geometry = geometry;
  return p;
}

void unit_probe(SystemParams& p) { p.drive.a_p_in = input_for_photons(p, 1.0); }

}  // namespace

SystemParams eit_spectrum(Geometry geometry) {
  auto p = base(geometry);
  p.cavity.kappa_H = from_mhz(1.1);
  p.cavity.kappa_L = from_mhz(1.1);
  p.drive.omega_c = from_mhz(6.0);
  unit_probe(p);
  return p;
}

SystemParams eit_reflection(Geometry geometry) {
  auto p = eit_spectrum(geometry);
  p.cavity.kappa_H = from_mhz(1.5);
  p.cavity.kappa_L = 0.0;
  p.cavity.kappa_A = from_mhz(0.7);
  unit_probe(p);
  return p;
}

SystemParams switching_spectrum(Geometry geometry) {
  auto p = eit_spectrum(geometry);
  p.drive.omega_c = from_mhz(4.0);
  p.drive.omega_s = from_mhz(40.0);
  p.detuning.delta_s = from_mhz(4300.0);
  return p;
}

SystemParams low_light_switching() {
  auto p = base(Geometry::kStandard);
  p.cavity.kappa_H = from_mhz(1.5);
  p.drive.omega_c = from_mhz(2.0);
  unit_probe(p);
  return p;
}

}  // namespace presets

}  // namespace eitcav
