#pragma once

// Physical parameters of the atom-cavity system.
//
// Every frequency is angular (rad/us), every time in us; see units.hpp.
// Level scheme: probe |1>-|3>, control |2>-|3>, switching |2>-|4>.

#include <string>
#include <vector>

#include "eitcav/units.hpp"

namespace eitcav {

enum class Geometry {
  kAllCavityDelocalized,  ///< all fields share the Gaussian mode, atoms average the standing wave
  kAllCavityLocalized,    ///< all fields share the mode, atoms pinned along the standing wave
  kStandard,              ///< control/switching uniform over the ensemble
};

/// Which mirror rate enters the reflected-field input-output relation.
enum class ReflectionPort {
  kHighMirror,  ///< a_ref = sqrt(2 kappa_H tau) a - a_in (default)
  kLowMirror,   ///< a_ref = sqrt(2 kappa_L tau) a - a_in
};

struct AtomicParams {
  double g_p = 0.0;  ///< maximal single-atom coupling, probe transition
  double g_c = 0.0;
  double g_s = 0.0;
  double gamma_31 = 0.0;  ///< spontaneous decay rates
  double gamma_32 = 0.0;
  double gamma_42 = 0.0;
  double gamma_0 = 0.0;  ///< ground-state coherence decay

  /// Splits the optical coherence decay rates gamma, gamma_s back into
  /// spontaneous rates; `branching_31` is gamma_31 / (gamma_31 + gamma_32).
  static AtomicParams from_linewidths(double g_p, double g_c, double g_s, double gamma,
                                      double gamma_s, double gamma_0, double branching_31 = 0.5);
};

struct CavityParams {
  double kappa_H = 0.0;  ///< input (high-transmission) mirror
  double kappa_L = 0.0;  ///< output (low-transmission) mirror
  double kappa_A = 0.0;  ///< round-trip absorption
  double tau = 1.0;      ///< round-trip time, us
  ReflectionPort reflection_port = ReflectionPort::kHighMirror;
};

struct DriveParams {
  double omega_c = 0.0;  ///< Omega_c = g_c |a_c|, maximal intracavity control Rabi frequency
  double omega_s = 0.0;  ///< Omega_s = g_s |a_s|
  cplx a_p_in{0.0, 0.0};  ///< input probe amplitude, sqrt(photons/us)
};

struct DetuningParams {
  double delta = 0.0;  ///< probe detuning; analytic tiers use Delta_p = Delta_p^c = Delta
  double delta_c = 0.0;
  double delta_s = 0.0;
  double delta_p_c = 0.0;  ///< cavity detunings (fullsim only)
  double delta_c_c = 0.0;
  double delta_s_c = 0.0;
};

struct EnsembleParams {
  double g_p_sqrt_N = 0.0;  ///< collective probe coupling g_p sqrt(N)
  Geometry geometry = Geometry::kAllCavityDelocalized;

  /// Effective atom number N = rho pi w^2 L / 2 for a uniform ensemble of
  /// density `rho` and half-length `half_length` in a mode of waist `waist`.
  static EnsembleParams from_density(double rho, double waist, double half_length, double g_p,
                                     Geometry geometry);
};

struct SystemParams {
  AtomicParams atomic;
  CavityParams cavity;
  DriveParams drive;
  DetuningParams detuning;
  EnsembleParams ensemble;
};

struct DerivedRates {
  double gamma = 0.0;    ///< (gamma_31 + gamma_32)/2 + gamma_0
  double gamma_s = 0.0;  ///< gamma_42/2 + gamma_0
  double kappa = 0.0;    ///< kappa_H + kappa_L + kappa_A
  double N = 0.0;        ///< (g_p sqrt(N) / g_p)^2
  double cooperativity = 0.0;  ///< g_p^2 N / (2 kappa gamma)
  double gbar_p = 0.0;   ///< longitudinally averaged couplings g / sqrt(2)
  double gbar_c = 0.0;
  double gbar_s = 0.0;
  double g2N = 0.0;      ///< g_p^2 N
};

DerivedRates derived(const SystemParams& params);

/// Throws ConfigError when an invariant is violated (negative rates,
/// non-positive round-trip time, injected fields with kappa_H = 0, ...).
void validate(const SystemParams& params);

/// Soft modelling assumptions that are reported, not enforced.
std::vector<std::string> assumption_warnings(const SystemParams& params);

const char* to_string(Geometry g);
Geometry geometry_from_string(const std::string& s);

/// Input amplitude that leaves `photons` intracavity photons in the empty cavity
/// at cavity detuning `cavity_detuning`.
double input_for_photons(const SystemParams& params, double photons, double cavity_detuning = 0.0);

/// Reference parameter sets used by the example configurations and tests.
namespace presets {

/// (g_p sqrt N, gamma, gamma_0, Omega_c, kappa) = 2pi x (16, 11.2, 6e-4, 6, 2.2) MHz,
/// symmetric mirrors without absorption.
SystemParams eit_spectrum(Geometry geometry = Geometry::kAllCavityDelocalized);

/// As eit_spectrum but (kappa_H, kappa_L, kappa_A) = 2pi x (1.5, 0, 0.7) MHz.
SystemParams eit_reflection(Geometry geometry = Geometry::kAllCavityDelocalized);

/// Switching susceptibility set: Omega_c = 2pi x 4, gamma_s = 2pi x 11,
/// Delta_s = 2pi x 4300, Omega_s = 2pi x 40 MHz, kappa = 2pi x 2.2 MHz.
SystemParams switching_spectrum(Geometry geometry = Geometry::kAllCavityDelocalized);

/// Low-light switching with ion Coulomb crystals: standard geometry,
/// kappa = kappa_H = 2pi x 1.5, Omega_c = 2pi x 2 MHz, couplings 2pi x (0.53, 0.22, 0.18) MHz.
SystemParams low_light_switching();

}  // namespace presets

}  // namespace eitcav
