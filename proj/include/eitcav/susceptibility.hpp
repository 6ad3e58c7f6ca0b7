#pragma once

// Linear probe susceptibilities chi(Delta), in rad/us.
//
// chi enters the intracavity field as kappa - i Delta - i chi, so Im chi > 0 is
// absorption and Re chi a dispersive shift. The closed forms assume the
// control field on one-photon resonance (delta_c = 0); they throw
// PreconditionError otherwise.

#include <functional>

#include "eitcav/params.hpp"
#include "eitcav/quadrature.hpp"
#include "eitcav/units.hpp"

namespace eitcav {

using ComplexSusceptibility = cplx;

struct SaturationParams {
  cplx theta;    ///< (Omega_c^2/2) / ((gamma - i Delta)(gamma_0 - i Delta))
  cplx theta_s;  ///< (Omega_s^2/2) / ((gamma_s - i Delta_s - i Delta)(gamma_0 - i Delta))
};

SaturationParams saturation(double delta, const SystemParams& params);

/// How the control Rabi frequency is read for atoms pinned in the standing wave.
enum class LocalizedConvention {
  kFullCoupling,      ///< Omega_c is the antinode Rabi frequency (default)
  kAveragedCoupling,  ///< Omega_c is the standing-wave averaged value, antinode sqrt(2) larger
};

ComplexSusceptibility chi_two_level(double delta, const SystemParams& params);
ComplexSusceptibility chi_eit_all(double delta, const SystemParams& params);
ComplexSusceptibility chi_eit_standard(double delta, const SystemParams& params);
ComplexSusceptibility chi_eit_localized(double delta, const SystemParams& params,
                                        LocalizedConvention convention = LocalizedConvention::kFullCoupling);
ComplexSusceptibility chi_sw_all(double delta, const SystemParams& params);
ComplexSusceptibility chi_sw_standard(double delta, const SystemParams& params);

/// Closed form matching the geometry and whether a switching field is present.
/// Localized atoms with a switching field have no closed form and fall back to
/// chi_quadrature.
ComplexSusceptibility chi(double delta, const SystemParams& params);

/// Direct quadrature of the single-atom response over the transverse mode
/// profile (and the standing wave for localized atoms). Nodes are clustered
/// around the integrand's complex pole, located separately for every Delta.
/// The standard geometry reduces to one shell.
ComplexSusceptibility chi_quadrature(double delta, const SystemParams& params, int n_nodes = 64,
                                     LocalizedConvention convention = LocalizedConvention::kFullCoupling);

/// Quadrature on a caller-supplied radial grid with the delocalized couplings;
/// no pole adaptation.
ComplexSusceptibility chi_quadrature(double delta, const SystemParams& params, const RadialGrid& grid);

/// Non-uniform transverse density: `density(u)` is the local density relative to
/// the uniform ensemble of the same g_p sqrt(N).
ComplexSusceptibility chi_quadrature(double delta, const SystemParams& params, int n_nodes,
                                     const std::function<double(double)>& density);

/// No gain: Im chi >= -eps.
inline bool is_passive(ComplexSusceptibility chi, double eps = 1e-12) { return chi.imag() >= -eps; }

/// Scaling sqrt(ln(Omega_c^2 / gamma gamma_0)) of the standard-geometry Rabi
/// frequency that reproduces the all-cavity resonant absorption level.
/// Throws DomainError unless Omega_c^2 > e gamma gamma_0.
double min_absorption_rabi_scaling(const SystemParams& params);

}  // namespace eitcav
