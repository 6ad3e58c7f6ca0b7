#pragma once

// Steady-state cavity observables for a given probe susceptibility.

#include <functional>
#include <ostream>
#include <utility>
#include <vector>

#include "eitcav/params.hpp"
#include "eitcav/susceptibility.hpp"

namespace eitcav {

/// sqrt(2 kappa_H / tau) a_p^in / (kappa - i Delta - i chi)
cplx intracavity_amplitude(double delta, cplx chi, const SystemParams& params);

/// Intensity transmission through the output mirror.
double transmission(double delta, cplx chi, const SystemParams& params);

/// Intensity reflection off the input mirror; the port used for the
/// reflected-field relation follows params.cavity.reflection_port.
double reflection(double delta, cplx chi, const SystemParams& params);

/// |kappa / (kappa - i Delta - i chi)|^2, transmission relative to the empty resonant cavity.
double normalized_transmission(double delta, cplx chi, const SystemParams& params);

enum class LinewidthMethod { kAnalyticStandard, kNumericHWHM };

/// Half-width of the transparency window. The analytic form is
/// gamma_0 + kappa (Omega_c^2/2) / (g_p^2 N); the numeric one bisects for the
/// half maximum of T_norm on both sides of Delta = 0 and averages the two.
double eit_linewidth(const SystemParams& params, LinewidthMethod method);

/// Half-maximum points (negative side, positive side) of T_norm around Delta = 0.
std::pair<double, double> half_maximum_points(const SystemParams& params);

/// Factor by which the standard-geometry Rabi frequency must be divided to give
/// the all-cavity transparency width. Throws DomainError for C <= 1/2.
double effective_rabi_scaling(const SystemParams& params);

using ChiFunction = std::function<cplx(double, const SystemParams&)>;

struct SpectrumRow {
  double delta;  ///< rad/us
  double T;
  double R;
  double T_norm;
};

struct SpectrumTable {
  std::vector<SpectrumRow> rows;
};

/// 2001 points over 2pi x [-30, 30] MHz, optionally merged with 2001 points
/// over 2pi x [-1, 1] MHz.
std::vector<double> default_grid(bool dense_insert = false);

std::vector<double> linspace(double lo, double hi, std::size_t n);

/// Evaluates `chi_fn` (default: closed form for the geometry) and all
/// observables on a strictly increasing grid. Rows are independent and are
/// spread over `threads` workers; row order always follows the grid.
SpectrumTable scan(const std::vector<double>& grid, const SystemParams& params,
                   const ChiFunction& chi_fn = {}, int threads = 1);

struct Peak {
  double delta;
  double value;
};

enum class Observable { kT, kR, kTNorm };

/// Interior local maxima of a column, refined by a parabola through the three
/// neighbouring samples. Peaks below `min_value` are dropped.
std::vector<Peak> find_peaks(const SpectrumTable& table, Observable column = Observable::kTNorm,
                             double min_value = 0.0);

/// Header `delta_MHz,T,R,T_norm`.
void write_csv(std::ostream& out, const SpectrumTable& table);

}  // namespace eitcav
