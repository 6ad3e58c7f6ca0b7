#pragma once

// Unit conventions used throughout the library.
//
//   frequency : angular, rad/us. A rate quoted as "2pi x X MHz" is stored as 2pi*X.
//   time      : us
//   field     : intracavity amplitudes a with n = |a|^2 photons,
//               input amplitudes a_in with |a_in|^2 in photons/us.
//
// With these conventions the empty resonant cavity holds
//   n = (2 kappa_H / tau) |a_in|^2 / kappa^2
// photons in steady state.

#include <complex>
#include <numbers>

namespace eitcav {

using cplx = std::complex<double>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr cplx kI{0.0, 1.0};

/// Linear frequency in MHz -> angular frequency in rad/us.
constexpr double from_mhz(double mhz) { return kTwoPi * mhz; }

/// Angular frequency in rad/us -> linear frequency in MHz.
constexpr double to_mhz(double rad_per_us) { return rad_per_us / kTwoPi; }

namespace literals {

constexpr double operator""_MHz(long double v) { return from_mhz(static_cast<double>(v)); }
constexpr double operator""_MHz(unsigned long long v) { return from_mhz(static_cast<double>(v)); }

}  // namespace literals

}  // namespace eitcav
