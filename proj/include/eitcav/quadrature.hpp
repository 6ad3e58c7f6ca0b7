#pragma once

#include <complex>
#include <vector>

namespace eitcav {

/// Nodes and weights of a rule on some interval; weights sum to its length.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

/// n-point Gauss-Legendre rule on [-1, 1]. Rules are cached; the returned
/// reference stays valid for the lifetime of the program.
const QuadratureRule& gauss_legendre(int n);

/// Gauss-Legendre rule on [lo, hi].
QuadratureRule gauss_legendre(int n, double lo, double hi);

/// Gauss-Legendre rule on [lo, hi] after the change of variables
/// x = a + b sinh(s), which clusters nodes around a nearby complex singularity
/// `pole` of the integrand. Falls back to plain Gauss-Legendre when the pole
/// is far from the interval.
QuadratureRule sinh_gauss_legendre(int n, double lo, double hi, std::complex<double> pole);

/// Radial discretization of a transverse Gaussian mode in the variable
/// u = exp(-2 r^2 / w^2) in (0, 1], uniform measure du.
///
/// An ensemble of uniform transverse density with effective atom number N puts
/// 2 N w_k / u_k atoms into shell k, so that sum_k atoms_k u_k = 2 N.
struct RadialGrid {
  std::vector<double> u;
  std::vector<double> weight;  ///< sums to 1

  std::size_t size() const { return u.size(); }
  double psi(std::size_t k) const;  ///< mode amplitude sqrt(u_k)
  double atoms(std::size_t k, double N) const { return 2.0 * N * weight[k] / u[k]; }

  static RadialGrid gauss_legendre(int n);
  /// Gauss-Legendre in u with nodes clustered towards u = 0 on the scale `scale`.
  static RadialGrid clustered(int n, double scale);
  /// One shell at the mode centre: uniform illumination.
  static RadialGrid single_shell();
};

}  // namespace eitcav
