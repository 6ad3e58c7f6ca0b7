#pragma once

// Data-parallel kernels with one implementation per instruction set.
// Callers go through the dispatching entry points at the bottom.

#include <cstddef>

#include "eitcav/simd.hpp"
#include "eitcav/units.hpp"

namespace eitcav::kernels {

/// Coefficients of the per-node response (P + D v) / (Q + R v).
struct MobiusCoeffs {
  cplx P, D, Q, R;
};

struct BlochRates {
  double gamma, gamma_s, gamma_0;
  double gamma_31, gamma_32, gamma_42;
  double delta_p, delta_c, delta_s;
};

/// Per-shell coupling constants. cp/cc/cs multiply the field amplitudes in the
/// Bloch equations; fp/fc/fs (atom count times coupling) weight the polarization
/// fed back into the field equations.
struct ShellCouplings {
  const double* cp;
  const double* cc;
  const double* cs;
  const double* fp;
  const double* fc;
  const double* fs;
  std::size_t n;
};

struct FieldSums {
  cplx p, c, s;
};

// State layout for K shells: 16 blocks of length K in the order
// p11 p22 p33 p44, re/im s12, s13, s14, s23, s24, s34.
inline constexpr std::size_t kBlocks = 16;

using MobiusSumFn = cplx (*)(const double* w, const double* v, std::size_t n, const MobiusCoeffs& c);
using ShellRhsFn = FieldSums (*)(const double* y, double* dy, const ShellCouplings& sc, cplx a_p,
                                 cplx a_c, cplx a_s, const BlochRates& r);

namespace scalar {
cplx mobius_sum(const double* w, const double* v, std::size_t n, const MobiusCoeffs& c);
FieldSums shell_rhs(const double* y, double* dy, const ShellCouplings& sc, cplx a_p, cplx a_c, cplx a_s,
                    const BlochRates& r);
}  // namespace scalar

#if defined(EITCAV_HAVE_AVX2)
namespace avx2 {
cplx mobius_sum(const double* w, const double* v, std::size_t n, const MobiusCoeffs& c);
FieldSums shell_rhs(const double* y, double* dy, const ShellCouplings& sc, cplx a_p, cplx a_c, cplx a_s,
                    const BlochRates& r);
}  // namespace avx2
#endif

/// sum_k w_k (P + D v_k) / (Q + R v_k)
cplx mobius_sum(const double* w, const double* v, std::size_t n, const MobiusCoeffs& c);

/// Right-hand side of the atomic equations for every shell, returning the
/// polarization sums that drive the three cavity fields.
FieldSums shell_rhs(const double* y, double* dy, const ShellCouplings& sc, cplx a_p, cplx a_c, cplx a_s,
                    const BlochRates& r);

}  // namespace eitcav::kernels
