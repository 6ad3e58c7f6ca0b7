#include "kernels/kernel_impl.hpp"

namespace eitcav::kernels::scalar {

cplx mobius_sum(const double* w, const double* v, std::size_t n, const MobiusCoeffs& c) {
  return detail::mobius_sum<Scalar>(w, v, n, c);
}

FieldSums shell_rhs(const double* y, double* dy, const ShellCouplings& sc, cplx a_p, cplx a_c, cplx a_s,
                    const BlochRates& r) {
  return detail::shell_rhs<Scalar>(y, dy, sc, a_p, a_c, a_s, r);
}

}  // namespace eitcav::kernels::scalar
