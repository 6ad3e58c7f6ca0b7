#include "kernels/kernel_impl.hpp"
#include "kernels/vec4d.hpp"

namespace eitcav::kernels::avx2 {

cplx mobius_sum(const double* w, const double* v, std::size_t n, const MobiusCoeffs& c) {
  return detail::mobius_sum<Vec4d>(w, v, n, c);
}

FieldSums shell_rhs(const double* y, double* dy, const ShellCouplings& sc, cplx a_p, cplx a_c, cplx a_s,
                    const BlochRates& r) {
  return detail::shell_rhs<Vec4d>(y, dy, sc, a_p, a_c, a_s, r);
}

}  // namespace eitcav::kernels::avx2
