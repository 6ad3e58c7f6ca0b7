#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "kernels/kernels.hpp"

namespace eitcav {
namespace simd {
namespace {

bool cpu_has_avx2() {
#if defined(EITCAV_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend detect() {
  const char* env = std::getenv("EITCAV_SIMD");
  if (env != nullptr) {
    const std::string want(env);
    if (want == "scalar") return Backend::kScalar;
    if (want == "avx2" && cpu_has_avx2()) return Backend::kAvx2;
  }
  return cpu_has_avx2() ? Backend::kAvx2 : Backend::kScalar;
}

std::atomic<int>& slot() {
  static std::atomic<int> backend{static_cast<int>(detect())};
  return backend;
}

}  // namespace

Backend active_backend() { return static_cast<Backend>(slot().load(std::memory_order_relaxed)); }

bool available(Backend backend) {
  return backend == Backend::kScalar || (backend == Backend::kAvx2 && cpu_has_avx2());
}

std::vector<Backend> available_backends() {
  std::vector<Backend> out{Backend::kScalar};
  if (available(Backend::kAvx2)) out.push_back(Backend::kAvx2);
  return out;
}

void set_backend(Backend backend) {
  if (!available(backend)) {
    throw std::invalid_argument(std::string("SIMD backend not available: ") + to_string(backend));
  }
  slot().store(static_cast<int>(backend), std::memory_order_relaxed);
}

const char* to_string(Backend backend) {
  switch (backend) {
    case Backend::kScalar: return "scalar";
    case Backend::kAvx2: return "avx2";
  }
  return "unknown";
}

}  // namespace simd

namespace kernels {

cplx mobius_sum(const double* w, const double* v, std::size_t n, const MobiusCoeffs& c) {
#if defined(EITCAV_HAVE_AVX2)
  if (simd::active_backend() == simd::Backend::kAvx2) return avx2::mobius_sum(w, v, n, c);
#endif
  return scalar::mobius_sum(w, v, n, c);
}

FieldSums shell_rhs(const double* y, double* dy, const ShellCouplings& sc, cplx a_p, cplx a_c, cplx a_s,
                    const BlochRates& r) {
#if defined(EITCAV_HAVE_AVX2)
  if (simd::active_backend() == simd::Backend::kAvx2) return avx2::shell_rhs(y, dy, sc, a_p, a_c, a_s, r);
#endif
  return scalar::shell_rhs(y, dy, sc, a_p, a_c, a_s, r);
}

}  // namespace kernels
}  // namespace eitcav
