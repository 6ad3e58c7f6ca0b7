#pragma once

// Four packed doubles. Only included from translation units built with -mavx2 -mfma.

#include <immintrin.h>

#include <cstddef>

namespace eitcav::kernels {

class Vec4d {
 public:
  static constexpr std::size_t kWidth = 4;

  Vec4d() : v_(_mm256_setzero_pd()) {}
  Vec4d(double x) : v_(_mm256_set1_pd(x)) {}  // NOLINT: implicit broadcast keeps kernels generic
  explicit Vec4d(__m256d v) : v_(v) {}

  static Vec4d load(const double* p) { return Vec4d(_mm256_loadu_pd(p)); }
  void store(double* p) const { _mm256_storeu_pd(p, v_); }

  double sum() const {
    const __m128d lo = _mm256_castpd256_pd128(v_);
    const __m128d hi = _mm256_extractf128_pd(v_, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
  }

  friend Vec4d operator+(Vec4d a, Vec4d b) { return Vec4d(_mm256_add_pd(a.v_, b.v_)); }
  friend Vec4d operator-(Vec4d a, Vec4d b) { return Vec4d(_mm256_sub_pd(a.v_, b.v_)); }
  friend Vec4d operator*(Vec4d a, Vec4d b) { return Vec4d(_mm256_mul_pd(a.v_, b.v_)); }
  friend Vec4d operator/(Vec4d a, Vec4d b) { return Vec4d(_mm256_div_pd(a.v_, b.v_)); }
  friend Vec4d operator-(Vec4d a) { return Vec4d(_mm256_xor_pd(a.v_, _mm256_set1_pd(-0.0))); }
  Vec4d& operator+=(Vec4d b) { return *this = *this + b; }

 private:
  __m256d v_;
};

}  // namespace eitcav::kernels
