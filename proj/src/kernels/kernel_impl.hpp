#pragma once

// Kernel bodies written once against a lane type (Scalar or Vec4d) and
// instantiated per instruction set.

#include <cstddef>

#include "kernels/kernels.hpp"

namespace eitcav::kernels {

class Scalar {
 public:
  static constexpr std::size_t kWidth = 1;

  Scalar() = default;
  Scalar(double x) : v_(x) {}  // NOLINT: implicit broadcast keeps kernels generic

  static Scalar load(const double* p) { return Scalar(*p); }
  void store(double* p) const { *p = v_; }
  double sum() const { return v_; }

  friend Scalar operator+(Scalar a, Scalar b) { return Scalar(a.v_ + b.v_); }
  friend Scalar operator-(Scalar a, Scalar b) { return Scalar(a.v_ - b.v_); }
  friend Scalar operator*(Scalar a, Scalar b) { return Scalar(a.v_ * b.v_); }
  friend Scalar operator/(Scalar a, Scalar b) { return Scalar(a.v_ / b.v_); }
  friend Scalar operator-(Scalar a) { return Scalar(-a.v_); }
  Scalar& operator+=(Scalar b) { return *this = *this + b; }

 private:
  double v_ = 0.0;
};

namespace detail {

template <class L>
struct Cx {
  L re, im;
};

template <class L>
inline Cx<L> operator+(Cx<L> a, Cx<L> b) { return {a.re + b.re, a.im + b.im}; }
template <class L>
inline Cx<L> operator-(Cx<L> a, Cx<L> b) { return {a.re - b.re, a.im - b.im}; }
template <class L>
inline Cx<L> operator*(Cx<L> a, Cx<L> b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }
template <class L>
inline Cx<L> operator*(L s, Cx<L> a) { return {s * a.re, s * a.im}; }
template <class L>
inline Cx<L> conj(Cx<L> a) { return {a.re, -a.im}; }
/// i * a
template <class L>
inline Cx<L> mul_i(Cx<L> a) { return {-a.im, a.re}; }
/// Imaginary part of conj(a) * b.
template <class L>
inline L im_conj_mul(Cx<L> a, Cx<L> b) { return a.re * b.im - a.im * b.re; }

template <class L>
inline Cx<L> bcast(cplx z) { return {L(z.real()), L(z.imag())}; }

template <class L>
inline Cx<L> load_cx(const double* re, const double* im, std::size_t i) {
  return {L::load(re + i), L::load(im + i)};
}

template <class L>
inline void store_cx(Cx<L> z, double* re, double* im, std::size_t i) {
  z.re.store(re + i);
  z.im.store(im + i);
}

template <class L>
void mobius_range(const double* w, const double* v, std::size_t begin, std::size_t end, const MobiusCoeffs& c,
                  Cx<L>& acc) {
  const auto P = bcast<L>(c.P), D = bcast<L>(c.D), Q = bcast<L>(c.Q), R = bcast<L>(c.R);
  for (std::size_t i = begin; i + L::kWidth <= end; i += L::kWidth) {
    const L vi = L::load(v + i);
    const L wi = L::load(w + i);
    const Cx<L> num = P + vi * D;
    const Cx<L> den = Q + vi * R;
    const L scale = wi / (den.re * den.re + den.im * den.im);
    acc = acc + scale * (num * conj(den));
  }
}

template <class L>
cplx mobius_sum(const double* w, const double* v, std::size_t n, const MobiusCoeffs& c) {
  const std::size_t body = n - n % L::kWidth;
  Cx<L> acc{L(0.0), L(0.0)};
  mobius_range<L>(w, v, 0, body, c, acc);
  Cx<Scalar> tail{Scalar(0.0), Scalar(0.0)};
  mobius_range<Scalar>(w, v, body, n, c, tail);
  return {acc.re.sum() + tail.re.sum(), acc.im.sum() + tail.im.sum()};
}

template <class L>
struct FieldAcc {
  Cx<L> p{L(0.0), L(0.0)}, c{L(0.0), L(0.0)}, s{L(0.0), L(0.0)};
};

template <class L>
void shell_rhs_range(const double* y, double* dy, const ShellCouplings& sc, std::size_t begin, std::size_t end,
                     cplx a_p, cplx a_c, cplx a_s, const BlochRates& r, FieldAcc<L>& acc) {
  const std::size_t K = sc.n;
  auto in = [&](std::size_t b) { return y + b * K; };
  auto out = [&](std::size_t b) { return dy + b * K; };

  const auto ap = bcast<L>(a_p), ac = bcast<L>(a_c), as = bcast<L>(a_s);
  const L g0(r.gamma_0), g(r.gamma), gs(r.gamma_s);
  const L g31(r.gamma_31), g32(r.gamma_32), g42(r.gamma_42), g3(r.gamma_31 + r.gamma_32);
  const L g34(r.gamma + r.gamma_s - 2.0 * r.gamma_0);
  const L d12(r.delta_p - r.delta_c), d13(r.delta_p), d14(r.delta_p - r.delta_c + r.delta_s);
  const L d23(r.delta_c), d24(r.delta_s), d34(r.delta_s - r.delta_c);
  const L two(2.0);

  // -(gamma - i delta) z
  auto damp = [](L rate, L det, Cx<L> z) -> Cx<L> {
    return {-(rate * z.re) - det * z.im, det * z.re - rate * z.im};
  };

  for (std::size_t i = begin; i + L::kWidth <= end; i += L::kWidth) {
    const L p1 = L::load(in(0) + i), p2 = L::load(in(1) + i), p3 = L::load(in(2) + i), p4 = L::load(in(3) + i);
    const auto s12 = load_cx<L>(in(4), in(5), i);
    const auto s13 = load_cx<L>(in(6), in(7), i);
    const auto s14 = load_cx<L>(in(8), in(9), i);
    const auto s23 = load_cx<L>(in(10), in(11), i);
    const auto s24 = load_cx<L>(in(12), in(13), i);
    const auto s34 = load_cx<L>(in(14), in(15), i);

    const auto P = L::load(sc.cp + i) * ap;
    const auto C = L::load(sc.cc + i) * ac;
    const auto S = L::load(sc.cs + i) * as;

    const auto ds12 = damp(g0, d12, s12) + mul_i(conj(C) * s13 + conj(S) * s14 - P * conj(s23));
    const auto ds13 = damp(g, d13, s13) + mul_i((p1 - p3) * P + C * s12);
    const auto ds14 = damp(gs, d14, s14) + mul_i(S * s12 - P * s34);
    const auto ds23 = damp(g, d23, s23) + mul_i((p2 - p3) * C + P * conj(s12) - S * conj(s34));
    const auto ds24 = damp(gs, d24, s24) + mul_i((p2 - p4) * S - C * s34);
    const auto ds34 = damp(g34, d34, s34) + mul_i(S * conj(s23) - conj(C) * s24 - conj(P) * s14);

    const L jp = im_conj_mul(P, s13), jc = im_conj_mul(C, s23), js = im_conj_mul(S, s24);
    (g31 * p3 - two * jp).store(out(0) + i);
    (g32 * p3 + g42 * p4 - two * jc - two * js).store(out(1) + i);
    (two * jp + two * jc - g3 * p3).store(out(2) + i);
    (two * js - g42 * p4).store(out(3) + i);
    store_cx<L>(ds12, out(4), out(5), i);
    store_cx<L>(ds13, out(6), out(7), i);
    store_cx<L>(ds14, out(8), out(9), i);
    store_cx<L>(ds23, out(10), out(11), i);
    store_cx<L>(ds24, out(12), out(13), i);
    store_cx<L>(ds34, out(14), out(15), i);

    acc.p = acc.p + L::load(sc.fp + i) * s13;
    acc.c = acc.c + L::load(sc.fc + i) * s23;
    acc.s = acc.s + L::load(sc.fs + i) * s24;
  }
}

template <class L>
FieldSums shell_rhs(const double* y, double* dy, const ShellCouplings& sc, cplx a_p, cplx a_c, cplx a_s,
                    const BlochRates& r) {
  const std::size_t body = sc.n - sc.n % L::kWidth;
  FieldAcc<L> acc;
  shell_rhs_range<L>(y, dy, sc, 0, body, a_p, a_c, a_s, r, acc);
  FieldAcc<Scalar> tail;
  shell_rhs_range<Scalar>(y, dy, sc, body, sc.n, a_p, a_c, a_s, r, tail);
  auto total = [](const Cx<L>& a, const Cx<Scalar>& b) { return cplx(a.re.sum() + b.re.sum(), a.im.sum() + b.im.sum()); };
  return {total(acc.p, tail.p), total(acc.c, tail.c), total(acc.s, tail.s)};
}

}  // namespace detail
}  // namespace eitcav::kernels
