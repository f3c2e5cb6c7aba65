// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include "pblab/simd/kernels.hpp"

#include <immintrin.h>

#include <cassert>
#include <cmath>
#include <numbers>

namespace pblab::simd::avx2 {

// Two complex numbers per register: [re0 im0 re1 im1].
cplx dot_conj(std::span<const cplx> a, std::span<const cplx> b) {
  assert(a.size() == b.size());
  const double* pa = reinterpret_cast<const double*>(a.data());
  const double* pb = reinterpret_cast<const double*>(b.data());
  const std::size_t n = a.size();
  __m256d acc_rr = _mm256_setzero_pd();  // a.re*b.re | a.im*b.im lanes
  __m256d acc_x = _mm256_setzero_pd();   // a.re*b.im | a.im*b.re lanes
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d va = _mm256_loadu_pd(pa + 2 * i);
    const __m256d vb = _mm256_loadu_pd(pb + 2 * i);
    acc_rr = _mm256_fmadd_pd(va, vb, acc_rr);
    const __m256d vb_sw = _mm256_permute_pd(vb, 0b0101);
    acc_x = _mm256_fmadd_pd(va, vb_sw, acc_x);
  }
  // acc_rr lanes: re*re, im*im (both add). acc_x lanes: re*im (+), im*re (-).
  alignas(32) double rr[4];
  alignas(32) double x[4];
  _mm256_store_pd(rr, acc_rr);
  _mm256_store_pd(x, acc_x);
  double re = (rr[0] + rr[1]) + (rr[2] + rr[3]);
  double im = (x[0] - x[1]) + (x[2] - x[3]);
  for (; i < n; ++i) {
    re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
    im += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
  }
  return {re, im};
}

void axpy_weighted(std::span<cplx> dst, std::span<const cplx> src,
                   std::span<const double> weight, cplx scale) {
  assert(dst.size() == src.size() && src.size() == weight.size());
  double* pd = reinterpret_cast<double*>(dst.data());
  const double* ps = reinterpret_cast<const double*>(src.data());
  const std::size_t n = dst.size();
  const __m256d s_re = _mm256_set1_pd(scale.real());
  // [-im, im, -im, im] so that swapped (im, re) * this gives (-im*s_im, re*s_im)
  const __m256d s_im = _mm256_setr_pd(-scale.imag(), scale.imag(), -scale.imag(), scale.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d w = _mm256_setr_pd(weight[i], weight[i], weight[i + 1], weight[i + 1]);
    const __m256d v = _mm256_mul_pd(w, _mm256_loadu_pd(ps + 2 * i));
    const __m256d v_sw = _mm256_permute_pd(v, 0b0101);
    __m256d d = _mm256_loadu_pd(pd + 2 * i);
    d = _mm256_fmadd_pd(s_re, v, d);
    d = _mm256_fmadd_pd(s_im, v_sw, d);
    _mm256_storeu_pd(pd + 2 * i, d);
  }
  for (; i < n; ++i) {
    dst[i] += scale * (weight[i] * src[i]);
  }
}

void hermite_table(std::span<const double> u, int nmax, std::span<double> out) {
  const std::size_t len = u.size();
  assert(nmax >= 0 && out.size() >= len * static_cast<std::size_t>(nmax + 1));
  const double h0 = 1.0 / std::sqrt(std::sqrt(std::numbers::pi));
  for (std::size_t i = 0; i < len; ++i) {
    out[i] = h0 * std::exp(-0.5 * u[i] * u[i]);
  }
  if (nmax == 0) return;
  const __m256d sqrt2 = _mm256_set1_pd(std::numbers::sqrt2);
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    const __m256d x = _mm256_loadu_pd(u.data() + i);
    _mm256_storeu_pd(out.data() + len + i,
                     _mm256_mul_pd(_mm256_mul_pd(sqrt2, x), _mm256_loadu_pd(out.data() + i)));
  }
  for (; i < len; ++i) out[len + i] = std::numbers::sqrt2 * u[i] * out[i];

  for (int n = 1; n < nmax; ++n) {
    const double c1 = std::sqrt(2.0 / (n + 1));
    const double c0 = std::sqrt(static_cast<double>(n) / (n + 1));
    const __m256d vc1 = _mm256_set1_pd(c1);
    const __m256d vc0 = _mm256_set1_pd(-c0);
    const double* prev = out.data() + (n - 1) * len;
    const double* cur = out.data() + n * len;
    double* next = out.data() + (n + 1) * len;
    std::size_t j = 0;
    for (; j + 4 <= len; j += 4) {
      const __m256d x = _mm256_loadu_pd(u.data() + j);
      const __m256d t = _mm256_mul_pd(_mm256_mul_pd(vc1, x), _mm256_loadu_pd(cur + j));
      _mm256_storeu_pd(next + j, _mm256_fmadd_pd(vc0, _mm256_loadu_pd(prev + j), t));
    }
    for (; j < len; ++j) next[j] = c1 * u[j] * cur[j] - c0 * prev[j];
  }
}

double max_abs(std::span<const cplx> a) {
  const double* p = reinterpret_cast<const double*>(a.data());
  const std::size_t n = a.size();
  __m256d best = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d v = _mm256_loadu_pd(p + 2 * i);
    const __m256d sq = _mm256_mul_pd(v, v);
    // re^2 + im^2 in both lanes of each pair
    const __m256d m2 = _mm256_add_pd(sq, _mm256_permute_pd(sq, 0b0101));
    best = _mm256_max_pd(best, m2);
  }
  alignas(32) double b[4];
  _mm256_store_pd(b, best);
  double m = std::sqrt(std::max(std::max(b[0], b[1]), std::max(b[2], b[3])));
  for (; i < n; ++i) m = std::max(m, std::abs(a[i]));
  return m;
}

}  // namespace pblab::simd::avx2
