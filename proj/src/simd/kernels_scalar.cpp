#include "pblab/simd/kernels.hpp"

#include <cassert>
#include <cmath>
#include <numbers>

namespace pblab::simd::scalar {

cplx dot_conj(std::span<const cplx> a, std::span<const cplx> b) {
  assert(a.size() == b.size());
  double re = 0.0;
  double im = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
    im += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
  }
  return {re, im};
}

void axpy_weighted(std::span<cplx> dst, std::span<const cplx> src,
                   std::span<const double> weight, cplx scale) {
  assert(dst.size() == src.size() && src.size() == weight.size());
  for (std::size_t i = 0; i < dst.size(); ++i) {
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
  for (std::size_t i = 0; i < len; ++i) {
    out[len + i] = std::numbers::sqrt2 * u[i] * out[i];
  }
  for (int n = 1; n < nmax; ++n) {
    const double c1 = std::sqrt(2.0 / (n + 1));
    const double c0 = std::sqrt(static_cast<double>(n) / (n + 1));
    const double* prev = out.data() + (n - 1) * len;
    const double* cur = out.data() + n * len;
    double* next = out.data() + (n + 1) * len;
    for (std::size_t i = 0; i < len; ++i) {
      next[i] = c1 * u[i] * cur[i] - c0 * prev[i];
    }
  }
}

double max_abs(std::span<const cplx> a) {
  double m = 0.0;
  for (const auto& z : a) m = std::max(m, std::abs(z));
  return m;
}

}  // namespace pblab::simd::scalar
