#pragma once

// Data-parallel inner loops used by the coefficient-grid algebra.
//
// Every kernel exists as a scalar reference implementation and, on x86-64,
// as an AVX2/FMA variant. The public entry points dispatch on the ISA that
// was detected at first use; the per-ISA entry points are exposed so tests
// can check the variants against the reference.

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace pblab::simd {

using cplx = std::complex<double>;

enum class Isa { scalar, avx2 };

/// ISA selected for dispatch. Detected once; `PBLAB_ISA=scalar` in the
/// environment forces the reference path.
Isa active_isa();
bool isa_available(Isa isa);
std::string_view isa_name(Isa isa);

/// Σ conj(a[i]) * b[i]. Spans must have equal length.
cplx dot_conj(std::span<const cplx> a, std::span<const cplx> b);

/// dst[i] += scale * weight[i] * src[i].
void axpy_weighted(std::span<cplx> dst, std::span<const cplx> src,
                   std::span<const double> weight, cplx scale);

/// Table of unit-scale Hermite functions
///   h_0(u) = pi^{-1/4} exp(-u^2/2),
///   h_{n+1}(u) = sqrt(2/(n+1)) u h_n(u) - sqrt(n/(n+1)) h_{n-1}(u),
/// for n = 0..nmax at every node. Layout: out[n * u.size() + i] = h_n(u[i]).
void hermite_table(std::span<const double> u, int nmax, std::span<double> out);

/// max_i |a[i]|
double max_abs(std::span<const cplx> a);

namespace scalar {
cplx dot_conj(std::span<const cplx> a, std::span<const cplx> b);
void axpy_weighted(std::span<cplx> dst, std::span<const cplx> src,
                   std::span<const double> weight, cplx scale);
void hermite_table(std::span<const double> u, int nmax, std::span<double> out);
double max_abs(std::span<const cplx> a);
}  // namespace scalar

namespace avx2 {
// Only callable when isa_available(Isa::avx2).
cplx dot_conj(std::span<const cplx> a, std::span<const cplx> b);
void axpy_weighted(std::span<cplx> dst, std::span<const cplx> src,
                   std::span<const double> weight, cplx scale);
void hermite_table(std::span<const double> u, int nmax, std::span<double> out);
double max_abs(std::span<const cplx> a);
}  // namespace avx2

}  // namespace pblab::simd
