#include <cstdlib>
#include <string>

#include "pblab/simd/kernels.hpp"

namespace pblab::simd {

namespace {

Isa detect() {
  if (const char* env = std::getenv("PBLAB_ISA"); env != nullptr && std::string(env) == "scalar") {
    return Isa::scalar;
  }
  return isa_available(Isa::avx2) ? Isa::avx2 : Isa::scalar;
}

}  // namespace

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

Isa active_isa() {
  static const Isa isa = detect();
  return isa;
}

std::string_view isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

#if defined(__x86_64__)
#define PBLAB_DISPATCH(fn, ...) \
  (active_isa() == Isa::avx2 ? avx2::fn(__VA_ARGS__) : scalar::fn(__VA_ARGS__))
#else
#define PBLAB_DISPATCH(fn, ...) scalar::fn(__VA_ARGS__)
#endif

cplx dot_conj(std::span<const cplx> a, std::span<const cplx> b) {
  return PBLAB_DISPATCH(dot_conj, a, b);
}

void axpy_weighted(std::span<cplx> dst, std::span<const cplx> src,
                   std::span<const double> weight, cplx scale) {
  PBLAB_DISPATCH(axpy_weighted, dst, src, weight, scale);
}

void hermite_table(std::span<const double> u, int nmax, std::span<double> out) {
  PBLAB_DISPATCH(hermite_table, u, nmax, out);
}

double max_abs(std::span<const cplx> a) { return PBLAB_DISPATCH(max_abs, a); }

#undef PBLAB_DISPATCH

}  // namespace pblab::simd
