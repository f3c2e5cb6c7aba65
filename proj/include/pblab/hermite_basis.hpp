#pragma once

// Orthonormal harmonic-oscillator eigenfunctions e_n(x) for mass m and
// frequency w (hbar = 1), Gauss-Hermite quadrature for inner products
// against them, and the ladder action of a, a^dagger on basis indices.

#include <cmath>
#include <compare>
#include <concepts>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "pblab/errors.hpp"

namespace pblab {

class OscillatorParams {
 public:
  OscillatorParams(double mass, double omega) : mass_(mass), omega_(omega) {
    if (!(mass > 0.0) || !(omega > 0.0) || !std::isfinite(mass) || !std::isfinite(omega)) {
      throw ArgumentError("OscillatorParams: mass and omega must be finite and positive");
    }
  }
  static OscillatorParams unit() { return {1.0, 1.0}; }

  double mass() const { return mass_; }
  double omega() const { return omega_; }
  /// Inverse length scale sqrt(m w): e_n(x) = sqrt(s) h_n(s x).
  double scale() const { return std::sqrt(mass_ * omega_); }

  bool operator==(const OscillatorParams&) const = default;

 private:
  double mass_;
  double omega_;
};

struct BasisIndex2D {
  int n1 = 0;
  int n2 = 0;
  auto operator<=>(const BasisIndex2D&) const = default;
};

/// Oracle precision. `extended` evaluates quadrature in long double.
enum class Precision { standard, extended };

/// Reads PBLAB_PRECISION ("double" or "extended"); unset means standard.
Precision precision_from_env();

// ---------------------------------------------------------------------------
// Evaluation

/// Unit-scale Hermite function h_n(u), normalized three-term recurrence.
template <std::floating_point Real>
Real hermite_function_unit(int n, Real u) {
  using std::exp;
  using std::sqrt;
  Real prev = Real(1) / sqrt(sqrt(std::numbers::pi_v<Real>)) * exp(-u * u / 2);
  if (n == 0) return prev;
  Real cur = sqrt(Real(2)) * u * prev;
  for (int k = 1; k < n; ++k) {
    const Real next = sqrt(Real(2) / (k + 1)) * u * cur - sqrt(Real(k) / (k + 1)) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

/// e_n(x) for the oscillator `params`.
double hermite_eval(int n, double x, const OscillatorParams& params);
long double hermite_eval_extended(int n, long double x, const OscillatorParams& params);

/// h_k(u_i) for k = 0..nmax at every node, row k contiguous.
std::vector<double> hermite_table(const std::vector<double>& nodes, int nmax);

// ---------------------------------------------------------------------------
// Quadrature

/// Gauss-Hermite rule in the unit variable u with "full" weights
/// W_i = w_i exp(u_i^2), so that  int g(u) du ~ sum_i W_i g(u_i)  for
/// g = polynomial * exp(-u^2) of degree < 2*order.
template <std::floating_point Real>
struct GaussHermiteRule {
  std::vector<Real> nodes;
  std::vector<Real> full_weights;
};

/// Cached per order; thread-safe.
const GaussHermiteRule<double>& gauss_hermite_rule(int order);
const GaussHermiteRule<long double>& gauss_hermite_rule_extended(int order);

inline constexpr int kQuadratureMargin = 16;
inline constexpr int kMaxQuadratureOrder = 600;

/// Order used when the caller does not pick one: exact for products of two
/// basis functions up to index nmax, plus margin.
constexpr int default_quadrature_order(int nmax) { return 2 * nmax + kQuadratureMargin; }

/// Gauss-Hermite approximation of  int e_n(x) f(x) dx.
/// Refuses (AccuracyError) when order < n + kQuadratureMargin or exceeds
/// kMaxQuadratureOrder.
double overlap_quadrature(const std::function<double(double)>& f, int n,
                          const OscillatorParams& params, int order);
long double overlap_quadrature_extended(const std::function<long double(long double)>& f, int n,
                                        const OscillatorParams& params, int order);

/// Throws AccuracyError unless order is admissible for index n.
void check_quadrature_order(int n, int order);

// ---------------------------------------------------------------------------
// Ladder action

enum class Ladder { lower, raise };

/// Result of a or a^dagger on e_n: coefficient * e_index with
/// coefficient = sqrt(radicand).
struct LadderStep {
  double coefficient;
  int index;
  std::uint64_t radicand;
};

/// a e_n = sqrt(n) e_{n-1} (empty for n = 0); a^dagger e_n = sqrt(n+1) e_{n+1}.
std::optional<LadderStep> ladder_on_basis(Ladder gen, int n);

}  // namespace pblab
