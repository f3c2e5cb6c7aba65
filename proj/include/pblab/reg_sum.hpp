#pragma once

// Summation of possibly divergent series sum_{k>=0} c_k.
//
//  * ordinary      partial sums pass a Cauchy tail test
//  * abel_numeric  f(eta) = sum c_k eta^k on a schedule of eta < 1,
//                  extrapolated polynomially in (1 - eta) to eta = 1
//  * abel_exact    c_k = (-1)^k p(k) with polynomial p; closed form from
//                  A-sum (-1)^k k^m = -eta(-m) (Dirichlet eta at -m)
//
// The method tag always records which notion produced the value.

#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pblab/errors.hpp"

namespace pblab {

using cplx = std::complex<double>;
using Rational = boost::multiprecision::cpp_rational;

enum class SumMethod { ordinary, abel_numeric, abel_exact };
std::string to_string(SumMethod m);

struct SumDiagnostics {
  std::int64_t terms_used = 0;
  std::vector<double> eta_schedule;
  double extrapolation_residual = 0.0;
  /// |abel_exact - abel_numeric| when an exact value was cross-checked.
  std::optional<double> cross_check_residual;
  /// Human-readable description of a recognized term pattern.
  std::string pattern;
};

struct RegularizedSum {
  cplx value;
  SumMethod method = SumMethod::ordinary;
  SumDiagnostics diagnostics;
};

/// The damped tail does not decay within the terms that exist.
class TruncationError : public AccuracyError {
 public:
  TruncationError(const std::string& what, std::int64_t available)
      : AccuracyError(what), available_(available) {}
  std::int64_t available() const { return available_; }

 private:
  std::int64_t available_;
};

/// Neither ordinary nor Abel summation applies. Distinct from a zero value.
class NotSummableError : public AccuracyError {
 public:
  explicit NotSummableError(const std::string& why)
      : AccuracyError("not summable by implemented methods: " + why) {}
};

// ---------------------------------------------------------------------------
// Exact values

/// A-sum_{k>=0} (-1)^k k^m (0^0 = 1), exact.
Rational abel_exact_alternating(int mono_degree);

/// A-sum_{k>=0} (-1)^k p(k) for p(k) = sum_m coeffs[m] k^m.
cplx abel_exact_polynomial(std::span<const cplx> monomial_coeffs);

/// Bernoulli number B_n with B_1 = -1/2.
Rational bernoulli(int n);

// ---------------------------------------------------------------------------
// Numeric Abel summation

using TermFn = std::function<cplx(std::int64_t)>;

/// {0.90, 0.925, 0.95, 0.97, 0.985, 0.995}
std::vector<double> default_eta_schedule();

struct AbelNumericOptions {
  /// Truncation; nullopt picks the smallest K whose damped tail bound
  /// |c_K| eta_max^K / (1 - eta_max) falls below tail_tol.
  std::optional<std::int64_t> truncation;
  double tail_tol = 1e-13;
  std::int64_t max_terms = 4'000'000;
};

/// Throws TruncationError when the damped tail at the largest eta has not
/// decayed within `available` terms (nullopt = unbounded generator).
RegularizedSum abel_numeric(const TermFn& terms, std::span<const double> eta_schedule,
                            const AbelNumericOptions& options = {},
                            std::optional<std::int64_t> available = std::nullopt);

/// abel_numeric on c_k = (-1)^k p(k) with the terms formed in extended
/// precision; the cross-check companion of abel_exact_polynomial.
RegularizedSum abel_numeric_alternating(std::span<const cplx> monomial_coeffs,
                                        std::span<const double> eta_schedule,
                                        const AbelNumericOptions& options = {});

// ---------------------------------------------------------------------------
// Pattern recognition

/// Terms supported on s = offset + stride * k with c_k = sign^k p(k).
struct PolynomialPattern {
  int offset = 0;
  int stride = 1;
  int sign = -1;
  std::vector<cplx> monomial_coeffs;  // p(k) = sum_m coeffs[m] k^m

  int degree() const { return static_cast<int>(monomial_coeffs.size()) - 1; }
  cplx term(std::int64_t s) const;
  std::string describe() const;
};

struct PatternOptions {
  int max_degree = 16;
  /// Spare terms beyond degree + 1 that must confirm the fit.
  int verify_terms = 3;
  double tol = 1e-9;
};

/// Recognizes sign^k * polynomial structure in a finite term prefix.
std::optional<PolynomialPattern> detect_polynomial_pattern(std::span<const cplx> terms,
                                                           const PatternOptions& options = {});

// ---------------------------------------------------------------------------
// Classification

struct Series {
  TermFn term;
  /// Number of terms that exist; nullopt for an unbounded generator.
  std::optional<std::int64_t> available;
  /// Symbolic hint: the series is sign^k p(k) on a progression.
  std::optional<PolynomialPattern> hint;
  /// Terms at k >= available are known to vanish (finite linear combination).
  bool zero_beyond = false;

  static Series finite(std::vector<cplx> terms);
  /// Finite support: the partial sum is the exact ordinary value.
  static Series exact_finite(std::vector<cplx> terms);
  static Series generator(TermFn fn) { return {std::move(fn), std::nullopt, std::nullopt, false}; }
  static Series alternating_polynomial(std::vector<cplx> monomial_coeffs);
};

struct ClassifyOptions {
  double ordinary_tol = 1e-12;
  /// Terms inspected by the ordinary tail test of an unbounded generator.
  std::int64_t ordinary_terms = 4096;
  bool detect_pattern = true;
  bool cross_check = true;
  double cross_check_tol = 1e-6;
  std::vector<double> eta_schedule = default_eta_schedule();
  AbelNumericOptions numeric;
};

/// Ordinary if the tail test passes; exact Abel value (cross-checked
/// numerically) for alternating-polynomial series; numeric Abel otherwise.
/// Throws NotSummableError when no method applies and TruncationError when
/// a finite series is too short to decide.
RegularizedSum classify_and_sum(const Series& series, const ClassifyOptions& options = {});

/// Ordinary partial sum if the Cauchy tail test passes.
std::optional<RegularizedSum> try_ordinary(const Series& series, const ClassifyOptions& options);

}  // namespace pblab
