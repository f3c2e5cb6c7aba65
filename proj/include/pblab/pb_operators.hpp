#pragma once

// Two-mode operator words over the bosonic generators {a1, a1^+, a2, a2^+},
// their exact action on basis indices, and weak application to coefficient
// grids:  (X F)[e_n] = F[X^+ e_n].
//
// The pseudo-bosonic combinations
//   A1 = (a1 - a2^+)/sqrt2    A2 = (-a1^+ + a2)/sqrt2
//   B1 = (a1^+ + a2)/sqrt2    B2 = (a1 + a2^+)/sqrt2
// satisfy [A_j, B_k] = delta_jk and are built here together with the number
// operators N_j = B_j A_j, the diagonal Hamiltonian, and the two eigenstate
// families grown from the delta vacua.

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pblab/dist_coeffs.hpp"
#include "pblab/hermite_basis.hpp"

namespace pblab {

enum class Gen : std::uint8_t { a1, a1d, a2, a2d };

Gen dagger(Gen g);
std::string_view name(Gen g);

/// coeff * g[0] g[1] ... g[L-1]; the rightmost generator acts first.
struct WordTerm {
  cplx coeff;
  std::vector<Gen> gens;
  bool operator==(const WordTerm&) const = default;
};

/// Finite linear combination of generator strings, kept in expanded form
/// (no normal ordering). The default-constructed word is the zero operator.
class OperatorWord {
 public:
  OperatorWord() = default;
  explicit OperatorWord(std::vector<WordTerm> terms) : terms_(std::move(terms)) {}

  static OperatorWord identity(cplx c = 1.0) { return OperatorWord({{c, {}}}); }
  static OperatorWord generator(Gen g, cplx c = 1.0) { return OperatorWord({{c, {g}}}); }

  const std::vector<WordTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  /// Longest generator string; bounds the index shift of a single application.
  int max_length() const;

  /// Reverses each string, daggers each generator, conjugates coefficients.
  OperatorWord adjoint() const;
  /// Merges identical strings, drops terms with |coeff| <= drop_tol, sorts.
  OperatorWord normalized(double drop_tol = 0.0) const;

  friend OperatorWord operator+(const OperatorWord& a, const OperatorWord& b);
  friend OperatorWord operator-(const OperatorWord& a, const OperatorWord& b);
  /// Operator product: (a * b) applied to v is a(b(v)).
  friend OperatorWord operator*(const OperatorWord& a, const OperatorWord& b);
  friend OperatorWord operator*(cplx c, const OperatorWord& a);

  /// Exact structural equality of term lists.
  bool operator==(const OperatorWord&) const = default;

  /// Compact text, e.g. "0.7071*a1 - 0.7071*a2d".
  std::string to_string(int precision = 4) const;

 private:
  std::vector<WordTerm> terms_;
};

/// Structural equality after normalization, coefficients within tol.
bool approx_equal(const OperatorWord& a, const OperatorWord& b, double tol = 1e-14);

struct PbOperators {
  OperatorWord A1, A2, B1, B2;

  const OperatorWord& A(int j) const;
  const OperatorWord& B(int j) const;
};

PbOperators make_pb_operators();

/// N_j = B_j A_j, j in {1, 2}.
OperatorWord number_operator(int j);

class HamiltonianParams {
 public:
  HamiltonianParams(double omega1, double gamma1_abs, double m1);
  double omega1() const { return omega1_; }
  double gamma1_abs() const { return gamma1_abs_; }
  double m1() const { return m1_; }
  /// omega1 (l1 - l2) + i |gamma1| / (2 m1) (l1 + l2 + 1)
  cplx eigenvalue(int l1, int l2) const;

 private:
  double omega1_;
  double gamma1_abs_;
  double m1_;
};

/// H = omega1 (N1 - N2) + (i |gamma1| / 2 m1)(N1 + N2 + 1), expanded.
OperatorWord hamiltonian_word(const HamiltonianParams& params);

// ---------------------------------------------------------------------------
// Action on basis indices

using BasisMap = std::map<BasisIndex2D, cplx>;

/// word applied to e_idx as an exact finite combination; exact zeros dropped.
BasisMap apply_to_basis(const OperatorWord& word, BasisIndex2D idx);

/// coefficient = sum_r c_r sqrt(r) over square-free radicands r.
using SurdSum = std::map<std::uint64_t, cplx>;

/// Same as apply_to_basis, with the square roots kept symbolic.
std::map<BasisIndex2D, SurdSum> apply_to_basis_exact(const OperatorWord& word, BasisIndex2D idx);

cplx evaluate(const SurdSum& s);

// ---------------------------------------------------------------------------
// Weak application to grids

/// An entry whose magnitude is within this factor of the summed magnitudes
/// of its contributions is indistinguishable from an exact cancellation and
/// is stored as zero.
inline constexpr double kCancellationFloor = 64 * 2.220446049250313e-16;

/// (word F)[e_n] = sum_m <e_n, word e_m> F[e_m] on the stored square.
/// The result keeps the trusted size and loses word.max_length() guard
/// indices; throws GuardBudgetError when the guard is too small.
CoeffGrid2D weak_apply(const OperatorWord& word, const CoeffGrid2D& f);

/// Per-entry route: entry n = sum over (m, c) in apply_to_basis(word^+, n)
/// of conj(c) F[m]. Slower; used to cross-check weak_apply.
CoeffGrid2D weak_apply_reference(const OperatorWord& word, const CoeffGrid2D& f);

/// phi_{k1,k2} = (k1! k2!)^{-1/2} B1^k1 B2^k2 (alpha delta(x1 - x2)).
/// The vacuum is built with guard k1 + k2 + extra_guard; the result keeps
/// `extra_guard` guard indices.
CoeffGrid2D build_phi(int k1, int k2, cplx alpha, int trusted, int extra_guard = 0);

/// psi_{k1,k2} = (k1! k2!)^{-1/2} (A1^+)^k1 (A2^+)^k2 (beta delta(x1 + x2)).
CoeffGrid2D build_psi(int k1, int k2, cplx beta, int trusted, int extra_guard = 0);

enum class Family { phi, psi };

/// Closed-form coefficients for k1, k2 <= 1 (nullopt beyond), e.g.
/// phi_{1,1}[e_n] = alpha (1 + 2 n2) delta_{n1,n2} and
/// psi_{1,1}[e_n] = beta (-1)^{n2+1} (1 + 2 n2) delta_{n1,n2}.
std::optional<cplx> family_closed_form(Family family, int k1, int k2, int n1, int n2,
                                       cplx norm);

/// max |([A_j, B_k] - delta_jk) f| over the stored result.
double commutator_residual(int j, int k, const CoeffGrid2D& f);

}  // namespace pblab
