#pragma once

// <F, G>_e = sum_n conj(F[e_n]) G[e_n], grouped into diagonal shells
// s = n1 + n2 over the common trusted square and regularized by
// classify_and_sum. The checks below compare the two sides of the
// identities satisfied by the pseudo-bosonic families.

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "pblab/dist_coeffs.hpp"
#include "pblab/pb_operators.hpp"
#include "pblab/reg_sum.hpp"

namespace pblab {

struct FeProductOptions {
  /// Both grids are finite combinations that vanish outside their stored
  /// squares, so the shell sum is an exact ordinary sum.
  bool finite_support = false;
  ClassifyOptions classify;
};

struct FeProductResult {
  cplx value;
  RegularizedSum sum;
  /// (s, t_s) for every shell with a nonzero contribution.
  std::vector<std::pair<int, cplx>> shell_profile;
  int shells_used = 0;
};

/// t_s = sum_{n1 + n2 = s, n1, n2 < N} conj(F[n]) G[n], N the smaller
/// trusted size; s runs over 0 .. 2N - 2.
std::vector<cplx> shell_terms(const CoeffGrid2D& f, const CoeffGrid2D& g);

/// Throws TruncationError ("insufficient truncation") when the trusted
/// region cannot decide the tail, NotSummableError when no method applies.
FeProductResult fe_product(const CoeffGrid2D& f, const CoeffGrid2D& g,
                           const FeProductOptions& options = {});

/// Summation of precomputed shell terms with the same error mapping.
FeProductResult fe_product_from_shells(std::vector<cplx> terms,
                                       const FeProductOptions& options = {});

// ---------------------------------------------------------------------------
// Biorthonormality

struct FamilyIndex {
  int k1 = 0;
  int k2 = 0;
  bool operator==(const FamilyIndex&) const = default;
};

struct MatrixEntry {
  FamilyIndex k;  // psi index (bra)
  FamilyIndex l;  // phi index (ket)
  bool summable = false;
  cplx value;
  SumMethod method = SumMethod::ordinary;
  std::string error;  // set when !summable
};

struct BiorthMatrix {
  int kmax = 0;
  cplx alpha, beta;
  int trusted = 0;
  /// Row-major over k = (k1, k2) with index k1 * (kmax + 1) + k2.
  std::vector<MatrixEntry> entries;

  int side() const { return (kmax + 1) * (kmax + 1); }
  const MatrixEntry& operator()(int row, int col) const { return entries[row * side() + col]; }
};

constexpr int kDefaultTrusted = 64;

/// <psi_k, phi_l>_e for all k, l with components <= kmax.
BiorthMatrix biorthonormality_matrix(int kmax, cplx alpha, cplx beta,
                                     int trusted = kDefaultTrusted);

/// Only the entries with k == l.
BiorthMatrix biorthonormality_diagonal(int kmax, cplx alpha, cplx beta,
                                       int trusted = kDefaultTrusted);

// ---------------------------------------------------------------------------
// Checks

struct CheckReport {
  cplx lhs;
  cplx rhs;
  double residual = 0.0;
  SumMethod method = SumMethod::ordinary;
  int shells_used = 0;
};

/// lhs = <F, G>_e, rhs = conj(<G, F>_e).
CheckReport check_conjugate_symmetry(const CoeffGrid2D& f, const CoeffGrid2D& g,
                                     const FeProductOptions& options = {});

/// lhs = <F, aG + bL>_e, rhs = a <F, G>_e + b <F, L>_e. All three products
/// must use the same summation method.
CheckReport check_linearity(const CoeffGrid2D& f, const CoeffGrid2D& g, const CoeffGrid2D& l,
                            cplx a, cplx b, const FeProductOptions& options = {});

struct PositivityReport {
  bool summable = false;
  double value = 0.0;
  bool nonneg = false;
  /// When value == 0: every trusted coefficient vanishes.
  bool vanishes = false;
  SumMethod method = SumMethod::ordinary;
  std::string outcome;
};

/// <F, F>_e with divergence reported in `outcome`, not thrown.
PositivityReport check_positivity(const CoeffGrid2D& f, const FeProductOptions& options = {});

struct EigenTransferReport {
  /// <psi_k, N_j phi_l>_e against l_j <psi_k, phi_l>_e.
  CheckReport ket;
  /// <N_j^+ psi_k, phi_l>_e against k_j <psi_k, phi_l>_e.
  CheckReport bra;
  double residual = 0.0;
};

EigenTransferReport check_eigen_transfer(FamilyIndex k, FamilyIndex l, int j,
                                         cplx alpha = std::sqrt(2.0), cplx beta = std::sqrt(2.0),
                                         int trusted = kDefaultTrusted);

struct AdjointReport {
  /// <N_j^+ psi_k, phi_l>_e and <psi_k, N_j phi_l>_e via weak_apply.
  cplx direct_lhs, direct_rhs;
  /// The same two products from the hand-expanded number-operator stencils.
  cplx stencil_lhs, stencil_rhs;
  /// Largest pairwise discrepancy among the four values.
  double residual = 0.0;
  SumMethod method = SumMethod::ordinary;
};

AdjointReport check_adjoint_identity(FamilyIndex k, FamilyIndex l, int j,
                                     cplx alpha = std::sqrt(2.0), cplx beta = std::sqrt(2.0),
                                     int trusted = kDefaultTrusted);

/// (N_j F)[n] from the explicit three-point stencil; adjoint=true gives N_j^+.
/// Keeps the trusted size and consumes one guard index.
CoeffGrid2D number_operator_stencil(int j, bool adjoint, const CoeffGrid2D& f);

}  // namespace pblab
