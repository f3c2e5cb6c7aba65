#pragma once

// Weak representation of a tempered distribution F on R^2 by its pairings
// F[e_{n1,n2}] = <e_{n1} e_{n2}, F> with the Hermite basis, truncated to a
// square of side N + G.
//
// Every stored entry is an exact coefficient (up to rounding). Entries with
// both indices < N are the trusted region callers compare against; the G
// outer rows/columns are guard band that index-shifting operators consume.

#include <complex>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "pblab/hermite_basis.hpp"

namespace pblab {

using cplx = std::complex<double>;

class CoeffGrid2D {
 public:
  /// Zero grid.
  CoeffGrid2D(int trusted, int guard);
  /// Row-major data of length (trusted + guard)^2.
  CoeffGrid2D(int trusted, int guard, std::vector<cplx> data);

  template <typename Fn>
  static CoeffGrid2D from_function(int trusted, int guard, Fn&& entry) {
    CoeffGrid2D g(trusted, guard);
    for (int i = 0; i < g.dim_; ++i) {
      for (int j = 0; j < g.dim_; ++j) g.data_[g.offset(i, j)] = entry(i, j);
    }
    return g;
  }

  int trusted_size() const { return trusted_; }
  int guard() const { return guard_; }
  /// Stored side length, trusted + guard.
  int dim() const { return dim_; }

  cplx operator()(int n1, int n2) const { return data_[offset(n1, n2)]; }
  cplx at(BasisIndex2D idx) const;
  /// Zero outside the stored square; for reading finite-support grids.
  cplx value_or_zero(int n1, int n2) const;

  std::span<const cplx> data() const { return data_; }
  std::span<const cplx> row(int n1) const {
    return std::span<const cplx>(data_).subspan(static_cast<std::size_t>(n1) * dim_, dim_);
  }

  /// Keeps indices < trusted + guard of this grid. Both must not exceed the
  /// current values.
  CoeffGrid2D cropped(int trusted, int guard) const;

  double max_abs() const;
  double max_abs_trusted() const;
  bool has_same_shape(const CoeffGrid2D& other) const {
    return trusted_ == other.trusted_ && guard_ == other.guard_;
  }

  friend CoeffGrid2D operator+(const CoeffGrid2D& a, const CoeffGrid2D& b);
  friend CoeffGrid2D operator-(const CoeffGrid2D& a, const CoeffGrid2D& b);
  friend CoeffGrid2D operator*(cplx c, const CoeffGrid2D& a);

 private:
  std::size_t offset(int n1, int n2) const {
    return static_cast<std::size_t>(n1) * dim_ + static_cast<std::size_t>(n2);
  }

  int trusted_;
  int guard_;
  int dim_;
  std::vector<cplx> data_;
};

/// c1 F + c2 G for grids of identical shape.
CoeffGrid2D linear_combination(cplx c1, const CoeffGrid2D& f, cplx c2, const CoeffGrid2D& g);

// ---------------------------------------------------------------------------
// Constructors for the distributions of interest

enum class DeltaKind { difference, sum };

/// int e_{n1}(x) e_{n2}(+-x) dx by Gauss-Hermite quadrature: the pairing of
/// delta(x1 - x2) (difference) or delta(x1 + x2) (sum) with e_{n1} e_{n2}.
double delta_pairing_quadrature(DeltaKind kind, int n1, int n2, const OscillatorParams& params,
                                Precision precision = Precision::standard);

/// alpha * delta(x1 - x2): entry alpha at (n, n).
CoeffGrid2D delta_diff_coeffs(cplx alpha, int trusted, int guard);

/// beta * delta(x1 + x2): entry beta * (-1)^n at (n, n).
CoeffGrid2D delta_sum_coeffs(cplx beta, int trusted, int guard);

/// Single basis element e_{n1,n2}.
CoeffGrid2D basis_element(BasisIndex2D idx, int trusted, int guard);

/// <e_{n1,n2}, f> by tensor Gauss-Hermite quadrature for every stored index.
/// order <= 0 selects default_quadrature_order(trusted + guard - 1).
CoeffGrid2D project_function(const std::function<cplx(double, double)>& f, int trusted,
                             const OscillatorParams& params, int guard = 0, int order = 0);

/// Normalization constants for the two vacua.
struct NormalizationPair {
  cplx alpha;
  cplx beta;

  /// alpha * conj(beta)
  cplx product() const { return alpha * std::conj(beta); }
  /// alpha = beta = sqrt(ab) for a positive product ab.
  static NormalizationPair symmetric(double ab);
  /// alpha = beta = sqrt(2), so alpha * conj(beta) = 2.
  static NormalizationPair biorthonormal() { return symmetric(2.0); }
};

// ---------------------------------------------------------------------------
// Serialization

/// {"n": N, "g": G, "re": [...], "im": [...]} row-major over the stored square.
nlohmann::json to_json(const CoeffGrid2D& grid);
CoeffGrid2D grid_from_json(const nlohmann::json& doc);

/// Trusted region as CSV rows "n1,n2,re,im".
void write_csv_trusted(std::ostream& out, const CoeffGrid2D& grid);

}  // namespace pblab
