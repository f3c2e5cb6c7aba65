#include "pblab/pb_operators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "pblab/errors.hpp"
#include "pblab/simd/kernels.hpp"

namespace pblab {

Gen dagger(Gen g) {
  switch (g) {
    case Gen::a1: return Gen::a1d;
    case Gen::a1d: return Gen::a1;
    case Gen::a2: return Gen::a2d;
    case Gen::a2d: return Gen::a2;
  }
  return g;
}

std::string_view name(Gen g) {
  switch (g) {
    case Gen::a1: return "a1";
    case Gen::a1d: return "a1d";
    case Gen::a2: return "a2";
    case Gen::a2d: return "a2d";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// OperatorWord

int OperatorWord::max_length() const {
  std::size_t len = 0;
  for (const auto& t : terms_) len = std::max(len, t.gens.size());
  return static_cast<int>(len);
}

OperatorWord OperatorWord::adjoint() const {
  std::vector<WordTerm> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) {
    WordTerm a{std::conj(t.coeff), {}};
    a.gens.reserve(t.gens.size());
    for (auto it = t.gens.rbegin(); it != t.gens.rend(); ++it) a.gens.push_back(dagger(*it));
    out.push_back(std::move(a));
  }
  return OperatorWord(std::move(out));
}

OperatorWord OperatorWord::normalized(double drop_tol) const {
  std::map<std::vector<Gen>, cplx> merged;
  for (const auto& t : terms_) merged[t.gens] += t.coeff;
  std::vector<WordTerm> out;
  for (auto& [gens, c] : merged) {
    if (std::abs(c) > drop_tol) out.push_back({c, gens});
  }
  // shorter strings first, then lexicographic
  std::stable_sort(out.begin(), out.end(), [](const WordTerm& a, const WordTerm& b) {
    return a.gens.size() < b.gens.size();
  });
  return OperatorWord(std::move(out));
}

OperatorWord operator+(const OperatorWord& a, const OperatorWord& b) {
  auto terms = a.terms_;
  terms.insert(terms.end(), b.terms_.begin(), b.terms_.end());
  return OperatorWord(std::move(terms));
}

OperatorWord operator-(const OperatorWord& a, const OperatorWord& b) { return a + (-1.0 * b); }

OperatorWord operator*(const OperatorWord& a, const OperatorWord& b) {
  std::vector<WordTerm> terms;
  terms.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& ta : a.terms_) {
    for (const auto& tb : b.terms_) {
      WordTerm t{ta.coeff * tb.coeff, ta.gens};
      t.gens.insert(t.gens.end(), tb.gens.begin(), tb.gens.end());
      terms.push_back(std::move(t));
    }
  }
  return OperatorWord(std::move(terms));
}

OperatorWord operator*(cplx c, const OperatorWord& a) {
  auto terms = a.terms_;
  for (auto& t : terms) t.coeff *= c;
  return OperatorWord(std::move(terms));
}

namespace {

std::string format_real(double x, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", precision, x);
  return buf;
}

}  // namespace

std::string OperatorWord::to_string(int precision) const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& t : terms_) {
    std::string coef;
    bool negative = false;
    if (t.coeff.imag() == 0.0) {
      negative = t.coeff.real() < 0.0;
      const double mag = std::abs(t.coeff.real());
      if (!(mag == 1.0 && !t.gens.empty())) coef = format_real(mag, precision);
    } else {
      coef = "(" + format_real(t.coeff.real(), precision) +
             (t.coeff.imag() < 0.0 ? "-" : "+") + format_real(std::abs(t.coeff.imag()), precision) +
             "i)";
    }
    if (first) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;
    out += coef;
    for (std::size_t i = 0; i < t.gens.size(); ++i) {
      if (i > 0 || !coef.empty()) out += "*";
      out += name(t.gens[i]);
    }
  }
  return out;
}

bool approx_equal(const OperatorWord& a, const OperatorWord& b, double tol) {
  const auto diff = (a - b).normalized(tol);
  return diff.empty();
}

// ---------------------------------------------------------------------------
// Pseudo-bosonic operators

const OperatorWord& PbOperators::A(int j) const {
  if (j == 1) return A1;
  if (j == 2) return A2;
  throw ArgumentError("PbOperators::A: mode must be 1 or 2");
}

const OperatorWord& PbOperators::B(int j) const {
  if (j == 1) return B1;
  if (j == 2) return B2;
  throw ArgumentError("PbOperators::B: mode must be 1 or 2");
}

PbOperators make_pb_operators() {
  const double r = 1.0 / std::numbers::sqrt2;
  PbOperators ops;
  ops.A1 = OperatorWord({{r, {Gen::a1}}, {-r, {Gen::a2d}}});
  ops.A2 = OperatorWord({{-r, {Gen::a1d}}, {r, {Gen::a2}}});
  ops.B1 = OperatorWord({{r, {Gen::a1d}}, {r, {Gen::a2}}});
  ops.B2 = OperatorWord({{r, {Gen::a1}}, {r, {Gen::a2d}}});
  return ops;
}

OperatorWord number_operator(int j) {
  const auto ops = make_pb_operators();
  return ops.B(j) * ops.A(j);
}

HamiltonianParams::HamiltonianParams(double omega1, double gamma1_abs, double m1)
    : omega1_(omega1), gamma1_abs_(gamma1_abs), m1_(m1) {
  if (!(omega1 > 0.0) || !(gamma1_abs > 0.0) || !(m1 > 0.0) || !std::isfinite(omega1) ||
      !std::isfinite(gamma1_abs) || !std::isfinite(m1)) {
    throw ArgumentError("HamiltonianParams: omega1, |gamma1| and m1 must be finite and positive");
  }
}

cplx HamiltonianParams::eigenvalue(int l1, int l2) const {
  return {omega1_ * (l1 - l2), gamma1_abs_ / (2.0 * m1_) * (l1 + l2 + 1)};
}

OperatorWord hamiltonian_word(const HamiltonianParams& params) {
  const auto n1 = number_operator(1);
  const auto n2 = number_operator(2);
  const cplx damping{0.0, params.gamma1_abs() / (2.0 * params.m1())};
  return params.omega1() * (n1 - n2) + damping * (n1 + n2 + OperatorWord::identity());
}

// ---------------------------------------------------------------------------
// Basis action

namespace {

Ladder ladder_of(Gen g) { return (g == Gen::a1 || g == Gen::a2) ? Ladder::lower : Ladder::raise; }
bool acts_on_mode1(Gen g) { return g == Gen::a1 || g == Gen::a1d; }

// v = root^2 * squarefree
std::pair<std::uint64_t, std::uint64_t> split_square(std::uint64_t v) {
  std::uint64_t root = 1;
  std::uint64_t rest = v;
  for (std::uint64_t p = 2; p * p <= rest; ++p) {
    while (rest % (p * p) == 0) {
      rest /= p * p;
      root *= p;
    }
  }
  return {root, rest};
}

}  // namespace

BasisMap apply_to_basis(const OperatorWord& word, BasisIndex2D idx) {
  if (idx.n1 < 0 || idx.n2 < 0) throw ArgumentError("apply_to_basis: negative index");
  BasisMap out;
  for (const auto& t : word.terms()) {
    cplx c = t.coeff;
    BasisIndex2D cur = idx;
    bool alive = true;
    for (auto it = t.gens.rbegin(); it != t.gens.rend() && alive; ++it) {
      int& n = acts_on_mode1(*it) ? cur.n1 : cur.n2;
      const auto step = ladder_on_basis(ladder_of(*it), n);
      if (!step) {
        alive = false;
        break;
      }
      c *= step->coefficient;
      n = step->index;
    }
    if (alive) out[cur] += c;
  }
  std::erase_if(out, [](const auto& kv) { return kv.second == cplx{}; });
  return out;
}

std::map<BasisIndex2D, SurdSum> apply_to_basis_exact(const OperatorWord& word, BasisIndex2D idx) {
  if (idx.n1 < 0 || idx.n2 < 0) throw ArgumentError("apply_to_basis_exact: negative index");
  std::map<BasisIndex2D, SurdSum> out;
  for (const auto& t : word.terms()) {
    std::uint64_t radicand = 1;
    std::uint64_t integer_part = 1;
    BasisIndex2D cur = idx;
    bool alive = true;
    for (auto it = t.gens.rbegin(); it != t.gens.rend(); ++it) {
      int& n = acts_on_mode1(*it) ? cur.n1 : cur.n2;
      const auto step = ladder_on_basis(ladder_of(*it), n);
      if (!step) {
        alive = false;
        break;
      }
      const auto [root, free] = split_square(radicand * step->radicand);
      integer_part *= root;
      radicand = free;
      n = step->index;
    }
    if (!alive) continue;
    auto& surd = out[cur];
    surd[radicand] += t.coeff * static_cast<double>(integer_part);
  }
  for (auto& [key, surd] : out) {
    std::erase_if(surd, [](const auto& kv) { return kv.second == cplx{}; });
  }
  std::erase_if(out, [](const auto& kv) { return kv.second.empty(); });
  return out;
}

cplx evaluate(const SurdSum& s) {
  cplx acc{};
  for (const auto& [r, c] : s) acc += c * std::sqrt(static_cast<double>(r));
  return acc;
}

// ---------------------------------------------------------------------------
// Weak application

namespace {

struct SquareBuffer {
  int dim;
  std::vector<cplx> v;

  std::span<cplx> row(int i) { return std::span<cplx>(v).subspan(std::size_t(i) * dim, dim); }
  std::span<const cplx> row(int i) const {
    return std::span<const cplx>(v).subspan(std::size_t(i) * dim, dim);
  }
};

struct SweepWeights {
  std::vector<double> ones;
  std::vector<double> up;    // sqrt(n + 1)
  std::vector<double> down;  // sqrt(n)

  explicit SweepWeights(int dim) : ones(dim, 1.0), up(dim), down(dim) {
    for (int n = 0; n < dim; ++n) {
      up[n] = std::sqrt(static_cast<double>(n + 1));
      down[n] = std::sqrt(static_cast<double>(n));
    }
  }
};

// One generator as a matrix action on the coefficient square; the output
// side is one shorter so every stored entry stays exact.
SquareBuffer sweep(Gen g, const SquareBuffer& in, const SweepWeights& w) {
  const int d = in.dim - 1;
  SquareBuffer out{d, std::vector<cplx>(std::size_t(d) * d)};
  const auto ones = std::span<const double>(w.ones).first(d);
  switch (g) {
    case Gen::a1:  // out[n1][n2] = sqrt(n1+1) in[n1+1][n2]
      for (int i = 0; i < d; ++i) {
        simd::axpy_weighted(out.row(i), in.row(i + 1).first(d), ones, w.up[i]);
      }
      break;
    case Gen::a1d:  // out[n1][n2] = sqrt(n1) in[n1-1][n2]
      for (int i = 1; i < d; ++i) {
        simd::axpy_weighted(out.row(i), in.row(i - 1).first(d), ones, w.down[i]);
      }
      break;
    case Gen::a2:  // out[n1][n2] = sqrt(n2+1) in[n1][n2+1]
      for (int i = 0; i < d; ++i) {
        simd::axpy_weighted(out.row(i), in.row(i).subspan(1, d),
                            std::span<const double>(w.up).first(d), 1.0);
      }
      break;
    case Gen::a2d:  // out[n1][n2] = sqrt(n2) in[n1][n2-1]
      for (int i = 0; i < d; ++i) {
        if (d < 2) break;
        simd::axpy_weighted(out.row(i).subspan(1), in.row(i).first(d - 1),
                            std::span<const double>(w.down).subspan(1, d - 1), 1.0);
      }
      break;
  }
  return out;
}

}  // namespace

CoeffGrid2D weak_apply(const OperatorWord& word, const CoeffGrid2D& f) {
  const int len = word.max_length();
  if (f.guard() < len) throw GuardBudgetError(len, f.guard());
  const int out_dim = f.dim() - len;
  const std::size_t out_size = std::size_t(out_dim) * out_dim;
  const SweepWeights weights(f.dim());
  SquareBuffer out{out_dim, std::vector<cplx>(out_size)};
  SquareBuffer bound{out_dim, std::vector<cplx>(out_size)};
  const SquareBuffer source{f.dim(), std::vector<cplx>(f.data().begin(), f.data().end())};
  SquareBuffer source_abs{f.dim(), std::vector<cplx>(source.v.size())};
  for (std::size_t i = 0; i < source.v.size(); ++i) source_abs.v[i] = std::abs(source.v[i]);
  const auto ones = std::span<const double>(weights.ones).first(out_dim);

  for (const auto& t : word.terms()) {
    SquareBuffer cur = source;
    SquareBuffer cur_abs = source_abs;
    for (auto it = t.gens.rbegin(); it != t.gens.rend(); ++it) {
      cur = sweep(*it, cur, weights);
      cur_abs = sweep(*it, cur_abs, weights);
    }
    for (int i = 0; i < out_dim; ++i) {
      simd::axpy_weighted(out.row(i), cur.row(i).first(out_dim), ones, t.coeff);
      simd::axpy_weighted(bound.row(i), cur_abs.row(i).first(out_dim), ones, std::abs(t.coeff));
    }
  }
  for (std::size_t i = 0; i < out_size; ++i) {
    if (std::abs(out.v[i]) <= kCancellationFloor * bound.v[i].real()) out.v[i] = cplx{};
  }
  return CoeffGrid2D(f.trusted_size(), f.guard() - len, std::move(out.v));
}

CoeffGrid2D weak_apply_reference(const OperatorWord& word, const CoeffGrid2D& f) {
  const int len = word.max_length();
  if (f.guard() < len) throw GuardBudgetError(len, f.guard());
  const auto adj = word.adjoint();
  return CoeffGrid2D::from_function(f.trusted_size(), f.guard() - len, [&](int n1, int n2) {
    cplx acc{};
    double bound = 0.0;
    for (const auto& [m, c] : apply_to_basis(adj, {n1, n2})) {
      acc += std::conj(c) * f.at(m);
      bound += std::abs(c) * std::abs(f.at(m));
    }
    return std::abs(acc) <= kCancellationFloor * bound ? cplx{} : acc;
  });
}

namespace {

double inv_sqrt_factorials(int k1, int k2) {
  double p = 1.0;
  for (int i = 2; i <= k1; ++i) p *= i;
  for (int i = 2; i <= k2; ++i) p *= i;
  return 1.0 / std::sqrt(p);
}

void check_family_args(int k1, int k2, int trusted, int extra_guard, const char* who) {
  if (k1 < 0 || k2 < 0) throw ArgumentError(std::string(who) + ": negative label");
  if (trusted < 1) throw ArgumentError(std::string(who) + ": trusted size must be >= 1");
  if (extra_guard < 0) throw ArgumentError(std::string(who) + ": negative guard");
}

}  // namespace

CoeffGrid2D build_phi(int k1, int k2, cplx alpha, int trusted, int extra_guard) {
  check_family_args(k1, k2, trusted, extra_guard, "build_phi");
  const auto ops = make_pb_operators();
  auto g = delta_diff_coeffs(alpha, trusted, k1 + k2 + extra_guard);
  for (int i = 0; i < k2; ++i) g = weak_apply(ops.B2, g);
  for (int i = 0; i < k1; ++i) g = weak_apply(ops.B1, g);
  return inv_sqrt_factorials(k1, k2) * g;
}

CoeffGrid2D build_psi(int k1, int k2, cplx beta, int trusted, int extra_guard) {
  check_family_args(k1, k2, trusted, extra_guard, "build_psi");
  const auto ops = make_pb_operators();
  const auto a1d = ops.A1.adjoint();
  const auto a2d = ops.A2.adjoint();
  auto g = delta_sum_coeffs(beta, trusted, k1 + k2 + extra_guard);
  for (int i = 0; i < k2; ++i) g = weak_apply(a2d, g);
  for (int i = 0; i < k1; ++i) g = weak_apply(a1d, g);
  return inv_sqrt_factorials(k1, k2) * g;
}

std::optional<cplx> family_closed_form(Family family, int k1, int k2, int n1, int n2,
                                       cplx norm) {
  if (k1 < 0 || k2 < 0 || n1 < 0 || n2 < 0) {
    throw ArgumentError("family_closed_form: negative index");
  }
  if (k1 > 1 || k2 > 1) return std::nullopt;
  // psi carries (-1)^{n2 + k2}
  const double sign = family == Family::phi ? 1.0 : ((n2 + k2) % 2 == 0 ? 1.0 : -1.0);
  double magnitude = 0.0;
  if (k1 == 0 && k2 == 0) {
    magnitude = n1 == n2 ? 1.0 : 0.0;
  } else if (k1 == 0 && k2 == 1) {
    magnitude = n1 == n2 - 1 ? std::sqrt(2.0 * n2) : 0.0;
  } else if (k1 == 1 && k2 == 0) {
    magnitude = n1 == n2 + 1 ? std::sqrt(2.0 * (n2 + 1)) : 0.0;
  } else {
    magnitude = n1 == n2 ? 1.0 + 2.0 * n2 : 0.0;
  }
  return norm * (sign * magnitude);
}

double commutator_residual(int j, int k, const CoeffGrid2D& f) {
  const auto ops = make_pb_operators();
  const auto& a = ops.A(j);
  const auto& b = ops.B(k);
  auto word = a * b - b * a;
  if (j == k) word = word - OperatorWord::identity();
  return weak_apply(word, f).max_abs();
}

}  // namespace pblab
