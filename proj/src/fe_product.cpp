#include "pblab/fe_product.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "pblab/errors.hpp"
#include "pblab/simd/kernels.hpp"

namespace pblab {

std::vector<cplx> shell_terms(const CoeffGrid2D& f, const CoeffGrid2D& g) {
  const int n = std::min(f.trusted_size(), g.trusted_size());
  std::vector<cplx> terms(static_cast<std::size_t>(2 * n - 1));
  std::vector<cplx> fa(n), ga(n);
  for (int s = 0; s <= 2 * n - 2; ++s) {
    const int lo = std::max(0, s - (n - 1));
    const int hi = std::min(s, n - 1);
    const int len = hi - lo + 1;
    for (int i = 0; i < len; ++i) {
      fa[i] = f(lo + i, s - lo - i);
      ga[i] = g(lo + i, s - lo - i);
    }
    terms[s] = simd::dot_conj(std::span<const cplx>(fa).first(len),
                              std::span<const cplx>(ga).first(len));
  }
  return terms;
}

FeProductResult fe_product_from_shells(std::vector<cplx> terms, const FeProductOptions& options) {
  FeProductResult out;
  for (std::size_t s = 0; s < terms.size(); ++s) {
    if (terms[s] != cplx{}) out.shell_profile.emplace_back(static_cast<int>(s), terms[s]);
  }
  // Shell s of an N x N square is complete for s <= N - 1. Later shells miss
  // entries beyond the square, which only vanish for finite combinations.
  if (!options.finite_support) terms.resize((terms.size() + 1) / 2);
  out.shells_used = static_cast<int>(terms.size());
  const int largest = out.shells_used - 1;
  Series series = options.finite_support ? Series::exact_finite(std::move(terms))
                                         : Series::finite(std::move(terms));
  try {
    out.sum = classify_and_sum(series, options.classify);
  } catch (const TruncationError& e) {
    throw TruncationError("insufficient truncation: shells 0.." + std::to_string(largest) +
                              " do not determine the sum (" + e.what() + ")",
                          largest);
  }
  out.value = out.sum.value;
  return out;
}

FeProductResult fe_product(const CoeffGrid2D& f, const CoeffGrid2D& g,
                           const FeProductOptions& options) {
  return fe_product_from_shells(shell_terms(f, g), options);
}

// ---------------------------------------------------------------------------

namespace {

class FamilyCache {
 public:
  FamilyCache(cplx alpha, cplx beta, int trusted, int extra_guard)
      : alpha_(alpha), beta_(beta), trusted_(trusted), extra_(extra_guard) {}

  const CoeffGrid2D& phi(FamilyIndex i) { return get(phi_, i, true); }
  const CoeffGrid2D& psi(FamilyIndex i) { return get(psi_, i, false); }

 private:
  using Map = std::map<std::pair<int, int>, CoeffGrid2D>;
  const CoeffGrid2D& get(Map& m, FamilyIndex i, bool is_phi) {
    const auto key = std::make_pair(i.k1, i.k2);
    auto it = m.find(key);
    if (it == m.end()) {
      auto grid = is_phi ? build_phi(i.k1, i.k2, alpha_, trusted_, extra_)
                         : build_psi(i.k1, i.k2, beta_, trusted_, extra_);
      it = m.emplace(key, std::move(grid)).first;
    }
    return it->second;
  }

  cplx alpha_, beta_;
  int trusted_, extra_;
  Map phi_, psi_;
};

BiorthMatrix biorth_impl(int kmax, cplx alpha, cplx beta, int trusted, bool diagonal_only) {
  if (kmax < 0) throw ArgumentError("biorthonormality_matrix: kmax must be >= 0");
  if (2 * kmax + 2 > trusted) {
    throw ArgumentError("biorthonormality_matrix: trusted size too small for kmax");
  }
  BiorthMatrix m;
  m.kmax = kmax;
  m.alpha = alpha;
  m.beta = beta;
  m.trusted = trusted;
  FamilyCache cache(alpha, beta, trusted, 0);
  const int side = m.side();
  m.entries.resize(static_cast<std::size_t>(side) * side);
  for (int r = 0; r < side; ++r) {
    for (int c = 0; c < side; ++c) {
      MatrixEntry& e = m.entries[static_cast<std::size_t>(r) * side + c];
      e.k = {r / (kmax + 1), r % (kmax + 1)};
      e.l = {c / (kmax + 1), c % (kmax + 1)};
      if (diagonal_only && r != c) {
        e.error = "not computed";
        continue;
      }
      try {
        const auto res = fe_product(cache.psi(e.k), cache.phi(e.l));
        e.summable = true;
        e.value = res.value;
        e.method = res.sum.method;
      } catch (const AccuracyError& ex) {
        e.error = ex.what();
      }
    }
  }
  return m;
}

void check_mode(int j, const char* who) {
  if (j != 1 && j != 2) throw ArgumentError(std::string(who) + ": mode must be 1 or 2");
}

void check_family(FamilyIndex i, const char* who) {
  if (i.k1 < 0 || i.k2 < 0) throw ArgumentError(std::string(who) + ": negative family index");
}

SumMethod weakest(SumMethod a, SumMethod b) {
  auto rank = [](SumMethod m) {
    switch (m) {
      case SumMethod::ordinary: return 0;
      case SumMethod::abel_exact: return 1;
      case SumMethod::abel_numeric: return 2;
    }
    return 3;
  };
  return rank(a) >= rank(b) ? a : b;
}

}  // namespace

BiorthMatrix biorthonormality_matrix(int kmax, cplx alpha, cplx beta, int trusted) {
  return biorth_impl(kmax, alpha, beta, trusted, false);
}

BiorthMatrix biorthonormality_diagonal(int kmax, cplx alpha, cplx beta, int trusted) {
  return biorth_impl(kmax, alpha, beta, trusted, true);
}

// ---------------------------------------------------------------------------

CheckReport check_conjugate_symmetry(const CoeffGrid2D& f, const CoeffGrid2D& g,
                                     const FeProductOptions& options) {
  const auto fg = fe_product(f, g, options);
  const auto gf = fe_product(g, f, options);
  CheckReport r;
  r.lhs = fg.value;
  r.rhs = std::conj(gf.value);
  r.residual = std::abs(r.lhs - r.rhs);
  r.method = weakest(fg.sum.method, gf.sum.method);
  r.shells_used = fg.shells_used;
  return r;
}

CheckReport check_linearity(const CoeffGrid2D& f, const CoeffGrid2D& g, const CoeffGrid2D& l,
                            cplx a, cplx b, const FeProductOptions& options) {
  if (!g.has_same_shape(l)) throw ArgumentError("check_linearity: G and L differ in shape");
  const auto combo = fe_product(f, linear_combination(a, g, b, l), options);
  const auto fg = fe_product(f, g, options);
  const auto fl = fe_product(f, l, options);
  // An ordinary-summable zero product carries no method constraint.
  auto informative = [](const FeProductResult& r) { return !r.shell_profile.empty(); };
  std::vector<SumMethod> methods;
  for (const auto* r : {&combo, &fg, &fl}) {
    if (informative(*r)) methods.push_back(r->sum.method);
  }
  for (std::size_t i = 1; i < methods.size(); ++i) {
    if (methods[i] != methods[0]) {
      throw AccuracyError("check_linearity: products were summed by different methods (" +
                          to_string(methods[0]) + " vs " + to_string(methods[i]) + ")");
    }
  }
  CheckReport r;
  r.lhs = combo.value;
  r.rhs = a * fg.value + b * fl.value;
  r.residual = std::abs(r.lhs - r.rhs);
  r.method = methods.empty() ? SumMethod::ordinary : methods[0];
  r.shells_used = combo.shells_used;
  return r;
}

PositivityReport check_positivity(const CoeffGrid2D& f, const FeProductOptions& options) {
  PositivityReport r;
  auto terms = shell_terms(f, f);
  if (!options.finite_support) terms.resize((terms.size() + 1) / 2);
  Series series = options.finite_support ? Series::exact_finite(terms) : Series::finite(terms);
  std::optional<RegularizedSum> ord;
  try {
    ord = try_ordinary(series, options.classify);
  } catch (const AccuracyError& e) {
    r.outcome = e.what();
  }
  if (!ord) {
    // Nonnegative terms: if the partial sums do not settle, the Abel factor
    // only delays the growth and the product does not exist.
    r.summable = false;
    r.outcome = "not F_e-multiplicable with itself by implemented methods: partial sums of "
                "nonnegative terms do not settle within the trusted region";
    return r;
  }
  r.summable = true;
  r.method = ord->method;
  r.value = ord->value.real();
  r.nonneg = r.value >= 0.0;
  if (r.value == 0.0) r.vanishes = f.cropped(f.trusted_size(), 0).max_abs() == 0.0;
  r.outcome = r.nonneg ? "nonnegative" : "negative";
  return r;
}

// ---------------------------------------------------------------------------

CoeffGrid2D number_operator_stencil(int j, bool adjoint, const CoeffGrid2D& f) {
  check_mode(j, "number_operator_stencil");
  if (f.guard() < 1) throw GuardBudgetError(1, f.guard());
  const int out_dim = f.dim() - 1;
  // (N_j F)[n] = sum over the three-point expansion of N_j^+ e_n, whose
  // coefficients are real: c0 e_n + cp e_{n+(1,1)} + cm e_{n-(1,1)}.
  const double sign_shift = adjoint ? -1.0 : 1.0;
  std::vector<cplx> data(static_cast<std::size_t>(out_dim) * out_dim);
  for (int n1 = 0; n1 < out_dim; ++n1) {
    for (int n2 = 0; n2 < out_dim; ++n2) {
      const double diag = (j == 1 ? n1 - n2 - 1 : n2 - n1 - 1) * 0.5;
      const double cp = sign_shift * 0.5 * std::sqrt(double(n1 + 1) * double(n2 + 1));
      const double cm = -sign_shift * 0.5 * std::sqrt(double(n1) * double(n2));
      cplx v = diag * f(n1, n2) + cp * f(n1 + 1, n2 + 1);
      double bound = std::abs(diag * f(n1, n2)) + std::abs(cp * f(n1 + 1, n2 + 1));
      if (n1 > 0 && n2 > 0) {
        v += cm * f(n1 - 1, n2 - 1);
        bound += std::abs(cm * f(n1 - 1, n2 - 1));
      }
      data[static_cast<std::size_t>(n1) * out_dim + n2] =
          std::abs(v) <= kCancellationFloor * bound ? cplx{} : v;
    }
  }
  return CoeffGrid2D(f.trusted_size(), f.guard() - 1, std::move(data));
}

EigenTransferReport check_eigen_transfer(FamilyIndex k, FamilyIndex l, int j, cplx alpha,
                                         cplx beta, int trusted) {
  check_mode(j, "check_eigen_transfer");
  check_family(k, "check_eigen_transfer");
  check_family(l, "check_eigen_transfer");
  const auto nj = number_operator(j);
  const int len = nj.max_length();
  const auto phi = build_phi(l.k1, l.k2, alpha, trusted, len);
  const auto psi = build_psi(k.k1, k.k2, beta, trusted, len);
  const auto base = fe_product(psi, phi);

  EigenTransferReport r;
  const auto ket = fe_product(psi, weak_apply(nj, phi));
  r.ket.lhs = ket.value;
  r.ket.rhs = double(j == 1 ? l.k1 : l.k2) * base.value;
  r.ket.residual = std::abs(r.ket.lhs - r.ket.rhs);
  r.ket.method = weakest(ket.sum.method, base.sum.method);
  r.ket.shells_used = ket.shells_used;

  const auto bra = fe_product(weak_apply(nj.adjoint(), psi), phi);
  r.bra.lhs = bra.value;
  r.bra.rhs = double(j == 1 ? k.k1 : k.k2) * base.value;
  r.bra.residual = std::abs(r.bra.lhs - r.bra.rhs);
  r.bra.method = weakest(bra.sum.method, base.sum.method);
  r.bra.shells_used = bra.shells_used;

  r.residual = std::max(r.ket.residual, r.bra.residual);
  return r;
}

AdjointReport check_adjoint_identity(FamilyIndex k, FamilyIndex l, int j, cplx alpha, cplx beta,
                                     int trusted) {
  check_mode(j, "check_adjoint_identity");
  check_family(k, "check_adjoint_identity");
  check_family(l, "check_adjoint_identity");
  const auto nj = number_operator(j);
  const int len = nj.max_length();
  const auto phi = build_phi(l.k1, l.k2, alpha, trusted, len);
  const auto psi = build_psi(k.k1, k.k2, beta, trusted, len);

  const auto d_lhs = fe_product(weak_apply(nj.adjoint(), psi), phi);
  const auto d_rhs = fe_product(psi, weak_apply(nj, phi));
  const auto s_lhs = fe_product(number_operator_stencil(j, true, psi), phi);
  const auto s_rhs = fe_product(psi, number_operator_stencil(j, false, phi));

  AdjointReport r;
  r.direct_lhs = d_lhs.value;
  r.direct_rhs = d_rhs.value;
  r.stencil_lhs = s_lhs.value;
  r.stencil_rhs = s_rhs.value;
  const cplx v[] = {r.direct_lhs, r.direct_rhs, r.stencil_lhs, r.stencil_rhs};
  for (int a = 0; a < 4; ++a) {
    for (int b = a + 1; b < 4; ++b) r.residual = std::max(r.residual, std::abs(v[a] - v[b]));
  }
  r.method = SumMethod::ordinary;
  for (const auto* res : {&d_lhs, &d_rhs, &s_lhs, &s_rhs}) {
    r.method = weakest(r.method, res->sum.method);
  }
  return r;
}

}  // namespace pblab
