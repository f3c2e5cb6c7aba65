#include <doctest.h>

#include <cmath>
#include <random>

#include "pblab/pb_operators.hpp"

using namespace pblab;

namespace {

CoeffGrid2D random_grid(std::mt19937_64& rng, int trusted, int guard) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return CoeffGrid2D::from_function(trusted, guard, [&](int, int) { return cplx{u(rng), u(rng)}; });
}

double max_diff_trusted(const CoeffGrid2D& a, const CoeffGrid2D& b) {
  double worst = 0.0;
  const int n = std::min(a.trusted_size(), b.trusted_size());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) worst = std::max(worst, std::abs(a(i, j) - b(i, j)));
  }
  return worst;
}

// The eight entry formulas for k1, k2 in {0, 1}, typed in from the hand
// derivation rather than taken from the library.
cplx phi_oracle(int k1, int k2, int n1, int n2, cplx alpha) {
  const double m = n2;
  if (k1 == 0 && k2 == 0) return n1 == n2 ? alpha : cplx{};
  if (k1 == 0 && k2 == 1) return n1 == n2 - 1 ? alpha * std::sqrt(2 * m) : cplx{};
  if (k1 == 1 && k2 == 0) return n1 == n2 + 1 ? alpha * std::sqrt(2 * (m + 1)) : cplx{};
  return n1 == n2 ? alpha * (1 + 2 * m) : cplx{};
}

cplx psi_oracle(int k1, int k2, int n1, int n2, cplx beta) {
  const double sign = (n2 + k2) % 2 == 0 ? 1.0 : -1.0;
  return sign * phi_oracle(k1, k2, n1, n2, beta);
}

}  // namespace

TEST_CASE("generator daggers and names") {
  CHECK(dagger(Gen::a1) == Gen::a1d);
  CHECK(dagger(Gen::a2d) == Gen::a2);
  CHECK(name(Gen::a2d) == "a2d");
}

TEST_CASE("word algebra") {
  const auto a1 = OperatorWord::generator(Gen::a1);
  const auto a1d = OperatorWord::generator(Gen::a1d);
  const auto prod = a1 * a1d;
  REQUIRE(prod.terms().size() == 1);
  CHECK(prod.terms()[0].gens == std::vector<Gen>{Gen::a1, Gen::a1d});
  CHECK(prod.max_length() == 2);

  const auto w = OperatorWord({{cplx{0, 2}, {Gen::a1, Gen::a2d}}});
  const auto adj = w.adjoint();
  REQUIRE(adj.terms().size() == 1);
  CHECK(adj.terms()[0].coeff == cplx{0, -2});
  CHECK(adj.terms()[0].gens == std::vector<Gen>{Gen::a2, Gen::a1d});

  CHECK((a1 - a1).normalized().empty());
  CHECK(approx_equal(a1 + a1, 2.0 * a1));
  CHECK_FALSE(approx_equal(a1, a1d));
  CHECK(OperatorWord().to_string() == "0");
}

TEST_CASE("pseudo-bosonic operators from the ladder generators") {
  const auto ops = make_pb_operators();
  const double r = 1 / std::sqrt(2.0);
  const auto gen = [](Gen g) { return OperatorWord::generator(g); };
  CHECK(approx_equal(ops.A1, r * (gen(Gen::a1) - gen(Gen::a2d))));
  CHECK(approx_equal(ops.A2, r * (gen(Gen::a2) - gen(Gen::a1d))));
  CHECK(approx_equal(ops.B1, r * (gen(Gen::a1d) + gen(Gen::a2))));
  CHECK(approx_equal(ops.B2, r * (gen(Gen::a1) + gen(Gen::a2d))));
  CHECK_FALSE(approx_equal(ops.B1, ops.A1.adjoint()));
  CHECK_THROWS_AS(ops.A(3), ArgumentError);
  CHECK(approx_equal(number_operator(2), ops.B2 * ops.A2));
}

TEST_CASE("commutators act as delta_jk on basis vectors, exactly") {
  const auto ops = make_pb_operators();
  for (int j = 1; j <= 2; ++j) {
    for (int k = 1; k <= 2; ++k) {
      const auto comm = ops.A(j) * ops.B(k) - ops.B(k) * ops.A(j);
      for (BasisIndex2D idx : {BasisIndex2D{0, 0}, BasisIndex2D{3, 1}, BasisIndex2D{7, 12}}) {
        const auto exact = apply_to_basis_exact(comm, idx);
        if (j != k) {
          CHECK(exact.empty());
        } else {
          REQUIRE(exact.size() == 1);
          CHECK(exact.begin()->first == idx);
          CHECK(std::abs(evaluate(exact.begin()->second) - 1.0) <= 1e-15);
        }
      }
    }
  }
}

TEST_CASE("apply_to_basis for simple strings") {
  const auto word = OperatorWord({{cplx{1.0}, {Gen::a1d, Gen::a2}}});
  const auto out = apply_to_basis(word, {2, 3});
  REQUIRE(out.size() == 1);
  CHECK(out.begin()->first == BasisIndex2D{3, 2});
  CHECK(std::abs(out.begin()->second - std::sqrt(3.0) * std::sqrt(3.0)) <= 1e-14);
  CHECK(apply_to_basis(OperatorWord::generator(Gen::a1), {0, 4}).empty());
}

TEST_CASE("weak_apply against the per-entry reference") {
  std::mt19937_64 rng(11);
  const auto f = random_grid(rng, 9, 3);
  const auto ops = make_pb_operators();
  for (const auto& word : {ops.A1, ops.B2, number_operator(1),
                           hamiltonian_word(HamiltonianParams(1.1, 0.3, 0.7))}) {
    const auto fast = weak_apply(word, f);
    const auto ref = weak_apply_reference(word, f);
    CHECK(fast.trusted_size() == 9);
    CHECK(fast.guard() == 3 - word.max_length());
    CHECK(max_diff_trusted(fast, ref) <= 1e-13);
  }
}

TEST_CASE("weak application uses the adjoint action") {
  // (a1 F)[e_n] = F[a1^+ e_n] = sqrt(n1 + 1) F[n1 + 1, n2]
  std::mt19937_64 rng(12);
  const auto f = random_grid(rng, 5, 1);
  const auto g = weak_apply(OperatorWord::generator(Gen::a1), f);
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      CHECK(std::abs(g(i, j) - std::sqrt(i + 1.0) * f(i + 1, j)) <= 1e-15);
    }
  }
}

TEST_CASE("guard budget") {
  const auto f = delta_diff_coeffs(1.0, 6, 1);
  CHECK_NOTHROW(weak_apply(make_pb_operators().A1, f));
  CHECK_THROWS_AS(weak_apply(number_operator(1), f), GuardBudgetError);
  try {
    weak_apply(number_operator(1), f);
  } catch (const GuardBudgetError& e) {
    CHECK(e.required() == 2);
    CHECK(e.available() == 1);
  }
}

TEST_CASE("vacua are annihilated") {
  const auto ops = make_pb_operators();
  const cplx alpha{1.3, 0.4}, beta{-0.2, 0.9};
  const auto phi0 = delta_diff_coeffs(alpha, 40, 2);
  const auto psi0 = delta_sum_coeffs(beta, 40, 2);
  for (int j = 1; j <= 2; ++j) {
    CHECK(weak_apply(ops.A(j), phi0).max_abs() <= 1e-12);
    CHECK(weak_apply(ops.B(j).adjoint(), psi0).max_abs() <= 1e-12);
  }
  // Neither vacuum is annihilated by the other family's lowering operator.
  CHECK(weak_apply(ops.B(1).adjoint(), phi0).max_abs() > 0.1);
}

TEST_CASE("family grids match the hand-derived entries") {
  const cplx alpha{1.2, -0.3}, beta{0.5, 0.8};
  for (int k1 = 0; k1 <= 1; ++k1) {
    for (int k2 = 0; k2 <= 1; ++k2) {
      const auto phi = build_phi(k1, k2, alpha, 41);
      const auto psi = build_psi(k1, k2, beta, 41);
      double worst = 0.0;
      for (int n1 = 0; n1 <= 40; ++n1) {
        for (int n2 = 0; n2 <= 40; ++n2) {
          worst = std::max(worst, std::abs(phi(n1, n2) - phi_oracle(k1, k2, n1, n2, alpha)));
          worst = std::max(worst, std::abs(psi(n1, n2) - psi_oracle(k1, k2, n1, n2, beta)));
          const auto cf = family_closed_form(Family::phi, k1, k2, n1, n2, alpha);
          REQUIRE(cf);
          worst = std::max(worst, std::abs(*cf - phi_oracle(k1, k2, n1, n2, alpha)));
        }
      }
      CAPTURE(k1);
      CAPTURE(k2);
      CHECK(worst <= 1e-10);
    }
  }
  CHECK_FALSE(family_closed_form(Family::psi, 2, 0, 0, 0, beta).has_value());
}

TEST_CASE("families are weak eigenvectors of the number operators") {
  const cplx alpha{std::sqrt(2.0)};
  for (int k1 = 0; k1 <= 3; ++k1) {
    for (int k2 = 0; k2 <= 3; ++k2) {
      const auto phi = build_phi(k1, k2, alpha, 24, 2);
      const auto n1 = weak_apply(number_operator(1), phi);
      const auto n2 = weak_apply(number_operator(2), phi);
      CHECK(max_diff_trusted(n1, cplx(k1) * phi) <= 1e-9 * std::max(1.0, phi.max_abs_trusted()));
      CHECK(max_diff_trusted(n2, cplx(k2) * phi) <= 1e-9 * std::max(1.0, phi.max_abs_trusted()));

      const auto psi = build_psi(k1, k2, alpha, 24, 2);
      const auto n1d = weak_apply(number_operator(1).adjoint(), psi);
      CHECK(max_diff_trusted(n1d, cplx(k1) * psi) <= 1e-9 * std::max(1.0, psi.max_abs_trusted()));
    }
  }
}

TEST_CASE("Hamiltonian eigenvalues on the phi family") {
  const HamiltonianParams h(0.9, 0.4, 1.7);
  CHECK(std::abs(h.eigenvalue(2, 1) - cplx{0.9, 0.4 / (2 * 1.7) * 4}) <= 1e-15);
  const auto phi = build_phi(2, 1, std::sqrt(2.0), 20, 2);
  const auto hphi = weak_apply(hamiltonian_word(h), phi);
  CHECK(max_diff_trusted(hphi, h.eigenvalue(2, 1) * phi) <= 1e-9 * phi.max_abs_trusted());
  CHECK_THROWS_AS(HamiltonianParams(1.0, 0.1, 0.0), ArgumentError);
}

TEST_CASE("commutator residual on random grids") {
  std::mt19937_64 rng(13);
  for (int c = 0; c < 10; ++c) {
    const auto f = random_grid(rng, 12, 2);
    for (int j = 1; j <= 2; ++j) {
      for (int k = 1; k <= 2; ++k) CHECK(commutator_residual(j, k, f) <= 1e-12);
    }
  }
}
