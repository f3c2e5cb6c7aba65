#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "pblab/dist_coeffs.hpp"

using namespace pblab;

namespace {

// Trapezoid rule on a wide interval; spectrally accurate for integrands that
// decay like exp(-x^2).
double trapezoid_pairing(int n1, int n2, double sign, const OscillatorParams& params) {
  const double s = params.scale();
  const double half_width = 14.0 / s;
  const int steps = 5600;
  const double h = 2 * half_width / steps;
  double acc = 0.0;
  for (int i = 0; i <= steps; ++i) {
    const double x = -half_width + i * h;
    const double w = (i == 0 || i == steps) ? 0.5 : 1.0;
    acc += w * hermite_eval(n1, x, params) * hermite_eval(n2, sign * x, params);
  }
  return acc * h;
}

}  // namespace

TEST_CASE("delta(x1 - x2) and delta(x1 + x2) coefficient grids") {
  const cplx alpha{1.5, -0.5};
  const cplx beta{0.0, 2.0};
  const auto d = delta_diff_coeffs(alpha, 10, 3);
  const auto p = delta_sum_coeffs(beta, 10, 3);
  CHECK(d.dim() == 13);
  for (int i = 0; i < 13; ++i) {
    for (int j = 0; j < 13; ++j) {
      CHECK(d(i, j) == (i == j ? alpha : cplx{}));
      CHECK(p(i, j) == (i == j ? (i % 2 == 0 ? beta : -beta) : cplx{}));
    }
  }
}

TEST_CASE("grid entries match the pairing integrals") {
  for (const auto& params : {OscillatorParams::unit(), OscillatorParams(2.5, 0.8)}) {
    double worst = 0.0;
    for (int n1 = 0; n1 <= 30; n1 += 1) {
      for (int n2 = 0; n2 <= 30; n2 += 3) {
        const double diff = delta_pairing_quadrature(DeltaKind::difference, n1, n2, params);
        const double sum = delta_pairing_quadrature(DeltaKind::sum, n1, n2, params);
        const double grid_diff = n1 == n2 ? 1.0 : 0.0;
        const double grid_sum = n1 == n2 ? (n1 % 2 == 0 ? 1.0 : -1.0) : 0.0;
        worst = std::max({worst, std::abs(diff - grid_diff), std::abs(sum - grid_sum)});
      }
    }
    CHECK(worst <= 1e-8);
  }
}

TEST_CASE("pairing quadrature against an independent trapezoid rule") {
  const OscillatorParams params(1.3, 0.9);
  for (int n1 : {0, 4, 11, 30}) {
    for (int n2 : {0, 5, 11, 30}) {
      CAPTURE(n1);
      CAPTURE(n2);
      CHECK(std::abs(delta_pairing_quadrature(DeltaKind::difference, n1, n2, params) -
                     trapezoid_pairing(n1, n2, 1.0, params)) <= 1e-10);
      CHECK(std::abs(delta_pairing_quadrature(DeltaKind::sum, n1, n2, params) -
                     trapezoid_pairing(n1, n2, -1.0, params)) <= 1e-10);
    }
  }
}

TEST_CASE("extended-precision pairing agrees") {
  const auto params = OscillatorParams::unit();
  for (int n : {0, 7, 29}) {
    CHECK(delta_pairing_quadrature(DeltaKind::sum, n, n, params, Precision::extended) ==
          doctest::Approx(n % 2 == 0 ? 1.0 : -1.0).epsilon(1e-12));
  }
}

TEST_CASE("project_function recovers a product basis element") {
  const OscillatorParams params(1.0, 2.0);
  const auto f = [&](double x1, double x2) {
    return cplx{hermite_eval(2, x1, params) * hermite_eval(1, x2, params), 0.0};
  };
  const auto g = project_function(f, 6, params, 1);
  for (int i = 0; i < g.dim(); ++i) {
    for (int j = 0; j < g.dim(); ++j) {
      CHECK(std::abs(g(i, j) - ((i == 2 && j == 1) ? cplx{1.0} : cplx{})) <= 1e-12);
    }
  }
}

TEST_CASE("arithmetic, cropping and bounds") {
  const auto a = basis_element({1, 2}, 4, 2);
  const auto b = basis_element({3, 0}, 4, 2);
  const auto c = linear_combination(2.0, a, cplx{0, 1}, b);
  CHECK(c(1, 2) == cplx{2.0});
  CHECK(c(3, 0) == cplx{0.0, 1.0});
  CHECK((a + b)(3, 0) == cplx{1.0});
  CHECK((a - b)(3, 0) == cplx{-1.0});
  CHECK((cplx{3.0} * a)(1, 2) == cplx{3.0});
  CHECK(c.max_abs() == 2.0);

  const auto small = c.cropped(3, 0);
  CHECK(small.dim() == 3);
  CHECK(small(1, 2) == cplx{2.0});
  CHECK(small.value_or_zero(3, 0) == cplx{});
  CHECK_THROWS_AS(c.cropped(5, 0), ArgumentError);
  CHECK_THROWS_AS(linear_combination(1.0, a, 1.0, small), ArgumentError);
  CHECK_THROWS_AS(CoeffGrid2D(0, 1), ArgumentError);
  CHECK_THROWS_AS(CoeffGrid2D(2, -1), ArgumentError);
  CHECK_THROWS_AS(CoeffGrid2D(2, 0, std::vector<cplx>(3)), ArgumentError);
  CHECK_THROWS(a.at({7, 0}));
}

TEST_CASE("trusted maximum ignores the guard band") {
  auto g = CoeffGrid2D::from_function(3, 2, [](int i, int j) {
    return (i >= 3 || j >= 3) ? cplx{100.0} : cplx{0.5};
  });
  CHECK(g.max_abs() == 100.0);
  CHECK(g.max_abs_trusted() == 0.5);
}

TEST_CASE("json round trip and csv rows") {
  const auto g = CoeffGrid2D::from_function(3, 1, [](int i, int j) {
    return cplx{i + 0.25 * j, -1.0 * j};
  });
  const auto doc = to_json(g);
  CHECK(doc["n"] == 3);
  CHECK(doc["g"] == 1);
  const auto back = grid_from_json(doc);
  CHECK(back.has_same_shape(g));
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) CHECK(back(i, j) == g(i, j));
  }

  std::ostringstream csv;
  write_csv_trusted(csv, g);
  std::istringstream lines(csv.str());
  std::string line;
  int rows = 0;
  while (std::getline(lines, line)) ++rows;
  CHECK(rows == 1 + 9);  // header plus the trusted 3x3 square
}
