#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "pblab/gainloss_sim.hpp"

using namespace pblab;

namespace {

const SystemParams kReference{1.0, 0.2, 1.0, 0.1, 0.1, 1.0, -1.0};

SystemParams random_valid_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (;;) {
    SystemParams p;
    p.m = 0.5 + 2.0 * u(rng);
    p.k = 0.5 + 2.0 * u(rng);
    p.gamma = 0.8 * u(rng);
    p.A = (u(rng) < 0.5 ? -1.0 : 1.0) * (0.05 + 0.6 * u(rng));
    p.B = -0.6 + 1.2 * u(rng);
    p.alpha_y = 0.5 + u(rng);
    p.beta_y = (p.A > 0 ? -1.0 : 1.0) * (0.5 + u(rng));
    try {
      derive_params(p);
      return p;
    } catch (const std::domain_error&) {
    }
  }
}

}  // namespace

TEST_CASE("derived parameters for the reference system") {
  const auto d = derive_params(kReference);
  // 1 - 4AB = 0.96
  CHECK(d.m_prime == doctest::Approx(0.96).epsilon(1e-15));
  CHECK(d.k_prime == doctest::Approx(0.96).epsilon(1e-15));
  CHECK(d.m1 == doctest::Approx(9.6).epsilon(1e-14));
  CHECK(d.k1 == doctest::Approx(9.6).epsilon(1e-14));
  CHECK(d.gamma1 == doctest::Approx(-2.0 * std::sqrt(0.96)).epsilon(1e-14));
  CHECK(d.gamma1 == doctest::Approx(-1.9596).epsilon(1e-4));
  CHECK(d.omega1_sq == doctest::Approx(1.0 - 0.04 / 3.84).epsilon(1e-14));
  CHECK(d.alpha_x == doctest::Approx(-5.0 * (1.0 - std::sqrt(0.96))).epsilon(1e-14));
  CHECK(d.beta_x == doctest::Approx(5.0 * (1.0 + std::sqrt(0.96))).epsilon(1e-14));
  CHECK(d.jacobian == doctest::Approx(-10.0 * std::sqrt(0.96)).epsilon(1e-14));
  CHECK(d.jacobian == doctest::Approx(-9.798).epsilon(1e-4));
  CHECK_FALSE(d.bateman);
  // The normal-form oscillator has the same frequency.
  CHECK(d.k1 / d.m1 - d.gamma1 * d.gamma1 / (4 * d.m1 * d.m1) ==
        doctest::Approx(d.omega1_sq).epsilon(1e-14));
  const auto h = hamiltonian_params(d);
  CHECK(h.omega1() == doctest::Approx(std::sqrt(d.omega1_sq)));
  CHECK(h.gamma1_abs() == doctest::Approx(-d.gamma1));
}

TEST_CASE("gamma1 is negative under the sign constraint") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 200; ++i) {
    const auto p = random_valid_params(rng);
    const auto d = derive_params(p);
    CHECK(d.gamma1 <= 0.0);
    CHECK(d.jacobian == doctest::Approx(p.alpha_y * p.beta_y / p.A *
                                        std::sqrt(1 - 4 * p.A * p.B)));
  }
}

TEST_CASE("Bateman branch") {
  const SystemParams p{2.0, 0.3, 1.5, 0.0, 0.0, 1.0, -1.0};
  CHECK(is_bateman(p));
  const auto d = derive_params(p);
  CHECK(d.bateman);
  CHECK(d.m1 == 2.0);
  CHECK(d.k1 == 1.5);
  CHECK(d.gamma1 == -0.3);
  CHECK(d.jacobian == -1.0);
}

TEST_CASE("constraint violations") {
  SystemParams p = kReference;
  p.A = 0.5;
  p.B = 0.5;
  CHECK_THROWS_AS(derive_params(p), ConstraintError);
  p = kReference;
  p.beta_y = 1.0;  // alpha_y beta_y / A > 0
  CHECK_THROWS_AS(derive_params(p), ConstraintError);
  p = kReference;
  p.A = 0.0;  // B != 0 without A
  CHECK_THROWS_AS(derive_params(p), DomainError);
  CHECK_THROWS_AS(integrate(p, {}, 0.01, 1.0), DomainError);
  p = kReference;
  p.gamma = 3.0;  // omega1^2 < 0
  CHECK_THROWS_AS(derive_params(p), DomainError);
  p = kReference;
  p.m = 0.0;
  CHECK_THROWS_AS(derive_params(p), ArgumentError);
}

TEST_CASE("default gauge satisfies the sign condition") {
  for (double A : {-0.3, 0.2}) {
    const auto [ay, by] = default_gauge(A);
    CHECK(ay * by / A < 0.0);
  }
  CHECK(default_gauge(0.0) == std::pair{1.0, -1.0});
}

TEST_CASE("Lagrangian equivalence after the change of variables") {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 200; ++i) {
    const auto p = random_valid_params(rng);
    const auto d = derive_params(p);
    const TrajectoryState s{0.0, u(rng), u(rng), u(rng), u(rng)};
    const auto c = change_of_variables(d, s);
    const double l0 = lagrangian(p, s);
    CHECK(std::abs(l0 - normal_lagrangian(d, c)) <= 1e-9 * std::max(1.0, std::abs(l0)));
    const auto back = from_normal(d, c);
    CHECK(std::abs(back.x - s.x) <= 1e-12);
    CHECK(std::abs(back.ydot - s.ydot) <= 1e-12);
  }
}

TEST_CASE("Hamiltonian basics") {
  CHECK(hamiltonian_value(kReference, {}) == 0.0);
  // A = B = 0 reduces to the Bateman form in (x1, x2).
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const SystemParams p{1.3, 0.4, 0.9, 0.0, 0.0, 1.0, -1.0};
  for (int i = 0; i < 20; ++i) {
    const TrajectoryState s{0.0, u(rng), u(rng), u(rng), u(rng)};
    CHECK(hamiltonian_value(p, s) == doctest::Approx(bateman_hamiltonian(1.3, 0.4, 0.9, s)));
  }
}

TEST_CASE("energy is conserved and the drift has RK4 order") {
  std::mt19937_64 rng(34);
  const auto p = random_valid_params(rng);
  const TrajectoryState s0{0.0, 0.7, -0.2, 0.1, 0.3};
  const auto traj = integrate(p, s0, 1e-4, 5.0, Formulation::decoupled, 100);
  CHECK(traj.back().t == doctest::Approx(5.0).epsilon(1e-15));
  const double h0 = hamiltonian_value(p, s0);
  double worst = 0.0;
  for (const auto& s : traj) worst = std::max(worst, std::abs(hamiltonian_value(p, s) - h0));
  CHECK(worst / std::max(1.0, std::abs(h0)) <= 1e-8);

  const auto conv = energy_convergence(p, s0, 0.1, 10.0);
  CHECK(conv.drift_fine < conv.drift_coarse);
  CHECK(conv.observed_order >= 3.5);
}

TEST_CASE("the two formulations agree") {
  std::mt19937_64 rng(35);
  for (int i = 0; i < 5; ++i) {
    const auto p = random_valid_params(rng);
    const TrajectoryState s0{0.0, 1.0, 0.5, -0.3, 0.2};
    const auto a = integrate(p, s0, 1e-3, 5.0, Formulation::decoupled, 50);
    const auto b = integrate(p, s0, 1e-3, 5.0, Formulation::coupled, 50);
    REQUIRE(a.size() == b.size());
    double worst = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
      worst = std::max({worst, std::abs(a[j].x - b[j].x), std::abs(a[j].y - b[j].y)});
    }
    CHECK(worst <= 1e-8);
  }
}

TEST_CASE("Bateman limit: damped and amplified halves") {
  const double m = 1.2, gamma = 0.3, k = 2.0;
  const SystemParams p{m, gamma, k, 0.0, 0.0, 1.0, -1.0};
  const double w = std::sqrt(k / m - gamma * gamma / (4 * m * m));
  const double rate = gamma / (2 * m);

  const auto damped = integrate(p, {0.0, 1.0, 0.0, 0.4, 0.0}, 1e-3, 10.0, Formulation::decoupled, 10);
  double worst = 0.0;
  for (const auto& s : damped) {
    const double x = std::exp(-rate * s.t) * (std::cos(w * s.t) + (0.4 + rate) / w * std::sin(w * s.t));
    worst = std::max(worst, std::abs(s.x - x));
    CHECK(s.y == 0.0);
    CHECK(std::abs(s.x - damped_closed_form(m, gamma, k, 1.0, 0.4, s.t)) <= 1e-6);
  }
  CHECK(worst <= 1e-6);

  const auto grown = integrate(p, {0.0, 0.0, 1.0, 0.0, 0.0}, 1e-3, 10.0, Formulation::decoupled, 10);
  for (const auto& s : grown) {
    const double y = std::exp(rate * s.t) * (std::cos(w * s.t) - rate / w * std::sin(w * s.t));
    CHECK(std::abs(s.y - y) <= 1e-6 * std::exp(rate * s.t));
    CHECK(s.x == 0.0);
  }
}

TEST_CASE("normal coordinates obey their Euler-Lagrange equations") {
  // m1 X'' - |g1| X' + k1 X = 0 and m1 Y'' + |g1| Y' + k1 Y = 0, with the
  // second derivatives taken by central differences of the velocities.
  const auto d = derive_params(kReference);
  const double h = 1e-3;
  const auto traj = integrate(kReference, {0.0, 0.5, -0.4, 0.2, 0.1}, h, 3.0);
  const double g = std::abs(d.gamma1);
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < traj.size(); ++i) {
    const auto prev = change_of_variables(d, traj[i - 1]);
    const auto cur = change_of_variables(d, traj[i]);
    const auto next = change_of_variables(d, traj[i + 1]);
    const double xdd = (next.X1dot - prev.X1dot) / (2 * h);
    const double ydd = (next.Y1dot - prev.Y1dot) / (2 * h);
    worst = std::max(worst, std::abs(d.m1 * xdd - g * cur.X1dot + d.k1 * cur.X1));
    worst = std::max(worst, std::abs(d.m1 * ydd + g * cur.Y1dot + d.k1 * cur.Y1));
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("integration arguments") {
  CHECK_THROWS_AS(integrate(kReference, {}, 0.0, 1.0), ArgumentError);
  CHECK_THROWS_AS(integrate(kReference, {}, 0.5, 0.1), ArgumentError);
  const auto traj = integrate(kReference, {}, 0.3, 1.0);
  CHECK(traj.size() == 5);  // 0, 0.3, 0.6, 0.9, 1.0
  CHECK(traj.back().t == 1.0);
}

TEST_CASE("trajectory csv") {
  const auto traj = integrate(kReference, {0.0, 1.0, 0.0, 0.0, 0.0}, 0.5, 1.0);
  std::ostringstream out;
  write_trajectory_csv(out, kReference, traj);
  const std::string text = out.str();
  CHECK(text.rfind("t,x,y,xdot,ydot,H\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 4);
}

TEST_CASE("key-value parameters") {
  std::istringstream in("# comment\nm = 2\ngamma=0.1\nA = -0.2  # trailing\n\nk = 3\n");
  const auto kv = parse_key_values(in);
  CHECK(kv.at("m") == "2");
  const auto p = system_params_from(kv);
  CHECK(p.m == 2.0);
  CHECK(p.gamma == 0.1);
  CHECK(p.k == 3.0);
  CHECK(p.A == -0.2);
  CHECK(p.alpha_y * p.beta_y / p.A < 0.0);

  std::istringstream junk("m 2\n");
  CHECK_THROWS_AS(parse_key_values(junk), ArgumentError);
  std::istringstream bad_value("m = two\n");
  CHECK_THROWS_AS(system_params_from(parse_key_values(bad_value)), ArgumentError);
}
