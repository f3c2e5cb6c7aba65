#pragma once

// Coupled gain-loss oscillator pair
//   L = m x'y' + (gamma/2)(x y' - x' y) - k x y + A(m x'^2 - k x^2) + B(m y'^2 - k y^2)
// with parameter derivation for the normal-form variables (X1, Y1), fixed-step
// RK4 integration, and the conserved Hamiltonian.

#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "pblab/pb_operators.hpp"

namespace pblab {

struct SystemParams {
  double m = 1.0;
  double gamma = 0.0;
  double k = 1.0;
  double A = 0.0;
  double B = 0.0;
  double alpha_y = 1.0;
  double beta_y = -1.0;
};

/// (alpha_y, beta_y) = (1, -sign(A)); A = 0 gives (1, -1).
std::pair<double, double> default_gauge(double A);

/// Throws ArgumentError for non-physical inputs and ConstraintError when
/// AB >= 1/4 or alpha_y beta_y / A >= 0 (A != 0).
void validate(const SystemParams& p);

bool is_bateman(const SystemParams& p);

struct DerivedParams {
  double m_prime = 0.0, k_prime = 0.0;
  double alpha_x = 0.0, beta_x = 0.0;
  double alpha_y = 0.0, beta_y = 0.0;
  double m1 = 0.0, k1 = 0.0, gamma1 = 0.0;
  double omega1_sq = 0.0;
  /// alpha_x beta_y - beta_x alpha_y
  double jacobian = 0.0;
  bool bateman = false;
};

/// A = B = 0 uses the uncoupled variables X1 = y, Y1 = x (m1 = m, k1 = k,
/// gamma1 = -gamma). A = 0 with B != 0 and omega1^2 <= 0 throw DomainError.
DerivedParams derive_params(const SystemParams& p);

/// omega1 = sqrt(omega1^2), |gamma1|, m1 for the quantum Hamiltonian.
HamiltonianParams hamiltonian_params(const DerivedParams& d);

struct TrajectoryState {
  double t = 0.0;
  double x = 0.0, y = 0.0;
  double xdot = 0.0, ydot = 0.0;
};

enum class Formulation {
  /// m' x'' + gamma x' + k' x = -2 B gamma y', m' y'' - gamma y' + k' y = 2 A gamma x'
  decoupled,
  /// Euler-Lagrange equations before eliminating the cross accelerations.
  coupled,
};

/// Classic RK4 from s0 over [s0.t, s0.t + T]; the last step is shortened when
/// T is not a multiple of dt. Every `record_every`-th state is kept, plus the
/// final one.
std::vector<TrajectoryState> integrate(const SystemParams& p, const TrajectoryState& s0,
                                       double dt, double T,
                                       Formulation form = Formulation::decoupled,
                                       int record_every = 1);

double lagrangian(const SystemParams& p, const TrajectoryState& s);

/// p_x x' + p_y y' - L with p = dL/dq'.
double hamiltonian_value(const SystemParams& p, const TrajectoryState& s);

/// Bateman H0 in the (x1, x2) canonical form, for A = B = 0.
double bateman_hamiltonian(double m, double gamma, double k, const TrajectoryState& s);

/// Damped-oscillator solution m x'' + gamma x' + k x = 0, underdamped.
double damped_closed_form(double m, double gamma, double k, double x0, double v0, double t);

struct NormalCoordinates {
  double X1 = 0.0, Y1 = 0.0;
  double X1dot = 0.0, Y1dot = 0.0;
};

/// Inverts x = alpha_x X1 + beta_x Y1, y = alpha_y X1 + beta_y Y1.
NormalCoordinates change_of_variables(const DerivedParams& d, const TrajectoryState& s);
TrajectoryState from_normal(const DerivedParams& d, const NormalCoordinates& c, double t = 0.0);

/// m1 X1' Y1' + (|gamma1|/2)(Y1 X1' - Y1' X1) - k1 X1 Y1
double normal_lagrangian(const DerivedParams& d, const NormalCoordinates& c);

struct ConvergenceReport {
  double dt_coarse = 0.0;
  double drift_coarse = 0.0;  // max_t |H(t) - H(0)|
  double drift_fine = 0.0;    // same at dt / 2
  double observed_order = 0.0;
};

ConvergenceReport energy_convergence(const SystemParams& p, const TrajectoryState& s0, double dt,
                                     double T);

/// CSV with header t,x,y,xdot,ydot,H.
void write_trajectory_csv(std::ostream& out, const SystemParams& p,
                          const std::vector<TrajectoryState>& traj);

/// key = value lines; '#' starts a comment. Throws ArgumentError on junk.
std::map<std::string, std::string> parse_key_values(std::istream& in);

/// Reads m, gamma, k, A, B, alpha_y, beta_y from `kv` over `base`. When A is
/// given without a gauge, the gauge defaults to default_gauge(A).
SystemParams system_params_from(const std::map<std::string, std::string>& kv,
                                SystemParams base = {});

}  // namespace pblab
