#include "pblab/gainloss_sim.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "pblab/errors.hpp"

namespace pblab {

namespace {

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

std::string fmt(const char* pattern, double a, double b = 0.0) {
  char buf[200];
  std::snprintf(buf, sizeof buf, pattern, a, b);
  return buf;
}

}  // namespace

std::pair<double, double> default_gauge(double A) { return {1.0, A < 0.0 ? 1.0 : -1.0}; }

void validate(const SystemParams& p) {
  if (!finite_positive(p.m)) throw ArgumentError("mass must be positive and finite");
  if (!finite_positive(p.k)) throw ArgumentError("spring constant must be positive and finite");
  if (!std::isfinite(p.gamma) || p.gamma < 0.0) {
    throw ArgumentError("gamma must be finite and >= 0");
  }
  if (!std::isfinite(p.A) || !std::isfinite(p.B)) throw ArgumentError("A and B must be finite");
  if (p.A * p.B >= 0.25) {
    throw ConstraintError(fmt("AB = %.6g must be < 1/4", p.A * p.B));
  }
  if (p.A != 0.0) {
    if (!std::isfinite(p.alpha_y) || !std::isfinite(p.beta_y) || p.alpha_y == 0.0 ||
        p.beta_y == 0.0) {
      throw ConstraintError("alpha_y and beta_y must be finite and nonzero");
    }
    if (!(p.alpha_y * p.beta_y / p.A < 0.0)) {
      throw ConstraintError(fmt("alpha_y beta_y / A = %.6g must be negative",
                                p.alpha_y * p.beta_y / p.A));
    }
  }
}

bool is_bateman(const SystemParams& p) { return p.A == 0.0 && p.B == 0.0; }

DerivedParams derive_params(const SystemParams& p) {
  validate(p);
  DerivedParams d;
  const double c = 1.0 - 4.0 * p.A * p.B;
  const double root = std::sqrt(c);
  d.m_prime = p.m * c;
  d.k_prime = p.k * c;
  d.omega1_sq = p.k / p.m - p.gamma * p.gamma / (4.0 * p.m * p.m * c);

  if (is_bateman(p)) {
    d.bateman = true;
    d.alpha_x = 0.0;
    d.beta_x = 1.0;
    d.alpha_y = 1.0;
    d.beta_y = 0.0;
    d.m1 = p.m;
    d.k1 = p.k;
    d.gamma1 = -p.gamma;
  } else {
    if (p.A == 0.0) {
      throw DomainError(
          "A = 0 with B != 0: the normal-form change of variables divides by A; only the "
          "uncoupled case A = B = 0 is handled without it");
    }
    d.alpha_y = p.alpha_y;
    d.beta_y = p.beta_y;
    d.alpha_x = -(p.alpha_y / (2.0 * p.A)) * (1.0 - root);
    d.beta_x = -(p.beta_y / (2.0 * p.A)) * (1.0 + root);
    const double g = p.alpha_y * p.beta_y / p.A;
    d.m1 = p.m * g * (4.0 * p.A * p.B - 1.0);
    d.k1 = p.k * g * (4.0 * p.A * p.B - 1.0);
    d.gamma1 = p.gamma * g * root;
  }
  d.jacobian = d.alpha_x * d.beta_y - d.beta_x * d.alpha_y;
  if (d.jacobian == 0.0 || !std::isfinite(d.jacobian)) {
    throw ConstraintError("change of variables is singular");
  }
  if (!(d.omega1_sq > 0.0)) {
    throw DomainError(fmt("omega1^2 = %.6g <= 0 is outside the implemented regime",
                          d.omega1_sq));
  }
  return d;
}

HamiltonianParams hamiltonian_params(const DerivedParams& d) {
  return HamiltonianParams(std::sqrt(d.omega1_sq), std::abs(d.gamma1), d.m1);
}

// ---------------------------------------------------------------------------

namespace {

using Vec4 = std::array<double, 4>;  // x, y, xdot, ydot

struct Rhs {
  const SystemParams& p;
  Formulation form;

  Vec4 operator()(const Vec4& s) const {
    const double x = s[0], y = s[1], vx = s[2], vy = s[3];
    const double c = 1.0 - 4.0 * p.A * p.B;
    double ax = 0.0;
    double ay = 0.0;
    if (form == Formulation::decoupled) {
      const double mp = p.m * c;
      const double kp = p.k * c;
      ax = (-p.gamma * vx - kp * x - 2.0 * p.B * p.gamma * vy) / mp;
      ay = (p.gamma * vy - kp * y + 2.0 * p.A * p.gamma * vx) / mp;
    } else {
      // [m, 2Bm; 2Am, m] [ax; ay] = [r1; r2]
      const double r1 = -p.gamma * vx - p.k * x - 2.0 * p.B * p.k * y;
      const double r2 = p.gamma * vy - p.k * y - 2.0 * p.A * p.k * x;
      const double det = p.m * p.m * c;
      ax = (p.m * r1 - 2.0 * p.B * p.m * r2) / det;
      ay = (p.m * r2 - 2.0 * p.A * p.m * r1) / det;
    }
    return {vx, vy, ax, ay};
  }
};

Vec4 axpy(const Vec4& a, double h, const Vec4& b) {
  return {a[0] + h * b[0], a[1] + h * b[1], a[2] + h * b[2], a[3] + h * b[3]};
}

Vec4 rk4_step(const Rhs& f, const Vec4& s, double h) {
  const Vec4 k1 = f(s);
  const Vec4 k2 = f(axpy(s, h / 2, k1));
  const Vec4 k3 = f(axpy(s, h / 2, k2));
  const Vec4 k4 = f(axpy(s, h, k3));
  Vec4 out;
  for (int i = 0; i < 4; ++i) out[i] = s[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

}  // namespace

std::vector<TrajectoryState> integrate(const SystemParams& p, const TrajectoryState& s0, double dt,
                                       double T, Formulation form, int record_every) {
  derive_params(p);
  if (!finite_positive(dt)) throw ArgumentError("dt must be positive");
  if (!std::isfinite(T) || T < dt) throw ArgumentError("T must be >= dt");
  if (record_every < 1) throw ArgumentError("record_every must be >= 1");
  for (double v : {s0.t, s0.x, s0.y, s0.xdot, s0.ydot}) {
    if (!std::isfinite(v)) throw ArgumentError("initial state must be finite");
  }

  auto steps = static_cast<long long>(std::floor(T / dt));
  double last = T - static_cast<double>(steps) * dt;
  if (last <= 1e-12 * T) last = 0.0;
  const long long total = steps + (last > 0.0 ? 1 : 0);

  const Rhs f{p, form};
  std::vector<TrajectoryState> out;
  out.reserve(static_cast<std::size_t>(total / record_every + 2));
  out.push_back(s0);
  Vec4 s{s0.x, s0.y, s0.xdot, s0.ydot};
  for (long long i = 1; i <= total; ++i) {
    const double h = (i <= steps) ? dt : last;
    s = rk4_step(f, s, h);
    for (double v : s) {
      if (!std::isfinite(v)) {
        throw AccuracyError("integrate: non-finite state at step " + std::to_string(i));
      }
    }
    if (i % record_every == 0 || i == total) {
      const double t = (i <= steps) ? s0.t + static_cast<double>(i) * dt : s0.t + T;
      out.push_back({t, s[0], s[1], s[2], s[3]});
    }
  }
  return out;
}

double lagrangian(const SystemParams& p, const TrajectoryState& s) {
  return p.m * s.xdot * s.ydot + 0.5 * p.gamma * (s.x * s.ydot - s.xdot * s.y) - p.k * s.x * s.y +
         p.A * (p.m * s.xdot * s.xdot - p.k * s.x * s.x) +
         p.B * (p.m * s.ydot * s.ydot - p.k * s.y * s.y);
}

double hamiltonian_value(const SystemParams& p, const TrajectoryState& s) {
  const double px = p.m * s.ydot - 0.5 * p.gamma * s.y + 2.0 * p.A * p.m * s.xdot;
  const double py = p.m * s.xdot + 0.5 * p.gamma * s.x + 2.0 * p.B * p.m * s.ydot;
  return px * s.xdot + py * s.ydot - lagrangian(p, s);
}

double bateman_hamiltonian(double m, double gamma, double k, const TrajectoryState& s) {
  const double r = 1.0 / std::sqrt(2.0);
  const double x1 = r * (s.x + s.y), x2 = r * (s.x - s.y);
  const double v1 = r * (s.xdot + s.ydot), v2 = r * (s.xdot - s.ydot);
  const double p1 = m * v1 + 0.5 * gamma * x2;
  const double p2 = m * v2 - 0.5 * gamma * x1;
  const double w2 = k / m - gamma * gamma / (4.0 * m * m);
  return (p1 * p1 / (2.0 * m) + 0.5 * m * w2 * x1 * x1) -
         (p2 * p2 / (2.0 * m) + 0.5 * m * w2 * x2 * x2) - gamma / (2.0 * m) * (p1 * x2 + p2 * x1);
}

double damped_closed_form(double m, double gamma, double k, double x0, double v0, double t) {
  const double w2 = k / m - gamma * gamma / (4.0 * m * m);
  if (!(w2 > 0.0)) throw DomainError("damped_closed_form: not underdamped");
  const double w = std::sqrt(w2);
  const double decay = gamma / (2.0 * m);
  const double c2 = (v0 + decay * x0) / w;
  return std::exp(-decay * t) * (x0 * std::cos(w * t) + c2 * std::sin(w * t));
}

NormalCoordinates change_of_variables(const DerivedParams& d, const TrajectoryState& s) {
  if (d.jacobian == 0.0) throw ConstraintError("change_of_variables: singular map");
  const double inv = 1.0 / d.jacobian;
  NormalCoordinates c;
  c.X1 = inv * (d.beta_y * s.x - d.beta_x * s.y);
  c.Y1 = inv * (-d.alpha_y * s.x + d.alpha_x * s.y);
  c.X1dot = inv * (d.beta_y * s.xdot - d.beta_x * s.ydot);
  c.Y1dot = inv * (-d.alpha_y * s.xdot + d.alpha_x * s.ydot);
  return c;
}

TrajectoryState from_normal(const DerivedParams& d, const NormalCoordinates& c, double t) {
  return {t, d.alpha_x * c.X1 + d.beta_x * c.Y1, d.alpha_y * c.X1 + d.beta_y * c.Y1,
          d.alpha_x * c.X1dot + d.beta_x * c.Y1dot, d.alpha_y * c.X1dot + d.beta_y * c.Y1dot};
}

double normal_lagrangian(const DerivedParams& d, const NormalCoordinates& c) {
  return d.m1 * c.X1dot * c.Y1dot + 0.5 * std::abs(d.gamma1) * (c.Y1 * c.X1dot - c.Y1dot * c.X1) -
         d.k1 * c.X1 * c.Y1;
}

ConvergenceReport energy_convergence(const SystemParams& p, const TrajectoryState& s0, double dt,
                                     double T) {
  auto drift = [&](double h) {
    const auto traj = integrate(p, s0, h, T);
    const double h0 = hamiltonian_value(p, traj.front());
    double worst = 0.0;
    for (const auto& s : traj) worst = std::max(worst, std::abs(hamiltonian_value(p, s) - h0));
    return worst;
  };
  ConvergenceReport r;
  r.dt_coarse = dt;
  r.drift_coarse = drift(dt);
  r.drift_fine = drift(dt / 2);
  r.observed_order = r.drift_fine > 0.0 ? std::log2(r.drift_coarse / r.drift_fine) : 0.0;
  return r;
}

void write_trajectory_csv(std::ostream& out, const SystemParams& p,
                          const std::vector<TrajectoryState>& traj) {
  out << "t,x,y,xdot,ydot,H\n";
  char buf[256];
  // Adding +0.0 turns -0 into 0 so equal states print identically.
  for (const auto& s : traj) {
    std::snprintf(buf, sizeof buf, "%.15g,%.15g,%.15g,%.15g,%.15g,%.15g\n", s.t + 0.0, s.x + 0.0,
                  s.y + 0.0, s.xdot + 0.0, s.ydot + 0.0, hamiltonian_value(p, s) + 0.0);
    out << buf;
  }
}

std::map<std::string, std::string> parse_key_values(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string{};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ArgumentError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ArgumentError("config line " + std::to_string(lineno) + ": empty key");
    kv[key] = value;
  }
  return kv;
}

SystemParams system_params_from(const std::map<std::string, std::string>& kv, SystemParams base) {
  auto number = [&](const std::string& key, double& dst) {
    const auto it = kv.find(key);
    if (it == kv.end()) return false;
    std::istringstream ss(it->second);
    double v = 0.0;
    if (!(ss >> v) || !(ss >> std::ws).eof()) {
      throw ArgumentError("config key '" + key + "': not a number: " + it->second);
    }
    dst = v;
    return true;
  };
  number("m", base.m);
  number("gamma", base.gamma);
  number("k", base.k);
  const bool has_a = number("A", base.A);
  number("B", base.B);
  const bool has_ay = number("alpha_y", base.alpha_y);
  const bool has_by = number("beta_y", base.beta_y);
  if (has_a && !has_ay && !has_by) std::tie(base.alpha_y, base.beta_y) = default_gauge(base.A);
  return base;
}

}  // namespace pblab
