#include "pblab/hermite_basis.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cstdlib>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "pblab/simd/kernels.hpp"

namespace pblab {

Precision precision_from_env() {
  const char* env = std::getenv("PBLAB_PRECISION");
  if (env == nullptr) return Precision::standard;
  const std::string v(env);
  if (v == "extended") return Precision::extended;
  if (v == "double" || v.empty()) return Precision::standard;
  throw ArgumentError("PBLAB_PRECISION must be 'double' or 'extended', got '" + v + "'");
}

double hermite_eval(int n, double x, const OscillatorParams& params) {
  if (n < 0) throw ArgumentError("hermite_eval: negative index");
  if (!std::isfinite(x)) throw DomainError("hermite_eval: non-finite argument");
  const double s = params.scale();
  return std::sqrt(s) * hermite_function_unit<double>(n, s * x);
}

long double hermite_eval_extended(int n, long double x, const OscillatorParams& params) {
  if (n < 0) throw ArgumentError("hermite_eval: negative index");
  if (!std::isfinite(x)) throw DomainError("hermite_eval: non-finite argument");
  const long double s = std::sqrt(static_cast<long double>(params.mass()) * params.omega());
  return std::sqrt(s) * hermite_function_unit<long double>(n, s * x);
}

std::vector<double> hermite_table(const std::vector<double>& nodes, int nmax) {
  std::vector<double> out(nodes.size() * static_cast<std::size_t>(nmax + 1));
  simd::hermite_table(nodes, nmax, out);
  return out;
}

namespace {

// Golub-Welsch eigenvalues in double, polished by Newton on h_order in Real.
template <std::floating_point Real>
GaussHermiteRule<Real> build_rule(int order) {
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(order);
  Eigen::VectorXd sub(std::max(order - 1, 0));
  for (int k = 1; k < order; ++k) sub(k - 1) = std::sqrt(0.5 * k);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw AccuracyError("gauss_hermite_rule: tridiagonal eigensolver failed");
  }

  GaussHermiteRule<Real> rule;
  rule.nodes.resize(order);
  rule.full_weights.resize(order);
  std::vector<Real> h(order + 1);
  auto fill = [&](Real u) {
    h[0] = Real(1) / std::sqrt(std::sqrt(std::numbers::pi_v<Real>)) * std::exp(-u * u / 2);
    if (order >= 1) h[1] = std::sqrt(Real(2)) * u * h[0];
    for (int k = 1; k < order; ++k) {
      h[k + 1] = std::sqrt(Real(2) / (k + 1)) * u * h[k] - std::sqrt(Real(k) / (k + 1)) * h[k - 1];
    }
  };
  for (int i = 0; i < order; ++i) {
    Real u = static_cast<Real>(solver.eigenvalues()(i));
    for (int it = 0; it < 4; ++it) {
      fill(u);
      const Real deriv = std::sqrt(Real(2) * order) * h[order - 1] - u * h[order];
      if (deriv == Real(0)) break;
      const Real step = h[order] / deriv;
      u -= step;
      if (std::abs(step) <= std::numeric_limits<Real>::epsilon() * (1 + std::abs(u))) break;
    }
    fill(u);
    Real sum = 0;
    for (int k = 0; k < order; ++k) sum += h[k] * h[k];
    rule.nodes[i] = u;
    rule.full_weights[i] = Real(1) / sum;
  }
  return rule;
}

template <std::floating_point Real>
const GaussHermiteRule<Real>& cached_rule(int order) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<GaussHermiteRule<Real>>> cache;
  if (order < 1 || order > kMaxQuadratureOrder) {
    throw AccuracyError("gauss_hermite_rule: order " + std::to_string(order) + " outside [1, " +
                        std::to_string(kMaxQuadratureOrder) + "]");
  }
  std::lock_guard lock(mutex);
  auto& slot = cache[order];
  if (!slot) slot = std::make_unique<GaussHermiteRule<Real>>(build_rule<Real>(order));
  return *slot;
}

}  // namespace

const GaussHermiteRule<double>& gauss_hermite_rule(int order) { return cached_rule<double>(order); }

const GaussHermiteRule<long double>& gauss_hermite_rule_extended(int order) {
  return cached_rule<long double>(order);
}

void check_quadrature_order(int n, int order) {
  if (n < 0) throw ArgumentError("overlap_quadrature: negative index");
  if (order < n + kQuadratureMargin) {
    throw AccuracyError("overlap_quadrature: order " + std::to_string(order) +
                        " too small for index " + std::to_string(n) + " (need >= " +
                        std::to_string(n + kQuadratureMargin) + ")");
  }
  if (order > kMaxQuadratureOrder) {
    throw AccuracyError("overlap_quadrature: order " + std::to_string(order) + " exceeds " +
                        std::to_string(kMaxQuadratureOrder));
  }
}

// int e_n(x) f(x) dx with x = u/s:  s^{-1/2} sum_i W_i h_n(u_i) f(u_i/s).
double overlap_quadrature(const std::function<double(double)>& f, int n,
                          const OscillatorParams& params, int order) {
  check_quadrature_order(n, order);
  const auto& rule = gauss_hermite_rule(order);
  const auto table = hermite_table(rule.nodes, n);
  const double* hn = table.data() + static_cast<std::size_t>(n) * rule.nodes.size();
  const double s = params.scale();
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    if (hn[i] == 0.0) continue;
    acc += rule.full_weights[i] * hn[i] * f(rule.nodes[i] / s);
  }
  return acc / std::sqrt(s);
}

long double overlap_quadrature_extended(const std::function<long double(long double)>& f, int n,
                                        const OscillatorParams& params, int order) {
  check_quadrature_order(n, order);
  const auto& rule = gauss_hermite_rule_extended(order);
  const long double s = std::sqrt(static_cast<long double>(params.mass()) * params.omega());
  long double acc = 0.0L;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const long double hn = hermite_function_unit<long double>(n, rule.nodes[i]);
    if (hn == 0.0L) continue;
    acc += rule.full_weights[i] * hn * f(rule.nodes[i] / s);
  }
  return acc / std::sqrt(s);
}

std::optional<LadderStep> ladder_on_basis(Ladder gen, int n) {
  if (n < 0) throw ArgumentError("ladder_on_basis: negative index");
  if (gen == Ladder::lower) {
    if (n == 0) return std::nullopt;
    return LadderStep{std::sqrt(static_cast<double>(n)), n - 1, static_cast<std::uint64_t>(n)};
  }
  return LadderStep{std::sqrt(static_cast<double>(n + 1)), n + 1,
                    static_cast<std::uint64_t>(n + 1)};
}

}  // namespace pblab
