#include <array>
#include <cmath>
#include <functional>
#include <ostream>
#include <random>
#include <string_view>

#include "pblab/errors.hpp"
#include "pblab/fe_product.hpp"
#include "pblab/gainloss_sim.hpp"
#include "report.hpp"

namespace pblab::cli {

namespace {

// Explicit conversion so reports do not depend on the standard library's
// distribution algorithms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }
  int integer(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(gen_() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  cplx complex() { return {uniform(-1.0, 1.0), uniform(-1.0, 1.0)}; }

 private:
  std::mt19937_64 gen_;
};

CoeffGrid2D random_grid(Rng& rng, int trusted, int guard) {
  return CoeffGrid2D::from_function(trusted, guard, [&](int, int) { return rng.complex(); });
}

struct SuiteResult {
  std::string name;
  double tolerance = 0.0;
  int cases = 0;
  int failures = 0;
  double max_residual = 0.0;
  Json counterexamples = Json::array();

  void record(double residual, const std::function<Json()>& describe) {
    ++cases;
    const bool bad = !(residual <= tolerance);
    if (std::isfinite(residual)) max_residual = std::max(max_residual, residual);
    if (bad) {
      ++failures;
      if (counterexamples.size() < 5) {
        Json j = describe();
        j["residual"] = num(residual);
        counterexamples.push_back(std::move(j));
      }
    }
  }
};

constexpr int kPropTrusted = 12;

SuiteResult commutator_suite(Rng& rng, int cases, const Tolerances& tol) {
  SuiteResult r{"commutators", tol.commutator};
  for (int c = 0; c < cases; ++c) {
    const auto f = random_grid(rng, kPropTrusted, 4);
    for (int j = 1; j <= 2; ++j) {
      for (int k = 1; k <= 2; ++k) {
        r.record(commutator_residual(j, k, f), [&] { return Json{{"case", c}, {"j", j}, {"k", k}}; });
      }
    }
  }
  return r;
}

SuiteResult linearity_suite(Rng& rng, int cases, const Tolerances& tol) {
  SuiteResult r{"linearity", tol.exact};
  FeProductOptions finite;
  finite.finite_support = true;
  for (int c = 0; c < cases; ++c) {
    const auto f = random_grid(rng, kPropTrusted, 0);
    const auto g = random_grid(rng, kPropTrusted, 0);
    const auto l = random_grid(rng, kPropTrusted, 0);
    const cplx a = rng.complex();
    const cplx b = rng.complex();
    const auto rep = check_linearity(f, g, l, a, b, finite);
    r.record(rep.residual, [&] { return Json{{"case", c}, {"a", cnum(a)}, {"b", cnum(b)}}; });
  }
  return r;
}

SuiteResult conjugate_symmetry_suite(Rng& rng, int cases, const Tolerances& tol,
                                     const RunConfig& config) {
  SuiteResult r{"conjugate_symmetry", tol.exact};
  FeProductOptions finite;
  finite.finite_support = true;
  for (int c = 0; c < cases; ++c) {
    const auto f = random_grid(rng, kPropTrusted, 0);
    const auto g = random_grid(rng, kPropTrusted, 0);
    r.record(check_conjugate_symmetry(f, g, finite).residual,
             [&] { return Json{{"case", c}, {"kind", "finite"}}; });
    // A family pair, regularized on both sides.
    const FamilyIndex k{rng.integer(0, 1), rng.integer(0, 1)};
    const FamilyIndex l{rng.integer(0, 1), rng.integer(0, 1)};
    const auto psi = build_psi(k.k1, k.k2, config.beta, config.n);
    const auto phi = build_phi(l.k1, l.k2, config.alpha, config.n);
    double residual = NAN;
    try {
      residual = check_conjugate_symmetry(psi, phi).residual;
    } catch (const AccuracyError&) {
    }
    r.record(residual, [&] {
      return Json{{"case", c}, {"kind", "family"}, {"k", {k.k1, k.k2}}, {"l", {l.k1, l.k2}}};
    });
  }
  return r;
}

// The constraint predicate, written out independently of validate().
bool admissible(const SystemParams& p) {
  if (!(p.A * p.B < 0.25)) return false;
  if (p.A == 0.0) return p.B == 0.0 && p.k / p.m - p.gamma * p.gamma / (4 * p.m * p.m) > 0.0;
  if (!(p.alpha_y * p.beta_y / p.A < 0.0)) return false;
  return p.k / p.m - p.gamma * p.gamma / (4 * p.m * p.m * (1 - 4 * p.A * p.B)) > 0.0;
}

SuiteResult constraint_suite(Rng& rng, int cases) {
  SuiteResult r{"constraints", 0.0};
  for (int c = 0; c < cases; ++c) {
    SystemParams p;
    p.m = rng.uniform(0.2, 3.0);
    p.k = rng.uniform(0.2, 3.0);
    p.gamma = rng.uniform(0.0, 2.0);
    // A quarter of the draws land on the uncoupled axes.
    const int axis = rng.integer(0, 7);
    p.A = axis == 0 ? 0.0 : rng.uniform(-1.5, 1.5);
    p.B = axis <= 1 ? 0.0 : rng.uniform(-1.5, 1.5);
    p.alpha_y = rng.uniform(-2.0, 2.0);
    p.beta_y = rng.uniform(-2.0, 2.0);
    bool accepted = true;
    try {
      derive_params(p);
    } catch (const std::domain_error&) {
      accepted = false;
    }
    const bool expected = admissible(p);
    r.record(accepted == expected ? 0.0 : 1.0, [&] {
      return Json{{"case", c},          {"m", num(p.m)},           {"gamma", num(p.gamma)},
                  {"k", num(p.k)},      {"A", num(p.A)},           {"B", num(p.B)},
                  {"alpha_y", num(p.alpha_y)}, {"beta_y", num(p.beta_y)},
                  {"accepted", accepted}, {"expected", expected}};
    });
  }
  return r;
}

SuiteResult eigen_transfer_suite(Rng& rng, int cases, const Tolerances& tol,
                                 const RunConfig& config) {
  SuiteResult r{"eigen_transfer", tol.abel};
  for (int c = 0; c < cases; ++c) {
    const FamilyIndex k{rng.integer(0, 2), rng.integer(0, 2)};
    const FamilyIndex l{rng.integer(0, 2), rng.integer(0, 2)};
    const int j = rng.integer(1, 2);
    double residual = NAN;
    try {
      residual = check_eigen_transfer(k, l, j, config.alpha, config.beta, config.n).residual;
    } catch (const AccuracyError&) {
    }
    r.record(residual, [&] {
      return Json{{"case", c}, {"k", {k.k1, k.k2}}, {"l", {l.k1, l.k2}}, {"j", j}};
    });
  }
  return r;
}

}  // namespace

int run_props(const RunConfig& config, std::ostream& out) {
  static const char* const kSuites[] = {"commutators", "linearity", "conjugate_symmetry",
                                        "constraints", "eigen_transfer"};
  bool known = config.suite == "all";
  for (const char* s : kSuites) known = known || config.suite == s;
  if (!known) throw ArgumentError("--suite: unknown suite '" + config.suite + "'");

  std::vector<SuiteResult> results;
  for (const char* name : kSuites) {
    if (config.suite != "all" && config.suite != name) continue;
    // Each suite draws from its own stream so selecting one does not shift
    // the others.
    std::uint64_t suite_seed = 0;
    {
      std::array<std::uint32_t, 2> words{};
      std::seed_seq named{static_cast<std::uint32_t>(config.seed),
                          static_cast<std::uint32_t>(config.seed >> 32),
                          static_cast<std::uint32_t>(std::string_view(name).size()),
                          static_cast<std::uint32_t>(name[0])};
      named.generate(words.begin(), words.end());
      suite_seed = (std::uint64_t(words[0]) << 32) | words[1];
    }
    Rng rng(suite_seed);
    const std::string n = name;
    if (n == "commutators") results.push_back(commutator_suite(rng, config.cases, config.tol));
    if (n == "linearity") results.push_back(linearity_suite(rng, config.cases, config.tol));
    if (n == "conjugate_symmetry") {
      results.push_back(conjugate_symmetry_suite(rng, config.cases, config.tol, config));
    }
    if (n == "constraints") results.push_back(constraint_suite(rng, config.cases));
    if (n == "eigen_transfer") {
      results.push_back(eigen_transfer_suite(rng, config.cases, config.tol, config));
    }
  }

  bool pass = true;
  Json suites = Json::array();
  for (const auto& r : results) {
    pass = pass && r.failures == 0;
    Json j;
    j["suite"] = r.name;
    j["cases"] = r.cases;
    j["failures"] = r.failures;
    j["max_residual"] = num(r.max_residual);
    j["tolerance"] = num(r.tolerance);
    if (r.failures > 0) j["counterexamples"] = r.counterexamples;
    suites.push_back(std::move(j));
  }

  if (config.format == Format::csv) {
    out << "suite,cases,failures,max_residual,tolerance\n";
    for (const auto& r : results) {
      out << r.name << ',' << r.cases << ',' << r.failures << ',' << num(r.max_residual).dump()
          << ',' << num(r.tolerance).dump() << '\n';
    }
    return pass ? kOk : kResidualFailure;
  }
  Json doc = report_header(config, "properties");
  doc["seed"] = config.seed;
  doc["cases"] = config.cases;
  doc["suites"] = std::move(suites);
  doc["status"] = pass ? "pass" : "fail";
  write_json(out, doc);
  return pass ? kOk : kResidualFailure;
}

}  // namespace pblab::cli
