#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "pblab/errors.hpp"
#include "pblab/fe_product.hpp"
#include "pblab/gainloss_sim.hpp"
#include "report.hpp"

namespace pblab::cli {

namespace {

const std::map<std::string, Command>& command_table() {
  static const std::map<std::string, Command> table{
      {"biorth", Command::biorth},
      {"coeffs", Command::coeffs},
      {"abel", Command::abel},
      {"verify-eigen", Command::verify_eigen},
      {"verify-adjoint", Command::verify_adjoint},
      {"simulate", Command::simulate},
      {"props", Command::props},
  };
  return table;
}

const std::map<std::string, std::vector<double>>& abel_presets() {
  static const std::map<std::string, std::vector<double>> presets{
      {"alt", {1.0}},
      {"alt-k", {0.0, 1.0}},
      {"alt-k2", {0.0, 0.0, 1.0}},
      {"alt-(2k+1)^2", {1.0, 4.0, 4.0}},
  };
  return presets;
}

Json family_json(FamilyIndex i) { return Json::array({i.k1, i.k2}); }

Json check_json(const CheckReport& r) {
  Json j;
  j["lhs"] = cnum(r.lhs);
  j["rhs"] = cnum(r.rhs);
  j["residual"] = num(r.residual);
  j["method"] = to_string(r.method);
  j["shells_used"] = r.shells_used;
  return j;
}

int finish(Json& doc, bool pass, std::ostream& out) {
  doc["status"] = pass ? "pass" : "fail";
  write_json(out, doc);
  return pass ? kOk : kResidualFailure;
}

// ---------------------------------------------------------------------------

int run_biorth(const RunConfig& c, std::ostream& out) {
  const int kmax = c.kmax.value_or(1);
  const auto m = biorthonormality_matrix(kmax, c.alpha, c.beta, c.n);
  const cplx expected = c.alpha * std::conj(c.beta) / 2.0;
  const double diag_tol = kmax <= 1 ? c.tol.abel : c.tol.extended_diag;

  bool pass = true;
  double max_off = 0.0;
  double max_diag = 0.0;
  for (const auto& e : m.entries) {
    if (!e.summable) {
      pass = false;
      continue;
    }
    if (e.k == e.l) {
      max_diag = std::max(max_diag, std::abs(e.value - expected));
    } else {
      max_off = std::max(max_off, std::abs(e.value));
    }
  }
  pass = pass && max_off <= c.tol.offdiag && max_diag <= diag_tol;

  if (c.format == Format::csv) {
    out << "k1,k2,l1,l2,re,im,method,summable\n";
    for (const auto& e : m.entries) {
      out << e.k.k1 << ',' << e.k.k2 << ',' << e.l.k1 << ',' << e.l.k2 << ','
          << num(e.value.real()).dump() << ',' << num(e.value.imag()).dump() << ','
          << (e.summable ? to_string(e.method) : "none") << ',' << (e.summable ? 1 : 0) << '\n';
    }
    return pass ? kOk : kResidualFailure;
  }

  Json doc = report_header(c, "biorthonormality");
  doc["kmax"] = kmax;
  doc["expected_diagonal"] = cnum(expected);
  Json entries = Json::array();
  for (const auto& e : m.entries) {
    Json j;
    j["k"] = family_json(e.k);
    j["l"] = family_json(e.l);
    j["summable"] = e.summable;
    if (e.summable) {
      j["value"] = cnum(e.value);
      j["method"] = to_string(e.method);
    } else {
      j["error"] = e.error;
    }
    entries.push_back(std::move(j));
  }
  doc["entries"] = std::move(entries);
  doc["max_offdiag"] = num(max_off);
  doc["max_diag_error"] = num(max_diag);
  doc["tolerance"] = {{"offdiag", num(c.tol.offdiag)}, {"diag", num(diag_tol)}};
  return finish(doc, pass, out);
}

int run_coeffs(const RunConfig& c, std::ostream& out) {
  const bool is_phi = c.family == "phi";
  const auto grid = is_phi ? build_phi(c.k1, c.k2, c.alpha, c.n, c.guard)
                           : build_psi(c.k1, c.k2, c.beta, c.n, c.guard);
  if (c.format == Format::csv) {
    write_csv_trusted(out, grid);
    return kOk;
  }

  Json doc = report_header(c, "coefficient_formulas");
  doc["family"] = c.family;
  doc["k"] = Json::array({c.k1, c.k2});
  bool pass = true;
  Json checks = Json::array();

  const cplx norm = is_phi ? c.alpha : c.beta;
  if (family_closed_form(is_phi ? Family::phi : Family::psi, c.k1, c.k2, 0, 0, norm)) {
    double err = 0.0;
    for (int i = 0; i < c.n; ++i) {
      for (int j = 0; j < c.n; ++j) {
        const auto ref =
            *family_closed_form(is_phi ? Family::phi : Family::psi, c.k1, c.k2, i, j, norm);
        err = std::max(err, std::abs(grid(i, j) - ref));
      }
    }
    const bool ok = err <= c.tol.exact;
    pass = pass && ok;
    checks.push_back({{"check", "closed_form"},
                      {"max_error", num(err)},
                      {"tolerance", num(c.tol.exact)},
                      {"pass", ok}});
  }
  if (c.k1 == 0 && c.k2 == 0) {
    // Vacuum entries against the quadrature pairing of the delta with e_n1 e_n2.
    const int nq = std::min(c.n - 1, 30);
    const auto kind = is_phi ? DeltaKind::difference : DeltaKind::sum;
    double err = 0.0;
    for (int i = 0; i <= nq; ++i) {
      for (int j = 0; j <= nq; ++j) {
        const double q = delta_pairing_quadrature(kind, i, j, OscillatorParams::unit(), c.precision);
        err = std::max(err, std::abs(grid(i, j) - norm * q));
      }
    }
    const bool ok = err <= c.tol.quadrature * std::max(1.0, std::abs(norm));
    pass = pass && ok;
    checks.push_back({{"check", "quadrature"},
                      {"nmax", nq},
                      {"max_error", num(err)},
                      {"tolerance", num(c.tol.quadrature)},
                      {"pass", ok}});
  }
  doc["checks"] = std::move(checks);

  Json re = Json::array();
  Json im = Json::array();
  for (int i = 0; i < c.n; ++i) {
    for (int j = 0; j < c.n; ++j) {
      re.push_back(num(grid(i, j).real()));
      im.push_back(num(grid(i, j).imag()));
    }
  }
  doc["grid"] = {{"n", c.n}, {"layout", "row-major n1,n2"}, {"re", re}, {"im", im}};
  return finish(doc, pass, out);
}

int run_abel(const RunConfig& c, std::ostream& out) {
  std::vector<double> coeffs = c.poly;
  std::string label = "poly";
  if (coeffs.empty()) {
    const auto it = abel_presets().find(c.preset);
    if (it == abel_presets().end()) throw ArgumentError("abel: unknown preset '" + c.preset + "'");
    coeffs = it->second;
    label = c.preset;
  }
  const std::vector<cplx> mono(coeffs.begin(), coeffs.end());
  const auto exact = classify_and_sum(Series::alternating_polynomial(mono));

  const PolynomialPattern pattern{0, 1, -1, mono};
  const auto numeric =
      abel_numeric([&](std::int64_t k) { return pattern.term(k); }, default_eta_schedule());
  const double gap = std::abs(numeric.value - exact.value);
  const double allowed = c.tol.abel * std::max(1.0, std::abs(exact.value));
  const bool pass = gap <= allowed;

  if (c.format == Format::csv) {
    out << "series,value,method,numeric,residual\n"
        << label << ',' << num(exact.value.real()).dump() << ',' << to_string(exact.method) << ','
        << num(numeric.value.real()).dump() << ',' << num(gap).dump() << '\n';
    return pass ? kOk : kResidualFailure;
  }
  Json doc = report_header(c, "abel_values");
  doc["series"] = label;
  doc["coefficients"] = Json::array();
  for (double v : coeffs) doc["coefficients"].push_back(num(v));
  doc["value"] = num(exact.value.real());
  doc["imag"] = num(exact.value.imag());
  doc["method"] = to_string(exact.method);
  doc["exact"] = sum_json(exact);
  doc["numeric"] = sum_json(numeric);
  doc["residual"] = num(gap);
  doc["tolerance"] = num(allowed);
  return finish(doc, pass, out);
}

template <class Check>
int run_family_sweep(const RunConfig& c, std::ostream& out, const char* tag, Check&& check) {
  const int kmax = c.kmax.value_or(2);
  if (kmax < 0) throw ArgumentError("kmax must be >= 0");
  bool pass = true;
  double worst = 0.0;
  Json entries = Json::array();
  std::ostringstream csv;
  csv << "k1,k2,l1,l2,j,residual,pass\n";
  for (int a = 0; a <= kmax; ++a) {
    for (int b = 0; b <= kmax; ++b) {
      for (int x = 0; x <= kmax; ++x) {
        for (int y = 0; y <= kmax; ++y) {
          for (int j = 1; j <= 2; ++j) {
            Json e;
            e["k"] = Json::array({a, b});
            e["l"] = Json::array({x, y});
            e["j"] = j;
            double residual = 0.0;
            bool ok = false;
            try {
              residual = check(FamilyIndex{a, b}, FamilyIndex{x, y}, j, e);
              ok = residual <= c.tol.abel;
            } catch (const AccuracyError& ex) {
              e["error"] = ex.what();
              residual = NAN;
            }
            worst = std::isnan(residual) ? worst : std::max(worst, residual);
            e["residual"] = num(residual);
            e["pass"] = ok;
            pass = pass && ok;
            csv << a << ',' << b << ',' << x << ',' << y << ',' << j << ','
                << num(residual).dump() << ',' << (ok ? 1 : 0) << '\n';
            entries.push_back(std::move(e));
          }
        }
      }
    }
  }
  if (c.format == Format::csv) {
    out << csv.str();
    return pass ? kOk : kResidualFailure;
  }
  Json doc = report_header(c, tag);
  doc["kmax"] = kmax;
  doc["entries"] = std::move(entries);
  doc["max_residual"] = num(worst);
  doc["tolerance"] = num(c.tol.abel);
  return finish(doc, pass, out);
}

int run_verify_eigen(const RunConfig& c, std::ostream& out) {
  return run_family_sweep(c, out, "eigen_transfer",
                          [&](FamilyIndex k, FamilyIndex l, int j, Json& e) {
                            const auto r = check_eigen_transfer(k, l, j, c.alpha, c.beta, c.n);
                            e["ket"] = check_json(r.ket);
                            e["bra"] = check_json(r.bra);
                            return r.residual;
                          });
}

int run_verify_adjoint(const RunConfig& c, std::ostream& out) {
  return run_family_sweep(c, out, "adjoint_identity",
                          [&](FamilyIndex k, FamilyIndex l, int j, Json& e) {
                            const auto r = check_adjoint_identity(k, l, j, c.alpha, c.beta, c.n);
                            e["direct"] = {{"lhs", cnum(r.direct_lhs)}, {"rhs", cnum(r.direct_rhs)}};
                            e["stencil"] = {{"lhs", cnum(r.stencil_lhs)},
                                            {"rhs", cnum(r.stencil_rhs)}};
                            e["method"] = to_string(r.method);
                            return r.residual;
                          });
}

int run_simulate(const RunConfig& c, std::ostream& out) {
  const auto d = derive_params(c.system);
  const auto traj = integrate(c.system, c.initial, c.dt, c.T, Formulation::decoupled, c.every);
  const double h0 = hamiltonian_value(c.system, traj.front());
  double drift = 0.0;
  for (const auto& s : traj) drift = std::max(drift, std::abs(hamiltonian_value(c.system, s) - h0));
  const double rel = drift / std::max(1.0, std::abs(h0));
  bool pass = rel <= c.tol.energy;

  if (c.format == Format::csv) {
    write_trajectory_csv(out, c.system, traj);
    return pass ? kOk : kResidualFailure;
  }
  Json doc = report_header(c, "hamiltonian_conservation");
  const auto& p = c.system;
  doc["system"] = {{"m", num(p.m)},         {"gamma", num(p.gamma)},     {"k", num(p.k)},
                   {"A", num(p.A)},         {"B", num(p.B)},             {"alpha_y", num(p.alpha_y)},
                   {"beta_y", num(p.beta_y)}};
  doc["derived"] = {{"m_prime", num(d.m_prime)},     {"k_prime", num(d.k_prime)},
                    {"alpha_x", num(d.alpha_x)},     {"beta_x", num(d.beta_x)},
                    {"m1", num(d.m1)},               {"k1", num(d.k1)},
                    {"gamma1", num(d.gamma1)},       {"omega1_sq", num(d.omega1_sq)},
                    {"jacobian", num(d.jacobian)},   {"bateman", d.bateman}};
  doc["dt"] = num(c.dt);
  doc["T"] = num(c.T);
  doc["samples"] = traj.size();
  doc["h0"] = num(h0);
  doc["max_relative_drift"] = num(rel);
  doc["energy_tolerance"] = num(c.tol.energy);
  if (d.bateman) {
    double err = 0.0;
    for (const auto& s : traj) {
      const double ref = damped_closed_form(p.m, p.gamma, p.k, c.initial.x, c.initial.xdot,
                                            s.t - c.initial.t);
      err = std::max(err, std::abs(s.x - ref));
    }
    doc["closed_form_error"] = num(err);
    doc["closed_form_tolerance"] = num(c.tol.abel);
    pass = pass && err <= c.tol.abel;
  }
  const auto& last = traj.back();
  doc["final"] = {{"t", num(last.t)},       {"x", num(last.x)},      {"y", num(last.y)},
                  {"xdot", num(last.xdot)}, {"ydot", num(last.ydot)}};
  return finish(doc, pass, out);
}

}  // namespace

std::optional<Command> parse_command(const std::string& name) {
  const auto it = command_table().find(name);
  if (it == command_table().end()) return std::nullopt;
  return it->second;
}

std::string command_name(Command c) {
  for (const auto& [name, cmd] : command_table()) {
    if (cmd == c) return name;
  }
  return "?";
}

void validate(const RunConfig& c) {
  if (c.n < 1) throw ArgumentError("--n must be >= 1");
  if (c.guard < 0) throw ArgumentError("--guard must be >= 0");
  if (c.kmax && *c.kmax < 0) throw ArgumentError("--kmax must be >= 0");
  if (c.k1 < 0 || c.k2 < 0) throw ArgumentError("--k1/--k2 must be >= 0");
  if (c.family != "phi" && c.family != "psi") throw ArgumentError("--family must be phi or psi");
  if (c.cases < 1) throw ArgumentError("--cases must be >= 1");
  if (c.every < 1) throw ArgumentError("--every must be >= 1");
  if (!(c.dt > 0.0)) throw ArgumentError("--dt must be positive");
  if (!(c.T >= c.dt)) throw ArgumentError("--T must be >= --dt");
  if (c.alpha == cplx{} || c.beta == cplx{}) throw ArgumentError("alpha and beta must be nonzero");
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    validate(config);
    switch (config.command) {
      case Command::biorth: return run_biorth(config, out);
      case Command::coeffs: return run_coeffs(config, out);
      case Command::abel: return run_abel(config, out);
      case Command::verify_eigen: return run_verify_eigen(config, out);
      case Command::verify_adjoint: return run_verify_adjoint(config, out);
      case Command::simulate: return run_simulate(config, out);
      case Command::props: return run_props(config, out);
    }
  } catch (const ArgumentError& e) {
    err << "configuration error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::domain_error& e) {
    // ConstraintError and DomainError: parameters outside the model.
    err << "configuration error: " << e.what() << '\n';
    return kConfigError;
  } catch (const GuardBudgetError& e) {
    err << "configuration error: " << e.what() << '\n';
    return kConfigError;
  } catch (const AccuracyError& e) {
    err << "check failed: " << e.what() << '\n';
    return kResidualFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kResidualFailure;
  }
  return kConfigError;
}

int run_to_destination(const RunConfig& config, std::ostream& fallback, std::ostream& err) {
  if (config.out.empty()) return run(config, fallback, err);
  std::ofstream file(config.out);
  if (!file) {
    err << "configuration error: cannot write " << config.out << '\n';
    return kConfigError;
  }
  return run(config, file, err);
}

}  // namespace pblab::cli
