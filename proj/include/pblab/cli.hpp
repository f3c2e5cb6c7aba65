#pragma once

// Command implementations behind the `pblab` executable. Argument parsing
// lives in the tool; everything here takes a filled RunConfig so that the
// commands can be driven from tests.

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pblab/gainloss_sim.hpp"
#include "pblab/hermite_basis.hpp"

namespace pblab::cli {

enum class Command { biorth, coeffs, abel, verify_eigen, verify_adjoint, simulate, props };
enum class Format { json, csv };

std::optional<Command> parse_command(const std::string& name);
std::string command_name(Command c);

enum ExitStatus : int { kOk = 0, kResidualFailure = 1, kConfigError = 2 };

struct Tolerances {
  double abel = 1e-6;           // Abel-summed equalities
  double exact = 1e-10;         // exact-support equalities
  double offdiag = 1e-8;        // biorthonormality off-diagonal
  double extended_diag = 1e-5;  // biorthonormality diagonal for kmax > 1
  double energy = 1e-8;         // relative Hamiltonian drift
  double commutator = 1e-12;
  double quadrature = 1e-8;
};

struct RunConfig {
  Command command = Command::biorth;
  int n = 64;
  int guard = 8;
  std::complex<double> alpha{1.4142135623730951};
  std::complex<double> beta{1.4142135623730951};
  /// Family bound; commands pick their own default when unset.
  std::optional<int> kmax;
  Tolerances tol;

  // coeffs
  std::string family = "phi";
  int k1 = 0, k2 = 0;

  // abel
  std::string preset = "alt";
  /// Monomial coefficients of p in (-1)^k p(k); overrides the preset.
  std::vector<double> poly;

  // simulate
  SystemParams system{1.0, 0.2, 1.0, 0.1, 0.1, 1.0, -1.0};
  TrajectoryState initial{0.0, 1.0, 0.0, 0.0, 0.0};
  double dt = 1e-3;
  double T = 10.0;
  int every = 1;

  // props
  std::uint64_t seed = 42;
  int cases = 100;
  std::string suite = "all";

  std::string out;  // empty: stdout
  Format format = Format::json;
  Precision precision = Precision::standard;
};

/// Validates `config` (throws ArgumentError).
void validate(const RunConfig& config);

/// Runs the command and writes the report to `out`. Returns the exit status;
/// configuration errors are reported on `err` with kConfigError.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Same, honouring config.out (opens the file, or uses `fallback`).
int run_to_destination(const RunConfig& config, std::ostream& fallback, std::ostream& err);

}  // namespace pblab::cli
