#include <cmath>
#include <complex>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "pblab/cli.hpp"
#include "pblab/errors.hpp"

namespace {

using pblab::cli::Format;
using pblab::cli::RunConfig;

double parse_real(const std::string& text) {
  std::size_t used = 0;
  const double v = std::stod(text, &used);
  if (used != text.size()) throw std::invalid_argument(text);
  return v;
}

// Accepts "1.5", "1.5+2i", "-0.5-1j", "2i", "-i" and "(1.5,2)".
std::complex<double> parse_complex(const std::string& text) {
  try {
    if (text.size() > 2 && text.front() == '(' && text.back() == ')') {
      const auto comma = text.find(',');
      if (comma != std::string::npos) {
        return {parse_real(text.substr(1, comma - 1)),
                parse_real(text.substr(comma + 1, text.size() - comma - 2))};
      }
    }
    if (!text.empty() && (text.back() == 'i' || text.back() == 'j')) {
      const std::string body = text.substr(0, text.size() - 1);
      // The imaginary part starts at the last sign that is not an exponent sign.
      std::size_t split = 0;
      for (std::size_t i = 1; i < body.size(); ++i) {
        if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
          split = i;
        }
      }
      const std::string re = body.substr(0, split);
      const std::string im = body.substr(split);
      const double im_v = im.empty() || im == "+" ? 1.0 : im == "-" ? -1.0 : parse_real(im);
      return {re.empty() ? 0.0 : parse_real(re), im_v};
    }
    return {parse_real(text), 0.0};
  } catch (const std::exception&) {
    throw pblab::ArgumentError("cannot parse complex number '" + text + "'");
  }
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig config;
  CLI::App app{"Weak pseudo-boson verification suites and gain-loss oscillator simulator", "pblab"};
  app.set_config("--config", "", "Read options from a key = value file");
  app.require_subcommand(1, 1);

  std::string alpha, beta, ab, format = "json";
  std::optional<double> alpha_y, beta_y;

  app.add_option("--n", config.n, "Trusted truncation N")->capture_default_str();
  app.add_option("--guard", config.guard, "Guard band G")->capture_default_str();
  auto* alpha_opt = app.add_option("--alpha", alpha, "phi normalization (complex)");
  auto* beta_opt = app.add_option("--beta", beta, "psi normalization (complex)");
  app.add_option("--ab", ab, "Set alpha*conj(beta), split symmetrically")
      ->excludes(alpha_opt)
      ->excludes(beta_opt);
  app.add_option("--kmax", config.kmax, "Family bound for k1, k2");
  app.add_option("--family", config.family, "phi or psi (coeffs)")->capture_default_str();
  app.add_option("--k1", config.k1, "Family index (coeffs)");
  app.add_option("--k2", config.k2, "Family index (coeffs)");
  app.add_option("--preset", config.preset, "Abel preset: alt, alt-k, alt-k2, alt-(2k+1)^2")
      ->capture_default_str();
  app.add_option("--poly", config.poly, "Coefficients of p in sum (-1)^k p(k), lowest first")
      ->delimiter(',');
  app.add_option("--dt", config.dt, "Integrator step")->capture_default_str();
  app.add_option("--T", config.T, "Integration horizon")->capture_default_str();
  app.add_option("--m", config.system.m)->capture_default_str();
  app.add_option("--gamma", config.system.gamma)->capture_default_str();
  app.add_option("--k", config.system.k)->capture_default_str();
  app.add_option("--A", config.system.A)->capture_default_str();
  app.add_option("--B", config.system.B)->capture_default_str();
  app.add_option("--alpha-y", alpha_y, "Gauge alpha_y (default from sign of A)");
  app.add_option("--beta-y", beta_y, "Gauge beta_y (default from sign of A)");
  app.add_option("--x0", config.initial.x)->capture_default_str();
  app.add_option("--y0", config.initial.y)->capture_default_str();
  app.add_option("--vx0", config.initial.xdot)->capture_default_str();
  app.add_option("--vy0", config.initial.ydot)->capture_default_str();
  app.add_option("--every", config.every, "Keep every n-th trajectory sample")
      ->capture_default_str();
  app.add_option("--seed", config.seed)->capture_default_str();
  app.add_option("--cases", config.cases)->capture_default_str();
  app.add_option("--suite", config.suite, "Property suite or 'all'")->capture_default_str();
  app.add_option("--out", config.out, "Report path (default stdout)");
  app.add_option("--format", format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();

  // Subcommands share the top-level options so they may be given on either
  // side of the command name.
  for (const char* name : {"biorth", "coeffs", "abel", "verify-eigen", "verify-adjoint",
                           "simulate", "props"}) {
    app.add_subcommand(name)->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return pblab::cli::kConfigError;
  }

  try {
    config.command = *pblab::cli::parse_command(app.get_subcommands().front()->get_name());
    config.format = format == "csv" ? Format::csv : Format::json;
    config.precision = pblab::precision_from_env();
    if (!ab.empty()) {
      const auto root = std::sqrt(parse_complex(ab));
      config.alpha = root;
      config.beta = std::conj(root);
    }
    if (!alpha.empty()) config.alpha = parse_complex(alpha);
    if (!beta.empty()) config.beta = parse_complex(beta);
    const auto gauge = pblab::default_gauge(config.system.A);
    config.system.alpha_y = alpha_y.value_or(gauge.first);
    config.system.beta_y = beta_y.value_or(gauge.second);
  } catch (const pblab::ArgumentError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return pblab::cli::kConfigError;
  }

  return pblab::cli::run_to_destination(config, std::cout, std::cerr);
}
