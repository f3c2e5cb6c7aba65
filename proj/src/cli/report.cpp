#include "report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ostream>

namespace pblab::cli {

Json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  const double r = std::strtod(buf, nullptr);
  return r == 0.0 ? 0.0 : r;
}

Json cnum(std::complex<double> z) { return Json{{"re", num(z.real())}, {"im", num(z.imag())}}; }

Json report_header(const RunConfig& config, const char* tag) {
  Json h;
  h["command"] = command_name(config.command);
  h["tag"] = tag;
  h["n"] = config.n;
  h["guard"] = config.guard;
  h["alpha"] = cnum(config.alpha);
  h["beta"] = cnum(config.beta);
  h["alpha_conj_beta"] = cnum(config.alpha * std::conj(config.beta));
  h["precision"] = config.precision == Precision::extended ? "extended" : "double";
  return h;
}

Json sum_json(const RegularizedSum& s) {
  Json j;
  j["value"] = cnum(s.value);
  j["method"] = to_string(s.method);
  j["terms_used"] = s.diagnostics.terms_used;
  j["extrapolation_residual"] = num(s.diagnostics.extrapolation_residual);
  if (s.diagnostics.cross_check_residual) {
    j["cross_check_residual"] = num(*s.diagnostics.cross_check_residual);
  }
  if (!s.diagnostics.pattern.empty()) j["pattern"] = s.diagnostics.pattern;
  return j;
}

void write_json(std::ostream& out, const Json& doc) { out << doc.dump(2) << '\n'; }

}  // namespace pblab::cli
