#pragma once

#include <complex>
#include <iosfwd>

#include <json.hpp>

#include "pblab/cli.hpp"
#include "pblab/reg_sum.hpp"

namespace pblab::cli {

using Json = nlohmann::ordered_json;

/// Rounded to 15 significant digits so reports are byte-stable.
Json num(double v);
Json cnum(std::complex<double> z);

/// Fields every report starts with.
Json report_header(const RunConfig& config, const char* tag);
Json sum_json(const RegularizedSum& s);

void write_json(std::ostream& out, const Json& doc);

int run_props(const RunConfig& config, std::ostream& out);

}  // namespace pblab::cli
