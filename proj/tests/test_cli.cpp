#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pblab/cli.hpp"

using namespace pblab;
using namespace pblab::cli;

namespace {

struct Outcome {
  int status;
  std::string out;
  std::string err;
};

Outcome run_config(const RunConfig& c) {
  std::ostringstream out, err;
  const int status = run(c, out, err);
  return {status, out.str(), err.str()};
}

RunConfig make(Command cmd) {
  RunConfig c;
  c.command = cmd;
  return c;
}

}  // namespace

TEST_CASE("command names round trip") {
  for (auto cmd : {Command::biorth, Command::coeffs, Command::abel, Command::verify_eigen,
                   Command::verify_adjoint, Command::simulate, Command::props}) {
    CHECK(parse_command(command_name(cmd)) == cmd);
  }
  CHECK(parse_command("verify-eigen") == Command::verify_eigen);
  CHECK_FALSE(parse_command("nope").has_value());
}

TEST_CASE("biorth with kmax 1 reports the identity") {
  auto c = make(Command::biorth);
  c.kmax = 1;
  const auto r = run_config(c);
  REQUIRE(r.status == kOk);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["status"] == "pass");
  CHECK(doc["alpha_conj_beta"]["re"] == 2.0);
  CHECK(doc["entries"].size() == 16);
  CHECK_FALSE(doc["tag"].get<std::string>().empty());
}

TEST_CASE("abel preset alt gives one half by the exact method") {
  const auto r = run_config(make(Command::abel));
  REQUIRE(r.status == kOk);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["value"] == 0.5);
  CHECK(doc["method"] == "abel_exact");
}

TEST_CASE("abel with a custom polynomial") {
  auto c = make(Command::abel);
  c.poly = {0.0, 1.0};
  const auto doc = nlohmann::json::parse(run_config(c).out);
  CHECK(doc["value"] == -0.25);
  c.preset = "unknown";
  c.poly.clear();
  CHECK(run_config(c).status == kConfigError);
}

TEST_CASE("reports are byte-identical across runs") {
  for (auto cmd : {Command::biorth, Command::coeffs, Command::abel, Command::simulate}) {
    auto c = make(cmd);
    c.T = 1.0;
    c.every = 100;
    const auto a = run_config(c);
    const auto b = run_config(c);
    CHECK(a.status == kOk);
    CHECK(a.out == b.out);
  }
  auto p = make(Command::props);
  p.cases = 5;
  p.suite = "constraints";
  CHECK(run_config(p).out == run_config(p).out);
}

TEST_CASE("props suites are independent of each other's selection") {
  auto all = make(Command::props);
  all.cases = 4;
  auto one = all;
  one.suite = "linearity";
  const auto a = nlohmann::json::parse(run_config(all).out);
  const auto b = nlohmann::json::parse(run_config(one).out);
  REQUIRE(b["suites"].size() == 1);
  for (const auto& s : a["suites"]) {
    if (s["suite"] == "linearity") CHECK(s == b["suites"][0]);
  }
}

TEST_CASE("configuration errors exit with status 2") {
  auto c = make(Command::biorth);
  c.n = 0;
  auto r = run_config(c);
  CHECK(r.status == kConfigError);
  CHECK(r.err.find("--n") != std::string::npos);

  c = make(Command::simulate);
  c.system.A = 0.0;
  c.system.B = 0.2;
  CHECK(run_config(c).status == kConfigError);

  c = make(Command::props);
  c.suite = "bogus";
  CHECK(run_config(c).status == kConfigError);

  c = make(Command::coeffs);
  c.family = "chi";
  CHECK(run_config(c).status == kConfigError);
}

TEST_CASE("residual failures exit with status 1") {
  // An off-diagonal tolerance nothing can meet.
  auto c = make(Command::biorth);
  c.kmax = 1;
  c.tol.offdiag = -1.0;
  const auto r = run_config(c);
  CHECK(r.status == kResidualFailure);
  CHECK(nlohmann::json::parse(r.out)["status"] == "fail");
}

TEST_CASE("simulate emits a CSV trajectory with a constant H column") {
  auto c = make(Command::simulate);
  c.system = {1.0, 0.2, 1.0, 0.0, 0.0, 1.0, -1.0};
  c.initial = {0.0, 0.3, 0.8, 0.1, -0.2};
  c.T = 2.0;
  c.every = 200;
  c.format = Format::csv;
  const auto r = run_config(c);
  REQUIRE(r.status == kOk);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,x,y,xdot,ydot,H");
  double h0 = NAN;
  int rows = 0;
  while (std::getline(in, line)) {
    const double h = std::stod(line.substr(line.rfind(',') + 1));
    if (rows++ == 0) h0 = h;
    CHECK(std::abs(h - h0) <= 1e-9);
  }
  CHECK(rows == 11);
}

TEST_CASE("report destination") {
  const auto path = std::filesystem::temp_directory_path() / "pblab_cli_test_report.json";
  auto c = make(Command::abel);
  c.out = path.string();
  std::ostringstream fallback, err;
  CHECK(run_to_destination(c, fallback, err) == kOk);
  CHECK(fallback.str().empty());
  std::ifstream in(path);
  CHECK(nlohmann::json::parse(in)["value"] == 0.5);
  std::filesystem::remove(path);

  c.out = "/nonexistent-dir/report.json";
  CHECK(run_to_destination(c, fallback, err) == kConfigError);
}
