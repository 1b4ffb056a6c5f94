#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qei/qei_engine.hpp"

namespace qei {

// Exit-code contract: 0 Holds / success, 1 Fails, 2 Marginal, 3 usage or
// validation, 4 failed hypothesis or precondition, 5 internal numerical
// failure.
struct CliError : std::runtime_error {
  int code;
  CliError(int exit_code, const std::string& what)
      : std::runtime_error(what), code(exit_code) {}
};

struct GridSpec {
  double lo = 0.01;
  double hi = 10.0;
  int n = 200;
  bool operator==(const GridSpec&) const = default;
};

// Declarative run description; every command is a pure function of it, so
// re-running a config reproduces the output byte for byte.
struct RunConfig {
  std::string command = "verdict";  // charfct | verdict | bound | witness
  std::string model = "free";
  std::map<std::string, std::string> params;  // model parameters as text
  std::map<std::string, std::string> q;       // channel -> coefficient list
  double tau = 1.0;
  double amplitude = 1.0;
  unsigned seed = 1;
  GridSpec grid;
  std::string format = "json";  // json | csv
  std::string out;              // output path; empty writes to stdout

  // Schema-level checks; throws CliError(3) naming the offending field.
  void validate() const;

  bool operator==(const RunConfig&) const = default;
};

// JSON round trip for --config files; parse(serialize(c)) == c.
std::string serialize_config(const RunConfig& cfg);
RunConfig parse_config_json(const std::string& text);

// Parse argv-style tokens (program name removed).  --config loads a JSON
// file first and explicit flags override it.  Returns nullopt after filling
// `help_text` when help was requested; throws CliError(3) on bad usage.
std::optional<RunConfig> parse_cli(const std::vector<std::string>& args,
                                   std::string* help_text = nullptr);

// Model + prefactor assembly from the config; throws CliError(3) for unknown
// presets, parameters, or channels (library validation errors pass through).
StressTensorSpec spec_from_config(const RunConfig& cfg);

struct CliResult {
  int exit_code = 0;
  std::string output;
};

// Executes the configured command and renders its output; throws the
// library's error types, which cli_main maps onto the exit-code contract.
CliResult run_command(const RunConfig& cfg);

// Full entry point: parse, run, write output to cfg.out or stdout, map
// errors to exit codes with a message on stderr.
int cli_main(int argc, char** argv);

// 15-significant-digit number rendering used for all numeric output.
std::string format_number(double v);

}  // namespace qei
