#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "segpower/crossover.hpp"
#include "segpower/curve.hpp"
#include "segpower/tost.hpp"

namespace segpower::cli {

// Bad flags, bad config files or violated constraints. what() lists every problem found.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// --help was requested; what() holds the help text.
class HelpRequested : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string subcommand;  // power, curve, crossover, diagnose, bench

  DesignSpec design;
  CrossoverSpec crossover;

  int n1 = 0;
  int n2 = 0;
  std::size_t m = 0;
  std::uint64_t seed = 0;
  double target_power = 0.8;
  double bound = 65536.0;
  double tol = 1e-6;
  unsigned threads = 0;
  std::string engine = "segment";  // segment | naive
  std::string source = "sobol";    // sobol | pseudorandom
  bool compare_chow = false;

  std::vector<std::string> scenarios;  // diagnose; empty means the custom design
  int n_max = 100;
  int reps = 10;
  std::vector<int> grid;  // bench sample sizes
  bool with_naive = false;

  std::string output;  // JSON path; empty means stdout
  std::string csv;
  std::string plot;

};

// Parses arguments (without the program name). A `--config FILE` holds flat
// `key = value` lines named after the long flags (or a previous JSON result,
// whose "inputs" object is used); explicit flags win over file values.
RunConfig parse_config(const std::vector<std::string>& args);

// Reads a flat key = value file; '#' starts a comment.
std::vector<std::pair<std::string, std::string>> read_flat_config(const std::string& path);

// Runs the configured subcommand and writes its outputs.
void execute(const RunConfig& config, std::ostream& out, std::ostream& log);

// Entry point: returns 0 on success, 2 for configuration errors and 1 for
// runtime or I/O failures.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

// ECDF step plot of a power curve.
std::string render_curve_svg(const PowerCurve& curve, const std::string& title);
// `n,power` rows at each distinct finite crossing.
std::string render_curve_csv(const PowerCurve& curve);

}  // namespace segpower::cli
