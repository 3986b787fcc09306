#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "newton_measure/polynomial.hpp"
#include "newton_measure/sectors.hpp"

namespace nmeasure {

/// Problem document: {"p": [[re, im], ...], "q": [...], "c": [re, im]} with
/// optional "tol", "r1" and "zone": {"alpha1", "beta1", "beta2", "nu"}.
/// Every number may also be written as a decimal string.
struct ProblemSpec {
  Polynomial p;
  Polynomial q;
  cplx c{};
  std::optional<double> tol;
  std::optional<double> r1;
  std::optional<double> alpha1, beta1, beta2, nu;
};

/// Throws NumericError(ConfigError) on malformed input.
ProblemSpec parse_problem_json(const std::string& text);
ProblemSpec load_problem_file(const std::string& path);

struct RunConfig {
  std::string command;
  std::string target;  // verify: asymptotics | gamma | basins | preimages
  std::string config_path;
  std::optional<std::array<double, 4>> window;  // x0, y0, x1, y1
  std::optional<std::array<double, 3>> disk;    // cx, cy, r
  int res = 512;
  int budget = 200;
  std::uint64_t seed = 1;
  std::string out;
  int threads = 0;
  int sector = 1;
  long samples = 0;  // 0: per-command default
  std::vector<int> resolutions{256, 512, 1024};
  std::vector<int> budgets{50, 100, 200};
  double ceiling = 0.005;
  double r0 = 3.0;
  std::optional<double> r1;
  std::optional<double> mu, alpha;
  int k_lo = 5;
  int k_hi = 40;
};

/// Exit codes of run().
enum ExitCode : int { kExitOk = 0, kExitVerifyFail = 1, kExitConfig = 2, kExitNumeric = 3 };

int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace nmeasure
