#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "fraclap/nonlinearity.hpp"
#include "fraclap/problem.hpp"

namespace fraclap {

/// Everything a CLI run reads. Defaults reproduce the pure power q = 4 run
/// at s = 1.5 on (0, 1) with N = 32.
struct RunConfig {
  double s = 1.5;
  double a = 0.0;
  double b = 1.0;
  int N = 32;
  std::uint64_t seed = 0;
  int quad_regular = 8;
  int quad_singular = 16;
  NlKind nl_kind = NlKind::power;
  NlParams nl{};
  std::string solver_name = "mountain_pass";
  double solver_tol = 1e-10;
  int solver_max_iter = 20000;
  int solver_path_points = 32;
  int solver_k_max = 6;
  std::string out_dir = ".";
};

/// The recognized keys, in file order.
const std::vector<std::string>& config_keys();

/// Throws UnknownKey (naming the key) or BadValue.
void set_config_value(RunConfig& cfg, std::string_view key, std::string_view value);

/// One key=value per line; '#' starts a comment; blank lines are skipped.
/// Errors name the line number.
RunConfig parse_config(std::string_view text, RunConfig base = {});
RunConfig load_config(const std::string& path, RunConfig base = {});

/// key=value lines for every key, in config_keys() order.
std::string render_config(const RunConfig& cfg);

/// The validated problem (make_problem, or make_coarse_problem when coarse).
ProblemSpec problem_of(const RunConfig& cfg, bool coarse = false);
Nonlinearity nonlinearity_of(const RunConfig& cfg);

/// Shortest decimal that reads back to the same double.
std::string format_double(double v);
/// Strict decimal parse of the whole string; throws BadValue.
double parse_double(std::string_view text, std::string_view what);
long long parse_integer(std::string_view text, std::string_view what);

}  // namespace fraclap
