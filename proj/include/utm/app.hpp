#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include "json.hpp"
#include "utm/core.hpp"

namespace utm {

using Json = nlohmann::ordered_json;

struct RunOptions {
  std::string command;  // empty: taken from the config
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  int threads = 0;
  std::optional<double> tol;
};

/// Executes one CLI command; returns the process exit code.
/// 0 success, 1 invalid input, 2 NonContraction, 3 failed check.
int run(const RunOptions& opts, std::ostream& out, std::ostream& err);

/// Parses JSON text; syntax errors are reported as "line L, column C".
Json parse_config_text(const std::string& text);
Json load_config(const std::string& path);

/// Builds the (unvalidated) problem from the "problem" section. Relative CSV
/// paths resolve against base_dir.
ProblemSpec problem_from_json(const Json& problem, const std::string& base_dir = ".");

enum class SampleRole { Profile, Signal };

/// Named generator or CSV file sampled on [0, extent]. Closed-form catalog
/// names give the t = params.t profile or the x = params.x trace.
PiecewiseLinear generate_samples(const Json& source, SampleRole role, double extent, std::size_t default_samples,
                                 const std::string& base_dir = ".");

void write_field_csv(const SolutionField& field, const std::string& path);
SolutionField read_field_csv(const std::string& path);

std::uint64_t fnv1a(const std::string& bytes);

}  // namespace utm
