#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bpiree/experiments.hpp"

namespace bpiree {

struct OutputConfig {
  std::string instance;     // generate: instance document
  std::string binary_blob;  // generate: A as a float64 blob instead of inline rows
  std::string report;       // compare: JSON report
  std::string trace;        // solve/compare: trace CSV
  bool timing = false;      // record wall time in traces and reports

  bool operator==(const OutputConfig&) const = default;
};

/// Everything one CLI run needs. JSON layout:
///
///   {"scale": "desk" | "paper",
///    "experiment": {"example": "log_ls" | "matrix_lp", "n", "q", "t", "m",
///                   "sparsity", "noise_scale", "conditioning": "well" | "ill",
///                   "seed", "lambda", "eps_bar", "p", "mu"},
///    "solver": {"gamma", "delta", "schedule": "cyclic" | "shuffled",
///               "schedule_seed", "T", "max_iter", "tol", "safeguard",
///               "fista_restart", "eps0",
///               "momentum": "fista" | "bound" | "none" | "fista_uncapped",
///               "stop_rule": "cycle" | "iteration", "support_window"},
///    "solvers": ["bpiree", {"algo": "irl1", "solver": {...overrides}}, ...],
///    "output": {"instance", "binary_blob", "report", "trace", "timing"}}
///
/// Every key is optional. Missing experiment fields come from the preset of
/// (example, scale); "solver" overlays the default SolverConfig and each
/// entry of "solvers" overlays "solver". Unknown keys are rejected.
struct RunConfig {
  Scale scale = Scale::Desk;
  ExperimentSpec experiment = ExperimentSpec::preset(ExampleKind::LogLS);
  SolverConfig solver;
  OutputConfig output;

  bool operator==(const RunConfig&) const = default;
};

/// Parses and validates. Throws ConfigError naming the offending field.
RunConfig parse_run_config(std::string_view json_text);

/// Fully explicit document; parse_run_config(to_json(c)) == c.
std::string run_config_to_json(const RunConfig& config);

/// Applies `key=value` to a JSON document held as text. `key` is a dotted
/// path ("experiment.n", "solver.tol"); `value` is parsed as JSON and taken
/// as a plain string when that fails.
std::string apply_override(std::string_view json_text, std::string_view assignment);

/// Builds a RunConfig with precedence preset < file < --set < --scale/--seed.
/// `file_text` may be empty (no config file).
RunConfig resolve_run_config(std::string_view file_text, const std::vector<std::string>& sets,
                             const std::optional<Scale>& scale,
                             const std::optional<std::uint64_t>& seed);

/// Solver settings for `algo`: the entry of experiment.solvers with that
/// name if there is one, otherwise the base "solver" section.
SolverConfig solver_config_for(const RunConfig& config, const std::string& algo);

}  // namespace bpiree
