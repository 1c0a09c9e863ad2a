#pragma once

#include <string>

#include <json.hpp>

#include "bpiree/experiments.hpp"

namespace bpiree::detail {

// Field names shared by run configs and comparison reports. Unknown keys and
// ill-typed values raise ConfigError naming the dotted path.

nlohmann::json solver_config_to_json(const SolverConfig& config);
/// Overlays the keys of `j` onto `config`.
void solver_config_from_json(const nlohmann::json& j, const std::string& prefix,
                             SolverConfig& config);

/// Experiment fields without the solver list.
nlohmann::json experiment_to_json(const ExperimentSpec& spec);
void experiment_from_json(const nlohmann::json& j, const std::string& prefix,
                          ExperimentSpec& spec);

ExampleKind parse_example(const std::string& text, const std::string& field);
Scale parse_scale(const std::string& text, const std::string& field);

}  // namespace bpiree::detail
