#include "bpiree/run_config.hpp"

#include <cmath>

#include <json.hpp>

#include "bpiree/errors.hpp"
#include "config_json.hpp"
#include "json_util.hpp"

namespace bpiree {

using nlohmann::json;

namespace {

json parse_document(std::string_view text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string(what) + " is not valid JSON: " + e.what());
  }
}

}  // namespace

RunConfig parse_run_config(std::string_view json_text) {
  const json doc = parse_document(json_text, "config");
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  detail::reject_unknown(doc, {"scale", "experiment", "solver", "solvers", "output"}, "");

  RunConfig rc;
  if (auto it = doc.find("scale"); it != doc.end()) {
    rc.scale = detail::parse_scale(detail::as<std::string>(*it, "scale"), "scale");
  }
  const json experiment = doc.value("experiment", json::object());
  if (!experiment.is_object()) throw ConfigError("experiment must be an object");
  ExampleKind example = ExampleKind::LogLS;
  if (auto it = experiment.find("example"); it != experiment.end()) {
    example = detail::parse_example(detail::as<std::string>(*it, "experiment.example"),
                                    "experiment.example");
  }
  rc.experiment = ExperimentSpec::preset(example, rc.scale);
  detail::experiment_from_json(experiment, "experiment", rc.experiment);
  if (example == ExampleKind::MatrixLp && !experiment.contains("sparsity")) {
    rc.experiment.sparsity = static_cast<Index>(std::lround(0.02 * static_cast<double>(rc.experiment.q)));
  }

  if (auto it = doc.find("solver"); it != doc.end()) {
    detail::solver_config_from_json(*it, "solver", rc.solver);
  }
  rc.solver.mu = rc.experiment.mu;

  if (auto it = doc.find("solvers"); it != doc.end()) {
    if (!it->is_array()) throw ConfigError("solvers must be an array");
    rc.experiment.solvers.clear();
    for (std::size_t i = 0; i < it->size(); ++i) {
      const json& e = (*it)[i];
      const std::string where = "solvers[" + std::to_string(i) + "]";
      SolverEntry entry{"", rc.solver};
      if (e.is_string()) {
        entry.algo = e.get<std::string>();
      } else if (e.is_object()) {
        detail::reject_unknown(e, {"algo", "solver"}, where);
        entry.algo = detail::require<std::string>(e, "algo", where + ".algo");
        if (auto s = e.find("solver"); s != e.end()) {
          detail::solver_config_from_json(*s, where + ".solver", entry.config);
        }
      } else {
        throw ConfigError(where + " must be an algorithm name or an object");
      }
      entry.config.mu = rc.experiment.mu;
      rc.experiment.solvers.push_back(std::move(entry));
    }
  } else {
    for (auto& entry : rc.experiment.solvers) entry.config = rc.solver;
  }

  if (auto it = doc.find("output"); it != doc.end()) {
    if (!it->is_object()) throw ConfigError("output must be an object");
    detail::reject_unknown(*it, {"instance", "binary_blob", "report", "trace", "timing"}, "output");
    detail::read_optional(*it, "instance", "output", rc.output.instance);
    detail::read_optional(*it, "binary_blob", "output", rc.output.binary_blob);
    detail::read_optional(*it, "report", "output", rc.output.report);
    detail::read_optional(*it, "trace", "output", rc.output.trace);
    detail::read_optional(*it, "timing", "output", rc.output.timing);
  }

  try {
    rc.solver.validate(rc.experiment.m);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  rc.experiment.validate();
  return rc;
}

std::string run_config_to_json(const RunConfig& c) {
  json doc;
  doc["scale"] = to_string(c.scale);
  doc["experiment"] = detail::experiment_to_json(c.experiment);
  doc["solver"] = detail::solver_config_to_json(c.solver);
  json solvers = json::array();
  for (const auto& entry : c.experiment.solvers) {
    solvers.push_back({{"algo", entry.algo}, {"solver", detail::solver_config_to_json(entry.config)}});
  }
  doc["solvers"] = std::move(solvers);
  doc["output"] = {{"instance", c.output.instance},
                   {"binary_blob", c.output.binary_blob},
                   {"report", c.output.report},
                   {"trace", c.output.trace},
                   {"timing", c.output.timing}};
  return doc.dump(2) + "\n";
}

std::string apply_override(std::string_view json_text, std::string_view assignment) {
  json doc = json_text.empty() ? json::object() : parse_document(json_text, "config");
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ConfigError("--set expects key=value, got '" + std::string(assignment) + "'");
  }
  const std::string key(assignment.substr(0, eq));
  const std::string text(assignment.substr(eq + 1));
  json value;
  try {
    value = json::parse(text);
  } catch (const json::parse_error&) {
    value = text;
  }

  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    if (!node->is_object()) {
      throw ConfigError("--set " + key + ": '" + key.substr(0, start ? start - 1 : 0) +
                        "' is not an object");
    }
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw ConfigError("--set " + key + ": empty path component");
    if (dot == std::string::npos) {
      (*node)[part] = std::move(value);
      break;
    }
    if (!node->contains(part)) (*node)[part] = json::object();
    node = &(*node)[part];
    start = dot + 1;
  }
  return doc.dump();
}

RunConfig resolve_run_config(std::string_view file_text, const std::vector<std::string>& sets,
                             const std::optional<Scale>& scale,
                             const std::optional<std::uint64_t>& seed) {
  std::string text = file_text.empty() ? std::string("{}") : std::string(file_text);
  if (!parse_document(text, "config").is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& s : sets) text = apply_override(text, s);
  if (scale) text = apply_override(text, "scale=\"" + to_string(*scale) + "\"");
  if (seed) text = apply_override(text, "experiment.seed=" + std::to_string(*seed));
  return parse_run_config(text);
}

SolverConfig solver_config_for(const RunConfig& config, const std::string& algo) {
  for (const auto& entry : config.experiment.solvers) {
    if (entry.algo == algo) return entry.config;
  }
  return config.solver;
}

}  // namespace bpiree
