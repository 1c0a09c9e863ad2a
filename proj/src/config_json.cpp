#include "config_json.hpp"

#include "json_util.hpp"

namespace bpiree::detail {

using nlohmann::json;

namespace {

std::string join(const std::string& prefix, const char* key) {
  return prefix.empty() ? key : prefix + "." + key;
}

std::string momentum_name(MomentumRule rule) {
  switch (rule) {
    case MomentumRule::Fista:
      return "fista";
    case MomentumRule::Bound:
      return "bound";
    case MomentumRule::None:
      return "none";
    case MomentumRule::FistaUncapped:
      return "fista_uncapped";
  }
  return "fista";
}

}  // namespace

ExampleKind parse_example(const std::string& text, const std::string& field) {
  if (text == "log_ls") return ExampleKind::LogLS;
  if (text == "matrix_lp") return ExampleKind::MatrixLp;
  throw ConfigError(field + " must be \"log_ls\" or \"matrix_lp\", got \"" + text + "\"");
}

Scale parse_scale(const std::string& text, const std::string& field) {
  if (text == "desk") return Scale::Desk;
  if (text == "paper") return Scale::Paper;
  throw ConfigError(field + " must be \"desk\" or \"paper\", got \"" + text + "\"");
}

json solver_config_to_json(const SolverConfig& c) {
  return {
      {"gamma", c.gamma},
      {"delta", c.delta},
      {"schedule", c.schedule.kind == Schedule::Kind::Cyclic ? "cyclic" : "shuffled"},
      {"schedule_seed", c.schedule.seed},
      {"T", c.T},
      {"max_iter", c.max_iter},
      {"tol", c.tol},
      {"safeguard", c.safeguard},
      {"fista_restart", c.fista_restart},
      {"eps0", c.eps0},
      {"momentum", momentum_name(c.momentum)},
      {"stop_rule", c.stop_rule == StopRule::Cycle ? "cycle" : "iteration"},
      {"support_window", c.support_window},
  };
}

void solver_config_from_json(const json& j, const std::string& prefix, SolverConfig& c) {
  if (!j.is_object()) throw ConfigError(prefix + " must be an object");
  reject_unknown(j,
                 {"gamma", "delta", "schedule", "schedule_seed", "T", "max_iter", "tol",
                  "safeguard", "fista_restart", "eps0", "momentum", "stop_rule",
                  "support_window"},
                 prefix);
  read_optional(j, "gamma", prefix, c.gamma);
  read_optional(j, "delta", prefix, c.delta);
  if (auto it = j.find("schedule"); it != j.end()) {
    const auto s = as<std::string>(*it, join(prefix, "schedule"));
    if (s == "cyclic") {
      c.schedule.kind = Schedule::Kind::Cyclic;
    } else if (s == "shuffled") {
      c.schedule.kind = Schedule::Kind::ShuffledCycles;
    } else {
      throw ConfigError(join(prefix, "schedule") + " must be \"cyclic\" or \"shuffled\"");
    }
  }
  read_optional(j, "schedule_seed", prefix, c.schedule.seed);
  read_optional(j, "T", prefix, c.T);
  read_optional(j, "max_iter", prefix, c.max_iter);
  read_optional(j, "tol", prefix, c.tol);
  read_optional(j, "safeguard", prefix, c.safeguard);
  read_optional(j, "fista_restart", prefix, c.fista_restart);
  read_optional(j, "eps0", prefix, c.eps0);
  if (auto it = j.find("momentum"); it != j.end()) {
    const auto s = as<std::string>(*it, join(prefix, "momentum"));
    if (s == "fista") {
      c.momentum = MomentumRule::Fista;
    } else if (s == "bound") {
      c.momentum = MomentumRule::Bound;
    } else if (s == "none") {
      c.momentum = MomentumRule::None;
    } else if (s == "fista_uncapped") {
      c.momentum = MomentumRule::FistaUncapped;
    } else {
      throw ConfigError(join(prefix, "momentum") +
                        " must be \"fista\", \"bound\", \"none\" or \"fista_uncapped\"");
    }
  }
  if (auto it = j.find("stop_rule"); it != j.end()) {
    const auto s = as<std::string>(*it, join(prefix, "stop_rule"));
    if (s == "cycle") {
      c.stop_rule = StopRule::Cycle;
    } else if (s == "iteration") {
      c.stop_rule = StopRule::Iteration;
    } else {
      throw ConfigError(join(prefix, "stop_rule") + " must be \"cycle\" or \"iteration\"");
    }
  }
  read_optional(j, "support_window", prefix, c.support_window);
}

json experiment_to_json(const ExperimentSpec& s) {
  return {
      {"example", s.example == ExampleKind::LogLS ? "log_ls" : "matrix_lp"},
      {"n", s.n},
      {"q", s.q},
      {"t", s.t},
      {"m", s.m},
      {"sparsity", s.sparsity},
      {"noise_scale", s.noise_scale},
      {"conditioning", s.conditioning == Conditioning::Well ? "well" : "ill"},
      {"seed", s.seed},
      {"lambda", s.lambda},
      {"eps_bar", s.eps_bar},
      {"p", s.p},
      {"mu", s.mu},
  };
}

void experiment_from_json(const json& j, const std::string& prefix, ExperimentSpec& s) {
  if (!j.is_object()) throw ConfigError(prefix + " must be an object");
  reject_unknown(j,
                 {"example", "n", "q", "t", "m", "sparsity", "noise_scale", "conditioning", "seed",
                  "lambda", "eps_bar", "p", "mu"},
                 prefix);
  if (auto it = j.find("example"); it != j.end()) {
    s.example = parse_example(as<std::string>(*it, join(prefix, "example")),
                              join(prefix, "example"));
  }
  read_optional(j, "n", prefix, s.n);
  read_optional(j, "q", prefix, s.q);
  read_optional(j, "t", prefix, s.t);
  read_optional(j, "m", prefix, s.m);
  read_optional(j, "sparsity", prefix, s.sparsity);
  read_optional(j, "noise_scale", prefix, s.noise_scale);
  if (auto it = j.find("conditioning"); it != j.end()) {
    const auto c = as<std::string>(*it, join(prefix, "conditioning"));
    if (c == "well") {
      s.conditioning = Conditioning::Well;
    } else if (c == "ill") {
      s.conditioning = Conditioning::Ill;
    } else {
      throw ConfigError(join(prefix, "conditioning") + " must be \"well\" or \"ill\"");
    }
  }
  read_optional(j, "seed", prefix, s.seed);
  read_optional(j, "lambda", prefix, s.lambda);
  read_optional(j, "eps_bar", prefix, s.eps_bar);
  read_optional(j, "p", prefix, s.p);
  read_optional(j, "mu", prefix, s.mu);
}

}  // namespace bpiree::detail
