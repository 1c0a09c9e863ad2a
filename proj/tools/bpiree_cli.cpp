// bpiree: generate synthetic instances, run one solver, or compare solvers.
//
//   bpiree generate --config cfg.json --out instance.json
//   bpiree solve    --instance instance.json --algo bpiree --trace trace.csv
//   bpiree compare  --config cfg.json --out report.json --seed 7
//
// Exit codes: 0 success (solve: Converged), 2 bad arguments or config,
// 3 I/O failure, 4 solve hit max_iter, 5 numerical failure, 1 anything else.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "bpiree/errors.hpp"
#include "bpiree/experiments.hpp"
#include "bpiree/instance_io.hpp"
#include "bpiree/run_config.hpp"
#include "bpiree/trace_csv.hpp"

namespace {

using namespace bpiree;

enum Exit : int {
  kOk = 0,
  kFailure = 1,
  kBadConfig = 2,
  kIoFailure = 3,
  kMaxIter = 4,
  kNumerical = 5,
};

struct CommonOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string trace;
  std::string algo;
  std::string scale;
  std::vector<std::string> sets;
  std::string instance;
};

std::shared_ptr<spdlog::logger> make_logger() {
  auto log = spdlog::stderr_logger_st("bpiree");
  log->set_pattern("[%l] %v");
  const char* env = std::getenv("BPIREE_LOG");
  const std::string level = env ? env : "info";
  if (level == "error") {
    log->set_level(spdlog::level::err);
  } else if (level == "debug") {
    log->set_level(spdlog::level::debug);
  } else {
    log->set_level(spdlog::level::info);
    if (level != "info") log->warn("BPIREE_LOG='{}' not recognized, using info", level);
  }
  return log;
}

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config, "JSON run config");
  cmd->add_option("--seed", o.seed, "experiment seed (overrides the config)");
  cmd->add_option("--scale", o.scale, "preset size: desk or paper")
      ->check(CLI::IsMember({"desk", "paper"}));
  cmd->add_option("--set", o.sets, "override a config field, key=value (repeatable)");
}

RunConfig load_config(const CommonOptions& o) {
  const std::string text = o.config.empty() ? std::string() : read_file(o.config);
  std::optional<Scale> scale;
  if (o.scale == "desk") scale = Scale::Desk;
  if (o.scale == "paper") scale = Scale::Paper;
  return resolve_run_config(text, o.sets, scale, o.seed);
}

Observer progress_logger(spdlog::logger& log, const std::string& algo) {
  if (!log.should_log(spdlog::level::info)) return {};
  return [&log, algo](const IterationView& view) {
    if (view.k % 1000 == 0) log.info("{} k={} F={}", algo, view.k, format_double(view.F));
  };
}

int cmd_generate(const CommonOptions& o, spdlog::logger& log) {
  const RunConfig rc = load_config(o);
  const std::string out = o.out.empty() ? rc.output.instance : o.out;
  if (out.empty()) throw ConfigError("output.instance (or --out) is required");
  const Instance instance = generate_instance(rc.experiment);
  std::optional<std::filesystem::path> blob;
  if (!rc.output.binary_blob.empty()) blob = rc.output.binary_blob;
  write_instance(out, instance, blob);
  log.info("wrote {} (n={}, blocks={})", out, instance.problem.dim(), instance.problem.num_blocks());
  return kOk;
}

int cmd_solve(const CommonOptions& o, spdlog::logger& log) {
  const RunConfig rc = load_config(o);
  std::string algo = o.algo;
  if (algo.empty()) {
    algo = rc.experiment.solvers.empty() ? "bpiree" : rc.experiment.solvers.front().algo;
  }
  const auto& known = known_algorithms();
  if (std::find(known.begin(), known.end(), algo) == known.end()) {
    throw ConfigError("--algo: unknown algorithm '" + algo + "'");
  }
  const std::string instance_path = o.instance.empty() ? rc.output.instance : o.instance;
  const Instance instance =
      instance_path.empty() ? generate_instance(rc.experiment) : read_instance(instance_path);
  const Problem& problem = instance.problem;

  SolverConfig config = solver_config_for(rc, algo);
  const std::string trace_path = o.trace.empty() ? rc.output.trace : o.trace;
  config.record_trace = !trace_path.empty();
  config.record_timing = rc.output.timing;
  try {
    config.validate(problem.num_blocks());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(problem.dim());
  const SolveResult r = run_algorithm(algo, problem, config, x0, progress_logger(log, algo));

  std::span<const double> eps;
  if (r.eps.size() > 0) eps = {r.eps.data(), static_cast<std::size_t>(r.eps.size())};
  const Eigen::VectorXd w = penalty_weights(problem.penalty(), r.x, eps);
  const double residual = stationarity_residual(problem, r.x, w);

  if (!trace_path.empty()) {
    std::ostringstream csv;
    write_trace_csv(csv, r.trace);
    write_file_atomic(trace_path, csv.str());
  }
  std::cout << algo << ' ' << r.iterations << ' ' << format_double(r.F) << ' '
            << format_double(r.last_step_rel) << ' ' << format_double(residual) << ' '
            << to_string(r.status) << '\n';
  if (!r.message.empty()) log.error("{}", r.message);
  switch (r.status) {
    case SolveStatus::Converged:
      return kOk;
    case SolveStatus::MaxIter:
      return kMaxIter;
    case SolveStatus::NumericalFailure:
      return kNumerical;
  }
  return kFailure;
}

int cmd_compare(const CommonOptions& o, spdlog::logger& log) {
  RunConfig rc = load_config(o);
  const std::string report_path = o.out.empty() ? rc.output.report : o.out;
  const std::string trace_path = o.trace.empty() ? rc.output.trace : o.trace;
  for (auto& entry : rc.experiment.solvers) {
    entry.config.record_trace = !trace_path.empty();
    entry.config.record_timing = rc.output.timing;
  }
  const Instance instance = o.instance.empty() ? generate_instance(rc.experiment)
                                               : read_instance(o.instance);
  const ComparisonReport report = run_comparison(rc.experiment, instance);

  if (!report_path.empty()) write_file_atomic(report_path, report.to_json(rc.output.timing));
  if (!trace_path.empty()) {
    std::vector<std::pair<std::string, std::vector<TraceRecord>>> traces;
    for (const auto& row : report.rows) traces.emplace_back(row.algo, row.trace);
    std::ostringstream csv;
    write_merged_trace_csv(csv, traces);
    write_file_atomic(trace_path, csv.str());
  }
  std::cout << report.to_table();

  int code = kOk;
  for (const auto& row : report.rows) {
    if (row.status == "Error") {
      log.error("{} failed: {}", row.algo, row.message);
      code = kFailure;
    }
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Block proximal iteratively reweighted solvers with extrapolation"};
  app.require_subcommand(1);

  CommonOptions gen_opts, solve_opts, compare_opts;
  auto* gen = app.add_subcommand("generate", "write a synthetic problem instance");
  add_common(gen, gen_opts);
  gen->add_option("--out", gen_opts.out, "instance JSON path");

  auto* sol = app.add_subcommand("solve", "run one solver and print a summary line");
  add_common(sol, solve_opts);
  sol->add_option("--instance", solve_opts.instance, "instance JSON (default: generate from config)");
  sol->add_option("--algo", solve_opts.algo,
                  "bpiree, bpiree-lp, pire, pire-ps, pire-au, irl1 or irl1e1");
  sol->add_option("--trace", solve_opts.trace, "trace CSV path");

  auto* cmp = app.add_subcommand("compare", "run every configured solver on one instance");
  add_common(cmp, compare_opts);
  cmp->add_option("--instance", compare_opts.instance, "instance JSON (default: generate from config)");
  cmp->add_option("--out", compare_opts.out, "JSON report path");
  cmp->add_option("--trace", compare_opts.trace, "merged trace CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kBadConfig;
  }

  auto log = make_logger();
  try {
    if (gen->parsed()) return cmd_generate(gen_opts, *log);
    if (sol->parsed()) return cmd_solve(solve_opts, *log);
    return cmd_compare(compare_opts, *log);
  } catch (const IoError& e) {
    log->error("{}", e.what());
    return kIoFailure;
  } catch (const std::invalid_argument& e) {
    log->error("{}", e.what());
    return kBadConfig;
  } catch (const std::exception& e) {
    log->error("{}", e.what());
    return kFailure;
  }
}
