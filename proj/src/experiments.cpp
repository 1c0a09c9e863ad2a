#include "bpiree/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <sstream>
#include <stdexcept>

#include <Eigen/QR>
#include <json.hpp>

#include "bpiree/baselines.hpp"
#include "bpiree/errors.hpp"
#include "bpiree/lp.hpp"
#include "bpiree/rng.hpp"
#include "config_json.hpp"

namespace bpiree {

using nlohmann::json;

namespace {

// Substreams of the experiment seed.
enum Stream : std::uint64_t { kMatrix = 1, kSignal = 2, kNoise = 3, kLeft = 4, kRight = 5 };

Eigen::MatrixXd gaussian_matrix(Rng& rng, Index rows, Index cols) {
  Eigen::MatrixXd M(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) M(i, j) = rng.normal();
  }
  return M;
}

Eigen::MatrixXd unit_column_gaussian(const ExperimentSpec& spec) {
  Rng rng(derive_seed(spec.seed, kMatrix));
  Eigen::MatrixXd A = gaussian_matrix(rng, spec.n, spec.q);
  for (Index j = 0; j < A.cols(); ++j) A.col(j) /= A.col(j).norm();
  return A;
}

Eigen::MatrixXd sensing_matrix(const ExperimentSpec& spec) {
  return spec.conditioning == Conditioning::Ill ? gen_illconditioned(spec)
                                                : unit_column_gaussian(spec);
}

Eigen::VectorXd sparse_column(Rng& rng, Index length, Index nonzeros) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(length);
  for (Index j : rng.sample_without_replacement(length, nonzeros)) x(j) = rng.normal();
  return x;
}

double nan() { return std::numeric_limits<double>::quiet_NaN(); }

// JSON has no NaN/∞; they are written as null.
json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json numbers(const std::vector<double>& values) {
  json out = json::array();
  for (double v : values) out.push_back(number_or_null(v));
  return out;
}

}  // namespace

std::string to_string(ExampleKind kind) {
  return kind == ExampleKind::LogLS ? "log_ls" : "matrix_lp";
}

std::string to_string(Conditioning conditioning) {
  return conditioning == Conditioning::Well ? "well" : "ill";
}

std::string to_string(Scale scale) { return scale == Scale::Desk ? "desk" : "paper"; }

ExperimentSpec ExperimentSpec::preset(ExampleKind example, Scale scale) {
  ExperimentSpec s;
  s.example = example;
  SolverConfig base;
  if (example == ExampleKind::LogLS) {
    s.n = scale == Scale::Desk ? 100 : 1000;
    s.q = scale == Scale::Desk ? 300 : 3000;
    s.t = 1;
    s.m = 1;
    s.sparsity = scale == Scale::Desk ? 5 : 50;
    s.lambda = 5e-4;
    s.eps_bar = 0.1;
    s.solvers = {{"bpiree", base}, {"irl1e1", base}, {"irl1", base}};
  } else {
    s.n = scale == Scale::Desk ? 50 : 100;
    s.q = scale == Scale::Desk ? 100 : 500;
    s.t = scale == Scale::Desk ? 10 : 50;
    s.m = scale == Scale::Desk ? 5 : 10;
    s.sparsity = static_cast<Index>(std::lround(0.02 * static_cast<double>(s.q)));
    s.lambda = 0.015;
    s.p = 0.1;
    s.mu = 0.1;
    base.mu = s.mu;
    s.solvers = {{"bpiree-lp", base}, {"pire-au", base}, {"pire-ps", base}};
  }
  return s;
}

void ExperimentSpec::validate() const {
  auto fail = [](const std::string& field, const std::string& rule) {
    throw ConfigError("experiment." + field + " " + rule);
  };
  if (n <= 0) fail("n", "must be > 0");
  if (q <= 0) fail("q", "must be > 0");
  if (t <= 0) fail("t", "must be > 0");
  if (example == ExampleKind::LogLS && t != 1) fail("t", "must be 1 for log_ls");
  if (m < 1) fail("m", "must be >= 1");
  if (m > dim()) fail("m", "must not exceed the number of unknowns (" + std::to_string(dim()) + ")");
  if (sparsity < 0) fail("sparsity", "must be >= 0");
  if (example == ExampleKind::LogLS && sparsity >= q) fail("sparsity", "must be < q");
  if (example == ExampleKind::MatrixLp && sparsity > q) fail("sparsity", "must be <= q");
  if (!(noise_scale >= 0.0) || !std::isfinite(noise_scale)) fail("noise_scale", "must be >= 0");
  if (conditioning == Conditioning::Ill && n > q) fail("n", "must be <= q for ill-conditioned data");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) fail("lambda", "must be >= 0");
  if (example == ExampleKind::LogLS && !(eps_bar > 0.0)) fail("eps_bar", "must be > 0");
  if (example == ExampleKind::MatrixLp && !(p > 0.0 && p < 1.0)) fail("p", "must lie in (0, 1)");
  if (!(mu > 0.0 && mu < 1.0)) fail("mu", "must lie in (0, 1)");
  for (std::size_t i = 0; i < solvers.size(); ++i) {
    const auto& entry = solvers[i];
    const std::string where = "solvers[" + std::to_string(i) + "]";
    const auto& known = known_algorithms();
    if (std::find(known.begin(), known.end(), entry.algo) == known.end()) {
      throw ConfigError(where + ".algo: unknown algorithm '" + entry.algo + "'");
    }
    if (entry.algo == "bpiree-lp" && example != ExampleKind::MatrixLp) {
      throw ConfigError(where + ".algo: bpiree-lp needs the matrix_lp example");
    }
    try {
      entry.config.validate(m);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(where + "." + e.what());
    }
  }
}

SensingData gen_gaussian_sensing(const ExperimentSpec& spec) {
  SensingData d;
  d.A = sensing_matrix(spec);
  Rng signal(derive_seed(spec.seed, kSignal));
  d.x_true = sparse_column(signal, spec.q, spec.sparsity);
  Rng noise(derive_seed(spec.seed, kNoise));
  d.b = d.A * d.x_true;
  if (spec.noise_scale != 0.0) {
    for (Index i = 0; i < d.b.size(); ++i) d.b(i) += spec.noise_scale * noise.normal();
  }
  return d;
}

Eigen::MatrixXd gen_illconditioned(const ExperimentSpec& spec) {
  if (spec.n <= 0 || spec.q <= 0) throw std::invalid_argument("gen_illconditioned: n, q must be > 0");
  if (spec.n > spec.q) throw std::invalid_argument("gen_illconditioned: requires n <= q");
  const Index n = spec.n;
  const Index q = spec.q;
  Rng left(derive_seed(spec.seed, kLeft));
  Rng right(derive_seed(spec.seed, kRight));
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr_u(gaussian_matrix(left, n, n));
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr_v(gaussian_matrix(right, q, n));
  const Eigen::MatrixXd U = qr_u.householderQ();
  const Eigen::MatrixXd V = qr_v.householderQ() * Eigen::MatrixXd::Identity(q, n);
  Eigen::VectorXd sigma(n);
  for (Index i = 0; i < n; ++i) sigma(i) = 1e-4 + static_cast<double>(i) / 10.0;
  return U * sigma.asDiagonal() * V.transpose();
}

MatrixData gen_matrix_problem(const ExperimentSpec& spec) {
  MatrixData d;
  d.A = sensing_matrix(spec);
  Rng signal(derive_seed(spec.seed, kSignal));
  d.X_true.resize(spec.q, spec.t);
  for (Index c = 0; c < spec.t; ++c) d.X_true.col(c) = sparse_column(signal, spec.q, spec.sparsity);
  Rng noise(derive_seed(spec.seed, kNoise));
  d.B = d.A * d.X_true;
  if (spec.noise_scale != 0.0) {
    for (Index c = 0; c < d.B.cols(); ++c) {
      for (Index i = 0; i < d.B.rows(); ++i) d.B(i, c) += spec.noise_scale * noise.normal();
    }
  }
  d.partition = BlockPartition::contiguous(spec.q * spec.t, spec.m);
  return d;
}

Instance generate_instance(const ExperimentSpec& spec) {
  spec.validate();
  if (spec.example == ExampleKind::LogLS) {
    SensingData d = gen_gaussian_sensing(spec);
    auto loss = std::make_shared<LeastSquares>(std::move(d.A), std::move(d.b));
    Problem problem(loss, PenaltySpec::log(spec.lambda, spec.eps_bar),
                    BlockPartition::contiguous(spec.q, spec.m));
    return Instance{std::move(problem), std::move(d.x_true)};
  }
  MatrixData d = gen_matrix_problem(spec);
  auto loss = std::make_shared<MatrixLeastSquares>(std::move(d.A), std::move(d.B));
  Problem problem(loss, PenaltySpec::smoothed_lp(spec.lambda, spec.p), std::move(d.partition));
  Eigen::VectorXd x_true = Eigen::Map<const Eigen::VectorXd>(d.X_true.data(), d.X_true.size());
  return Instance{std::move(problem), std::move(x_true)};
}

double rel_err(const Eigen::VectorXd& x, const Eigen::VectorXd& ref) {
  if (x.size() != ref.size()) throw std::invalid_argument("rel_err: length mismatch");
  const double denom = x.norm();
  if (denom == 0.0) return std::numeric_limits<double>::infinity();
  return (x - ref).norm() / denom;
}

double rel_err(const Eigen::MatrixXd& x, const Eigen::MatrixXd& ref) {
  if (x.rows() != ref.rows() || x.cols() != ref.cols()) {
    throw std::invalid_argument("rel_err: shape mismatch");
  }
  const double denom = x.norm();
  if (denom == 0.0) return std::numeric_limits<double>::infinity();
  return (x - ref).norm() / denom;
}

const std::vector<std::string>& known_algorithms() {
  static const std::vector<std::string> names = {"bpiree", "bpiree-lp", "pire",  "pire-ps",
                                                 "pire-au", "irl1",     "irl1e1"};
  return names;
}

SolveResult run_algorithm(const std::string& algo, const Problem& problem,
                          const SolverConfig& config, const Eigen::VectorXd& x0,
                          const Observer& observer) {
  if (algo == "bpiree") return solve(problem, config, x0, observer);
  if (algo == "bpiree-lp") return solve_lp(problem, config, x0, observer);
  if (algo == "pire") return pire_solve(problem, config, x0, observer);
  if (algo == "pire-ps") return pire_ps_solve(problem, config, x0, observer);
  if (algo == "pire-au") return pire_au_solve(problem, config, x0, observer);
  if (algo == "irl1") return irl1_solve(problem, config, x0, observer);
  if (algo == "irl1e1") return irl1e1_solve(problem, config, x0, observer);
  throw std::invalid_argument("unknown algorithm '" + algo + "'");
}

ComparisonReport run_comparison(const ExperimentSpec& spec) {
  return run_comparison(spec, generate_instance(spec));
}

ComparisonReport run_comparison(const ExperimentSpec& spec, const Instance& instance) {
  const Problem& problem = instance.problem;
  const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(problem.dim());
  ComparisonReport report;
  report.spec = spec;
  if (spec.solvers.empty()) return report;

  std::size_t ref_index = 0;
  for (std::size_t i = 0; i < spec.solvers.size(); ++i) {
    if (spec.solvers[i].algo == "bpiree" || spec.solvers[i].algo == "bpiree-lp") {
      ref_index = i;
      break;
    }
  }
  report.reference_algo = spec.solvers[ref_index].algo;

  // x̄ first, so that every solver's curve can be measured against it.
  Eigen::VectorXd x_ref;
  report.F_ref = nan();
  try {
    SolverConfig cfg = spec.solvers[ref_index].config;
    cfg.record_trace = false;
    SolveResult ref = run_algorithm(report.reference_algo, problem, cfg, x0);
    x_ref = std::move(ref.x);
    report.F_ref = ref.F;
  } catch (const std::exception&) {
    // Leaves x̄ empty; the reference row below records the error.
  }
  const double x_ref_norm = x_ref.size() > 0 ? x_ref.norm() : nan();

  for (const auto& entry : spec.solvers) {
    SolverRow row;
    row.algo = entry.algo;
    const auto started = std::chrono::steady_clock::now();
    try {
      Observer curves;
      if (x_ref.size() > 0) {
        curves = [&](const IterationView& view) {
          row.F_gap.push_back(std::abs(view.F - report.F_ref));
          row.x_gap.push_back((view.x - x_ref).norm() / x_ref_norm);
        };
      }
      SolveResult r = run_algorithm(entry.algo, problem, entry.config, x0, curves);
      row.status = to_string(r.status);
      row.iterations = r.iterations;
      row.passes = r.passes;
      row.F = r.F;
      row.retries = r.retries;
      row.message = r.message;
      row.rel_err_true = instance.x_true.size() > 0 ? rel_err(r.x, instance.x_true) : nan();
      row.rel_err_ref = x_ref.size() > 0 ? rel_err(r.x, x_ref) : nan();
      row.trace = std::move(r.trace);
    } catch (const std::exception& e) {
      row.status = "Error";
      row.message = e.what();
      row.F = nan();
      row.rel_err_true = nan();
      row.rel_err_ref = nan();
    }
    row.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::string ComparisonReport::to_json(bool with_timing) const {
  json doc;
  doc["experiment"] = detail::experiment_to_json(spec);
  doc["rng"] = Rng::kAlgorithm;
  doc["reference"] = reference_algo;
  doc["F_ref"] = number_or_null(F_ref);
  json rows_json = json::array();
  for (const auto& row : rows) {
    json r;
    r["algo"] = row.algo;
    r["status"] = row.status;
    r["iterations"] = row.iterations;
    r["passes"] = number_or_null(row.passes);
    r["F"] = number_or_null(row.F);
    r["rel_err_true"] = number_or_null(row.rel_err_true);
    r["rel_err_ref"] = number_or_null(row.rel_err_ref);
    r["retries"] = row.retries;
    r["message"] = row.message;
    if (with_timing) r["wall_seconds"] = row.wall_seconds;
    r["curves"] = {{"F_gap", numbers(row.F_gap)}, {"x_gap", numbers(row.x_gap)}};
    rows_json.push_back(std::move(r));
  }
  doc["solvers"] = std::move(rows_json);
  return doc.dump() + "\n";
}

std::string ComparisonReport::to_table() const {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof(line), "%-10s %-16s %10s %10s %14s %12s %12s\n", "algo", "status",
                "iterations", "passes", "F", "rel_err_true", "rel_err_ref");
  out << line;
  for (const auto& row : rows) {
    std::snprintf(line, sizeof(line), "%-10s %-16s %10lld %10.1f %14.6e %12.4e %12.4e\n",
                  row.algo.c_str(), row.status.c_str(), static_cast<long long>(row.iterations),
                  row.passes, row.F, row.rel_err_true, row.rel_err_ref);
    out << line;
  }
  return out.str();
}

}  // namespace bpiree
