#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "bpiree/instance_io.hpp"
#include "bpiree/solver.hpp"

namespace bpiree {

enum class ExampleKind {
  LogLS,     // ½‖Ax − b‖² + λΣ log(1 + |x_j|/ε̄)
  MatrixLp,  // ½‖AX − B‖²_F + λΣ (|X_ij| + ε_ij²)^p
};
enum class Conditioning { Well, Ill };
enum class Scale { Desk, Paper };

std::string to_string(ExampleKind kind);
std::string to_string(Conditioning conditioning);
std::string to_string(Scale scale);

struct SolverEntry {
  std::string algo;
  SolverConfig config;

  bool operator==(const SolverEntry&) const = default;
};

struct ExperimentSpec {
  ExampleKind example = ExampleKind::LogLS;
  Index n = 100;
  Index q = 300;
  Index t = 1;  // columns of X, MatrixLp only
  Index m = 1;  // number of contiguous blocks
  Index sparsity = 5;  // nonzeros of x (LogLS) or of each column of X (MatrixLp)
  double noise_scale = 1e-3;
  Conditioning conditioning = Conditioning::Well;
  std::uint64_t seed = 0;
  double lambda = 5e-4;
  double eps_bar = 0.1;  // LogLS
  double p = 0.1;        // MatrixLp
  double mu = 0.1;       // MatrixLp smoothing decay, copied into each solver config
  std::vector<SolverEntry> solvers;

  /// Desk: LogLS n=100, q=300, sparsity 5; MatrixLp n=50, q=100, t=10, m=5.
  /// Paper: LogLS n=1000, q=3000, sparsity 50; MatrixLp n=100, q=500, t=50,
  /// m=10. MatrixLp sparsity is round(0.02·q) per column. Solvers default to
  /// bpiree, irl1e1, irl1 (LogLS) and bpiree-lp, pire-au, pire-ps (MatrixLp).
  static ExperimentSpec preset(ExampleKind example, Scale scale = Scale::Desk);

  /// Throws ConfigError naming the offending field ("experiment.n must be > 0").
  void validate() const;

  /// Number of unknowns: q for LogLS, q·t for MatrixLp.
  Index dim() const { return example == ExampleKind::MatrixLp ? q * t : q; }

  bool operator==(const ExperimentSpec&) const = default;
};

struct SensingData {
  Eigen::MatrixXd A;  // n×q
  Eigen::VectorXd b;
  Eigen::VectorXd x_true;
};

/// A with i.i.d. N(0,1) entries scaled to unit column norms (or the
/// ill-conditioned A of gen_illconditioned() when spec.conditioning is Ill),
/// x_true with spec.sparsity N(0,1) entries at uniform positions, and
/// b = A·x_true + noise_scale·e. Fully determined by spec.seed.
SensingData gen_gaussian_sensing(const ExperimentSpec& spec);

/// A = UΣVᵀ with σ_i = 1e-4 + (i − 1)/10, U ∈ ℝ^{n×n} and V ∈ ℝ^{q×n}
/// orthonormalized (Householder QR) from seeded Gaussian matrices.
/// Throws std::invalid_argument when n > q.
Eigen::MatrixXd gen_illconditioned(const ExperimentSpec& spec);

struct MatrixData {
  Eigen::MatrixXd A;       // n×q, unit columns
  Eigen::MatrixXd B;       // n×t
  Eigen::MatrixXd X_true;  // q×t
  BlockPartition partition;
};

/// Per-column sparse X_true, B = A·X_true + noise_scale·E, and m contiguous
/// blocks of the column-major flattening of X.
MatrixData gen_matrix_problem(const ExperimentSpec& spec);

/// Problem and planted solution for `spec`: log penalty with contiguous
/// blocks (LogLS) or smoothed lp on the flattened matrix (MatrixLp).
Instance generate_instance(const ExperimentSpec& spec);

/// ‖x − ref‖/‖x‖ (Frobenius for matrices); +∞ when ‖x‖ = 0.
double rel_err(const Eigen::VectorXd& x, const Eigen::VectorXd& ref);
double rel_err(const Eigen::MatrixXd& x, const Eigen::MatrixXd& ref);

/// bpiree, bpiree-lp, pire, pire-ps, pire-au, irl1, irl1e1.
const std::vector<std::string>& known_algorithms();

/// Dispatches to the named solver. Throws std::invalid_argument for an
/// unknown name.
SolveResult run_algorithm(const std::string& algo, const Problem& problem,
                          const SolverConfig& config, const Eigen::VectorXd& x0,
                          const Observer& observer = {});

struct SolverRow {
  std::string algo;
  std::string status;  // to_string(SolveStatus), or "Error" when the solver threw
  std::int64_t iterations = 0;
  double passes = 0.0;
  double F = 0.0;
  double rel_err_true = 0.0;  // rel_err(x, x_true)
  double rel_err_ref = 0.0;   // rel_err(x, x̄)
  double wall_seconds = 0.0;
  std::int64_t retries = 0;
  std::string message;
  std::vector<double> F_gap;  // |F(x^k) − F(x̄)|, k = 1, 2, ...
  std::vector<double> x_gap;  // ‖x^k − x̄‖/‖x̄‖
  std::vector<TraceRecord> trace;
};

struct ComparisonReport {
  ExperimentSpec spec;
  std::string reference_algo;  // the solver whose output is x̄
  double F_ref = 0.0;
  std::vector<SolverRow> rows;

  /// Wall time is included only when `with_timing`, so that reports of
  /// identical specs are byte-identical by default.
  std::string to_json(bool with_timing = false) const;
  std::string to_table() const;
};

/// Runs every configured solver from x0 = 0 on the instance generated from
/// spec. x̄ is the output of the first bpiree/bpiree-lp entry (the first
/// entry if there is none). A solver that throws gets an "Error" row.
ComparisonReport run_comparison(const ExperimentSpec& spec);

/// Same, on an existing instance; spec supplies only the solver list.
ComparisonReport run_comparison(const ExperimentSpec& spec, const Instance& instance);

}  // namespace bpiree
