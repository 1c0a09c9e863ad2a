#include <memory>
#include <span>
#include <string>

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bpiree/errors.hpp"
#include "bpiree/experiments.hpp"
#include "bpiree/instance_io.hpp"
#include "bpiree/prox.hpp"
#include "bpiree/run_config.hpp"
#include "bpiree/solver.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace bpiree;

namespace {

std::span<const double> eps_span(const std::optional<Eigen::VectorXd>& eps) {
  if (!eps) return {};
  return {eps->data(), static_cast<std::size_t>(eps->size())};
}

BlockPartition make_partition(Index n, const py::object& blocks) {
  if (blocks.is_none()) return BlockPartition::single(n);
  if (py::isinstance<py::int_>(blocks)) return BlockPartition::contiguous(n, blocks.cast<Index>());
  return BlockPartition(blocks.cast<std::vector<std::vector<Index>>>(), n);
}

}  // namespace

PYBIND11_MODULE(_bpiree, m) {
  m.doc() = "Block proximal iteratively reweighted solvers";

  py::register_exception<NumericalFailure>(m, "NumericalFailure", PyExc_ArithmeticError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);
  py::register_exception<UnsupportedOperation>(m, "UnsupportedOperation", PyExc_NotImplementedError);

  m.def("prox_weighted_abs", &prox_weighted_abs, "v"_a, "tau"_a);
  m.def(
      "block_prox_step",
      [](const Eigen::VectorXd& x_hat, const Eigen::VectorXd& grad, double alpha,
         const Eigen::VectorXd& weights) {
        return block_prox_step(x_hat, grad, alpha, weights, ScalarConvex::abs());
      },
      "x_hat"_a, "grad"_a, "alpha"_a, "weights"_a,
      "Block prox step with g = |.|.");
  m.def("extrapolation_bound", &extrapolation_bound, "L_prev"_a, "L_curr"_a, "gamma"_a,
        "delta"_a);

  py::class_<PenaltySpec>(m, "Penalty")
      .def_static("log", &PenaltySpec::log, "lam"_a, "eps_bar"_a)
      .def_static("smoothed_lp", &PenaltySpec::smoothed_lp, "lam"_a, "p"_a)
      .def_property_readonly("lam", &PenaltySpec::lambda)
      .def("__repr__", &PenaltySpec::describe);

  py::class_<Problem>(m, "Problem")
      .def_static(
          "least_squares",
          [](Eigen::MatrixXd A, Eigen::VectorXd b, const PenaltySpec& penalty, py::object blocks) {
            const Index n = A.cols();
            auto loss = std::make_shared<LeastSquares>(std::move(A), std::move(b));
            return Problem(std::move(loss), penalty, make_partition(n, blocks));
          },
          "A"_a, "b"_a, "penalty"_a, "blocks"_a = py::none(),
          "blocks: None (one block), an int (contiguous blocks) or a list of index lists.")
      .def_static(
          "matrix_least_squares",
          [](Eigen::MatrixXd A, Eigen::MatrixXd B, const PenaltySpec& penalty, py::object blocks) {
            const Index n = A.cols() * B.cols();
            auto loss = std::make_shared<MatrixLeastSquares>(std::move(A), std::move(B));
            return Problem(std::move(loss), penalty, make_partition(n, blocks));
          },
          "A"_a, "B"_a, "penalty"_a, "blocks"_a = py::none())
      .def_property_readonly("dim", &Problem::dim)
      .def_property_readonly("num_blocks", &Problem::num_blocks)
      .def_property_readonly("blocks",
                             [](const Problem& p) { return p.partition().blocks(); })
      .def("objective",
           [](const Problem& p, const Eigen::VectorXd& x, std::optional<Eigen::VectorXd> eps) {
             return p.objective(x, eps_span(eps));
           },
           "x"_a, "eps"_a = py::none())
      .def("block_gradient", &Problem::block_gradient, "x"_a, "block"_a)
      .def("block_lipschitz", &Problem::block_lipschitz, "block"_a)
      .def("gradient", [](const Problem& p, const Eigen::VectorXd& x) { return p.loss().gradient(x); })
      .def("weights",
           [](const Problem& p, const Eigen::VectorXd& x, std::optional<Eigen::VectorXd> eps) {
             return penalty_weights(p.penalty(), x, eps_span(eps));
           },
           "x"_a, "eps"_a = py::none())
      .def("stationarity_residual",
           [](const Problem& p, const Eigen::VectorXd& x, std::optional<Eigen::VectorXd> eps) {
             return stationarity_residual(p, x, penalty_weights(p.penalty(), x, eps_span(eps)));
           },
           "x"_a, "eps"_a = py::none());

  py::class_<SolverConfig>(m, "SolverConfig")
      .def(py::init<>())
      .def_readwrite("gamma", &SolverConfig::gamma)
      .def_readwrite("delta", &SolverConfig::delta)
      .def_readwrite("T", &SolverConfig::T)
      .def_readwrite("max_iter", &SolverConfig::max_iter)
      .def_readwrite("tol", &SolverConfig::tol)
      .def_readwrite("safeguard", &SolverConfig::safeguard)
      .def_readwrite("fista_restart", &SolverConfig::fista_restart)
      .def_readwrite("mu", &SolverConfig::mu)
      .def_readwrite("eps0", &SolverConfig::eps0)
      .def_readwrite("record_trace", &SolverConfig::record_trace)
      .def_readwrite("support_window", &SolverConfig::support_window)
      .def_property(
          "shuffled",
          [](const SolverConfig& c) { return c.schedule.kind == Schedule::Kind::ShuffledCycles; },
          [](SolverConfig& c, bool on) {
            c.schedule.kind = on ? Schedule::Kind::ShuffledCycles : Schedule::Kind::Cyclic;
          })
      .def_property(
          "schedule_seed", [](const SolverConfig& c) { return c.schedule.seed; },
          [](SolverConfig& c, std::uint64_t s) { c.schedule.seed = s; })
      .def_property(
          "momentum",
          [](const SolverConfig& c) -> std::string {
            switch (c.momentum) {
              case MomentumRule::Fista: return "fista";
              case MomentumRule::Bound: return "bound";
              case MomentumRule::None: return "none";
              case MomentumRule::FistaUncapped: return "fista_uncapped";
            }
            return "fista";
          },
          [](SolverConfig& c, const std::string& s) {
            if (s == "fista") c.momentum = MomentumRule::Fista;
            else if (s == "bound") c.momentum = MomentumRule::Bound;
            else if (s == "none") c.momentum = MomentumRule::None;
            else if (s == "fista_uncapped") c.momentum = MomentumRule::FistaUncapped;
            else throw py::value_error("momentum must be fista, bound, none or fista_uncapped");
          })
      .def_property(
          "stop_rule",
          [](const SolverConfig& c) {
            return std::string(c.stop_rule == StopRule::Cycle ? "cycle" : "iteration");
          },
          [](SolverConfig& c, const std::string& s) {
            if (s == "cycle") c.stop_rule = StopRule::Cycle;
            else if (s == "iteration") c.stop_rule = StopRule::Iteration;
            else throw py::value_error("stop_rule must be cycle or iteration");
          });

  py::class_<TraceRecord>(m, "TraceRecord")
      .def_readonly("k", &TraceRecord::k)
      .def_readonly("F", &TraceRecord::F)
      .def_readonly("step_rel", &TraceRecord::step_rel)
      .def_readonly("residual", &TraceRecord::residual)
      .def_readonly("beta", &TraceRecord::beta)
      .def_readonly("block", &TraceRecord::block)
      .def_readonly("retried", &TraceRecord::retried);

  py::class_<SolveResult>(m, "SolveResult")
      .def_readonly("x", &SolveResult::x)
      .def_readonly("eps", &SolveResult::eps)
      .def_readonly("trace", &SolveResult::trace)
      .def_property_readonly("status", [](const SolveResult& r) { return to_string(r.status); })
      .def_readonly("iterations", &SolveResult::iterations)
      .def_readonly("passes", &SolveResult::passes)
      .def_readonly("F", &SolveResult::F)
      .def_readonly("last_step_rel", &SolveResult::last_step_rel)
      .def_readonly("retries", &SolveResult::retries)
      .def_readonly("message", &SolveResult::message)
      .def_property_readonly("support_fixed", [](const SolveResult& r) -> std::optional<bool> {
        if (!r.support) return std::nullopt;
        return r.support->fixed;
      });

  m.def("algorithms", &known_algorithms);
  m.def(
      "solve",
      [](const Problem& problem, const std::string& algo, const SolverConfig& config,
         std::optional<Eigen::VectorXd> x0) {
        const Eigen::VectorXd start = x0 ? *x0 : Eigen::VectorXd::Zero(problem.dim());
        py::gil_scoped_release release;
        return run_algorithm(algo, problem, config, start);
      },
      "problem"_a, "algo"_a = "bpiree", "config"_a = SolverConfig(), "x0"_a = py::none());

  py::class_<Instance>(m, "Instance")
      .def_readonly("problem", &Instance::problem)
      .def_readonly("x_true", &Instance::x_true)
      .def("to_json", [](const Instance& i) { return instance_to_json(i); })
      .def_static("from_json",
                  [](const std::string& text) { return instance_from_json(text); }, "text"_a);

  m.def(
      "generate",
      [](const std::string& config_json) {
        return generate_instance(parse_run_config(config_json).experiment);
      },
      "config_json"_a = "{}", "Instance generated from a run-config JSON document.");
  m.def(
      "compare",
      [](const std::string& config_json) {
        const RunConfig rc = parse_run_config(config_json);
        py::gil_scoped_release release;
        return run_comparison(rc.experiment).to_json();
      },
      "config_json"_a = "{}", "Runs the configured solvers and returns the JSON report.");
  m.def(
      "normalize_config", [](const std::string& text) { return run_config_to_json(parse_run_config(text)); },
      "config_json"_a);
}
