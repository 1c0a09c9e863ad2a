#include <cmath>
#include <limits>
#include <memory>
#include <random>
#include <vector>

#include <doctest.h>

#include "bpiree/lp.hpp"
#include "bpiree/support.hpp"
#include "test_util.hpp"

using namespace bpiree;

namespace {

struct Planted {
  Problem problem;
  Eigen::VectorXd x_true;
};

// Column-sparse X (q×t, `per_col` nonzeros with magnitude >= 0.5) observed as
// B = AX + 1e-3·E with unit-column Gaussian A.
Planted planted_matrix(unsigned seed, Index n, Index q, Index t, Index per_col, Index m,
                       double lambda) {
  std::mt19937 gen(seed);
  Eigen::MatrixXd A = testutil::random_matrix(gen, n, q);
  A.colwise().normalize();
  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(q, t);
  std::uniform_real_distribution<double> mag(0.5, 1.5);
  std::bernoulli_distribution sign(0.5);
  for (Index c = 0; c < t; ++c) {
    std::vector<Index> rows(static_cast<std::size_t>(q));
    for (Index r = 0; r < q; ++r) rows[static_cast<std::size_t>(r)] = r;
    std::shuffle(rows.begin(), rows.end(), gen);
    for (Index i = 0; i < per_col; ++i) {
      X(rows[static_cast<std::size_t>(i)], c) = (sign(gen) ? 1 : -1) * mag(gen);
    }
  }
  const Eigen::MatrixXd B = A * X + 1e-3 * testutil::random_matrix(gen, n, t);
  auto loss = std::make_shared<MatrixLeastSquares>(A, B);
  return {Problem(loss, PenaltySpec::smoothed_lp(lambda, 0.5),
                  BlockPartition::contiguous(q * t, m)),
          Eigen::Map<const Eigen::VectorXd>(X.data(), q * t)};
}

}  // namespace

TEST_CASE("lp_weights hand values") {
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(1);
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(1);
  CHECK(lp_weights(zero, one, 1.0, 0.5)(0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(lp_weights(zero, one, 0.015, 0.1)(0) == doctest::Approx(0.0015).epsilon(1e-14));
  CHECK(lp_weights(zero, one, 0.0, 0.1)(0) == 0.0);

  double prev = std::numeric_limits<double>::infinity();
  for (double x : {1e6, 2e6, 4e6, 8e6}) {
    const double w = lp_weights(Eigen::VectorXd::Constant(1, x), one, 1.0, 0.3)(0);
    CHECK(w == doctest::Approx(0.3 * std::pow(x, -0.7)).epsilon(1e-5));
    CHECK(w < prev);
    prev = w;
  }
}

TEST_CASE("lp_weights argument checks") {
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(1);
  CHECK_THROWS_AS(lp_weights(one, Eigen::VectorXd::Zero(1), 1.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(lp_weights(one, -one, 1.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(lp_weights(one, one, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(lp_weights(one, Eigen::VectorXd::Ones(2), 1.0, 0.5), std::invalid_argument);
}

TEST_CASE("tiny smoothing factors give an infinite weight that pins zero") {
  const Eigen::VectorXd eps = Eigen::VectorXd::Constant(1, std::numeric_limits<double>::denorm_min());
  const double w = lp_weights(Eigen::VectorXd::Zero(1), eps, 1.0, 0.5)(0);
  CHECK(std::isinf(w));
  CHECK(std::isfinite(lp_weights(Eigen::VectorXd::Ones(1), eps, 1.0, 0.5)(0)));
}

TEST_CASE("update_epsilon hand values") {
  CHECK(update_epsilon(Eigen::VectorXd::Zero(1), Eigen::VectorXd::Constant(1, 0.5), 0.1)(0) == 0.5);
  CHECK(update_epsilon(Eigen::VectorXd::Ones(1), Eigen::VectorXd::Ones(1), 0.1)(0) ==
        doctest::Approx(0.316228).epsilon(1e-6));
  Eigen::VectorXd eps = Eigen::VectorXd::Constant(1, 0.8);
  for (int t = 1; t <= 20; ++t) {
    eps = update_epsilon(Eigen::VectorXd::Ones(1), eps, 0.3);
    CHECK(eps(0) == doctest::Approx(std::pow(0.3, t / 2.0) * 0.8).epsilon(1e-13));
  }
  eps = Eigen::VectorXd::Constant(1, std::numeric_limits<double>::denorm_min());
  CHECK(update_epsilon(Eigen::VectorXd::Ones(1), eps, 0.1)(0) > 0.0);
  CHECK_THROWS_AS(update_epsilon(Eigen::VectorXd::Ones(1), Eigen::VectorXd::Ones(1), 1.0),
                  std::invalid_argument);
}

TEST_CASE("update_epsilon branches on exact zeros") {
  std::mt19937 gen(17);
  std::uniform_real_distribution<double> E(1e-3, 2.0), Mu(0.01, 0.99);
  std::bernoulli_distribution zero(0.5);
  for (int event = 0; event < 1000; ++event) {
    const double mu = Mu(gen);
    Eigen::VectorXd x(5), eps(5);
    for (Index j = 0; j < 5; ++j) {
      x(j) = zero(gen) ? 0.0 : testutil::random_vector(gen, 1)(0);
      eps(j) = E(gen);
    }
    const Eigen::VectorXd out = update_epsilon(x, eps, mu);
    for (Index j = 0; j < 5; ++j) {
      if (x(j) == 0.0) {
        CHECK(out(j) == eps(j));
      } else {
        CHECK(out(j) == eps(j) * std::sqrt(mu));
      }
    }
  }
}

TEST_CASE("support_monitor hand values") {
  std::vector<SignVector> constant(150, SignVector{1, 0, -1});
  auto r = support_monitor(constant, 100);
  CHECK(r.fixed);
  CHECK(r.K_observed == 1);
  CHECK(r.sign == SignVector{1, 0, -1});

  std::vector<SignVector> flip(50, SignVector{1, 0});
  flip.resize(200, SignVector{-1, 0});
  r = support_monitor(flip, 100);
  CHECK(r.fixed);
  CHECK(r.K_observed == 51);

  r = support_monitor(flip, 151);
  CHECK_FALSE(r.fixed);
  CHECK_FALSE(r.K_observed.has_value());
  CHECK(support_monitor(std::span<const SignVector>(), 5).sign.empty());
  CHECK_THROWS_AS(support_monitor(flip, 0), std::invalid_argument);
}

TEST_CASE("SupportTracker agrees with support_monitor") {
  std::mt19937 gen(23);
  std::uniform_int_distribution<int> pattern(0, 2), length(1, 30);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<SignVector> history;
    SupportTracker tracker(20);
    std::int64_t k = 0;
    for (int run = 0; run < 8; ++run) {
      const SignVector s{static_cast<std::int8_t>(pattern(gen) - 1),
                         static_cast<std::int8_t>(pattern(gen) - 1)};
      for (int i = length(gen); i > 0; --i) {
        history.push_back(s);
        tracker.record(++k, s);
      }
      const auto a = support_monitor(history, 20);
      const auto b = tracker.report();
      CHECK(a.fixed == b.fixed);
      CHECK(a.K_observed == b.K_observed);
      CHECK(a.sign == b.sign);
    }
  }
}

TEST_CASE("sign_pattern") {
  Eigen::VectorXd x(4);
  x << 0.0, -0.0, 2.0, -1e-300;
  CHECK(sign_pattern(x) == SignVector{0, 0, 1, -1});
}

TEST_CASE("solve_lp requires the smoothed lp penalty") {
  auto ls = std::make_shared<LeastSquares>(Eigen::MatrixXd::Identity(2, 2), Eigen::VectorXd::Ones(2));
  const Problem p(ls, PenaltySpec::log(1.0, 1.0), BlockPartition::single(2));
  CHECK_THROWS_AS(solve_lp(p, SolverConfig{}, Eigen::VectorXd::Zero(2)), std::invalid_argument);
}

TEST_CASE("lambda zero solves the smooth problem and still decays eps") {
  auto ls = std::make_shared<LeastSquares>(Eigen::MatrixXd::Identity(2, 2), Eigen::VectorXd::Ones(2));
  const Problem p(ls, PenaltySpec::smoothed_lp(0.0, 0.5), BlockPartition::contiguous(2, 2));
  SolverConfig c;
  c.tol = 1e-8;
  const auto r = solve_lp(p, c, Eigen::VectorXd::Zero(2));
  CHECK(r.status == SolveStatus::Converged);
  CHECK((r.x - Eigen::VectorXd::Ones(2)).norm() <= 1e-6);
  const double per_block = static_cast<double>(r.iterations) / 2.0;
  CHECK(r.eps(0) == doctest::Approx(std::pow(0.1, per_block / 2)).epsilon(1e-9));
  CHECK(r.eps(0) < 1.0);

  // the same iterates as the log-free smooth solver
  const Problem smooth(ls, PenaltySpec::log(0.0, 1.0), BlockPartition::contiguous(2, 2));
  const auto s = solve(smooth, c, Eigen::VectorXd::Zero(2));
  CHECK(s.iterations == r.iterations);
  CHECK(s.x == r.x);
}

TEST_CASE("eps invariants hold at every iteration of an lp run") {
  const auto inst = planted_matrix(3, 20, 40, 3, 2, 3, 0.01);
  SolverConfig c;
  const double root_mu = std::sqrt(c.mu);
  Eigen::VectorXd prev_x = Eigen::VectorXd::Zero(inst.problem.dim());
  Eigen::VectorXd prev_eps = Eigen::VectorXd::Constant(inst.problem.dim(), c.eps0);
  double prev_F = std::numeric_limits<double>::infinity();
  std::int64_t violations = 0;
  const auto r = solve_lp(inst.problem, c, prev_x, [&](const IterationView& v) {
    const Index block = choose_block(c.schedule, v.k, inst.problem.num_blocks());
    std::vector<bool> in_block(static_cast<std::size_t>(inst.problem.dim()), false);
    for (Index j : inst.problem.partition().block(block)) in_block[static_cast<std::size_t>(j)] = true;
    for (Index j = 0; j < v.x.size(); ++j) {
      const bool touched = in_block[static_cast<std::size_t>(j)];
      double expected = prev_eps(j);
      if (touched && v.x(j) != 0.0) {
        expected = std::max(prev_eps(j) * root_mu, std::numeric_limits<double>::denorm_min());
      }
      if (v.eps(j) != expected || !(v.eps(j) > 0.0) || v.eps(j) > prev_eps(j)) ++violations;
      if (!touched && v.x(j) != prev_x(j)) ++violations;
    }
    if (v.F > prev_F + 1e-12 * (1 + std::abs(prev_F))) ++violations;
    prev_F = v.F;
    prev_x = v.x;
    prev_eps = v.eps;
  });
  CHECK(violations == 0);
  CHECK(r.status == SolveStatus::Converged);
  REQUIRE(r.support.has_value());
}

TEST_CASE("planted support is recovered and fixed") {
  for (unsigned seed = 0; seed < 3; ++seed) {
    const auto inst = planted_matrix(seed, 30, 40, 4, 2, 4, 0.01);
    SolverConfig c;
    c.record_trace = true;
    c.tol = 1e-6;
    const auto r = solve_lp(inst.problem, c, Eigen::VectorXd::Zero(inst.problem.dim()));
    CHECK(r.status == SolveStatus::Converged);
    CHECK(sign_pattern(r.x) == sign_pattern(inst.x_true));
    REQUIRE(r.support.has_value());
    CHECK(r.support->fixed);
    double min_mag = std::numeric_limits<double>::infinity();
    for (Index j = 0; j < r.x.size(); ++j) {
      if (r.x(j) != 0.0) min_mag = std::min(min_mag, std::abs(r.x(j)));
    }
    CHECK(min_mag > 10 * std::numeric_limits<double>::epsilon() * r.x.norm());
    REQUIRE(r.trace.back().lp.has_value());
    CHECK(r.trace.back().lp->sign_fixed);
    CHECK(r.trace.back().lp->support_size == 8);
  }
}

TEST_CASE("faster smoothing decay fixes the sign pattern no later") {
  for (unsigned seed = 0; seed < 3; ++seed) {
    const auto inst = planted_matrix(seed + 40, 30, 40, 4, 2, 4, 0.01);
    auto first_fixed = [&](double mu) {
      SolverConfig c;
      c.mu = mu;
      c.support_window = 1;
      c.tol = 1e-6;
      std::vector<SignVector> history;
      solve_lp(inst.problem, c, Eigen::VectorXd::Zero(inst.problem.dim()),
               [&](const IterationView& v) { history.push_back(sign_pattern(v.x)); });
      return support_monitor(history, 1).K_observed.value();
    };
    CHECK(first_fixed(0.1) <= first_fixed(0.99));
  }
}
