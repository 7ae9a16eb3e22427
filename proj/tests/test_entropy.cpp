#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mmbarrier/error.hpp"
#include "mmbarrier/entropy.hpp"
#include "oracles.hpp"

using namespace mmbarrier;

namespace {

OrbitPartition cw_orbits(std::size_t q) { return orbits(make_cw_big(q).support(), cw_standard_action(q)); }

// Orbit masses laid out like oracle::cw_orbit_objective.
SupportDistribution cw_distribution(std::size_t q, const std::array<double, 6>& w) {
  const TensorSupport s = make_cw_big(q).support();
  Eigen::VectorXd mass(s.size());
  for (std::size_t x = 0; x < s.size(); ++x) {
    const Triple& t = s.points()[x];
    const std::size_t c = q + 1;
    if (t.i == c) mass(x) = w[3];
    else if (t.j == c) mass(x) = w[4];
    else if (t.k == c) mass(x) = w[5];
    else if (t.i == 0) mass(x) = w[0] / double(q);
    else if (t.j == 0) mass(x) = w[1] / double(q);
    else mass(x) = w[2] / double(q);
  }
  return {mass, std::nullopt};
}

Eigen::VectorXd random_simplex(std::mt19937_64& rng, std::size_t n, double floor = 0.0) {
  std::exponential_distribution<double> e(1.0);
  Eigen::VectorXd v(n);
  for (std::size_t i = 0; i < n; ++i) v(i) = e(rng) + floor;
  return v / v.sum();
}

}  // namespace

TEST(Theta, Validation) {
  EXPECT_NO_THROW(Theta(0.2, 0.3, 0.5));
  EXPECT_THROW(Theta(0.5, 0.5, 0.5), InvalidArgument);
  EXPECT_THROW(Theta(-0.1, 0.6, 0.5), InvalidArgument);
  EXPECT_EQ(Theta::symmetric(0.2), Theta(0.2, 0.4, 0.4));
}

TEST(Marginals, DiagonalUniform) {
  const TensorSupport s = make_diagonal(4).support();
  const auto m = marginals(uniform_distribution(s), s);
  for (const auto& v : m) EXPECT_TRUE(v.isApproxToConstant(0.25));
}

TEST(Marginals, PointMass) {
  const std::size_t q = 3;
  const TensorSupport s = make_cw_big(q).support();
  Eigen::VectorXd mass = Eigen::VectorXd::Zero(s.size());
  mass(s.index_of({0, 0, q + 1})) = 1.0;
  const auto m = marginals({mass, std::nullopt}, s);
  EXPECT_EQ(m[0](0), 1.0);
  EXPECT_EQ(m[1](0), 1.0);
  EXPECT_EQ(m[2](q + 1), 1.0);
  EXPECT_EQ(objective({mass, std::nullopt}, s, Theta(0.2, 0.3, 0.5)), 0.0);
}

TEST(Marginals, CwOrbitFormula) {
  const std::size_t q = 4;
  const std::array<double, 6> w{0.2, 0.15, 0.25, 0.1, 0.17, 0.13};
  const TensorSupport s = make_cw_big(q).support();
  const auto m = marginals(cw_distribution(q, w), s);
  const double p1 = w[0] / q, p2 = w[1] / q, p3 = w[2] / q;
  EXPECT_NEAR(m[0](0), q * p1 + w[4] + w[5], 1e-15);
  for (std::size_t i = 1; i <= q; ++i) EXPECT_NEAR(m[0](i), p2 + p3, 1e-15);
  EXPECT_NEAR(m[0](q + 1), w[3], 1e-15);
  const Theta th(0.3, 0.3, 0.4);
  EXPECT_NEAR(objective(cw_distribution(q, w), s, th), oracle::cw_orbit_objective(int(q), th.values(), w), 1e-12);
}

TEST(Marginals, GroupingIdentity) {
  // H(P1) = (1-a)(log2 q + h(r1 / (1-a))) + h2(a), a = q p1 + r2 + r3.
  const std::size_t q = 5;
  const std::array<double, 6> w{0.3, 0.1, 0.2, 0.12, 0.18, 0.1};
  const double a = w[0] + w[4] + w[5];
  const double rest = 1.0 - a;
  auto h2 = [](double x) { return x <= 0 || x >= 1 ? 0.0 : -x * std::log2(x) - (1 - x) * std::log2(1 - x); };
  const double grouped = h2(a) + rest * (h2(w[3] / rest) + (1 - w[3] / rest) * std::log2(double(q)));
  EXPECT_NEAR(oracle::cw_orbit_objective(int(q), {1, 0, 0}, w), grouped, 1e-12);
  EXPECT_NEAR(objective(cw_distribution(q, w), make_cw_big(q).support(), Theta(1, 0, 0)), grouped, 1e-12);
}

TEST(Objective, DiagonalUniformIsLogN) {
  const TensorSupport s = make_diagonal(5).support();
  EXPECT_NEAR(objective(uniform_distribution(s), s, Theta(0.1, 0.6, 0.3)), std::log2(5.0), 1e-14);
}

TEST(Validate, Rejections) {
  const TensorSupport s = make_diagonal(3).support();
  EXPECT_THROW(validate({Eigen::VectorXd::Constant(2, 0.5), std::nullopt}, s), InvalidArgument);
  EXPECT_THROW(validate({Eigen::VectorXd::Constant(3, 0.5), std::nullopt}, s), InvalidArgument);
  Eigen::VectorXd neg(3);
  neg << 1.2, -0.1, -0.1;
  EXPECT_THROW(validate({neg, std::nullopt}, s), InvalidArgument);
}

TEST(Gradient, UniformDiagonalIsConstant) {
  const TensorSupport s = make_diagonal(4).support();
  const auto g = objective_gradient(uniform_distribution(s), s, Theta(0.2, 0.5, 0.3));
  ASSERT_TRUE(g.has_value());
  EXPECT_LT(g->maxCoeff() - g->minCoeff(), 1e-14);
}

TEST(Gradient, AxisOneWithUniformMarginal) {
  const TensorSupport s = make_cw_big(2).support();
  // Masses giving P1 uniform on 4 labels.
  const std::array<double, 6> w{0.125, 0.25, 0.25, 0.25, 0.0625, 0.0625};
  const auto dist = cw_distribution(2, w);
  ASSERT_NEAR(marginals(dist, s)[0].maxCoeff(), 0.25, 1e-15);
  const auto g = objective_gradient(dist, s, Theta(1, 0, 0));
  ASSERT_TRUE(g.has_value());
  EXPECT_LT(g->maxCoeff() - g->minCoeff(), 1e-14);
}

TEST(Gradient, CentralDifferences) {
  std::mt19937_64 rng(7);
  const TensorSupport s = make_cw_big(2).support();
  const Theta th(0.25, 0.35, 0.4);
  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::VectorXd p = random_simplex(rng, s.size(), 0.05);
    const auto g = objective_gradient({p, std::nullopt}, s, th);
    ASSERT_TRUE(g.has_value());
    // The objective extends to all positive vectors through the same formula.
    auto f = [&](const Eigen::VectorXd& v) {
      const auto m = point_marginals(s, v);
      double val = 0.0;
      for (std::size_t a = 0; a < 3; ++a) {
        for (Eigen::Index n = 0; n < m[a].size(); ++n) {
          if (m[a](n) > 0) val -= th[a] * m[a](n) * std::log(m[a](n));
        }
      }
      return val;
    };
    const double h = 1e-6;
    for (Eigen::Index x = 0; x < p.size(); ++x) {
      Eigen::VectorXd up = p, down = p;
      up(x) += h;
      down(x) -= h;
      const double fd = (f(up) - f(down)) / (2 * h);
      EXPECT_NEAR((*g)(x), fd, 1e-6 * std::max(1.0, std::abs(fd)));
    }
  }
}

TEST(Gradient, BoundaryIsEmpty) {
  const TensorSupport s = make_diagonal(2).support();
  Eigen::VectorXd p(2);
  p << 1.0, 0.0;
  EXPECT_FALSE(objective_gradient({p, std::nullopt}, s, Theta(1, 0, 0)).has_value());
}

TEST(Concavity, MidpointSpotChecks) {
  std::mt19937_64 rng(11);
  for (std::size_t q : {1, 3}) {
    const TensorSupport s = make_cw_big(q).support();
    for (int trial = 0; trial < 50; ++trial) {
      const Eigen::VectorXd x = random_simplex(rng, s.size());
      const Eigen::VectorXd y = random_simplex(rng, s.size());
      const Theta th = Theta::symmetric(std::uniform_real_distribution<double>(0, 1)(rng));
      const double mid = objective_bits(s, (0.5 * (x + y)).eval(), th);
      EXPECT_GE(mid, 0.5 * (objective_bits(s, x, th) + objective_bits(s, y, th)) - 1e-10);
    }
  }
}

TEST(Solver, DiagonalReachesLogN) {
  for (std::size_t n : {1, 2, 7}) {
    const auto r = maximize_entropy(make_diagonal(n).support(), Theta(0.3, 0.3, 0.4));
    EXPECT_NEAR(r.value_bits, std::log2(double(n)), 1e-9);
  }
}

TEST(Solver, MatchesIndependentOracleOnCw) {
  for (int q : {1, 2, 6}) {
    for (double t1 : {0.0, 0.09, 0.5, 1.0}) {
      const Theta th = Theta::symmetric(t1);
      const auto r = maximize_entropy(make_cw_big(q).support(), th, cw_orbits(q));
      EXPECT_NEAR(r.value_bits, oracle::cw_max(q, th.values()), 1e-6) << q << " " << t1;
      EXPECT_LE(r.gap_bits, 1e-6);
    }
  }
  const Theta skew(0.2, 0.5, 0.3);
  EXPECT_NEAR(maximize_entropy(make_cw_big(3).support(), skew, cw_orbits(3)).value_bits,
              oracle::cw_max(3, skew.values()), 1e-6);
}

TEST(Solver, OrbitReductionDoesNotChangeTheValue) {
  const Theta th(0.15, 0.4, 0.45);
  const TensorSupport s = make_cw_big(4).support();
  EXPECT_NEAR(maximize_entropy(s, th).value_bits, maximize_entropy(s, th, cw_orbits(4)).value_bits, 1e-8);
}

TEST(Solver, TableRowBackComputation) {
  // The q = 1 row at its own theta: barrier = (2*0.09 + 3*0.91) log2 3 / D.
  const double d = maximize_entropy(make_cw_big(1).support(), Theta(0.09, 0.455, 0.455)).value_bits;
  EXPECT_NEAR((2 * 0.09 + 3 * 0.91) * std::log2(3.0) / d, 3.0551, 1e-3);
  EXPECT_NEAR(d, oracle::cw_max(1, {0.09, 0.455, 0.455}), 1e-6);
}

TEST(Solver, CapRaisesSolverError) {
  SolverOptions opts;
  opts.tol_bits = 1e-15;
  opts.max_iterations = 3;
  opts.stall_window = 1000;
  try {
    maximize_entropy(make_cw_big(3).support(), Theta(0.1, 0.45, 0.45), std::nullopt, opts);
    FAIL() << "expected SolverError";
  } catch (const SolverError& e) {
    EXPECT_GT(e.best_value_bits(), 0.0);
    EXPECT_GT(e.gap_bits(), 0.0);
  }
}

TEST(BruteForce, SmallCases) {
  EXPECT_NEAR(brute_force_max(make_diagonal(2).support(), Theta(1.0 / 3, 1.0 / 3, 1.0 / 3), 0.01), 1.0, 1e-12);
  EXPECT_EQ(brute_force_max(make_diagonal(1).support(), Theta(0.2, 0.2, 0.6), 0.01), 0.0);
  EXPECT_NEAR(brute_force_max(make_matmul(2, 1, 1).support(), Theta(1, 0, 0), 0.01), 1.0, 1e-12);
  EXPECT_THROW(brute_force_max(make_diagonal(2).support(), Theta(1, 0, 0), 0.03), InvalidArgument);
  EXPECT_THROW(brute_force_max(make_cw_big(6).support(), Theta(1, 0, 0), 0.01), CapacityError);
}

TEST(BruteForce, AgreesWithSolver) {
  std::mt19937_64 rng(3);
  for (const char* id : {"diag:3", "mm:2,2,1", "cwsmall:1", "mm:1,2,2"}) {
    const TensorSupport s = builtin_tensor(id).support();
    const Eigen::VectorXd t = random_simplex(rng, 3);
    const Theta th(t(0), t(1), 1.0 - t(0) - t(1));
    const double exact = maximize_entropy(s, th).value_bits;
    const double grid = brute_force_max(s, th, 0.01);
    EXPECT_LE(grid, exact + 1e-9) << id;
    EXPECT_LE(exact - grid, 1e-2) << id;
  }
}
