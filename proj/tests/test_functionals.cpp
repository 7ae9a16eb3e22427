#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mmbarrier/error.hpp"
#include "mmbarrier/functionals.hpp"
#include "oracles.hpp"

using namespace mmbarrier;

namespace {

Theta random_theta(std::mt19937_64& rng) {
  std::exponential_distribution<double> e(1.0);
  const double a = e(rng), b = e(rng), c = e(rng);
  const double s = a + b + c;
  return Theta(a / s, b / s, 1.0 - a / s - b / s);
}

// A random support with up to `max_points` points in dims up to 3.
Tensor random_tensor(std::mt19937_64& rng, std::size_t max_points) {
  std::uniform_int_distribution<std::size_t> dim(1, 3);
  const Dims d{dim(rng), dim(rng), dim(rng)};
  std::vector<std::pair<Triple, Rational>> entries;
  std::uniform_int_distribution<std::size_t> count(1, max_points);
  const std::size_t want = count(rng);
  for (std::size_t tries = 0; entries.size() < want && tries < 50; ++tries) {
    const Triple t{rng() % d[0], rng() % d[1], rng() % d[2]};
    bool dup = false;
    for (const auto& e : entries) dup = dup || e.first == t;
    if (!dup) entries.emplace_back(t, Rational(1));
  }
  return Tensor(d, entries);
}

}  // namespace

TEST(ZetaUpper, Diagonal) {
  for (std::size_t n : {1, 3, 8}) {
    EXPECT_NEAR(zeta_upper(make_diagonal(n).support(), Theta(0.5, 0.1, 0.4)).log2_value, std::log2(double(n)),
                1e-9);
  }
}

TEST(ZetaUpper, Matmul222) {
  const Theta u(1.0 / 3, 1.0 / 3, 1.0 / 3);
  EXPECT_NEAR(zeta_upper(make_matmul(2, 2, 2).support(), u).log2_value, 2.0, 1e-9);
}

TEST(ZetaUpper, Cw6AtTableTheta) {
  const FunctionalValue v = zeta_upper(make_cw_big(6).support(), Theta(0.14, 0.43, 0.43));
  EXPECT_NEAR(2.86 * 3.0 / v.log2_value, 3.1038, 1e-3);
  EXPECT_NEAR(v.log2_value, oracle::cw_max(6, {0.14, 0.43, 0.43}), 1e-6);
  const auto part = orbits(make_cw_big(6).support(), cw_standard_action(6));
  EXPECT_NEAR(zeta_upper(make_cw_big(6).support(), Theta(0.14, 0.43, 0.43), part).log2_value, v.log2_value, 1e-8);
  ASSERT_TRUE(v.inner.has_value());
}

TEST(ClosedForm, Examples) {
  const Theta th(0.2, 0.3, 0.5);
  EXPECT_NEAR(zeta_matmul_closed(2, 1, 1, th).log2_value, 0.7, 1e-15);
  EXPECT_EQ(zeta_matmul_closed(1, 1, 2, Theta(1, 0, 0)).log2_value, 0.0);
  const Theta u(1.0 / 3, 1.0 / 3, 1.0 / 3);
  EXPECT_NEAR(zeta_matmul_closed(3, 4, 5, u).log2_value, 2.0 / 3 * (std::log2(3.0) + 2 + std::log2(5.0)), 1e-14);
}

TEST(ClosedForm, SolverAgreesOnRandomShapes) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::size_t> side(1, 4);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t a = side(rng), b = side(rng), c = side(rng);
    const Theta th = random_theta(rng);
    EXPECT_NEAR(zeta_upper(make_matmul(a, b, c).support(), th).log2_value,
                zeta_matmul_closed(a, b, c, th).log2_value, 1e-6)
        << a << "," << b << "," << c;
  }
}

TEST(Quasi, Values) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 5; ++i) EXPECT_NEAR(quasi_value(1.0, random_theta(rng)).log2_value, 2.0, 1e-14);
  EXPECT_EQ(quasi_value(0.0, Theta(1, 0, 0)).log2_value, 2.0);
  EXPECT_NEAR(quasi_value(2.0, Theta(0.14, 0.43, 0.43)).log2_value, 2.86, 1e-14);
  // Integer p agrees with the matrix multiplication tensor <2,2,2^p>.
  const Theta th(0.3, 0.2, 0.5);
  EXPECT_NEAR(quasi_value(2.0, th).log2_value, zeta_matmul_closed(2, 2, 4, th).log2_value, 1e-14);
}

TEST(Presentations, Minimum) {
  const Theta th(0.3, 0.3, 0.4);
  const Presentation d4{"a", make_diagonal(4).support(), std::nullopt};
  EXPECT_NEAR(zeta_min_over_presentations({d4}, th).log2_value, zeta_upper(d4.support, th).log2_value, 1e-15);
  EXPECT_NEAR(zeta_min_over_presentations({d4, d4}, th).log2_value, 2.0, 1e-9);

  // <2,2,2> and a support for the same tensor after a basis change that
  // makes every x-slice full.
  const Presentation mm{"mm", make_matmul(2, 2, 2).support(), std::nullopt};
  std::vector<Triple> wide = mm.support.points();
  wide.push_back({0, 0, 1});
  wide.push_back({1, 0, 0});
  const Presentation bigger{"bigger", TensorSupport({4, 4, 4}, wide), std::nullopt};
  const FunctionalValue m = zeta_min_over_presentations({bigger, mm}, th);
  EXPECT_LE(m.log2_value, zeta_upper(mm.support, th).log2_value + 1e-12);
  EXPECT_LE(m.log2_value, zeta_upper(bigger.support, th).log2_value + 1e-12);
  const Presentation d4b{"b", d4.support, std::nullopt};
  EXPECT_EQ(zeta_min_over_presentations({d4, d4b}, th).presentation_id, "a");
  EXPECT_THROW(zeta_min_over_presentations({}, th), InvalidArgument);
}

TEST(ZetaUpper, KroneckerMultiplicative) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 15; ++trial) {
    const Tensor s = random_tensor(rng, 4), t = random_tensor(rng, 4);
    const Theta th = random_theta(rng);
    const double lhs = zeta_upper(kronecker(s, t).support(), th).log2_value;
    const double rhs = zeta_upper(s.support(), th).log2_value + zeta_upper(t.support(), th).log2_value;
    EXPECT_NEAR(lhs, rhs, 1e-6);
  }
}

TEST(ZetaUpper, DirectSumAdditive) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 15; ++trial) {
    const Tensor s = random_tensor(rng, 5), t = random_tensor(rng, 5);
    const Theta th = random_theta(rng);
    const double lhs = std::exp2(zeta_upper(direct_sum(s, t).support(), th).log2_value);
    const double rhs =
        std::exp2(zeta_upper(s.support(), th).log2_value) + std::exp2(zeta_upper(t.support(), th).log2_value);
    EXPECT_NEAR(lhs, rhs, 1e-6 * rhs);
  }
}

TEST(ZetaUpper, MonotoneUnderSubsets) {
  const TensorSupport full = make_cw_big(3).support();
  std::vector<Triple> fewer(full.points().begin(), full.points().end() - 2);
  const Theta th(0.2, 0.4, 0.4);
  EXPECT_LE(zeta_upper(TensorSupport(full.dims(), fewer), th).log2_value, zeta_upper(full, th).log2_value + 1e-12);
}

TEST(ExceedsRank, Threshold) {
  FunctionalValue v{3.0, Theta(1, 0, 0), "x", std::nullopt};
  EXPECT_FALSE(exceeds_rank(v, 8.0));
  EXPECT_TRUE(exceeds_rank(v, 7.9));
}
