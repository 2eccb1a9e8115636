#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "odeclass/functionals.hpp"
#include "odeclass/random_forcing.hpp"
#include "odeclass/trajectory.hpp"
#include "oracles.hpp"

using namespace odeclass;

namespace {

// Q for f on a fine grid, built with the independent oracle quadrature.
SampledSeries oracle_Q(const std::function<double(double)>& f, double horizon, double h = 1e-3) {
  const auto grid = uniform_grid(horizon, h);
  std::vector<double> q(grid.size(), 0.0);
  for (std::size_t i = 1; i < grid.size(); ++i) q[i] = q[i - 1] + oracle::gl_integrate(f, grid[i - 1], grid[i], 1);
  return SampledSeries(grid, q);
}

SampledSeries ones_Q(double horizon) {
  const auto grid = uniform_grid(horizon, 0.01);
  return SampledSeries(grid, grid);
}

}  // namespace

TEST(ThetaGridTest, ConstructionAndParsing) {
  const ThetaGrid g = ThetaGrid::uniform(11, 5);
  ASSERT_EQ(g.theta1().size(), 11u);
  ASSERT_EQ(g.theta2().size(), 5u);
  EXPECT_EQ(g.theta1().front(), 0.0);
  EXPECT_EQ(g.theta1().back(), 1.0);
  EXPECT_DOUBLE_EQ(g.theta2()[2], 0.5);
  EXPECT_EQ(ThetaGrid::parse("3x4").theta2().size(), 4u);
  EXPECT_THROW(ThetaGrid::parse("3by4"), std::invalid_argument);
  EXPECT_THROW(ThetaGrid::parse("1x4"), std::invalid_argument);
  EXPECT_THROW(ThetaGrid({0.0, 0.5}, {0.0, 1.0}), std::invalid_argument);
  EXPECT_THROW(ThetaGrid({0.0, 0.7, 0.5, 1.0}, {0.0, 1.0}), std::invalid_argument);
}

TEST(MovingAverage, Examples) {
  const SampledSeries Q = ones_Q(4.0);
  EXPECT_NEAR(moving_average(Q, 0.5, 3.0), 0.5, 1e-14);
  EXPECT_EQ(moving_average(Q, 0.0, 3.0), 0.0);
  EXPECT_NEAR(moving_average(Q, 1.0, 0.25), 0.25, 1e-14);
  EXPECT_THROW(moving_average(Q, 0.5, 4.5), std::out_of_range);
  EXPECT_THROW(moving_average(Q, 1.5, 3.0), std::invalid_argument);
}

TEST(MovingAverage, MatchesBruteForce) {
  const auto f = [](double s) { return std::sin(3 * s) + s * s / 10; };
  const SampledSeries Q = oracle_Q(f, 6.0);
  for (double theta : {0.1, 0.37, 1.0})
    for (double t : {0.05, 0.8, 2.5, 5.99}) {
      EXPECT_NEAR(moving_average(Q, theta, t), oracle::brute_moving_average(f, theta, t), 1e-6);
    }
}

TEST(DeltaF, Examples) {
  const SampledSeries Q = ones_Q(4.0);
  EXPECT_NEAR(delta_f(1.0, Q, 2.0), 0.0, 1e-14);
  EXPECT_NEAR(delta_f(1.0, Q, 0.5), 0.5, 1e-14);
  const auto grid = uniform_grid(4.0, 0.01);
  const SampledSeries zero(grid, std::vector<double>(grid.size(), 0.0));
  EXPECT_EQ(delta_f(zero, zero, 3.0), 0.0);
}

TEST(DoubleAverage, Examples) {
  const SampledSeries Q = ones_Q(4.0);
  for (double t1 : {0.2, 0.5, 1.0})
    for (double t2 : {0.3, 0.9, 1.0}) EXPECT_NEAR(double_average(Q, t1, t2, 3.0), t1 * t2, 1e-13);
  EXPECT_EQ(double_average(Q, 0.0, 0.7, 3.0), 0.0);
  EXPECT_EQ(double_average(Q, 0.7, 0.0, 3.0), 0.0);

  // f(s) = s: Q(s) = s^2/2 sampled finely.
  const SampledSeries Qs = oracle_Q([](double s) { return s; }, 4.0);
  const double brute = oracle::brute_double_average([](double s) { return s; }, 1.0, 1.0, 3.0);
  EXPECT_NEAR(brute, 2.0, 1e-12);
  EXPECT_NEAR(double_average(Qs, 1.0, 1.0, 3.0), 2.0, 1e-5);
  EXPECT_THROW(double_average(Q, 0.5, 0.5, 5.0), std::out_of_range);
}

TEST(DoubleAverage, MatchesBruteForceOracle) {
  std::mt19937_64 rng(41);
  for (int c = 0; c < 6; ++c) {
    const ForcingExpr f = random_smooth_forcing(rng);
    const auto fn = [&](double s) { return f(s); };
    const SampledSeries Q = oracle_Q(fn, 8.0);
    for (int k = 0; k < 5; ++k) {
      const double t1 = oracle::uniform(rng, 0, 1), t2 = oracle::uniform(rng, 0, 1), t = oracle::uniform(rng, 0, 8);
      const double ref = oracle::brute_double_average(fn, t1, t2, t);
      EXPECT_NEAR(double_average(Q, t1, t2, t, 1e-3), ref, 1e-5) << f.to_string();
      EXPECT_NEAR(FunctionalEvaluator::from_cumulative(Q).F(t1, t2, t), ref, 1e-5);
    }
  }
}

TEST(Evaluator, TrajectoryMatchesOracle) {
  std::mt19937_64 rng(43);
  for (int c = 0; c < 4; ++c) {
    const ForcingExpr f = random_smooth_forcing(rng);
    const Trajectory tr = integrate(random_stable_params(rng), f, 10, 1e-11);
    const FunctionalEvaluator ev = FunctionalEvaluator::from_trajectory(tr);
    const auto fn = [&](double s) { return f(s); };
    for (int k = 0; k < 5; ++k) {
      const double t1 = oracle::uniform(rng, 0, 1), t2 = oracle::uniform(rng, 0, 1), t = oracle::uniform(rng, 0, 10);
      EXPECT_NEAR(ev.F(t1, t2, t), oracle::brute_double_average(fn, t1, t2, t), 1e-8);
      EXPECT_NEAR(ev.f_theta(t1, t), oracle::brute_moving_average(fn, t1, t), 1e-9);
    }
    EXPECT_EQ(ev.F(0.0, 0.4, 5.0), 0.0);
    EXPECT_EQ(ev.F(0.4, 0.0, 5.0), 0.0);
  }
}

TEST(Properties, Bilinearity) {
  std::mt19937_64 rng(47);
  const ForcingExpr f1 = random_smooth_forcing(rng), f2 = random_smooth_forcing(rng);
  const double alpha = 1.7, beta = -0.6;
  const auto g1 = [&](double s) { return f1(s); };
  const auto g2 = [&](double s) { return f2(s); };
  const SampledSeries Q1 = oracle_Q(g1, 6), Q2 = oracle_Q(g2, 6);
  std::vector<double> qc(Q1.size());
  for (std::size_t i = 0; i < qc.size(); ++i) qc[i] = alpha * Q1.values()[i] + beta * Q2.values()[i];
  const SampledSeries Qc(std::vector<double>(Q1.times().begin(), Q1.times().end()), qc);
  for (double t : {0.3, 1.7, 4.2, 6.0}) {
    const double lhs = double_average(Qc, 0.6, 0.8, t);
    const double rhs = alpha * double_average(Q1, 0.6, 0.8, t) + beta * double_average(Q2, 0.6, 0.8, t);
    EXPECT_NEAR(lhs, rhs, 1e-10);
  }
}

TEST(Properties, FubiniForConstants) {
  const SampledSeries Q = ones_Q(5);
  for (double t1 : {0.25, 0.5, 1.0})
    for (double t2 : {0.25, 0.75, 1.0}) {
      const double composed = moving_average(Q, t1, 3.0) * moving_average(Q, t2, 3.0);
      EXPECT_NEAR(double_average(Q, t1, t2, 3.0), composed, 1e-13);
    }
}

TEST(DeltaFIntegral, Examples) {
  const DeltaFIntegralResult one = delta_f_integral_check(constant_forcing(1), 2.0);
  EXPECT_NEAR(one.lhs, 0.5, 1e-9);
  EXPECT_NEAR(one.rhs, 0.5, 1e-9);
  const DeltaFIntegralResult zero = delta_f_integral_check(constant_forcing(0), 3.0);
  EXPECT_EQ(zero.lhs, 0.0);
  EXPECT_EQ(zero.rhs, 0.0);
  const DeltaFIntegralResult s = delta_f_integral_check(parse_forcing("sin(t)"), 10.0);
  EXPECT_LE(std::abs(s.lhs - s.rhs), 1e-6);
  // Independent oracle for the right side: int_0^1 (cos(t - theta) - cos t) dtheta.
  const double rhs = oracle::gl_integrate([](double th) { return std::cos(10 - th) - std::cos(10.0); }, 0, 1);
  EXPECT_NEAR(s.rhs, rhs, 1e-7);
}

TEST(DeltaFIntegral, RandomSmoothForcing) {
  std::mt19937_64 rng(53);
  for (int c = 0; c < 8; ++c) {
    const ForcingExpr f = random_smooth_forcing(rng);
    const double t = oracle::uniform(rng, 2, 20);
    const DeltaFIntegralResult r = delta_f_integral_check(f, t);
    EXPECT_LE(std::abs(r.lhs - r.rhs), 1e-6) << f.to_string() << " t=" << t;
  }
}

TEST(Field, Examples) {
  const std::vector<double> times{0.0, 1.0, 2.0, 3.0, 4.0};
  const ThetaGrid grid = ThetaGrid::uniform(5, 5);
  const auto g = uniform_grid(4.0, 0.01);
  const FunctionalField zero = functional_field(SampledSeries(g, std::vector<double>(g.size(), 0.0)), grid, times);
  for (double v : zero.sup()) EXPECT_EQ(v, 0.0);

  const FunctionalField one = functional_field(ones_Q(4.0), grid, times);
  for (std::size_t it = 2; it < times.size(); ++it) {
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = 0; j < 5; ++j)
        EXPECT_NEAR(one.value(i, j, it), grid.theta1()[i] * grid.theta2()[j], 1e-12);
    EXPECT_NEAR(one.sup()[it], 1.0, 1e-12);
  }
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t it = 0; it < times.size(); ++it) {
      EXPECT_EQ(one.value(0, i, it), 0.0);
      EXPECT_EQ(one.value(i, 0, it), 0.0);
    }
  EXPECT_THROW(functional_field(ones_Q(4.0), grid, std::vector<double>{5.0}), std::out_of_range);
}

TEST(Field, SupDominatesEveryEntry) {
  std::mt19937_64 rng(59);
  const ForcingExpr f = random_smooth_forcing(rng);
  const Trajectory tr = integrate(random_stable_params(rng), f, 10, 1e-10);
  const ThetaGrid grid = ThetaGrid::uniform(7, 6);
  const FunctionalField field = functional_field(FunctionalEvaluator::from_trajectory(tr), grid, tr.grid());
  for (std::size_t it = 0; it < field.times().size(); it += 7)
    for (std::size_t i = 0; i < 7; ++i)
      for (std::size_t j = 0; j < 6; ++j) EXPECT_GE(field.sup()[it], std::abs(field.value(i, j, it)));
}

TEST(Field, ExponentialDecaySupAtTen) {
  const Trajectory tr = integrate(SystemParams{3, 2, 0, 0}, exp_decay(1.0), 10, 1e-11);
  const FunctionalField field =
      functional_field(FunctionalEvaluator::from_trajectory(tr), ThetaGrid::uniform(11, 11), tr.grid());
  // Envelope oracle: |F| <= int_{t-2}^t e^{-u} du.
  const double envelope = oracle::gl_integrate([](double u) { return std::exp(-u); }, 8, 10);
  EXPECT_LE(field.sup().back(), 1e-3);
  EXPECT_LE(field.sup().back(), envelope);
  for (std::size_t i = 200; i < field.sup().size(); ++i) EXPECT_LE(field.sup()[i], field.sup()[i - 1] + 1e-15);
}

TEST(Field, RefinementNeverLowersSup) {
  std::mt19937_64 rng(61);
  const ForcingExpr f = random_smooth_forcing(rng);
  const Trajectory tr = integrate(random_stable_params(rng), f, 8, 1e-10);
  const FunctionalEvaluator ev = FunctionalEvaluator::from_trajectory(tr);
  const FunctionalField coarse = functional_field(ev, ThetaGrid::uniform(6, 6), tr.grid());
  const FunctionalField medium = functional_field(ev, ThetaGrid::uniform(11, 11), tr.grid());
  const FunctionalField fine = functional_field(ev, ThetaGrid::uniform(21, 21), tr.grid());
  for (std::size_t i = 0; i < tr.size(); ++i) {
    EXPECT_GE(medium.sup()[i], coarse.sup()[i]);
    EXPECT_GE(fine.sup()[i], medium.sup()[i]);
  }
}
