#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "odeclass/identities.hpp"
#include "odeclass/random_forcing.hpp"
#include "oracles.hpp"

using namespace odeclass;

namespace {

const ForcingExpr& damped_sine() {
  static const ForcingExpr f = parse_forcing("sin(3*t)*exp(-0.1*t)");
  return f;
}

Trajectory run(const SystemParams& p, const ForcingExpr& f, double horizon, double h_max = 0.01) {
  IntegrateOptions opts;
  opts.h_max = h_max;
  return integrate(p, f, horizon, 1e-12, opts);
}

// Every residual on one trajectory, in a fixed order.
std::vector<IdentityResidual> all_residuals(const Trajectory& tr, const SystemParams& p) {
  const Kernel k(p.a, p.b);
  return {residual_x0_vs_y2(tr, k),      residual_y2_vs_x0(tr, p),        residual_F_vs_y2(tr, 0.7, 0.4),
          residual_F_vs_x(tr, 0.7, 0.4), residual_y1_vs_x(tr),           residual_ftheta_vs_y1(tr, 0.6),
          residual_x_vs_Xvoc(tr, k, p),  residual_x0_vs_F(tr, k)};
}

}  // namespace

TEST(Identities, ZeroForcingZeroData) {
  const SystemParams p{3, 2, 0, 0};
  const Trajectory tr = run(p, constant_forcing(0), 10);
  for (const auto& r : all_residuals(tr, p)) {
    EXPECT_LE(r.max_abs, 1e-12) << r.tag;
    EXPECT_GE(r.max_abs, 0.0);
    EXPECT_GE(r.max_scaled, 0.0);
    EXPECT_LE(r.window_hi, tr.horizon());
  }
}

TEST(Identities, DampedSineExamples) {
  const SystemParams p{3, 2, 0, 0};
  const Trajectory tr = run(p, damped_sine(), 20);
  const Kernel k(p.a, p.b);
  EXPECT_LE(residual_x0_vs_y2(tr, k).max_abs, 1e-5);
  EXPECT_LE(residual_y2_vs_x0(tr, p).max_abs, 1e-5);
  EXPECT_LE(residual_x0_vs_F(tr, k).max_abs, 1e-3);
  EXPECT_LE(residual_F_vs_x(tr, 1.0, 1.0).max_abs, 1e-4);
  EXPECT_DOUBLE_EQ(residual_x0_vs_y2(tr, k).h, tr.spacing());
}

TEST(Identities, CriticalParametersMakeX0EqualY2) {
  const SystemParams p{2, 1, 0, 0};
  for (int t = 0; t <= 10; ++t) EXPECT_EQ(phi_inverse_kernel(p, 0.5 * t), 0.0);
  std::mt19937_64 rng(67);
  const Trajectory tr = run(p, random_smooth_forcing(rng), 20);
  EXPECT_LE(oracle::max_abs_diff(tr.x(), tr.y2()), 1e-8);
  EXPECT_LE(residual_x0_vs_y2(tr, Kernel(2, 1)).max_abs, 1e-8);
  EXPECT_LE(residual_y2_vs_x0(tr, p).max_abs, 1e-8);
}

TEST(Identities, ConstantForcingExamples) {
  const SystemParams p{3, 2, 0, 0};
  const Trajectory tr = run(p, constant_forcing(1), 10);
  const std::vector<double> at10{10.0};
  EXPECT_LE(residual_F_vs_y2(tr, 1, 1, at10).max_abs, 1e-6);
  EXPECT_LE(residual_F_vs_x(tr, 1, 1, at10).max_abs, 1e-4);
  EXPECT_LE(residual_y1_vs_x(tr).max_abs, 1e-5);
  // The trapezoid terms are O(h^2); the two bounds below need a finer step.
  const std::vector<double> at5{5.0};
  EXPECT_LE(residual_ftheta_vs_y1(run(p, constant_forcing(1), 10, 0.0025), 1, at5).max_abs, 1e-8);
  EXPECT_LE(residual_x_vs_Xvoc(run(p, constant_forcing(1), 20, 0.005), Kernel(3, 2), p).max_abs, 1e-5);

  // Independent substitution of the closed forms y1 = 1 - e^{-t} and
  // y2 = 1 - (1 + t) e^{-t} into the right-hand sides at t = 10 and 5.
  const auto y1 = [](double s) { return 1 - std::exp(-s); };
  const double ftheta = y1(5) - y1(4) + oracle::gl_integrate(y1, 4, 5);
  EXPECT_NEAR(ftheta, 1.0, 1e-8);
  const auto y2 = [](double s) { return 1 - (1 + s) * std::exp(-s); };
  const auto D = [](const std::function<double(double)>& g, double t) { return g(t) - 2 * g(t - 1) + g(t - 2); };
  const auto P = [&](double s) { return oracle::gl_integrate(y2, 0, s); };
  const auto S = [&](double s) { return oracle::gl_integrate(P, 0, s, 60); };
  EXPECT_NEAR(D(y2, 10) + 2 * D(P, 10) + D(S, 10), 1.0, 1e-6);

  const Trajectory crit = run(SystemParams{2, 1, 0, 0}, constant_forcing(1), 10);
  EXPECT_NEAR(crit.x().back(), 1.0, 1e-3);
  EXPECT_LE(residual_x0_vs_F(crit, Kernel(2, 1)).max_abs, 1e-3);
}

TEST(Identities, Y1RepresentationOnFineGrid) {
  std::mt19937_64 rng(101);
  for (int c = 0; c < 3; ++c) {
    const SystemParams p = random_stable_params(rng);
    const Trajectory tr = run(p, random_smooth_forcing(rng), 20, 0.0025);
    EXPECT_LE(residual_y1_vs_x(tr).max_abs, 1e-6);
  }
  EXPECT_LE(residual_y1_vs_x(run(SystemParams{3, 2, 0, 0}, damped_sine(), 20, 0.0025)).max_abs, 1e-6);
}

TEST(Identities, TrivialThetaCases) {
  std::mt19937_64 rng(71);
  const Trajectory tr = run(SystemParams{3, 2, 0, 0}, random_smooth_forcing(rng), 8);
  EXPECT_LE(residual_F_vs_y2(tr, 0, 0).max_abs, 1e-15);
  EXPECT_LE(residual_ftheta_vs_y1(tr, 0).max_abs, 1e-15);
}

TEST(Identities, DecompositionExamples) {
  const auto grid = uniform_grid(6.0, 0.01);
  const SampledSeries ones(grid, grid);
  const DecompositionResult d0 = decomposition_check(ones, 0.3, 0.4, 0.0, 1, 5.0);
  EXPECT_EQ(d0.lhs, d0.rhs);
  const DecompositionResult d = decomposition_check(ones, 0.3, 0.4, 0.2, 1, 5.0);
  EXPECT_NEAR(d.lhs, 0.2, 1e-12);
  EXPECT_NEAR(d.rhs, 0.2, 1e-12);

  std::mt19937_64 rng(73);
  for (int c = 0; c < 10; ++c) {
    const ForcingExpr f = random_smooth_forcing(rng);
    const auto g = uniform_grid(10.0, 1e-3);
    std::vector<double> q(g.size(), 0.0);
    for (std::size_t i = 1; i < g.size(); ++i)
      q[i] = q[i - 1] + oracle::gl_integrate([&](double s) { return f(s); }, g[i - 1], g[i], 1);
    const SampledSeries Q(g, q);
    const double delta = oracle::uniform(rng, 0, 0.3);
    const double t1 = oracle::uniform(rng, 0, 1 - delta), t2 = oracle::uniform(rng, 0, 1 - delta);
    const int k = c % 2 + 1;
    const double t = oracle::uniform(rng, 2 + 2 * delta, 10);
    const DecompositionResult r = decomposition_check(Q, t1, t2, delta, k, t, 5e-4);
    EXPECT_LE(std::abs(r.lhs - r.rhs), 1e-6);
  }
}

TEST(Identities, Preconditions) {
  const SystemParams nonzero{3, 2, 1, 0};
  const Trajectory tr = run(nonzero, constant_forcing(1), 5);
  const Kernel k(3, 2);
  EXPECT_THROW(residual_x0_vs_y2(tr, k), std::invalid_argument);
  EXPECT_THROW(residual_y2_vs_x0(tr, nonzero), std::invalid_argument);
  EXPECT_THROW(residual_x0_vs_F(tr, k), std::invalid_argument);
  EXPECT_NO_THROW(residual_y1_vs_x(tr));
  EXPECT_NO_THROW(residual_x_vs_Xvoc(tr, k, nonzero));

  const std::vector<double> early{1.5};
  EXPECT_THROW(residual_F_vs_y2(tr, 1, 1, early), std::invalid_argument);
  EXPECT_THROW(residual_F_vs_x(tr, 1, 1, early), std::invalid_argument);
  const std::vector<double> too_early{0.5};
  EXPECT_THROW(residual_ftheta_vs_y1(tr, 1, too_early), std::invalid_argument);

  const auto g = uniform_grid(6.0, 0.01);
  const SampledSeries ones(g, g);
  EXPECT_THROW(decomposition_check(ones, 0.3, 0.4, 0.2, 1, 2.2), std::invalid_argument);
  EXPECT_THROW(decomposition_check(ones, 0.3, 0.4, 0.2, 3, 5.0), std::invalid_argument);
}

TEST(Identities, FrepxAllowsNonzeroInitialData) {
  std::mt19937_64 rng(79);
  for (int c = 0; c < 4; ++c) {
    SystemParams p = random_stable_params(rng);
    p.xi0 = oracle::uniform(rng, -2, 2);
    p.xi1 = oracle::uniform(rng, -2, 2);
    const Trajectory tr = run(p, random_smooth_forcing(rng), 20, 0.005);
    EXPECT_LE(residual_F_vs_x(tr, 0.8, 0.5).max_abs, 1e-4);
    EXPECT_LE(residual_y1_vs_x(tr).max_abs, 1e-5);
    EXPECT_LE(residual_x_vs_Xvoc(tr, Kernel(p.a, p.b), p).max_abs, 1e-5);
  }
}

TEST(Identities, RandomForcingWithinTolerance) {
  std::mt19937_64 rng(83);
  for (int c = 0; c < 4; ++c) {
    const SystemParams p = random_stable_params(rng);
    const Trajectory tr = run(p, random_smooth_forcing(rng), 20);
    for (const auto& r : all_residuals(tr, p)) EXPECT_LE(r.max_scaled, 1e-3) << r.tag;
  }
}

// Halving h shrinks every trapezoid-limited residual by about four.
TEST(Identities, SecondOrderRefinement) {
  std::mt19937_64 rng(89);
  for (const auto& [a, b] : std::vector<std::pair<double, double>>{{3, 2}, {2, 2}, {2.5, 1.5}}) {
    const SystemParams p{a, b, 0, 0};
    const ForcingExpr f = random_smooth_forcing(rng);
    const auto coarse = all_residuals(run(p, f, 20, 0.01), p);
    const auto fine = all_residuals(run(p, f, 20, 0.005), p);
    // The last entry mixes theta quadrature with the time grid; skip it here.
    for (std::size_t i = 0; i + 1 < coarse.size(); ++i) {
      if (coarse[i].max_abs < 1e-11) continue;  // exact for this tag
      const double ratio = coarse[i].max_abs / fine[i].max_abs;
      EXPECT_GE(ratio, 3.0) << coarse[i].tag << " a=" << a << " b=" << b;
      EXPECT_LE(ratio, 5.0) << coarse[i].tag << " a=" << a << " b=" << b;
    }
  }
}

TEST(Identities, ForwardAndInverseResidualsComparable) {
  std::mt19937_64 rng(97);
  const SystemParams p{3, 2, 0, 0};
  const Trajectory tr = run(p, random_smooth_forcing(rng), 20);
  const double fwd = residual_x0_vs_y2(tr, Kernel(3, 2)).max_abs;
  const double inv = residual_y2_vs_x0(tr, p).max_abs;
  EXPECT_LT(fwd / inv, 100.0);
  EXPECT_LT(inv / fwd, 100.0);
}
