#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "odeclass/dopri5.hpp"
#include "odeclass/forcing.hpp"
#include "odeclass/kernel.hpp"
#include "odeclass/series.hpp"

namespace odeclass {

/// State channels carried by a Trajectory. R is the running integral of Q.
enum class Channel { X, XPrime, Y1, Y2, Y2Prime, Q, R };

const char* to_string(Channel c) noexcept;

/// Solution of the augmented system on a uniform output grid starting at 0.
///
/// Off-grid values come from cubic Hermite interpolation using the exact
/// right-hand side as node derivatives, which keeps shifted evaluations at
/// O(h^4) between nodes.
class Trajectory {
 public:
  Trajectory() = default;

  const SystemParams& params() const noexcept { return params_; }
  const ForcingExpr& forcing() const noexcept { return forcing_; }

  std::span<const double> grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return grid_.size(); }
  double spacing() const noexcept { return h_; }
  double horizon() const noexcept { return grid_.empty() ? 0.0 : grid_.back(); }

  std::span<const double> values(Channel c) const noexcept;
  std::span<const double> x() const noexcept { return x_; }
  std::span<const double> xprime() const noexcept { return xp_; }
  std::span<const double> y1() const noexcept { return y1_; }
  std::span<const double> y2() const noexcept { return y2_; }
  std::span<const double> y2prime() const noexcept { return y2p_; }
  std::span<const double> Q() const noexcept { return q_; }
  std::span<const double> R() const noexcept { return r_; }
  /// f sampled on the grid.
  std::span<const double> f() const noexcept { return f_; }
  /// x'' reconstructed as f - a x' - b x.
  std::vector<double> xsecond() const;

  SampledSeries series(Channel c) const;

  /// Hermite-interpolated channel value. Throws std::out_of_range outside
  /// [0, horizon].
  double at(Channel c, double t) const;
  /// Time derivative of the channel at a grid node.
  double derivative_at_node(Channel c, std::size_t i) const;

  /// Non-empty when integration stopped early and this trajectory holds the
  /// part that was reached.
  const std::string& failure() const noexcept { return failure_; }
  bool truncated() const noexcept { return !failure_.empty(); }

  Dopri5Stats stats() const noexcept { return stats_; }

 private:
  friend struct TrajectoryBuilder;

  SystemParams params_;
  ForcingExpr forcing_;
  double h_ = 0.0;
  std::vector<double> grid_, x_, xp_, y1_, y2_, y2p_, q_, r_, f_;
  std::string failure_;
  Dopri5Stats stats_;
};

struct IntegrateOptions {
  /// Largest output grid spacing.
  double h_max = 0.01;
  /// Largest internal step.
  double max_step = 1.0;
  std::size_t max_steps = 50'000'000;
  /// Return the reached prefix instead of throwing IntegrationError.
  bool partial_on_failure = false;
};

/// Integrates x'' + a x' + b x = f together with y1' = -y1 + f,
/// y2'' + 2 y2' + y2 = f, Q' = f and R' = Q on [0, horizon] with
/// DOPRI5 at absolute and relative tolerance `tol`.
///
/// Throws std::invalid_argument for horizon <= 0 or tol <= 0 and
/// IntegrationError on step underflow or non-finite values.
Trajectory integrate(const SystemParams& params, const ForcingExpr& f, double horizon, double tol,
                     const IntegrateOptions& options = {});

/// The j-fold exponential filter of f (j = 0 returns f itself) sampled on
/// `grid`, computed by chaining y' = -y + input from t = 0.
SampledSeries repeated_exp_filter(const ForcingExpr& f, int j, std::span<const double> grid,
                                  double tol = 1e-12);

/// Trapezoid convolution (k * s)(t_i) = integral over [0, t_i] of
/// k(t_i - u) s(u) du. `s` must live on a uniform grid starting at 0.
SampledSeries convolve_kernel(const std::function<double(double)>& k, const SampledSeries& s);
/// Convolution with the `order`-th derivative of a closed-form kernel.
SampledSeries convolve_kernel(const Kernel& kernel, int order, const SampledSeries& s);

}  // namespace odeclass
