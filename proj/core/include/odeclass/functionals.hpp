#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "odeclass/forcing.hpp"
#include "odeclass/series.hpp"

namespace odeclass {

class Trajectory;

/// Samples of theta1 and theta2: increasing, inside [0, 1], both endpoints
/// present.
class ThetaGrid {
 public:
  ThetaGrid(std::vector<double> theta1, std::vector<double> theta2);
  /// n1 x n2 equally spaced samples including 0 and 1 (n1, n2 >= 2).
  static ThetaGrid uniform(std::size_t n1, std::size_t n2);
  /// Parses "NxM".
  static ThetaGrid parse(std::string_view text);

  std::span<const double> theta1() const noexcept { return theta1_; }
  std::span<const double> theta2() const noexcept { return theta2_; }

 private:
  std::vector<double> theta1_;
  std::vector<double> theta2_;
};

/// f_theta(t) = Q(t) - Q((t - theta)^+), Q linearly interpolated.
double moving_average(const SampledSeries& Q, double theta, double t);

/// (delta f)(t) = f(t) - f_1(t).
double delta_f(double f_at_t, const SampledSeries& Q, double t);
double delta_f(const SampledSeries& f, const SampledSeries& Q, double t);

/// F by outer trapezoid over s in [(t - theta1)^+, t] of moving_average(Q,
/// theta2, s) with step at most `h_outer`.
double double_average(const SampledSeries& Q, double theta1, double theta2, double t,
                      double h_outer = 0.005);

struct DeltaFIntegralResult {
  double lhs;  ///< integral of delta f over [0, t]
  double rhs;  ///< integral over theta in [0, 1] of f_theta(t)
};

/// Both sides of the moving-average integral identity at t. Q is built by
/// five-point Gauss-Legendre per cell on a grid of spacing at most
/// `spacing`; the left side is a trapezoid sum of delta f on that grid and
/// the right side is composite Simpson over `n_theta` panels (rounded up
/// to even, at least 2).
DeltaFIntegralResult delta_f_integral_check(const ForcingExpr& f, double t, int n_theta = 64, double spacing = 1.0 / 2000);

/// Evaluates f_theta and F_(theta1, theta2) in O(1) per point from Q and
/// its running integral R:
///   F(t) = [R(t) - R(lo)] - [R((t - theta2)^+) - R((lo - theta2)^+)],
///   lo = (t - theta1)^+.
class FunctionalEvaluator {
 public:
  FunctionalEvaluator(std::function<double(double)> Q, std::function<double(double)> R);
  /// Uses the trajectory's Hermite-interpolated Q and R channels.
  static FunctionalEvaluator from_trajectory(const Trajectory& traj);
  /// Treats Q as piecewise linear; R is its exact running integral. Agrees
  /// with `double_average` in the limit h_outer -> 0.
  static FunctionalEvaluator from_cumulative(const SampledSeries& Q);

  double Q(double t) const { return q_(t); }
  double R(double t) const { return r_(t); }
  double f_theta(double theta, double t) const;
  double F(double theta1, double theta2, double t) const;

 private:
  std::function<double(double)> q_;
  std::function<double(double)> r_;
};

/// F over a theta grid and a list of times, with the pointwise sup of |F|.
class FunctionalField {
 public:
  FunctionalField(ThetaGrid grid, std::vector<double> times, std::vector<double> values);

  const ThetaGrid& theta_grid() const noexcept { return grid_; }
  std::span<const double> times() const noexcept { return times_; }
  double value(std::size_t i1, std::size_t i2, std::size_t it) const;
  /// sup over the grid of |F(t_i)|.
  std::span<const double> sup() const noexcept { return sup_; }
  SampledSeries sup_series() const;

 private:
  ThetaGrid grid_;
  std::vector<double> times_;
  std::vector<double> values_;
  std::vector<double> sup_;
};

FunctionalField functional_field(const FunctionalEvaluator& eval, const ThetaGrid& grid,
                                  std::span<const double> times);
FunctionalField functional_field(const SampledSeries& Q, const ThetaGrid& grid, std::span<const double> times);

}  // namespace odeclass
