#pragma once

#include <span>
#include <vector>

namespace odeclass {

/// Strictly increasing time grid paired with real values.
class SampledSeries {
 public:
  SampledSeries() = default;
  /// Throws std::invalid_argument on length mismatch or a non-increasing grid.
  SampledSeries(std::vector<double> times, std::vector<double> values);

  std::span<const double> times() const noexcept { return times_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return times_.size(); }
  bool empty() const noexcept { return times_.empty(); }
  double front_time() const { return times_.front(); }
  double back_time() const { return times_.back(); }

  /// Linear interpolation. Throws std::out_of_range outside the grid.
  double at(double t) const;

  bool covers(double t) const;
  bool is_uniform(double rel_tol = 1e-9) const;
  /// Spacing of a uniform grid. Throws std::invalid_argument otherwise.
  double spacing() const;

 private:
  std::vector<double> times_;
  std::vector<double> values_;
};

/// Nodes 0, h, ..., horizon with h = horizon / ceil(horizon / max_spacing).
std::vector<double> uniform_grid(double horizon, double max_spacing);

/// Running trapezoid integral, zero at the first node.
SampledSeries cumulative_trapezoid(const SampledSeries& s);
std::vector<double> cumulative_trapezoid(std::span<const double> values, double spacing);

/// Discrete convolution on a uniform grid by the trapezoid rule:
/// out[i] = h (k[i] v[0]/2 + sum_{0<j<i} k[i-j] v[j] + k[0] v[i]/2).
/// `kernel[m]` holds the kernel at m*h.
std::vector<double> trapezoid_convolution(std::span<const double> kernel,
                                          std::span<const double> values, double spacing);

/// Piecewise cubic Hermite interpolant over a uniform grid from values and
/// exact derivatives at the nodes.
class UniformHermite {
 public:
  UniformHermite(double t0, double spacing, std::span<const double> values,
                 std::span<const double> derivatives);
  /// Throws std::out_of_range outside [t0, t0 + (n-1) h].
  double operator()(double t) const;

 private:
  double t0_;
  double h_;
  std::span<const double> v_;
  std::span<const double> dv_;
};

}  // namespace odeclass
