#include "odeclass/series.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace odeclass {
namespace {

// Slack for times that land on the grid ends up to rounding.
constexpr double kEdgeSlack = 1e-9;

}  // namespace

SampledSeries::SampledSeries(std::vector<double> times, std::vector<double> values)
    : times_(std::move(times)), values_(std::move(values)) {
  if (times_.size() != values_.size()) throw std::invalid_argument("time and value lengths differ");
  for (std::size_t i = 1; i < times_.size(); ++i) {
    if (!(times_[i] > times_[i - 1])) throw std::invalid_argument("time grid is not strictly increasing");
  }
}

bool SampledSeries::covers(double t) const {
  if (times_.empty()) return false;
  const double slack = kEdgeSlack * std::max(1.0, std::abs(times_.back()));
  return t >= times_.front() - slack && t <= times_.back() + slack;
}

double SampledSeries::at(double t) const {
  if (!covers(t)) throw std::out_of_range("t=" + std::to_string(t) + " outside series coverage");
  if (times_.size() == 1 || t <= times_.front()) return values_.front();
  if (t >= times_.back()) return values_.back();
  const auto it = std::upper_bound(times_.begin(), times_.end(), t);
  const std::size_t hi = static_cast<std::size_t>(it - times_.begin());
  const std::size_t lo = hi - 1;
  const double u = (t - times_[lo]) / (times_[hi] - times_[lo]);
  return values_[lo] + u * (values_[hi] - values_[lo]);
}

bool SampledSeries::is_uniform(double rel_tol) const {
  if (times_.size() < 2) return false;
  const double h = (times_.back() - times_.front()) / static_cast<double>(times_.size() - 1);
  for (std::size_t i = 1; i < times_.size(); ++i) {
    if (std::abs(times_[i] - times_[i - 1] - h) > rel_tol * std::max(1.0, h) + 1e-12 * std::abs(times_[i])) {
      return false;
    }
  }
  return true;
}

double SampledSeries::spacing() const {
  if (!is_uniform()) throw std::invalid_argument("series grid is not uniform");
  return (times_.back() - times_.front()) / static_cast<double>(times_.size() - 1);
}

std::vector<double> uniform_grid(double horizon, double max_spacing) {
  if (!(horizon > 0.0) || !(max_spacing > 0.0)) {
    throw std::invalid_argument("uniform_grid needs positive horizon and spacing");
  }
  const auto n = static_cast<std::size_t>(std::ceil(horizon / max_spacing - 1e-9));
  std::vector<double> grid(n + 1);
  for (std::size_t i = 0; i <= n; ++i) grid[i] = horizon * static_cast<double>(i) / static_cast<double>(n);
  return grid;
}

std::vector<double> cumulative_trapezoid(std::span<const double> values, double spacing) {
  std::vector<double> out(values.size(), 0.0);
  for (std::size_t i = 1; i < values.size(); ++i) {
    out[i] = out[i - 1] + 0.5 * spacing * (values[i - 1] + values[i]);
  }
  return out;
}

SampledSeries cumulative_trapezoid(const SampledSeries& s) {
  std::vector<double> out(s.size(), 0.0);
  const auto t = s.times();
  const auto v = s.values();
  for (std::size_t i = 1; i < s.size(); ++i) {
    out[i] = out[i - 1] + 0.5 * (t[i] - t[i - 1]) * (v[i - 1] + v[i]);
  }
  return SampledSeries(std::vector<double>(t.begin(), t.end()), std::move(out));
}

std::vector<double> trapezoid_convolution(std::span<const double> kernel,
                                          std::span<const double> values, double spacing) {
  if (kernel.size() < values.size()) throw std::invalid_argument("kernel shorter than series");
  std::vector<double> out(values.size(), 0.0);
  for (std::size_t i = 1; i < values.size(); ++i) {
    double acc = 0.5 * (kernel[i] * values[0] + kernel[0] * values[i]);
    for (std::size_t j = 1; j < i; ++j) acc += kernel[i - j] * values[j];
    out[i] = spacing * acc;
  }
  return out;
}

UniformHermite::UniformHermite(double t0, double spacing, std::span<const double> values,
                               std::span<const double> derivatives)
    : t0_(t0), h_(spacing), v_(values), dv_(derivatives) {
  if (v_.size() != dv_.size() || v_.size() < 2) throw std::invalid_argument("bad Hermite data");
}

double UniformHermite::operator()(double t) const {
  const double x = (t - t0_) / h_;
  const double last = static_cast<double>(v_.size() - 1);
  if (x < -kEdgeSlack * std::max(1.0, last) || x > last * (1.0 + kEdgeSlack) + kEdgeSlack) {
    throw std::out_of_range("t=" + std::to_string(t) + " outside interpolation range");
  }
  const double clamped = std::clamp(x, 0.0, last);
  std::size_t i = static_cast<std::size_t>(std::floor(clamped));
  if (i + 1 >= v_.size()) i = v_.size() - 2;
  const double u = clamped - static_cast<double>(i);
  if (u == 0.0) return v_[i];
  const double u2 = u * u;
  const double u3 = u2 * u;
  const double h00 = 2.0 * u3 - 3.0 * u2 + 1.0;
  const double h10 = u3 - 2.0 * u2 + u;
  const double h01 = -2.0 * u3 + 3.0 * u2;
  const double h11 = u3 - u2;
  return h00 * v_[i] + h10 * h_ * dv_[i] + h01 * v_[i + 1] + h11 * h_ * dv_[i + 1];
}

}  // namespace odeclass
