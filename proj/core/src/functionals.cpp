#include <algorithm>
#include <charconv>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>
#include <thread>

#include "odeclass/functionals.hpp"
#include "odeclass/quadrature.hpp"
#include "odeclass/trajectory.hpp"

namespace odeclass {
namespace {

void check_axis(const std::vector<double>& axis, const char* name) {
  if (axis.size() < 2) throw std::invalid_argument(std::string(name) + " needs at least two samples");
  if (axis.front() != 0.0 || axis.back() != 1.0) {
    throw std::invalid_argument(std::string(name) + " must contain 0 and 1");
  }
  for (std::size_t i = 1; i < axis.size(); ++i) {
    if (!(axis[i] > axis[i - 1])) throw std::invalid_argument(std::string(name) + " must be increasing");
  }
}

std::vector<double> unit_axis(std::size_t n) {
  std::vector<double> axis(n);
  for (std::size_t i = 0; i < n; ++i) axis[i] = static_cast<double>(i) / static_cast<double>(n - 1);
  axis.back() = 1.0;
  return axis;
}

double positive_part(double v) { return v > 0.0 ? v : 0.0; }

}  // namespace

ThetaGrid::ThetaGrid(std::vector<double> theta1, std::vector<double> theta2)
    : theta1_(std::move(theta1)), theta2_(std::move(theta2)) {
  check_axis(theta1_, "theta1");
  check_axis(theta2_, "theta2");
}

ThetaGrid ThetaGrid::uniform(std::size_t n1, std::size_t n2) {
  if (n1 < 2 || n2 < 2) throw std::invalid_argument("theta grid needs at least 2x2 samples");
  return ThetaGrid(unit_axis(n1), unit_axis(n2));
}

ThetaGrid ThetaGrid::parse(std::string_view text) {
  const std::size_t x = text.find_first_of("xX");
  std::size_t n1 = 0, n2 = 0;
  const auto parse_count = [](std::string_view s, std::size_t& out) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size() && !s.empty();
  };
  if (x == std::string_view::npos || !parse_count(text.substr(0, x), n1) || !parse_count(text.substr(x + 1), n2)) {
    throw std::invalid_argument("theta grid must look like NxM, got '" + std::string(text) + "'");
  }
  return uniform(n1, n2);
}

double moving_average(const SampledSeries& Q, double theta, double t) {
  if (theta < 0.0 || theta > 1.0) throw std::invalid_argument("theta must lie in [0, 1]");
  if (theta == 0.0) {
    Q.at(t);  // coverage check
    return 0.0;
  }
  return Q.at(t) - Q.at(positive_part(t - theta));
}

double delta_f(double f_at_t, const SampledSeries& Q, double t) { return f_at_t - moving_average(Q, 1.0, t); }

double delta_f(const SampledSeries& f, const SampledSeries& Q, double t) { return delta_f(f.at(t), Q, t); }

double double_average(const SampledSeries& Q, double theta1, double theta2, double t, double h_outer) {
  if (theta1 < 0.0 || theta1 > 1.0 || theta2 < 0.0 || theta2 > 1.0) {
    throw std::invalid_argument("theta must lie in [0, 1]");
  }
  if (!(h_outer > 0.0)) throw std::invalid_argument("h_outer must be positive");
  if (!Q.covers(t)) throw std::out_of_range("t=" + std::to_string(t) + " outside Q coverage");
  const double lo = positive_part(t - theta1);
  if (theta1 == 0.0 || theta2 == 0.0 || lo == t) return 0.0;
  const auto n = static_cast<std::size_t>(std::ceil((t - lo) / h_outer - 1e-9));
  const double h = (t - lo) / static_cast<double>(n);
  double sum = 0.5 * (moving_average(Q, theta2, lo) + moving_average(Q, theta2, t));
  for (std::size_t i = 1; i < n; ++i) sum += moving_average(Q, theta2, lo + h * static_cast<double>(i));
  return sum * h;
}

DeltaFIntegralResult delta_f_integral_check(const ForcingExpr& f, double t, int n_theta, double spacing) {
  if (!(t >= 0.0)) throw std::invalid_argument("t must be non-negative");
  if (!(spacing > 0.0)) throw std::invalid_argument("spacing must be positive");
  if (t == 0.0) return {0.0, 0.0};
  const std::vector<double> grid = uniform_grid(t, spacing);
  const std::size_t n = grid.size();
  const auto fn = [&](double s) { return f(s); };

  std::vector<double> q(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) q[i] = q[i - 1] + gauss_legendre5(fn, grid[i - 1], grid[i]);
  const double h = grid[1] - grid[0];
  // Q at an arbitrary point: node value plus the partial cell.
  const auto Q = [&](double s) {
    if (s <= 0.0) return 0.0;
    auto i = static_cast<std::size_t>(s / h);
    if (i >= n - 1) i = n - 2;
    return q[i] + gauss_legendre5(fn, grid[i], s);
  };

  std::vector<double> df(n);
  for (std::size_t i = 0; i < n; ++i) df[i] = f(grid[i]) - (q[i] - Q(grid[i] - 1.0));
  double lhs = 0.0;
  for (std::size_t i = 1; i < n; ++i) lhs += 0.5 * h * (df[i - 1] + df[i]);

  int panels = std::max(2, n_theta);
  if (panels % 2 != 0) ++panels;
  std::vector<double> ft(static_cast<std::size_t>(panels) + 1);
  for (int j = 0; j <= panels; ++j) {
    const double theta = static_cast<double>(j) / panels;
    ft[static_cast<std::size_t>(j)] = q[n - 1] - Q(t - theta);
  }
  return {lhs, composite_simpson(ft, 1.0 / panels)};
}

FunctionalEvaluator::FunctionalEvaluator(std::function<double(double)> Q, std::function<double(double)> R)
    : q_(std::move(Q)), r_(std::move(R)) {}

FunctionalEvaluator FunctionalEvaluator::from_trajectory(const Trajectory& traj) {
  return FunctionalEvaluator([&traj](double t) { return traj.at(Channel::Q, t); },
                             [&traj](double t) { return traj.at(Channel::R, t); });
}

FunctionalEvaluator FunctionalEvaluator::from_cumulative(const SampledSeries& Q) {
  struct Data {
    std::vector<double> t, q, r;
    std::size_t cell(double s) const {
      if (s < t.front() || s > t.back()) throw std::out_of_range("t=" + std::to_string(s) + " outside Q coverage");
      auto it = std::upper_bound(t.begin(), t.end(), s);
      std::size_t i = it == t.begin() ? 0 : static_cast<std::size_t>(it - t.begin()) - 1;
      return std::min(i, t.size() - 2);
    }
  };
  if (Q.size() < 2) throw std::invalid_argument("Q needs at least two samples");
  auto d = std::make_shared<Data>();
  d->t.assign(Q.times().begin(), Q.times().end());
  d->q.assign(Q.values().begin(), Q.values().end());
  d->r.assign(d->t.size(), 0.0);
  for (std::size_t i = 1; i < d->t.size(); ++i) {
    d->r[i] = d->r[i - 1] + 0.5 * (d->t[i] - d->t[i - 1]) * (d->q[i - 1] + d->q[i]);
  }
  auto q = [d](double s) {
    const std::size_t i = d->cell(s);
    const double w = (s - d->t[i]) / (d->t[i + 1] - d->t[i]);
    return d->q[i] + w * (d->q[i + 1] - d->q[i]);
  };
  auto r = [d](double s) {
    const std::size_t i = d->cell(s);
    const double dt = s - d->t[i];
    const double slope = (d->q[i + 1] - d->q[i]) / (d->t[i + 1] - d->t[i]);
    return d->r[i] + dt * d->q[i] + 0.5 * dt * dt * slope;
  };
  return FunctionalEvaluator(q, r);
}

double FunctionalEvaluator::f_theta(double theta, double t) const {
  if (theta < 0.0 || theta > 1.0) throw std::invalid_argument("theta must lie in [0, 1]");
  if (theta == 0.0) return 0.0;
  return q_(t) - q_(positive_part(t - theta));
}

double FunctionalEvaluator::F(double theta1, double theta2, double t) const {
  if (theta1 < 0.0 || theta1 > 1.0 || theta2 < 0.0 || theta2 > 1.0) {
    throw std::invalid_argument("theta must lie in [0, 1]");
  }
  if (theta1 == 0.0 || theta2 == 0.0) return 0.0;
  const double lo = positive_part(t - theta1);
  const double hi2 = positive_part(t - theta2);
  const double lo2 = positive_part(lo - theta2);
  return (r_(t) - r_(lo)) - (r_(hi2) - r_(lo2));
}

FunctionalField::FunctionalField(ThetaGrid grid, std::vector<double> times, std::vector<double> values)
    : grid_(std::move(grid)), times_(std::move(times)), values_(std::move(values)) {
  const std::size_t n1 = grid_.theta1().size(), n2 = grid_.theta2().size(), nt = times_.size();
  if (values_.size() != n1 * n2 * nt) throw std::invalid_argument("field size does not match grid and times");
  sup_.assign(nt, 0.0);
  for (std::size_t k = 0; k < n1 * n2; ++k) {
    for (std::size_t it = 0; it < nt; ++it) sup_[it] = std::max(sup_[it], std::abs(values_[k * nt + it]));
  }
}

double FunctionalField::value(std::size_t i1, std::size_t i2, std::size_t it) const {
  const std::size_t n2 = grid_.theta2().size(), nt = times_.size();
  return values_.at((i1 * n2 + i2) * nt + it);
}

SampledSeries FunctionalField::sup_series() const { return SampledSeries(times_, sup_); }

FunctionalField functional_field(const FunctionalEvaluator& eval, const ThetaGrid& grid,
                                  std::span<const double> times) {
  const auto th1 = grid.theta1(), th2 = grid.theta2();
  const std::size_t pairs = th1.size() * th2.size(), nt = times.size();
  std::vector<double> values(pairs * nt);
  if (nt > 0) {
    // Coverage errors surface here rather than inside a worker thread.
    const auto [lo, hi] = std::minmax_element(times.begin(), times.end());
    eval.Q(*lo);
    eval.Q(*hi);
  }
  const auto fill = [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      const double a = th1[k / th2.size()], b = th2[k % th2.size()];
      for (std::size_t it = 0; it < nt; ++it) values[k * nt + it] = eval.F(a, b, times[it]);
    }
  };
  const std::size_t workers =
      std::min<std::size_t>(pairs, std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1 || pairs * nt < 20000) {
    fill(0, pairs);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (pairs + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = w * chunk, end = std::min(pairs, begin + chunk);
      if (begin < end) pool.emplace_back(fill, begin, end);
    }
  }
  return FunctionalField(grid, std::vector<double>(times.begin(), times.end()), std::move(values));
}

FunctionalField functional_field(const SampledSeries& Q, const ThetaGrid& grid, std::span<const double> times) {
  return functional_field(FunctionalEvaluator::from_cumulative(Q), grid, times);
}

}  // namespace odeclass
