#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "odeclass/trajectory.hpp"

namespace odeclass {

const char* to_string(Channel c) noexcept {
  switch (c) {
    case Channel::X: return "x";
    case Channel::XPrime: return "xprime";
    case Channel::Y1: return "y1";
    case Channel::Y2: return "y2";
    case Channel::Y2Prime: return "y2prime";
    case Channel::Q: return "Q";
    case Channel::R: return "R";
  }
  return "?";
}

struct TrajectoryBuilder {
  static Trajectory build(const SystemParams& params, const ForcingExpr& f, double horizon, double tol,
                          const IntegrateOptions& opt) {
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw std::invalid_argument("horizon must be positive");
    if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
    if (!(opt.h_max > 0.0)) throw std::invalid_argument("h_max must be positive");

    Trajectory tr;
    tr.params_ = params;
    tr.forcing_ = f;
    const std::vector<double> outputs = uniform_grid(horizon, opt.h_max);
    tr.h_ = outputs.size() > 1 ? outputs[1] - outputs[0] : horizon;
    const std::size_t n = outputs.size();
    for (auto* v : {&tr.grid_, &tr.x_, &tr.xp_, &tr.y1_, &tr.y2_, &tr.y2p_, &tr.q_, &tr.r_, &tr.f_}) {
      v->reserve(n);
    }

    const double a = params.a, b = params.b;
    // State: x, x', y1, y2, y2', Q, R.
    using State = std::array<double, 7>;
    const auto rhs = [&](double t, const State& s) {
      const double ft = f(t);
      return State{s[1], ft - a * s[1] - b * s[0], -s[2] + ft, s[4], ft - 2.0 * s[4] - s[3], ft, s[5]};
    };
    const auto observe = [&](double t, const State& s) {
      tr.grid_.push_back(t);
      tr.x_.push_back(s[0]);
      tr.xp_.push_back(s[1]);
      tr.y1_.push_back(s[2]);
      tr.y2_.push_back(s[3]);
      tr.y2p_.push_back(s[4]);
      tr.q_.push_back(s[5]);
      tr.r_.push_back(s[6]);
      tr.f_.push_back(f(t));
    };

    Dopri5Options dopt;
    dopt.abs_tol = tol;
    dopt.rel_tol = tol;
    dopt.max_step = opt.max_step;
    dopt.max_steps = opt.max_steps;
    const std::vector<double> breaks = f.breakpoints(horizon);
    const State y0{params.xi0, params.xi1, 0.0, 0.0, 0.0, 0.0, 0.0};
    try {
      tr.stats_ = dopri5<7>(rhs, 0.0, y0, horizon, breaks, outputs, observe, dopt);
    } catch (const IntegrationError& e) {
      if (!opt.partial_on_failure) throw;
      tr.failure_ = e.what();
      if (tr.grid_.empty()) throw;
    }
    return tr;
  }
};

std::span<const double> Trajectory::values(Channel c) const noexcept {
  switch (c) {
    case Channel::X: return x_;
    case Channel::XPrime: return xp_;
    case Channel::Y1: return y1_;
    case Channel::Y2: return y2_;
    case Channel::Y2Prime: return y2p_;
    case Channel::Q: return q_;
    case Channel::R: return r_;
  }
  return {};
}

std::vector<double> Trajectory::xsecond() const {
  std::vector<double> out(size());
  for (std::size_t i = 0; i < size(); ++i) out[i] = f_[i] - params_.a * xp_[i] - params_.b * x_[i];
  return out;
}

SampledSeries Trajectory::series(Channel c) const {
  const auto v = values(c);
  return SampledSeries(grid_, std::vector<double>(v.begin(), v.end()));
}

double Trajectory::derivative_at_node(Channel c, std::size_t i) const {
  switch (c) {
    case Channel::X: return xp_[i];
    case Channel::XPrime: return f_[i] - params_.a * xp_[i] - params_.b * x_[i];
    case Channel::Y1: return f_[i] - y1_[i];
    case Channel::Y2: return y2p_[i];
    case Channel::Y2Prime: return f_[i] - 2.0 * y2p_[i] - y2_[i];
    case Channel::Q: return f_[i];
    case Channel::R: return q_[i];
  }
  return 0.0;
}

double Trajectory::at(Channel c, double t) const {
  if (grid_.empty() || t < 0.0 || t > grid_.back() * (1.0 + 1e-14)) {
    throw std::out_of_range("t=" + std::to_string(t) + " outside trajectory");
  }
  const auto v = values(c);
  if (size() == 1) return v[0];
  const double u = t / h_;
  std::size_t i = static_cast<std::size_t>(u);
  if (i >= size() - 1) i = size() - 2;
  const double s = u - static_cast<double>(i);
  if (s == 0.0) return v[i];
  const double s2 = s * s, s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s, h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
  return h00 * v[i] + h10 * h_ * derivative_at_node(c, i) + h01 * v[i + 1] +
         h11 * h_ * derivative_at_node(c, i + 1);
}

Trajectory integrate(const SystemParams& params, const ForcingExpr& f, double horizon, double tol,
                     const IntegrateOptions& options) {
  return TrajectoryBuilder::build(params, f, horizon, tol, options);
}

SampledSeries repeated_exp_filter(const ForcingExpr& f, int j, std::span<const double> grid, double tol) {
  if (j < 0 || j > 3) throw std::invalid_argument("filter order must be in {0,1,2,3}");
  if (grid.empty()) return {};
  std::vector<double> times(grid.begin(), grid.end());
  std::vector<double> out;
  out.reserve(times.size());
  if (j == 0) {
    for (double t : times) out.push_back(f(t));
    return SampledSeries(std::move(times), std::move(out));
  }
  if (times.front() < 0.0) throw std::invalid_argument("grid must start at t >= 0");

  using State = std::array<double, 3>;
  const auto rhs = [&](double t, const State& s) {
    return State{-s[0] + f(t), -s[1] + s[0], -s[2] + s[1]};
  };
  const auto observe = [&](double, const State& s) { out.push_back(s[static_cast<std::size_t>(j - 1)]); };
  Dopri5Options opt;
  opt.abs_tol = tol;
  opt.rel_tol = tol;
  const std::vector<double> breaks = f.breakpoints(times.back());
  dopri5<3>(rhs, 0.0, State{}, times.back(), breaks, times, observe, opt);
  return SampledSeries(std::move(times), std::move(out));
}

SampledSeries convolve_kernel(const std::function<double(double)>& k, const SampledSeries& s) {
  if (s.empty()) return {};
  if (s.front_time() != 0.0) throw std::invalid_argument("convolution series must start at t = 0");
  if (s.size() == 1) return SampledSeries({0.0}, {0.0});
  if (!s.is_uniform()) throw std::invalid_argument("convolution requires a uniform grid");
  const double h = s.spacing();
  std::vector<double> ks(s.size());
  for (std::size_t m = 0; m < ks.size(); ++m) ks[m] = k(static_cast<double>(m) * h);
  auto times = s.times();
  return SampledSeries(std::vector<double>(times.begin(), times.end()), trapezoid_convolution(ks, s.values(), h));
}

SampledSeries convolve_kernel(const Kernel& kernel, int order, const SampledSeries& s) {
  if (order < 0 || order > 2) throw std::invalid_argument("kernel derivative order must be 0, 1 or 2");
  return convolve_kernel([&](double t) { return kernel.eval(t, order); }, s);
}

}  // namespace odeclass
