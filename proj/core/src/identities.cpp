#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

#include "odeclass/identities.hpp"
#include "odeclass/quadrature.hpp"

namespace odeclass {
namespace {

IdentityResidual summarize(std::string tag, std::span<const double> times, std::span<const double> lhs,
                           std::span<const double> rhs, double h) {
  IdentityResidual r;
  r.tag = std::move(tag);
  r.h = h;
  if (times.empty()) return r;
  r.window_lo = times.front();
  r.window_hi = times.back();
  double running = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    running = std::max(running, std::abs(lhs[i]));
    const double d = std::abs(lhs[i] - rhs[i]);
    r.max_abs = std::max(r.max_abs, d);
    r.max_scaled = std::max(r.max_scaled, d / (1.0 + running));
  }
  return r;
}

void require_zero_data(const Trajectory& traj) {
  if (!traj.params().has_zero_initial_data()) {
    throw std::invalid_argument("identity requires zero initial data (xi0 = xi1 = 0)");
  }
}

SampledSeries channel(const Trajectory& traj, Channel c) { return traj.series(c); }

std::vector<double> add(std::span<const double> u, std::span<const double> v, double scale = 1.0) {
  std::vector<double> out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = u[i] + scale * v[i];
  return out;
}

std::vector<double> nodes_from(const Trajectory& traj, double t_min) {
  std::vector<double> out;
  for (double t : traj.grid()) {
    if (t >= t_min - 1e-9) out.push_back(std::max(t, t_min));
  }
  return out;
}

void require_times_from(std::span<const double> times, double t_min, const char* what) {
  for (double t : times) {
    if (t < t_min) throw std::invalid_argument(std::string(what) + " requires t >= " + std::to_string(t_min));
  }
}

void require_theta(double theta) {
  if (theta < 0.0 || theta > 1.0) throw std::invalid_argument("theta must lie in [0, 1]");
}

/// D[g](t) for the four-point combination.
template <class G>
double four_point(const G& g, double t, double theta1, double theta2) {
  return g(t) - g(t - theta1) - g(t - theta2) + g(t - theta1 - theta2);
}

/// Composite Simpson on [0, 1], split at `breaks` so that every piece is
/// smooth. Each piece gets a share of `nodes` proportional to its length.
template <class Fn>
double split_simpson(const Fn& fn, std::vector<double> breaks, int nodes) {
  std::vector<double> cuts{0.0, 1.0};
  for (double b : breaks) {
    if (b > 1e-12 && b < 1.0 - 1e-12) cuts.push_back(b);
  }
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  std::vector<double> values;
  for (std::size_t p = 1; p < cuts.size(); ++p) {
    const double lo = cuts[p - 1], hi = cuts[p];
    if (hi - lo < 1e-12) continue;
    int panels = static_cast<int>(std::ceil((nodes - 1) * (hi - lo)));
    panels = std::max(2, panels + (panels % 2));
    const double step = (hi - lo) / panels;
    values.resize(static_cast<std::size_t>(panels) + 1);
    for (int j = 0; j <= panels; ++j) values[static_cast<std::size_t>(j)] = fn(lo + step * j);
    total += composite_simpson(values, step);
  }
  return total;
}

template <class Body>
void parallel_for(std::size_t n, const Body& body) {
  const std::size_t workers = std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), 16);
  if (workers <= 1 || n < 64) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::jthread> pool;
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk, end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&body, begin, end] {
      for (std::size_t i = begin; i < end; ++i) body(i);
    });
  }
}

/// Running integrals of a channel with Hermite interpolation; P' = g, S' = P.
struct RunningIntegrals {
  std::vector<double> g, P, S;
  double h;

  RunningIntegrals(const Trajectory& traj, Channel c) : h(traj.spacing()) {
    auto v = traj.values(c);
    g.assign(v.begin(), v.end());
    P = cumulative_trapezoid(g, h);
    S = cumulative_trapezoid(P, h);
  }
  double P_at(double t) const { return UniformHermite(0.0, h, P, g)(t); }
  double S_at(double t) const { return UniformHermite(0.0, h, S, P)(t); }
};

}  // namespace

double phi_inverse_kernel(const SystemParams& params, double t) {
  return ((params.a - 2.0) + (params.b - params.a + 1.0) * t) * std::exp(-t);
}

IdentityResidual residual_x0_vs_y2(const Trajectory& traj, const Kernel& kernel) {
  require_zero_data(traj);
  const SampledSeries y2 = channel(traj, Channel::Y2);
  const SampledSeries conv = convolve_kernel(
      [&](double t) { return kernel.ddk(t) + 2.0 * kernel.dk(t) + kernel.k(t); }, y2);
  return summarize("x0_vs_y2", traj.grid(), traj.x(), add(y2.values(), conv.values()), traj.spacing());
}

IdentityResidual residual_y2_vs_x0(const Trajectory& traj, const SystemParams& params) {
  require_zero_data(traj);
  const SampledSeries x = channel(traj, Channel::X);
  const SampledSeries conv = convolve_kernel([&](double t) { return phi_inverse_kernel(params, t); }, x);
  return summarize("y2_vs_x0", traj.grid(), traj.y2(), add(x.values(), conv.values()), traj.spacing());
}

IdentityResidual residual_F_vs_y2(const Trajectory& traj, double theta1, double theta2,
                                  std::span<const double> times) {
  require_theta(theta1);
  require_theta(theta2);
  require_times_from(times, 2.0, "F_vs_y2");
  const FunctionalEvaluator eval = FunctionalEvaluator::from_trajectory(traj);
  const RunningIntegrals I(traj, Channel::Y2);
  std::vector<double> lhs(times.size()), rhs(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    lhs[i] = eval.F(theta1, theta2, t);
    rhs[i] = four_point([&](double s) { return traj.at(Channel::Y2, s); }, t, theta1, theta2) +
             2.0 * four_point([&](double s) { return I.P_at(s); }, t, theta1, theta2) +
             four_point([&](double s) { return I.S_at(s); }, t, theta1, theta2);
  }
  return summarize("F_vs_y2", times, lhs, rhs, traj.spacing());
}

IdentityResidual residual_F_vs_y2(const Trajectory& traj, double theta1, double theta2) {
  const auto times = nodes_from(traj, 2.0);
  return residual_F_vs_y2(traj, theta1, theta2, times);
}

IdentityResidual residual_F_vs_x(const Trajectory& traj, double theta1, double theta2,
                                 std::span<const double> times) {
  require_theta(theta1);
  require_theta(theta2);
  require_times_from(times, 2.0, "F_vs_x");
  const double a = traj.params().a, b = traj.params().b;
  const FunctionalEvaluator eval = FunctionalEvaluator::from_trajectory(traj);
  const RunningIntegrals I(traj, Channel::X);
  std::vector<double> lhs(times.size()), rhs(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    lhs[i] = eval.F(theta1, theta2, t);
    rhs[i] = four_point([&](double s) { return traj.at(Channel::X, s); }, t, theta1, theta2) +
             a * four_point([&](double s) { return I.P_at(s); }, t, theta1, theta2) +
             b * four_point([&](double s) { return I.S_at(s); }, t, theta1, theta2);
  }
  return summarize("F_vs_x", times, lhs, rhs, traj.spacing());
}

IdentityResidual residual_F_vs_x(const Trajectory& traj, double theta1, double theta2) {
  const auto times = nodes_from(traj, 2.0);
  return residual_F_vs_x(traj, theta1, theta2, times);
}

IdentityResidual residual_x0_vs_F(const Trajectory& traj, const Kernel& kernel, int theta_nodes) {
  require_zero_data(traj);
  if (theta_nodes < 3) throw std::invalid_argument("theta_nodes must be at least 3");
  const FunctionalEvaluator eval = FunctionalEvaluator::from_trajectory(traj);
  const auto grid = traj.grid();
  const std::size_t n = grid.size();
  std::vector<double> F11(n), G(n), H(n);

  parallel_for(n, [&](std::size_t i) {
    const double t = grid[i];
    F11[i] = eval.F(1.0, 1.0, t);
    // F(phi, theta, t) loses smoothness where t - phi, t - theta or
    // t - phi - theta crosses zero.
    const double g1 = split_simpson([&](double p) { return eval.F(p, 1.0, t); }, {t, t - 1.0}, theta_nodes);
    const double g2 = split_simpson([&](double q) { return eval.F(1.0, q, t); }, {t, t - 1.0}, theta_nodes);
    G[i] = g1 + g2;
    H[i] = split_simpson(
        [&](double q) {
          return split_simpson([&](double p) { return eval.F(p, q, t); }, {t, t - q}, theta_nodes);
        },
        {t, t - 1.0}, theta_nodes);
  });

  const auto series = [&](std::vector<double> v) {
    return SampledSeries(std::vector<double>(grid.begin(), grid.end()), std::move(v));
  };
  const SampledSeries c0 = convolve_kernel(kernel, 0, series(F11));
  const SampledSeries c1 = convolve_kernel(kernel, 1, series(G));
  const SampledSeries c2 = convolve_kernel(kernel, 2, series(H));
  std::vector<double> rhs(n);
  for (std::size_t i = 0; i < n; ++i) rhs[i] = c0.values()[i] + c1.values()[i] + H[i] + c2.values()[i];
  return summarize("x0_vs_F", grid, traj.x(), rhs, traj.spacing());
}

IdentityResidual residual_y1_vs_x(const Trajectory& traj) {
  const double a = traj.params().a, b = traj.params().b, xi1 = traj.params().xi1;
  const auto e = [](double t) { return std::exp(-t); };
  const SampledSeries ex = convolve_kernel(e, channel(traj, Channel::X));
  const SampledSeries exp_ = convolve_kernel(e, channel(traj, Channel::XPrime));
  const auto grid = traj.grid();
  std::vector<double> rhs(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    rhs[i] = traj.xprime()[i] - std::exp(-grid[i]) * xi1 + (a - 1.0) * exp_.values()[i] + b * ex.values()[i];
  }
  return summarize("y1_vs_x", grid, traj.y1(), rhs, traj.spacing());
}

IdentityResidual residual_ftheta_vs_y1(const Trajectory& traj, double theta, std::span<const double> times) {
  require_theta(theta);
  require_times_from(times, 1.0, "ftheta_vs_y1");
  const FunctionalEvaluator eval = FunctionalEvaluator::from_trajectory(traj);
  const RunningIntegrals I(traj, Channel::Y1);
  std::vector<double> lhs(times.size()), rhs(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    lhs[i] = eval.f_theta(theta, t);
    rhs[i] = traj.at(Channel::Y1, t) - traj.at(Channel::Y1, t - theta) + I.P_at(t) - I.P_at(t - theta);
  }
  return summarize("ftheta_vs_y1", times, lhs, rhs, traj.spacing());
}

IdentityResidual residual_ftheta_vs_y1(const Trajectory& traj, double theta) {
  const auto times = nodes_from(traj, 1.0);
  return residual_ftheta_vs_y1(traj, theta, times);
}

IdentityResidual residual_x_vs_Xvoc(const Trajectory& traj, const Kernel& kernel, const SystemParams& params) {
  const double a = params.a;
  const SampledSeries conv = convolve_kernel(
      [&](double t) { return kernel.phi11(t) + (1.0 - a) * kernel.k(t); }, channel(traj, Channel::Y1));
  const auto grid = traj.grid();
  std::vector<double> rhs(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    rhs[i] = homogeneous_solution(kernel, params, grid[i]).first + conv.values()[i];
  }
  return summarize("x_vs_Xvoc", grid, traj.x(), rhs, traj.spacing());
}

DecompositionResult decomposition_check(const SampledSeries& Q, double theta1, double theta2, double delta,
                                        int k_index, double t, double h_outer) {
  if (k_index != 1 && k_index != 2) throw std::invalid_argument("k_index must be 1 or 2");
  if (!(delta >= 0.0)) throw std::invalid_argument("delta must be non-negative");
  if (t < 2.0 + 2.0 * delta) throw std::invalid_argument("decomposition requires t >= 2 + 2 delta");
  const double up1 = k_index == 1 ? theta1 + delta : theta1;
  const double up2 = k_index == 2 ? theta2 + delta : theta2;
  if (up1 > 1.0 || up2 > 1.0) throw std::invalid_argument("raised theta leaves [0, 1]");
  const double lhs = double_average(Q, up1, up2, t, h_outer);
  const double base = double_average(Q, theta1, theta2, t, h_outer);
  const double shifted = k_index == 1 ? double_average(Q, delta, theta2, t - theta1, h_outer)
                                      : double_average(Q, theta1, delta, t - theta2, h_outer);
  return {lhs, base + shifted};
}

}  // namespace odeclass
