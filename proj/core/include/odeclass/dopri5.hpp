#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>

namespace odeclass {

/// Thrown when adaptive integration cannot continue. `last_time()` is the
/// last time the solution was reached.
class IntegrationError : public std::runtime_error {
 public:
  enum class Kind { StepUnderflow, NonFinite, StepBudget };

  IntegrationError(Kind kind, double last_time, const std::string& what)
      : std::runtime_error(what + " (last reachable t=" + std::to_string(last_time) + ")"),
        kind_(kind),
        last_time_(last_time) {}

  Kind kind() const noexcept { return kind_; }
  double last_time() const noexcept { return last_time_; }

 private:
  Kind kind_;
  double last_time_;
};

struct Dopri5Options {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  double max_step = 1.0;
  std::size_t max_steps = 50'000'000;
};

struct Dopri5Stats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
};

/// Dormand-Prince 5(4) with Hairer's continuous extension (4th order dense
/// output). Steps are clipped so that every breakpoint is hit exactly; the
/// right-hand side is re-evaluated there instead of reusing the FSAL stage.
///
/// `observe(t, y)` is called once for every entry of `outputs` (sorted,
/// within [t0, t1]) with the dense-output state.
template <std::size_t N, class Rhs, class Observer>
Dopri5Stats dopri5(Rhs&& rhs, double t0, std::array<double, N> y, double t1,
                   std::span<const double> breakpoints, std::span<const double> outputs,
                   Observer&& observe, const Dopri5Options& opt = {}) {
  using State = std::array<double, N>;

  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                   a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                   a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                   a75 = -2187.0 / 6784, a76 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
  constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                   d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                   d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

  const auto finite = [](const State& s) {
    return std::all_of(s.begin(), s.end(), [](double v) { return std::isfinite(v); });
  };
  const auto norm = [&](const State& s, const State& scale_a, const State& scale_b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double sc = opt.abs_tol + opt.rel_tol * std::max(std::abs(scale_a[i]), std::abs(scale_b[i]));
      const double r = s[i] / sc;
      acc += r * r;
    }
    return std::sqrt(acc / static_cast<double>(N));
  };

  Dopri5Stats stats;
  std::size_t next_out = 0;
  while (next_out < outputs.size() && outputs[next_out] <= t0) observe(outputs[next_out++], y);
  if (t1 <= t0) return stats;

  std::size_t next_break = 0;
  while (next_break < breakpoints.size() && breakpoints[next_break] <= t0) ++next_break;

  double t = t0;
  State k1, k2, k3, k4, k5, k6, k7, ytmp, ynew, err;
  k1 = rhs(t, y);
  if (!finite(k1)) throw IntegrationError(IntegrationError::Kind::NonFinite, t, "non-finite derivative");

  // Initial step (Hairer, Norsett & Wanner II.4).
  const auto initial_step = [&]() {
    State zero{};
    const double d0 = norm(y, y, zero);
    const double d1n = norm(k1, y, zero);
    double h0 = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
    h0 = std::min(h0, t1 - t);
    for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h0 * k1[i];
    const State f1 = rhs(t + h0, ytmp);
    State diff;
    for (std::size_t i = 0; i < N; ++i) diff[i] = f1[i] - k1[i];
    const double d2 = finite(f1) ? norm(diff, y, zero) / h0 : 0.0;
    const double dm = std::max(d1n, d2);
    const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
    return std::min({100.0 * h0, h1, opt.max_step});
  };
  double h = initial_step();

  while (t < t1) {
    if (stats.accepted + stats.rejected >= opt.max_steps) {
      throw IntegrationError(IntegrationError::Kind::StepBudget, t, "step budget exhausted");
    }
    double target = t1;
    if (next_break < breakpoints.size() && breakpoints[next_break] < t1) target = breakpoints[next_break];
    bool lands = false;
    if (t + h >= target - 1e-12 * std::max(1.0, std::abs(target))) {
      h = target - t;
      lands = true;
    }
    if (h <= 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t))) {
      throw IntegrationError(IntegrationError::Kind::StepUnderflow, t, "step size underflow");
    }

    for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
    k2 = rhs(t + c2 * h, ytmp);
    for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    k3 = rhs(t + c3 * h, ytmp);
    for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    k4 = rhs(t + c4 * h, ytmp);
    for (std::size_t i = 0; i < N; ++i)
      ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    k5 = rhs(t + c5 * h, ytmp);
    for (std::size_t i = 0; i < N; ++i)
      ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    const double t_new = lands ? target : t + h;
    k6 = rhs(t_new, ytmp);
    for (std::size_t i = 0; i < N; ++i)
      ynew[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
    k7 = rhs(t_new, ynew);
    for (std::size_t i = 0; i < N; ++i)
      err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);

    const bool ok_values = finite(ynew) && finite(k7);
    const double en = ok_values ? norm(err, y, ynew) : std::numeric_limits<double>::infinity();

    if (en <= 1.0) {
      // Dense output coefficients for this step.
      State r1 = y, r2, r3, r4, r5;
      for (std::size_t i = 0; i < N; ++i) {
        r2[i] = ynew[i] - y[i];
        r3[i] = h * k1[i] - r2[i];
        r4[i] = r2[i] - h * k7[i] - r3[i];
        r5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
      }
      while (next_out < outputs.size() && outputs[next_out] <= t_new) {
        const double to = outputs[next_out++];
        if (to >= t_new) {
          observe(to, ynew);
          continue;
        }
        const double th = (to - t) / h;
        const double th1 = 1.0 - th;
        State yo;
        for (std::size_t i = 0; i < N; ++i)
          yo[i] = r1[i] + th * (r2[i] + th1 * (r3[i] + th * (r4[i] + th1 * r5[i])));
        observe(to, yo);
      }
      ++stats.accepted;
      t = t_new;
      y = ynew;
      if (lands && target < t1) {
        ++next_break;
        k1 = rhs(t, y);
        if (!finite(k1)) throw IntegrationError(IntegrationError::Kind::NonFinite, t, "non-finite derivative");
      } else {
        k1 = k7;
      }
      const double fac = en == 0.0 ? 10.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 10.0);
      h = std::min(h * fac, opt.max_step);
    } else {
      ++stats.rejected;
      if (!ok_values) {
        // Either the step was far too large or the solution itself blew up.
        if (h <= 1e-10 * std::max(1.0, std::abs(t))) {
          throw IntegrationError(IntegrationError::Kind::NonFinite, t, "non-finite state");
        }
        h *= 0.1;
      } else {
        h *= std::max(0.2, 0.9 * std::pow(en, -0.2));
      }
    }
  }
  while (next_out < outputs.size()) observe(outputs[next_out++], y);
  return stats;
}

}  // namespace odeclass
