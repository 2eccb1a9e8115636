#pragma once

#include <stdexcept>
#include <utility>

namespace odeclass {

/// Coefficients of x'' + a x' + b x = f and the initial data x(0), x'(0).
struct SystemParams {
  double a = 0.0;  ///< damping
  double b = 0.0;  ///< stiffness
  double xi0 = 0.0;
  double xi1 = 0.0;

  bool is_stable() const noexcept { return a > 0.0 && b > 0.0; }
  bool has_zero_initial_data() const noexcept { return xi0 == 0.0 && xi1 == 0.0; }

  /// Throws std::invalid_argument unless a > 0 and b > 0.
  void require_stable() const;
};

enum class Regime { Overdamped, Critical, Underdamped };

const char* to_string(Regime r) noexcept;

/// The fundamental solution k of k'' + a k' + b k = 0, k(0) = 0, k'(0) = 1,
/// in closed form.
///
/// With sigma = -a/2 the three regimes are
///   overdamped  k = e^{sigma t} sinh(mu t) / mu,  mu = sqrt(a^2/4 - b)
///   critical    k = t e^{sigma t}
///   underdamped k = e^{sigma t} sin(omega t) / omega, omega = sqrt(b - a^2/4)
/// |a^2 - 4b| < 1e-12 (1 + a^2) is treated as critical.
class Kernel {
 public:
  explicit Kernel(double a, double b);

  Regime regime() const noexcept { return regime_; }
  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  /// mu (overdamped), omega (underdamped) or 0 (critical).
  double frequency() const noexcept { return freq_; }

  double k(double t) const { return eval(t, 0); }
  double dk(double t) const { return eval(t, 1); }
  double ddk(double t) const { return eval(t, 2); }
  /// Derivative of order 0, 1 or 2.
  double eval(double t, int order) const;

  /// Upper-left entry of the fundamental matrix: k' + a k.
  double phi11(double t) const { return dk(t) + a_ * k(t); }

 private:
  double a_;
  double b_;
  double sigma_;
  double freq_ = 0.0;
  Regime regime_;
};

Kernel make_kernel(double a, double b);
Kernel make_kernel(const SystemParams& params);

/// x_H(t) = xi0 (k' + a k) + xi1 k and its derivative.
std::pair<double, double> homogeneous_solution(const SystemParams& params, double t);
std::pair<double, double> homogeneous_solution(const Kernel& kernel, const SystemParams& params, double t);

/// Fits log max|k^{(order)}| over unit windows on [t_lo, t_hi] against t and
/// returns the decay rate alpha (negated slope).
double fit_kernel_decay(const Kernel& kernel, int order, double t_lo = 5.0, double t_hi = 40.0);

}  // namespace odeclass
