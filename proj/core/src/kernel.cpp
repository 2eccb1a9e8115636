#include "odeclass/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace odeclass {

void SystemParams::require_stable() const {
  if (!is_stable()) throw std::invalid_argument("operation requires a > 0 and b > 0");
}

const char* to_string(Regime r) noexcept {
  switch (r) {
    case Regime::Overdamped: return "overdamped";
    case Regime::Critical: return "critical";
    case Regime::Underdamped: return "underdamped";
  }
  return "?";
}

Kernel::Kernel(double a, double b) : a_(a), b_(b), sigma_(-0.5 * a) {
  const double disc = a * a - 4.0 * b;
  if (std::abs(disc) < 1e-12 * (1.0 + a * a)) {
    regime_ = Regime::Critical;
  } else if (disc > 0.0) {
    regime_ = Regime::Overdamped;
    freq_ = 0.5 * std::sqrt(disc);
  } else {
    regime_ = Regime::Underdamped;
    freq_ = 0.5 * std::sqrt(-disc);
  }
}

double Kernel::eval(double t, int order) const {
  const double e = std::exp(sigma_ * t);
  const double s = sigma_;
  switch (regime_) {
    case Regime::Critical:
      switch (order) {
        case 0: return t * e;
        case 1: return e * (1.0 + s * t);
        default: return e * (2.0 * s + s * s * t);
      }
    case Regime::Overdamped: {
      const double m = freq_;
      const double sh = std::sinh(m * t);
      const double ch = std::cosh(m * t);
      switch (order) {
        case 0: return e * sh / m;
        case 1: return e * (s * sh + m * ch) / m;
        default: return e * ((s * s + m * m) * sh + 2.0 * s * m * ch) / m;
      }
    }
    case Regime::Underdamped: {
      const double w = freq_;
      const double sn = std::sin(w * t);
      const double cs = std::cos(w * t);
      switch (order) {
        case 0: return e * sn / w;
        case 1: return e * (s * sn + w * cs) / w;
        default: return e * ((s * s - w * w) * sn + 2.0 * s * w * cs) / w;
      }
    }
  }
  return 0.0;
}

Kernel make_kernel(double a, double b) { return Kernel(a, b); }
Kernel make_kernel(const SystemParams& params) { return Kernel(params.a, params.b); }

std::pair<double, double> homogeneous_solution(const Kernel& kernel, const SystemParams& p, double t) {
  const double k = kernel.k(t);
  const double dk = kernel.dk(t);
  const double ddk = kernel.ddk(t);
  return {p.xi0 * (dk + p.a * k) + p.xi1 * k, p.xi0 * (ddk + p.a * dk) + p.xi1 * dk};
}

std::pair<double, double> homogeneous_solution(const SystemParams& params, double t) {
  return homogeneous_solution(make_kernel(params), params, t);
}

double fit_kernel_decay(const Kernel& kernel, int order, double t_lo, double t_hi) {
  // Window maxima sidestep the zeros of oscillating kernels.
  std::vector<double> xs;
  std::vector<double> ys;
  for (double w = t_lo; w + 1.0 <= t_hi + 1e-12; w += 1.0) {
    double peak = 0.0;
    for (int i = 0; i <= 200; ++i) peak = std::max(peak, std::abs(kernel.eval(w + i / 200.0, order)));
    if (peak <= 0.0) continue;
    xs.push_back(w + 0.5);
    ys.push_back(std::log(peak));
  }
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return -slope;
}

}  // namespace odeclass
