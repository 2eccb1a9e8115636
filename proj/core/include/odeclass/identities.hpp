#pragma once

#include <span>
#include <string>

#include "odeclass/functionals.hpp"
#include "odeclass/kernel.hpp"
#include "odeclass/trajectory.hpp"

namespace odeclass {

/// Residual summary of one representation identity over a time window.
struct IdentityResidual {
  std::string tag;
  double window_lo = 0.0;
  double window_hi = 0.0;
  double max_abs = 0.0;
  /// max |lhs - rhs| / (1 + running max |lhs|)
  double max_scaled = 0.0;
  double h = 0.0;
};

/// x0 = y2 + (k'' + 2k' + k) * y2. Requires zero initial data.
IdentityResidual residual_x0_vs_y2(const Trajectory& traj, const Kernel& kernel);

/// y2 = x0 + phi * x0 with phi(t) = (a-2) e^{-t} + (b-a+1) t e^{-t}.
/// Requires zero initial data.
IdentityResidual residual_y2_vs_x0(const Trajectory& traj, const SystemParams& params);

/// phi from the inverse identity above.
double phi_inverse_kernel(const SystemParams& params, double t);

/// F_(theta1,theta2)(t) = D[y2] + 2 D[P] + D[S] where P and S are the first
/// and second running integrals of y2 and
/// D[g](t) = g(t) - g(t-theta1) - g(t-theta2) + g(t-theta1-theta2).
/// Every time must be >= 2. Without `times`, all grid nodes in [2, T].
IdentityResidual residual_F_vs_y2(const Trajectory& traj, double theta1, double theta2,
                                  std::span<const double> times);
IdentityResidual residual_F_vs_y2(const Trajectory& traj, double theta1, double theta2);

/// F_(theta1,theta2)(t) = D[x] + a D[P_x] + b D[S_x]. Holds for any initial
/// data.
IdentityResidual residual_F_vs_x(const Trajectory& traj, double theta1, double theta2,
                                 std::span<const double> times);
IdentityResidual residual_F_vs_x(const Trajectory& traj, double theta1, double theta2);

/// x0 = k * F_(1,1) + k' * G1 + k' * G2 + H + k'' * H with
/// G1 = int F_(phi,1) dphi, G2 = int F_(1,theta) dtheta and
/// H = double integral of F_(phi,theta), all over [0, 1]. Theta integrals
/// use composite Simpson with about `theta_nodes` nodes per axis; the axes
/// are split where the truncation (.)^+ makes F non-smooth.
/// Requires zero initial data.
IdentityResidual residual_x0_vs_F(const Trajectory& traj, const Kernel& kernel, int theta_nodes = 33);

/// y1 = x' - e^{-t} x'(0) + (a-1)(e * x') + b (e * x), e(t) = e^{-t}.
IdentityResidual residual_y1_vs_x(const Trajectory& traj);

/// f_theta(t) = y1(t) - y1(t-theta) + int_{t-theta}^t y1. Every time must be
/// >= 1. Without `times`, all grid nodes in [1, T].
IdentityResidual residual_ftheta_vs_y1(const Trajectory& traj, double theta, std::span<const double> times);
IdentityResidual residual_ftheta_vs_y1(const Trajectory& traj, double theta);

/// x = x_H + int_0^t [phi11 + (1-a) k](t-s) y1(s) ds, phi11 = k' + a k.
IdentityResidual residual_x_vs_Xvoc(const Trajectory& traj, const Kernel& kernel, const SystemParams& params);

struct DecompositionResult {
  double lhs;
  double rhs;
};

/// Raising component `k_index` (1 or 2) of theta by delta:
///   F_{theta + delta e_k}(t) = F_theta(t) + F_{theta with component k = delta}(t - theta_k),
/// every F by `double_average` on Q. Requires t >= 2 + 2 delta.
DecompositionResult decomposition_check(const SampledSeries& Q, double theta1, double theta2, double delta,
                                        int k_index, double t, double h_outer = 0.005);

}  // namespace odeclass
