#pragma once

#include "odeclass/forcing.hpp"
#include "odeclass/kernel.hpp"

namespace odeclass {

/// A forcing together with a closed-form solution of x'' + a x' + b x = f.
struct ExactPair {
  ForcingExpr forcing;
  ForcingExpr exact_solution;
  ForcingExpr exact_derivative;
  SystemParams params;

  /// x'' + a x' + b x - f at t, with x'' from the symbolic derivative of
  /// `exact_derivative`.
  double ode_residual(double t) const;
};

/// x = e^{-t} sin(e^{2t} - 1) with a = 5, b = 6, x(0) = 0, x'(0) = 2.
ExactPair explicit_example_pair();

}  // namespace odeclass
