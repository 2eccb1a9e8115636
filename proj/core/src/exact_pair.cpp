#include "odeclass/exact_pair.hpp"

namespace odeclass {

double ExactPair::ode_residual(double t) const {
  const double x = exact_solution(t);
  const double xp = exact_derivative(t);
  const double xpp = exact_derivative.derivative()(t);
  return xpp + params.a * xp + params.b * x - forcing(t);
}

ExactPair explicit_example_pair() {
  ExactPair pair;
  pair.forcing = explicit_example();
  pair.exact_solution = parse_forcing("exp(-t)*sin(exp(2*t)-1)");
  pair.exact_derivative = pair.exact_solution.derivative();
  pair.params = SystemParams{5.0, 6.0, 0.0, 2.0};
  return pair;
}

}  // namespace odeclass
