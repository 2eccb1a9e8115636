#pragma once

#include <functional>
#include <span>

namespace odeclass {

/// Adaptive 7/15-point Gauss-Kronrod on [lo, hi]. Panels are bisected until
/// each one's Kronrod/Gauss discrepancy is below its share of `abs_tol`.
double gauss_kronrod(const std::function<double(double)>& f, double lo, double hi,
                     double abs_tol, int max_depth = 40);

/// Five-point Gauss-Legendre rule on a single panel.
double gauss_legendre5(const std::function<double(double)>& f, double lo, double hi);

/// Composite Simpson over equally spaced samples. `values.size()` must be odd
/// and at least 3.
double composite_simpson(std::span<const double> values, double spacing);

}  // namespace odeclass
