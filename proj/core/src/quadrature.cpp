#include "odeclass/quadrature.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace odeclass {
namespace {

constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5) and the centre.
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double kronrod;
  double gauss;
};

Panel gk15(const std::function<double(double)>& f, double lo, double hi) {
  const double centre = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = f(centre);
  double kronrod = kKronrodWeights[7] * fc;
  double gauss = kGaussWeights[3] * fc;
  for (std::size_t i = 0; i < 7; ++i) {
    const double dx = half * kKronrodNodes[i];
    const double sum = f(centre - dx) + f(centre + dx);
    kronrod += kKronrodWeights[i] * sum;
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * sum;
  }
  return {kronrod * half, gauss * half};
}

double adapt(const std::function<double(double)>& f, double lo, double hi, double tol,
             int depth) {
  const Panel p = gk15(f, lo, hi);
  if (std::abs(p.kronrod - p.gauss) <= tol || depth <= 0) return p.kronrod;
  const double mid = 0.5 * (lo + hi);
  return adapt(f, lo, mid, 0.5 * tol, depth - 1) + adapt(f, mid, hi, 0.5 * tol, depth - 1);
}

}  // namespace

double gauss_kronrod(const std::function<double(double)>& f, double lo, double hi,
                     double abs_tol, int max_depth) {
  if (lo == hi) return 0.0;
  return adapt(f, lo, hi, abs_tol, max_depth);
}

double gauss_legendre5(const std::function<double(double)>& f, double lo, double hi) {
  static constexpr std::array<double, 3> nodes = {0.0, 0.538469310105683091036314420700208,
                                                  0.906179845938663992797626878299393};
  static constexpr std::array<double, 3> weights = {0.568888888888888888888888888888889,
                                                    0.478628670499366468041291514835638,
                                                    0.236926885056189087514264040719918};
  const double centre = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  double sum = weights[0] * f(centre);
  for (std::size_t i = 1; i < 3; ++i) {
    sum += weights[i] * (f(centre - half * nodes[i]) + f(centre + half * nodes[i]));
  }
  return sum * half;
}

double composite_simpson(std::span<const double> values, double spacing) {
  if (values.size() < 3 || values.size() % 2 == 0) {
    throw std::invalid_argument("composite_simpson needs an odd number (>= 3) of samples");
  }
  double odd = 0.0;
  double even = 0.0;
  for (std::size_t i = 1; i + 1 < values.size(); ++i) {
    (i % 2 == 1 ? odd : even) += values[i];
  }
  return spacing / 3.0 * (values.front() + 4.0 * odd + 2.0 * even + values.back());
}

}  // namespace odeclass
