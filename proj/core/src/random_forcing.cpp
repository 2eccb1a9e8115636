#include "odeclass/random_forcing.hpp"

#include <charconv>
#include <numbers>

namespace odeclass {
namespace {

std::string num(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  std::string s(buf, ptr);
  return v < 0 ? "(" + s + ")" : s;
}

}  // namespace

ForcingExpr random_smooth_forcing(std::mt19937_64& rng, const RandomForcingSpec& spec) {
  std::uniform_int_distribution<int> terms(spec.min_terms, spec.max_terms);
  std::uniform_real_distribution<double> amp(-spec.max_amplitude, spec.max_amplitude);
  std::uniform_real_distribution<double> omega(spec.min_omega, spec.max_omega);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> decay(0.0, spec.max_decay);
  const int n = terms(rng);
  std::string text;
  for (int m = 0; m < n; ++m) {
    const double c = amp(rng), w = omega(rng), p = phase(rng), l = decay(rng);
    if (m > 0) text += "+";
    text += num(c) + "*sin(" + num(w) + "*t+" + num(p) + ")*exp(-" + num(l) + "*t)";
  }
  return parse_forcing(text);
}

SystemParams random_stable_params(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  const double a = u(rng);
  const double b = u(rng);
  return SystemParams{a, b, 0.0, 0.0};
}

}  // namespace odeclass
