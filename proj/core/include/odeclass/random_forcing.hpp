#pragma once

#include <random>
#include <string>

#include "odeclass/forcing.hpp"
#include "odeclass/kernel.hpp"

namespace odeclass {

/// Bounds for `random_smooth_forcing`.
struct RandomForcingSpec {
  int min_terms = 1;
  int max_terms = 3;
  double max_amplitude = 1.0;
  double min_omega = 0.2;
  double max_omega = 3.0;
  double max_decay = 0.3;
};

/// sum_m c_m sin(w_m t + p_m) e^{-l_m t}, built through the grammar so the
/// result prints and re-parses. Deterministic for a given engine state.
ForcingExpr random_smooth_forcing(std::mt19937_64& rng, const RandomForcingSpec& spec = {});

/// a, b uniform in [lo, hi], zero initial data.
SystemParams random_stable_params(std::mt19937_64& rng, double lo = 0.5, double hi = 4.0);

}  // namespace odeclass
