#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "odeclass/functionals.hpp"
#include "odeclass/identities.hpp"
#include "odeclass/series.hpp"
#include "odeclass/trajectory.hpp"

namespace odeclass {

/// Dyadic tail windows [T/2, T], [T/4, T/2], ... and the trend thresholds.
struct WindowPolicy {
  int windows = 4;
  double rho = 1.2;
  double floor = 1e-12;

  /// Throws std::invalid_argument unless windows >= 4, rho > 1, floor > 0.
  void validate() const;
};

enum class Trend { Decaying, Plateau, Growing };
enum class Trichotomy { Converges, BoundedNonConvergent, Unbounded };

/// Channels the classifier looks at. The first three are the ones whose
/// labels must agree.
enum class Signal { X, Y2, Fsup, Y1, XPrime, XSecond, Forcing };

const char* to_string(Trend t) noexcept;
const char* to_string(Trichotomy t) noexcept;
const char* to_string(Signal s) noexcept;
Trichotomy trichotomy_of(Trend t) noexcept;

struct LimsupEstimate {
  Signal signal = Signal::X;
  /// Window bounds and max |s| per window, oldest window first.
  std::vector<std::pair<double, double>> windows;
  std::vector<double> maxima;
  /// Least-squares slope of log(M_j + floor) against window index.
  double slope = 0.0;
  Trend trend = Trend::Plateau;
  /// Last-window max for Plateau, 0 for Decaying, +inf for Growing.
  double estimate = 0.0;
  bool infinite = false;

  Trichotomy label() const noexcept { return trichotomy_of(trend); }
};

/// Throws std::invalid_argument when a window holds no sample.
LimsupEstimate estimate_limsup(const SampledSeries& s, const WindowPolicy& policy = {},
                               Signal signal = Signal::X);

struct DiagnosticsReport {
  std::vector<LimsupEstimate> channels;
  /// X, Y2 and Fsup carry the same label.
  bool agreement = false;
  std::vector<IdentityResidual> residuals;

  // Configuration echo.
  SystemParams params;
  std::string forcing;
  double horizon = 0.0;
  WindowPolicy policy;

  const LimsupEstimate& channel(Signal s) const;
  const LimsupEstimate* find(Signal s) const;
};

/// Estimates every channel of the trajectory plus the sup of the field.
/// The field must be tabulated on the trajectory's horizon.
DiagnosticsReport classify(const Trajectory& traj, const FunctionalField& field, const WindowPolicy& policy = {});

/// Convenience: builds the field on every `stride`-th grid node.
DiagnosticsReport classify(const Trajectory& traj, const ThetaGrid& grid, const WindowPolicy& policy = {},
                           std::size_t stride = 1);

struct ChirpDiagnostic {
  DiagnosticsReport report;
  Trajectory trajectory;
  /// x'' - f on the grid.
  std::vector<double> gap;
  double max_gap = 0.0;
  double max_abs_forcing = 0.0;
};

/// Integrates the chirp forcing A(t) sin(int_0^t A) and classifies it. A
/// must be positive and strictly increasing on [0, horizon]. If the
/// integrator gives up early the reached prefix is classified and
/// `trajectory.failure()` says why.
ChirpDiagnostic chirp_diagnostic(const ForcingExpr& amplitude, const SystemParams& params, double horizon,
                                 double tol = 1e-10, const IntegrateOptions& options = {},
                                 const WindowPolicy& policy = {});

}  // namespace odeclass
