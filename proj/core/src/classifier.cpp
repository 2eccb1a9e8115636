#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "odeclass/classifier.hpp"

namespace odeclass {

void WindowPolicy::validate() const {
  if (windows < 4) throw std::invalid_argument("window policy needs at least 4 windows");
  if (!(rho > 1.0)) throw std::invalid_argument("rho must exceed 1");
  if (!(floor > 0.0)) throw std::invalid_argument("floor must be positive");
}

const char* to_string(Trend t) noexcept {
  switch (t) {
    case Trend::Decaying: return "Decaying";
    case Trend::Plateau: return "Plateau";
    case Trend::Growing: return "Growing";
  }
  return "?";
}

const char* to_string(Trichotomy t) noexcept {
  switch (t) {
    case Trichotomy::Converges: return "Converges";
    case Trichotomy::BoundedNonConvergent: return "BoundedNonConvergent";
    case Trichotomy::Unbounded: return "Unbounded";
  }
  return "?";
}

const char* to_string(Signal s) noexcept {
  switch (s) {
    case Signal::X: return "X";
    case Signal::Y2: return "Y2";
    case Signal::Fsup: return "Fsup";
    case Signal::Y1: return "Y1";
    case Signal::XPrime: return "XPrime";
    case Signal::XSecond: return "XSecond";
    case Signal::Forcing: return "Forcing";
  }
  return "?";
}

Trichotomy trichotomy_of(Trend t) noexcept {
  switch (t) {
    case Trend::Decaying: return Trichotomy::Converges;
    case Trend::Plateau: return Trichotomy::BoundedNonConvergent;
    case Trend::Growing: return Trichotomy::Unbounded;
  }
  return Trichotomy::BoundedNonConvergent;
}

LimsupEstimate estimate_limsup(const SampledSeries& s, const WindowPolicy& policy, Signal signal) {
  policy.validate();
  if (s.size() < 2) throw std::invalid_argument("series too short for the window policy");
  const double T = s.back_time();
  const auto times = s.times();
  const auto values = s.values();

  LimsupEstimate est;
  est.signal = signal;
  const auto m = static_cast<std::size_t>(policy.windows);
  est.windows.resize(m);
  est.maxima.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    // j = 0 is the oldest window [T / 2^m, T / 2^(m-1)].
    const double hi = T / std::ldexp(1.0, static_cast<int>(m - 1 - j));
    const double lo = hi / 2.0;
    if (lo < s.front_time()) throw std::invalid_argument("series too short for the window policy");
    const auto first = std::lower_bound(times.begin(), times.end(), lo);
    const auto last = std::upper_bound(times.begin(), times.end(), hi);
    if (first == last) throw std::invalid_argument("series too short for the window policy");
    double mx = 0.0;
    for (auto it = first; it != last; ++it) {
      mx = std::max(mx, std::abs(values[static_cast<std::size_t>(it - times.begin())]));
    }
    est.windows[j] = {lo, hi};
    est.maxima[j] = mx;
  }

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double x = static_cast<double>(j), y = std::log(est.maxima[j] + policy.floor);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(m);
  est.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);

  const double threshold = std::log(policy.rho);
  if (est.maxima.back() <= policy.floor) {
    est.trend = Trend::Decaying;  // nothing above the floor left to measure
  } else if (est.slope < -threshold) {
    est.trend = Trend::Decaying;
  } else if (est.slope > threshold) {
    est.trend = Trend::Growing;
  } else {
    est.trend = Trend::Plateau;
  }
  switch (est.trend) {
    case Trend::Decaying: est.estimate = 0.0; break;
    case Trend::Plateau: est.estimate = est.maxima.back(); break;
    case Trend::Growing:
      est.estimate = std::numeric_limits<double>::infinity();
      est.infinite = true;
      break;
  }
  return est;
}

const LimsupEstimate* DiagnosticsReport::find(Signal s) const {
  for (const auto& c : channels) {
    if (c.signal == s) return &c;
  }
  return nullptr;
}

const LimsupEstimate& DiagnosticsReport::channel(Signal s) const {
  const LimsupEstimate* c = find(s);
  if (c == nullptr) throw std::out_of_range(std::string("no channel ") + to_string(s));
  return *c;
}

DiagnosticsReport classify(const Trajectory& traj, const FunctionalField& field, const WindowPolicy& policy) {
  policy.validate();
  if (traj.size() < 2) throw std::invalid_argument("horizon too short for the window policy");
  const double T = traj.horizon();
  if (field.times().empty() || std::abs(field.times().back() - T) > 1e-9 * std::max(1.0, T)) {
    throw std::invalid_argument("field and trajectory must share the horizon");
  }

  DiagnosticsReport report;
  report.params = traj.params();
  report.forcing = traj.forcing().to_string();
  report.horizon = T;
  report.policy = policy;

  const std::vector<double> grid(traj.grid().begin(), traj.grid().end());
  const auto from = [&](std::span<const double> v) {
    return SampledSeries(grid, std::vector<double>(v.begin(), v.end()));
  };
  report.channels.push_back(estimate_limsup(from(traj.x()), policy, Signal::X));
  report.channels.push_back(estimate_limsup(from(traj.y2()), policy, Signal::Y2));
  report.channels.push_back(estimate_limsup(field.sup_series(), policy, Signal::Fsup));
  report.channels.push_back(estimate_limsup(from(traj.y1()), policy, Signal::Y1));
  report.channels.push_back(estimate_limsup(from(traj.xprime()), policy, Signal::XPrime));
  report.channels.push_back(estimate_limsup(from(traj.xsecond()), policy, Signal::XSecond));
  report.channels.push_back(estimate_limsup(from(traj.f()), policy, Signal::Forcing));

  const Trichotomy x = report.channel(Signal::X).label();
  report.agreement = report.channel(Signal::Y2).label() == x && report.channel(Signal::Fsup).label() == x;
  return report;
}

DiagnosticsReport classify(const Trajectory& traj, const ThetaGrid& grid, const WindowPolicy& policy,
                           std::size_t stride) {
  if (stride == 0) throw std::invalid_argument("stride must be positive");
  std::vector<double> times;
  const auto g = traj.grid();
  for (std::size_t i = 0; i < g.size(); i += stride) times.push_back(g[i]);
  if (times.empty() || times.back() != g.back()) times.push_back(g.back());
  const FunctionalField field = functional_field(FunctionalEvaluator::from_trajectory(traj), grid, times);
  return classify(traj, field, policy);
}

ChirpDiagnostic chirp_diagnostic(const ForcingExpr& amplitude, const SystemParams& params, double horizon,
                                 double tol, const IntegrateOptions& options, const WindowPolicy& policy) {
  require_chirp_admissible(amplitude, horizon);
  IntegrateOptions opt = options;
  opt.partial_on_failure = true;
  ChirpDiagnostic out;
  out.trajectory = integrate(params, chirp_forcing(amplitude), horizon, tol, opt);
  const Trajectory& traj = out.trajectory;

  out.gap.resize(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    out.gap[i] = -params.a * traj.xprime()[i] - params.b * traj.x()[i];
    out.max_gap = std::max(out.max_gap, std::abs(out.gap[i]));
    out.max_abs_forcing = std::max(out.max_abs_forcing, std::abs(traj.f()[i]));
  }
  out.report = classify(traj, ThetaGrid::uniform(11, 11), policy);
  return out;
}

}  // namespace odeclass
