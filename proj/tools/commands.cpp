#include "commands.hpp"

#include <cmath>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "csv.hpp"
#include "odeclass/odeclass.hpp"

namespace odeclass::cli {
namespace {

constexpr double kScaledTolerance = 1e-4;
constexpr double kThetaQuadratureTolerance = 1e-3;
constexpr double kPointTolerance = 1e-6;

std::string styled(const RunConfig& cfg, bool ok, std::string_view text) {
  if (!cfg.color) return std::string(text);
  return std::string(ok ? "\x1b[32m" : "\x1b[31m") + std::string(text) + "\x1b[0m";
}

std::string forcing_text(const RunConfig& cfg, const char* fallback) {
  return cfg.forcing.empty() ? fallback : cfg.forcing;
}

WindowPolicy policy_of(const RunConfig& cfg) {
  WindowPolicy p;
  p.rho = cfg.rho;
  p.windows = cfg.windows;
  return p;
}

IntegrateOptions options_of(const RunConfig& cfg) {
  IntegrateOptions o;
  o.h_max = cfg.hmax;
  return o;
}

/// "dir/name.csv" -> "dir/name<suffix>"
std::string sibling(const std::string& path, const std::string& suffix) {
  std::filesystem::path p(path);
  p.replace_extension();
  return p.string() + suffix;
}

void emit(const RunConfig& cfg, const std::string& fallback_path, const std::string& content, std::ostream& report) {
  const std::string path = cfg.out.empty() ? fallback_path : cfg.out;
  write_file_atomic(path, content);
  report << "wrote " << path << '\n';
}

struct CheckRow {
  std::string suite;
  IdentityResidual residual;
  double tolerance;
  bool use_scaled;
  bool pass() const { return (use_scaled ? residual.max_scaled : residual.max_abs) <= tolerance; }
};

IdentityResidual point_residual(std::string tag, double t, double lhs, double rhs) {
  IdentityResidual r;
  r.tag = std::move(tag);
  r.window_lo = r.window_hi = t;
  r.max_abs = std::abs(lhs - rhs);
  r.max_scaled = r.max_abs / (1.0 + std::abs(lhs));
  return r;
}

std::vector<CheckRow> identity_suite(const std::string& suite, const SystemParams& params, const ForcingExpr& f,
                                     const RunConfig& cfg) {
  const Trajectory traj = integrate(params, f, cfg.horizon, cfg.tol, options_of(cfg));
  SystemParams zero_params = params;
  zero_params.xi0 = zero_params.xi1 = 0.0;
  const Trajectory zero =
      params.has_zero_initial_data() ? traj : integrate(zero_params, f, cfg.horizon, cfg.tol, options_of(cfg));
  const Kernel kernel(params.a, params.b);
  const double T = cfg.horizon;

  std::vector<CheckRow> rows;
  const auto add = [&](IdentityResidual r, double tol, bool scaled) {
    rows.push_back({suite, std::move(r), tol, scaled});
  };
  add(residual_x0_vs_y2(zero, kernel), kScaledTolerance, true);
  add(residual_y2_vs_x0(zero, zero_params), kScaledTolerance, true);
  add(residual_y1_vs_x(traj), kScaledTolerance, true);
  add(residual_x_vs_Xvoc(traj, kernel, params), kScaledTolerance, true);
  if (T >= 1.0) add(residual_ftheta_vs_y1(traj, 0.5), kScaledTolerance, true);
  if (T >= 2.0) {
    add(residual_F_vs_y2(traj, 0.5, 0.5), kScaledTolerance, true);
    add(residual_F_vs_x(traj, 0.5, 0.5), kScaledTolerance, true);
  }
  add(residual_x0_vs_F(zero, kernel, cfg.theta_nodes), kThetaQuadratureTolerance, true);

  const DeltaFIntegralResult dfi = delta_f_integral_check(f, T);
  add(point_residual("deltaf_integral", T, dfi.lhs, dfi.rhs), kPointTolerance, false);
  if (T >= 2.4) {
    // A fine Q keeps linear interpolation well below the tolerance.
    const auto grid = uniform_grid(T, 1e-3);
    std::vector<double> q(grid.size(), 0.0);
    for (std::size_t i = 1; i < grid.size(); ++i) {
      q[i] = q[i - 1] + gauss_legendre5([&](double s) { return f(s); }, grid[i - 1], grid[i]);
    }
    const SampledSeries Q(grid, q);
    for (int k = 1; k <= 2; ++k) {
      const DecompositionResult d = decomposition_check(Q, 0.3, 0.4, 0.2, k, T, 5e-4);
      add(point_residual("decomposition_k" + std::to_string(k), T, d.lhs, d.rhs), kPointTolerance, false);
    }
  }
  return rows;
}

}  // namespace

void RunConfig::validate() const {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw std::invalid_argument("--horizon must be positive");
  if (!(tol > 0.0)) throw std::invalid_argument("--tol must be positive");
  if (!(hmax > 0.0)) throw std::invalid_argument("--hmax must be positive");
  if (!(rho > 1.0)) throw std::invalid_argument("--rho must exceed 1");
  if (windows < 4) throw std::invalid_argument("--windows must be at least 4");
  if (cases < 1) throw std::invalid_argument("--cases must be positive");
  if (stride < 1) throw std::invalid_argument("--stride must be positive");
  if (theta_nodes < 3) throw std::invalid_argument("--theta-nodes must be at least 3");
  ThetaGrid::parse(theta_grid);
}

int cmd_simulate(const RunConfig& cfg, std::ostream& report) {
  cfg.validate();
  const ForcingExpr f = parse_forcing_spec(forcing_text(cfg, "0"));
  const Trajectory traj = integrate(cfg.params, f, cfg.horizon, cfg.tol, options_of(cfg));
  CsvWriter csv({"t", "x", "xprime", "y1", "y2", "Q"});
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double row[] = {traj.grid()[i], traj.x()[i], traj.xprime()[i], traj.y1()[i], traj.y2()[i], traj.Q()[i]};
    csv.row(row);
  }
  if (cfg.out.empty()) {
    report << csv.str();
  } else {
    emit(cfg, cfg.out, csv.str(), report);
  }
  return kOk;
}

int cmd_verify(const RunConfig& cfg, std::ostream& report) {
  cfg.validate();
  std::vector<CheckRow> rows;
  if (cfg.seeded) {
    std::mt19937_64 rng(cfg.seed);
    for (int c = 0; c < cfg.cases; ++c) {
      const ForcingExpr f = random_smooth_forcing(rng);
      const SystemParams p = random_stable_params(rng);
      auto part = identity_suite("random" + std::to_string(c), p, f, cfg);
      report << "random" << c << ": a=" << format_double(p.a) << " b=" << format_double(p.b)
             << " f=" << f.to_string() << '\n';
      rows.insert(rows.end(), part.begin(), part.end());
    }
  } else {
    rows = identity_suite("config", cfg.params, parse_forcing_spec(forcing_text(cfg, "0")), cfg);
  }

  CsvWriter csv({"suite", "tag", "window_lo", "window_hi", "max_abs", "max_scaled", "h", "tolerance", "pass"});
  bool all = true;
  for (const auto& r : rows) {
    const bool ok = r.pass();
    all = all && ok;
    report << std::left << std::setw(10) << r.suite << ' ' << std::setw(18) << r.residual.tag << " abs "
           << std::scientific << std::setprecision(3) << r.residual.max_abs << "  scaled " << r.residual.max_scaled
           << "  tol " << r.tolerance << (r.use_scaled ? " (scaled)  " : " (abs)     ")
           << styled(cfg, ok, ok ? "PASS" : "FAIL") << '\n';
    std::vector<std::string> cells{r.suite,
                                   r.residual.tag,
                                   format_double(r.residual.window_lo),
                                   format_double(r.residual.window_hi),
                                   format_double(r.residual.max_abs),
                                   format_double(r.residual.max_scaled),
                                   format_double(r.residual.h),
                                   format_double(r.tolerance),
                                   ok ? "pass" : "fail"};
    csv.text_row(cells);
  }
  report << std::defaultfloat;
  if (!cfg.out.empty()) emit(cfg, cfg.out, csv.str(), report);
  report << (all ? "all identities pass\n" : "identity check failed\n");
  return all ? kOk : kCheckFailed;
}

int cmd_classify(const RunConfig& cfg, std::ostream& report) {
  cfg.validate();
  const ForcingExpr f = parse_forcing_spec(forcing_text(cfg, "0"));
  const Trajectory traj = integrate(cfg.params, f, cfg.horizon, cfg.tol, options_of(cfg));
  const DiagnosticsReport diag = classify(traj, ThetaGrid::parse(cfg.theta_grid), policy_of(cfg));

  std::vector<std::string_view> header{"channel", "trend", "label", "estimate", "slope"};
  std::vector<std::string> names;
  for (int j = 1; j <= cfg.windows; ++j) names.push_back("M" + std::to_string(j));
  for (const auto& n : names) header.push_back(n);
  CsvWriter csv(header);

  for (const auto& c : diag.channels) {
    report << std::left << std::setw(8) << to_string(c.signal) << ' ' << std::setw(21) << to_string(c.label())
           << ' ' << std::setw(9) << to_string(c.trend) << " estimate "
           << (c.infinite ? std::string("inf") : format_double(c.estimate)) << '\n';
    std::vector<std::string> cells{to_string(c.signal), to_string(c.trend), to_string(c.label()),
                                   c.infinite ? "inf" : format_double(c.estimate), format_double(c.slope)};
    for (double m : c.maxima) cells.push_back(format_double(m));
    csv.text_row(cells);
  }
  report << "agreement (X, Y2, Fsup): " << styled(cfg, diag.agreement, diag.agreement ? "yes" : "no") << '\n';
  if (!cfg.out.empty()) emit(cfg, cfg.out, csv.str(), report);
  return cfg.strict && !diag.agreement ? kCheckFailed : kOk;
}

int cmd_sweep_theta(const RunConfig& cfg, std::ostream& report) {
  cfg.validate();
  const ForcingExpr f = parse_forcing_spec(forcing_text(cfg, "0"));
  const Trajectory traj = integrate(cfg.params, f, cfg.horizon, cfg.tol, options_of(cfg));
  const ThetaGrid grid = ThetaGrid::parse(cfg.theta_grid);
  std::vector<double> times;
  for (std::size_t i = 0; i < traj.size(); i += cfg.stride) times.push_back(traj.grid()[i]);
  if (times.back() != traj.horizon()) times.push_back(traj.horizon());
  const FunctionalField field = functional_field(FunctionalEvaluator::from_trajectory(traj), grid, times);

  CsvWriter csv({"t", "theta1", "theta2", "F"});
  for (std::size_t it = 0; it < times.size(); ++it) {
    for (std::size_t i1 = 0; i1 < grid.theta1().size(); ++i1) {
      for (std::size_t i2 = 0; i2 < grid.theta2().size(); ++i2) {
        const double row[] = {times[it], grid.theta1()[i1], grid.theta2()[i2], field.value(i1, i2, it)};
        csv.row(row);
      }
    }
  }
  CsvWriter sup({"t", "supF"});
  for (std::size_t it = 0; it < times.size(); ++it) {
    const double row[] = {times[it], field.sup()[it]};
    sup.row(row);
  }
  const std::string path = cfg.out.empty() ? "sweep.csv" : cfg.out;
  write_file_atomic(path, csv.str());
  const std::string sup_path = sibling(path, "_sup.csv");
  write_file_atomic(sup_path, sup.str());
  report << "wrote " << path << " and " << sup_path << '\n';
  report << "supF at t=" << format_double(times.back()) << ": " << format_double(field.sup().back()) << '\n';
  return kOk;
}

int cmd_demo_chirp(const RunConfig& cfg, std::ostream& report) {
  cfg.validate();
  std::string amplitude = forcing_text(cfg, "exp(t)");
  if (amplitude.rfind("chirp:A=", 0) == 0) amplitude = amplitude.substr(8);
  const double horizon = cfg.horizon_explicit ? cfg.horizon : 10.0;
  IntegrateOptions opt = options_of(cfg);
  opt.max_steps = 20'000'000;
  const ChirpDiagnostic diag =
      chirp_diagnostic(parse_forcing(amplitude), cfg.params, horizon, cfg.tol, opt, policy_of(cfg));
  const Trajectory& traj = diag.trajectory;

  CsvWriter csv({"t", "x", "xprime", "y1", "y2", "f", "gap"});
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double row[] = {traj.grid()[i], traj.x()[i],  traj.xprime()[i], traj.y1()[i],
                          traj.y2()[i],   traj.f()[i], diag.gap[i]};
    csv.row(row);
  }
  const std::string path = cfg.out.empty() ? "chirp.csv" : cfg.out;
  write_file_atomic(path, csv.str());
  const std::string script_path = sibling(path, ".gp");
  const std::string data = std::filesystem::path(path).filename().string();
  std::ostringstream gp;
  gp << "# gnuplot script: chirp A(t) = " << amplitude << ", a = " << format_double(cfg.params.a)
     << ", b = " << format_double(cfg.params.b) << "\n"
     << "set datafile separator ','\n"
     << "set key autotitle columnhead\n"
     << "set xlabel 't'\n"
     << "set multiplot layout 2,2\n"
     << "plot '" << data << "' using 1:2 with lines title 'x'\n"
     << "plot '" << data << "' using 1:3 with lines title \"x'\"\n"
     << "plot '" << data << "' using 1:4 with lines title 'y1'\n"
     << "plot '" << data << "' using 1:5 with lines title 'y2'\n"
     << "unset multiplot\n";
  write_file_atomic(script_path, gp.str());

  const auto& r = diag.report;
  report << "chirp A(t) = " << amplitude << " on [0, " << format_double(traj.horizon()) << "]\n";
  for (Signal s : {Signal::X, Signal::XPrime, Signal::Y1, Signal::Y2, Signal::Fsup}) {
    const auto& c = r.channel(s);
    report << "  " << std::left << std::setw(8) << to_string(s) << ' ' << std::setw(9) << to_string(c.trend)
           << " estimate " << (c.infinite ? std::string("inf") : format_double(c.estimate)) << '\n';
  }
  report << "  max|x'' - f| = " << format_double(diag.max_gap) << ", max|f| = " << format_double(diag.max_abs_forcing)
         << '\n';
  report << "wrote " << path << " and " << script_path << '\n';
  if (traj.truncated()) {
    report << "integration stopped early: " << traj.failure() << '\n';
    return kNumerical;
  }
  return kOk;
}

int run_command(const std::string& name, const RunConfig& cfg, std::ostream& report, std::ostream& err) {
  try {
    if (name == "simulate") return cmd_simulate(cfg, report);
    if (name == "verify") return cmd_verify(cfg, report);
    if (name == "classify") return cmd_classify(cfg, report);
    if (name == "sweep-theta") return cmd_sweep_theta(cfg, report);
    if (name == "demo-chirp") return cmd_demo_chirp(cfg, report);
    err << "unknown command '" << name << "'\n";
    return kUsage;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kUsage;
  } catch (const IntegrationError& e) {
    err << "numerical abort: " << e.what() << '\n';
    return kNumerical;
  } catch (const EvalError& e) {
    err << "numerical abort: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace odeclass::cli
