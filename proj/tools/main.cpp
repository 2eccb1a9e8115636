#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <unistd.h>

#include "CLI11.hpp"
#include "commands.hpp"

namespace {

struct Cli {
  odeclass::cli::RunConfig cfg;
  std::string config_path;
  CLI::App app{"Forced linear second-order ODEs: simulation, identity checks and asymptotic classification"};

  Cli() {
    app.require_subcommand(1);
    const char* commands[][2] = {
        {"simulate", "integrate and write t,x,xprime,y1,y2,Q"},
        {"verify", "evaluate the representation identities"},
        {"classify", "label x, y2 and sup F as converging, bounded or unbounded"},
        {"sweep-theta", "tabulate F over a theta grid"},
        {"demo-chirp", "chirp forcing A(t) sin(int A) diagnostics and plot script"},
    };
    for (const auto& c : commands) add_shared_options(*app.add_subcommand(c[0], c[1]));
  }

  void add_shared_options(CLI::App& sub) {
    sub.add_option("--config", config_path, "key=value file; command-line flags override it");
    sub.add_option("--a", cfg.params.a, "damping coefficient a")->capture_default_str();
    sub.add_option("--b", cfg.params.b, "stiffness coefficient b")->capture_default_str();
    sub.add_option("--xi0", cfg.params.xi0, "initial value x(0)")->capture_default_str();
    sub.add_option("--xi1", cfg.params.xi1, "initial slope x'(0)")->capture_default_str();
    sub.add_option("--forcing", cfg.forcing, "forcing expression or builtin spec");
    sub.add_option_function<double>(
           "--horizon",
           [this](double h) {
             cfg.horizon = h;
             cfg.horizon_explicit = true;
           },
           "final time")
        ->default_str("20");
    sub.add_option("--tol", cfg.tol, "integrator tolerance")->capture_default_str();
    sub.add_option("--hmax", cfg.hmax, "output grid spacing bound")->capture_default_str();
    sub.add_option("--theta-grid", cfg.theta_grid, "theta grid as NxM")->capture_default_str();
    sub.add_option("--rho", cfg.rho, "trend threshold ratio")->capture_default_str();
    sub.add_option("--windows", cfg.windows, "number of dyadic windows")->capture_default_str();
    sub.add_option("--out", cfg.out, "output path");
    sub.add_flag("--strict", cfg.strict, "exit 2 when channel labels disagree");
    sub.add_option_function<std::uint64_t>(
        "--seed",
        [this](std::uint64_t s) {
          cfg.seed = s;
          cfg.seeded = true;
        },
        "seed for the randomized verify suite");
    sub.add_option("--cases", cfg.cases, "random cases for a seeded verify run")->capture_default_str();
    sub.add_option("--stride", cfg.stride, "time stride for sweep-theta")->capture_default_str();
    sub.add_option("--theta-nodes", cfg.theta_nodes, "Simpson nodes per theta axis")->capture_default_str();
  }
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

/// Turns the config file into extra arguments for every key that was not
/// given on the command line.
std::vector<std::string> config_arguments(const std::string& path, CLI::App& sub) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file '" + path + "'");
  std::vector<std::string> extra;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#' || line[0] == ';' || line[0] == '[') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    CLI::Option* opt = sub.get_option_no_throw("--" + key);
    if (opt == nullptr || key == "config") {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    if (opt->count() > 0) continue;
    if (key == "strict") {
      if (value == "true" || value == "1") extra.push_back("--strict");
      continue;
    }
    extra.push_back("--" + key);
    extra.push_back(value);
  }
  return extra;
}

}  // namespace

int main(int argc, char** argv) {
  auto cli = std::make_unique<Cli>();
  try {
    cli->app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = cli->app.exit(e);
    return code == 0 ? 0 : odeclass::cli::kUsage;
  }

  if (!cli->config_path.empty()) {
    // Second pass: config values first, then the original flags.
    std::vector<std::string> args;
    try {
      CLI::App* sub = cli->app.get_subcommands().front();
      args = config_arguments(cli->config_path, *sub);
      args.insert(args.begin(), sub->get_name());
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return odeclass::cli::kUsage;
    }
    std::vector<std::string> all{argv[0]};
    all.insert(all.end(), args.begin(), args.end());
    // argv[1] is the subcommand: the top-level app has no options of its own.
    for (int i = 2; i < argc; ++i) all.emplace_back(argv[i]);
    std::vector<char*> ptrs;
    for (auto& s : all) ptrs.push_back(s.data());
    cli = std::make_unique<Cli>();
    try {
      cli->app.parse(static_cast<int>(ptrs.size()), ptrs.data());
    } catch (const CLI::ParseError& e) {
      const int code = cli->app.exit(e);
      return code == 0 ? 0 : odeclass::cli::kUsage;
    }
  }

  cli->cfg.color = std::getenv("ODECLASS_NO_COLOR") == nullptr && ::isatty(STDOUT_FILENO) != 0;
  const std::string name = cli->app.get_subcommands().front()->get_name();
  return odeclass::cli::run_command(name, cli->cfg, std::cout, std::cerr);
}
