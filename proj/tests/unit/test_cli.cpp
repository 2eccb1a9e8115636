#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include <gtest/gtest.h>

#include "commands.hpp"
#include "csv.hpp"
#include "odeclass/exact_pair.hpp"

using namespace odeclass;
using namespace odeclass::cli;
namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() / ("odeclass_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter_++));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }
  const fs::path& path() const { return path_; }

 private:
  static inline int counter_ = 0;
  fs::path path_;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

int run(const std::string& cmd, const RunConfig& cfg, std::string* out = nullptr, std::string* err = nullptr) {
  std::ostringstream report, error;
  const int code = run_command(cmd, cfg, report, error);
  if (out) *out = report.str();
  if (err) *err = error.str();
  return code;
}

int shell(const std::string& args) {
  const int status = std::system((std::string("\"") + ODECLASS_EXE + "\" " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

RunConfig config(double a, double b, std::string forcing, double horizon) {
  RunConfig c;
  c.params = {a, b, 0.0, 0.0};
  c.forcing = std::move(forcing);
  c.horizon = horizon;
  return c;
}

}  // namespace

TEST(Format, SeventeenDigitsAndZero) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(1.0), "1");
  EXPECT_EQ(format_double(-0.0), "0");
  EXPECT_EQ(format_double(0.0), "0");
  EXPECT_EQ(format_double(-2.5), "-2.5");
  EXPECT_EQ(std::stod(format_double(M_PI)), M_PI);
  EXPECT_EQ(std::stod(format_double(1e-300 / 3)), 1e-300 / 3);
}

TEST(Csv, WriterProducesLfRows) {
  CsvWriter csv({"t", "v"});
  const double r1[] = {0.0, 1.5};
  csv.row(r1);
  csv.row("label", r1);
  const std::string cells[] = {"a", "b"};
  csv.text_row(cells);
  EXPECT_EQ(csv.str(), "t,v\n0,1.5\nlabel,0,1.5\na,b\n");
}

TEST(Csv, AtomicWriteReplacesAndLeavesNoTemporary) {
  TempDir dir;
  const std::string path = dir.file("out.csv");
  write_file_atomic(path, "first\n");
  write_file_atomic(path, "second\n");
  EXPECT_EQ(slurp(path), "second\n");
  EXPECT_EQ(std::distance(fs::directory_iterator(dir.path()), fs::directory_iterator{}), 1);
  EXPECT_THROW(write_file_atomic(dir.file("missing/sub/out.csv"), "x"), std::runtime_error);
}

TEST(Simulate, InitialRow) {
  RunConfig c = config(2, 1, "0", 5);
  c.params.xi0 = 1.0;
  std::string out;
  ASSERT_EQ(run("simulate", c, &out), kOk);
  const auto rows = parse_csv(out);
  ASSERT_GE(rows.size(), 2u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"t", "x", "xprime", "y1", "y2", "Q"}));
  EXPECT_EQ(out.substr(out.find('\n') + 1, out.find('\n', out.find('\n') + 1) - out.find('\n') - 1), "0,1,0,0,0,0");
}

TEST(Simulate, SteadyStateAndExplicitExample) {
  std::string out;
  ASSERT_EQ(run("simulate", config(3, 2, "1", 30), &out), kOk);
  const auto rows = parse_csv(out);
  EXPECT_EQ(std::stod(rows.back()[0]), 30.0);
  EXPECT_NEAR(std::stod(rows.back()[1]), 0.5, 1e-4);

  const ExactPair pair = explicit_example_pair();
  RunConfig c = config(5, 6, "paper-example-1", 4);
  c.params.xi1 = 2.0;
  ASSERT_EQ(run("simulate", c, &out), kOk);
  double max_x = 0.0, max_err = 0.0;
  const auto ex = parse_csv(out);
  for (std::size_t i = 1; i < ex.size(); ++i) {
    const double t = std::stod(ex[i][0]);
    max_x = std::max(max_x, std::abs(pair.exact_solution(t)));
    max_err = std::max(max_err, std::abs(std::stod(ex[i][1]) - pair.exact_solution(t)));
  }
  EXPECT_LE(max_err / (1 + max_x), 1e-6);
}

TEST(Simulate, ByteIdenticalRepeats) {
  TempDir dir;
  RunConfig c = config(1.3, 2.7, "sin(2*t)*exp(-0.2*t) + 0.1", 15);
  c.params.xi0 = 0.4;
  c.out = dir.file("a.csv");
  ASSERT_EQ(run("simulate", c), kOk);
  c.out = dir.file("b.csv");
  ASSERT_EQ(run("simulate", c), kOk);
  EXPECT_EQ(slurp(dir.file("a.csv")), slurp(dir.file("b.csv")));
  EXPECT_EQ(slurp(dir.file("a.csv")).find('\r'), std::string::npos);
}

TEST(Verify, ZeroForcingAndCriticalSuite) {
  TempDir dir;
  RunConfig c = config(3, 2, "0", 10);
  c.out = dir.file("verify.csv");
  ASSERT_EQ(run("verify", c), kOk);
  const auto rows = parse_csv(slurp(c.out));
  EXPECT_EQ(rows[0].front(), "suite");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].back(), "pass");
    EXPECT_LE(std::stod(rows[i][4]), 1e-12) << rows[i][1];
  }

  c = config(2, 1, "sin(3*t)*exp(-0.1*t)", 20);
  c.out = dir.file("crit.csv");
  ASSERT_EQ(run("verify", c), kOk);
  for (const auto& row : parse_csv(slurp(c.out))) {
    if (row[1] == "x0_vs_y2") EXPECT_LE(std::stod(row[4]), 1e-8);
  }
}

TEST(Verify, SeededSuitePasses) {
  RunConfig c = config(3, 2, "", 20);
  c.seed = 7;
  c.seeded = true;
  c.cases = 3;
  std::string out;
  EXPECT_EQ(run("verify", c, &out), kOk) << out;
  EXPECT_NE(out.find("all identities pass"), std::string::npos);
}

TEST(Classify, LabelsAndStrict) {
  const std::vector<std::pair<std::string, std::string>> cases{
      {"expdecay:lambda=1", "Converges"}, {"sin(t)", "BoundedNonConvergent"}, {"t", "Unbounded"}};
  TempDir dir;
  for (const auto& [forcing, label] : cases) {
    RunConfig c = config(3, 2, forcing, 200);
    c.theta_grid = "5x5";
    c.strict = true;
    c.out = dir.file("classify.csv");
    std::string out;
    ASSERT_EQ(run("classify", c, &out), kOk) << forcing;
    for (const auto& row : parse_csv(slurp(c.out))) {
      if (row[0] == "X" || row[0] == "Y2" || row[0] == "Fsup") EXPECT_EQ(row[2], label) << forcing;
    }
    EXPECT_NE(out.find("agreement (X, Y2, Fsup): yes"), std::string::npos);
  }
}

TEST(Sweep, ConstantZeroAndDecay) {
  TempDir dir;
  RunConfig c = config(3, 2, "1", 4);
  c.theta_grid = "3x3";
  c.stride = 50;
  c.out = dir.file("sweep.csv");
  ASSERT_EQ(run("sweep-theta", c), kOk);
  const auto rows = parse_csv(slurp(c.out));
  EXPECT_EQ(rows[0], (std::vector<std::string>{"t", "theta1", "theta2", "F"}));
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (std::stod(rows[i][0]) >= 2.0)
      EXPECT_NEAR(std::stod(rows[i][3]), std::stod(rows[i][1]) * std::stod(rows[i][2]), 1e-9);
  }
  EXPECT_TRUE(fs::exists(dir.file("sweep_sup.csv")));

  c.forcing = "0";
  ASSERT_EQ(run("sweep-theta", c), kOk);
  for (const auto& row : parse_csv(slurp(c.out))) {
    if (row[0] != "t") EXPECT_EQ(row[3], "0");
  }

  c.forcing = "exp(-t)";
  c.horizon = 10;
  c.theta_grid = "11x11";
  ASSERT_EQ(run("sweep-theta", c), kOk);
  const auto sup = parse_csv(slurp(dir.file("sweep_sup.csv")));
  EXPECT_EQ(std::stod(sup.back()[0]), 10.0);
  EXPECT_LE(std::stod(sup.back()[1]), 1e-3);
}

TEST(DemoChirp, LabelsAndScript) {
  TempDir dir;
  RunConfig c = config(5, 6, "exp(t)", 10);
  c.horizon_explicit = true;
  c.out = dir.file("chirp.csv");
  std::string out;
  ASSERT_EQ(run("demo-chirp", c, &out), kOk) << out;
  EXPECT_NE(out.find("Y2       Decaying"), std::string::npos) << out;
  EXPECT_NE(out.find("Y1       Plateau"), std::string::npos) << out;
  EXPECT_TRUE(fs::exists(dir.file("chirp.gp")));
  EXPECT_NE(slurp(dir.file("chirp.gp")).find("chirp.csv"), std::string::npos);

  c = config(2, 2, "chirp:A=1+t", 40);
  c.horizon_explicit = true;
  c.out = dir.file("linear.csv");
  ASSERT_EQ(run("demo-chirp", c, &out), kOk);
  EXPECT_NE(out.find("Y2       Decaying"), std::string::npos) << out;
  EXPECT_NE(out.find("Y1       Plateau"), std::string::npos) << out;

  c.forcing = "exp(-t)";
  EXPECT_EQ(run("demo-chirp", c), kUsage);
}

TEST(ExitCodes, MapFailures) {
  std::string err;
  EXPECT_EQ(run("simulate", config(3, 2, "sin(t", 5), nullptr, &err), kUsage);
  EXPECT_NE(err.find("offset 5"), std::string::npos) << err;
  EXPECT_EQ(run("simulate", config(3, 2, "exp(exp(t))", 10)), kNumerical);
  EXPECT_EQ(run("simulate", config(3, 2, "log(t-1)", 5)), kNumerical);
  EXPECT_EQ(run("simulate", config(3, 2, "1", -1)), kUsage);
  EXPECT_EQ(run("classify", config(3, 2, "1", 0.02)), kUsage);
  EXPECT_EQ(run("bogus", config(3, 2, "1", 5)), kUsage);
  RunConfig bad = config(3, 2, "1", 5);
  bad.theta_grid = "4";
  EXPECT_EQ(run("sweep-theta", bad), kUsage);
}

TEST(Executable, FlagsConfigFileAndExitCodes) {
  TempDir dir;
  EXPECT_EQ(shell("--help"), 0);
  EXPECT_EQ(shell(""), kUsage);
  EXPECT_EQ(shell("simulate --no-such-flag"), kUsage);
  EXPECT_EQ(shell("simulate --forcing 'sin(' --horizon 1"), kUsage);

  const std::string cfg = dir.file("run.cfg");
  std::ofstream(cfg) << "# test config\na = 2\nb = 1\nxi0 = 1\nforcing = \"0\"\nhorizon = 3\n";
  const std::string from_file = dir.file("file.csv");
  ASSERT_EQ(shell("simulate --config '" + cfg + "' --out '" + from_file + "'"), 0);
  const auto rows = parse_csv(slurp(from_file));
  EXPECT_EQ(std::stod(rows.back()[0]), 3.0);
  EXPECT_NEAR(std::stod(rows.back()[1]), 4 * std::exp(-3.0), 1e-8);

  // A flag on the command line wins over the file.
  const std::string overridden = dir.file("flag.csv");
  ASSERT_EQ(shell("simulate --config '" + cfg + "' --horizon 2 --out '" + overridden + "'"), 0);
  EXPECT_EQ(std::stod(parse_csv(slurp(overridden)).back()[0]), 2.0);

  std::ofstream(dir.file("bad.cfg")) << "colour = red\n";
  EXPECT_EQ(shell("simulate --config '" + dir.file("bad.cfg") + "'"), kUsage);
  EXPECT_EQ(shell("simulate --config '" + dir.file("absent.cfg") + "'"), kUsage);
  EXPECT_EQ(shell("simulate --forcing 'exp(exp(t))' --horizon 10 --out '" + dir.file("x.csv") + "'"), kNumerical);
}

TEST(Executable, NoColorWhenRequested) {
  TempDir dir;
  const std::string out = dir.file("verify.txt");
  const std::string cmd = std::string("ODECLASS_NO_COLOR=1 \"") + ODECLASS_EXE +
                          "\" verify --forcing 0 --horizon 5 > '" + out + "' 2>&1";
  ASSERT_EQ(std::system(cmd.c_str()), 0);
  EXPECT_EQ(slurp(out).find('\x1b'), std::string::npos);
}
