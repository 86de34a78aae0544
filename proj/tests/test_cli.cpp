#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "memsep/io.hpp"

using namespace memsep;
namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code = -1;
  std::string out;
  std::string err;
};

fs::path scratch(const std::string& name) {
  const fs::path d = fs::current_path() / "cli_scratch" / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

CliRun run(const std::string& args, const fs::path& dir) {
  const std::string out = (dir / "stdout.txt").string();
  const std::string err = (dir / "stderr.txt").string();
  const std::string cmd = std::string(MEMSEP_CLI) + " " + args + " > " + out + " 2> " + err;
  const int status = std::system(cmd.c_str());
  CliRun r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = read_text_file(out);
  r.err = read_text_file(err);
  return r;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST(Cli, AnalyticDefaults) {
  const auto d = scratch("analytic");
  const CliRun r = run("analytic", d);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("L_sym = 59.69"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("W0 = 3437 J"), std::string::npos) << r.out;
  // tau_h / tau_p = 0.1 is in neither limit.
  EXPECT_NE(r.out.find("warning"), std::string::npos);
}

TEST(Cli, GeodesicThenSimulateRoundTrip) {
  const auto d = scratch("geodesic");
  const CliRun g = run("geodesic --out-dir " + d.string(), d);
  ASSERT_EQ(g.code, 0) << g.err;
  const auto summary = lines(read_text_file((d / "geodesic_summary.csv").string()));
  ASSERT_EQ(summary.size(), 4u);
  EXPECT_EQ(summary[0], "index,length_js_sqrt,terminal_gap,theta0_rad");
  const std::string protocol = (d / "geodesic_0.csv").string();
  ASSERT_EQ(lines(read_text_file(protocol)).size(), 1002u);

  const CliRun s = run("simulate --protocol " + protocol + " --tau 30 --out-dir " + d.string(), d);
  ASSERT_EQ(s.code, 0) << s.err;
  const auto traj = lines(read_text_file((d / "trajectory.csv").string()));
  EXPECT_EQ(traj[0], "t_s,x_l,x_r,n_alpha_l,n_beta_r,temperature_k,work_j");
  EXPECT_EQ(traj.size(), 1002u);

  // The built-in geodesic protocol is the same curve as the file.
  const auto d2 = scratch("geodesic_builtin");
  const CliRun b = run("simulate --protocol geodesic --tau 30 --out-dir " + d2.string(), d2);
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_EQ(read_text_file((d2 / "trajectory.csv").string()),
            read_text_file((d / "trajectory.csv").string()));
}

TEST(Cli, OutputIsDeterministic) {
  const auto a = scratch("det_a");
  const auto b = scratch("det_b");
  for (const auto& d : {a, b}) {
    ASSERT_EQ(run("geodesic --n-scan 16 --out-dir " + d.string(), d).code, 0);
    ASSERT_EQ(run("sweep --tau 10,30 --out-dir " + d.string(), d).code, 0);
  }
  for (const char* f : {"geodesic_summary.csv", "geodesic_0.csv", "sweep.csv"}) {
    EXPECT_EQ(read_text_file((a / f).string()), read_text_file((b / f).string())) << f;
  }
}

TEST(Cli, SweepTable) {
  const auto d = scratch("sweep");
  const CliRun r = run("sweep --protocol symmetric --tau 10,30,100,300 --out-dir " + d.string(), d);
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = lines(read_text_file((d / "sweep.csv").string()));
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows[0], "tau_s,w_ex_j,l2_over_tau_j");
  double prev = 1e300;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double l2 = parse_number(rows[i].substr(rows[i].rfind(',') + 1), "l2");
    EXPECT_LT(l2, prev);
    prev = l2;
  }
}

TEST(Cli, ConfigFileAndOverrides) {
  const auto d = scratch("config");
  write_text_file((d / "run.cfg").string(), "tau_h_s = 1e9\n");
  const CliRun r = run("--config " + (d / "run.cfg").string() + " analytic", d);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("tau_h 1e+09 s"), std::string::npos) << r.out;
  const CliRun o = run("--config " + (d / "run.cfg").string() + " --tau_h_s 2 analytic", d);
  ASSERT_EQ(o.code, 0);
  EXPECT_NE(o.out.find("tau_h 2 s"), std::string::npos) << o.out;
}

TEST(Cli, ErrorsMapToExitCodes) {
  const auto d = scratch("errors");
  write_text_file((d / "bad.cfg").string(), "tau_gamma_s = 1\n");
  const CliRun unknown = run("--config " + (d / "bad.cfg").string() + " analytic", d);
  EXPECT_EQ(unknown.code, 1);
  EXPECT_NE(unknown.err.find("tau_gamma_s"), std::string::npos) << unknown.err;

  EXPECT_EQ(run("--tau_h_s -1 analytic", d).code, 1);
  EXPECT_EQ(run("--tau_h_s fast analytic", d).code, 1);
  EXPECT_EQ(run("", d).code, 1);
  EXPECT_EQ(run("simulate", d).code, 1);

  const CliRun missing = run("simulate --protocol /nonexistent/p.csv --tau 10", d);
  EXPECT_EQ(missing.code, 1);
  EXPECT_NE(missing.err.find("/nonexistent/p.csv"), std::string::npos);

  // Launch angle crowds against pi/2, between the scan's grid points.
  const CliRun shoot = run("--tau_alpha_s 1e6 geodesic --n-scan 8 --out-dir " + d.string(), d);
  EXPECT_EQ(shoot.code, 2);
  EXPECT_NE(shoot.err.find("no launch angle"), std::string::npos) << shoot.err;
  const CliRun v = run("--tau_alpha_s 1e6 verify --n-scan 8", d);
  EXPECT_EQ(v.code, 2);
  EXPECT_NE(v.out.find("FAIL"), std::string::npos);
}

TEST(Cli, VerifyPasses) {
  const auto d = scratch("verify");
  const CliRun r = run("verify", d);
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos) << r.out;
}
