// memsep: command-line front end for the membrane-separation model.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "memsep/analytic.hpp"
#include "memsep/errors.hpp"
#include "memsep/geodesic.hpp"
#include "memsep/geometry.hpp"
#include "memsep/io.hpp"
#include "memsep/model.hpp"
#include "memsep/simulate.hpp"
#include "memsep/verify.hpp"

namespace {

using namespace memsep;
namespace fs = std::filesystem;

struct Globals {
  std::string config_path;
  std::map<std::string, std::string> overrides;
  std::string out_dir = ".";
};

SystemParams build_params(const Globals& g) {
  SystemValues v;
  if (!g.config_path.empty()) v = load_config(g.config_path, v);
  for (const auto& [k, val] : g.overrides) apply_config_value(v, k, val);
  return SystemParams(v);
}

std::string out_path(const Globals& g, const std::string& name) {
  std::error_code ec;
  fs::create_directories(g.out_dir, ec);
  if (ec) throw IoError(g.out_dir, "cannot create output directory");
  return (fs::path(g.out_dir) / name).string();
}

void print_params(const SystemParams& p) {
  std::cout << "N_t " << format_report(p.n_total()) << ", T0 " << format_report(p.t_bath())
            << " K, eps_alpha " << format_report(p.eps_alpha()) << ", tau_alpha "
            << format_report(p.tau_alpha()) << " s, tau_beta " << format_report(p.tau_beta())
            << " s, tau_h " << format_report(p.tau_h()) << " s\n";
}

bool symmetric(const SystemParams& p) {
  return p.is_symmetric() && std::abs(p.eps_alpha() - 0.5) < 1e-12;
}

ConfigPoint target_of(const SystemParams& p) { return {p.eps_alpha(), p.eps_beta()}; }

PathSamples resolve_protocol(const SystemParams& p, const std::string& name, int n_scan) {
  if (name == "symmetric") return symmetric_protocol_path(p);
  if (name == "geodesic") {
    return to_protocol(find_all_geodesics(p, target_of(p), n_scan).front());
  }
  return read_protocol_csv(name);
}

int cmd_analytic(const Globals& g, double tau) {
  const SystemParams p = build_params(g);
  print_params(p);
  const double w0 = quasi_static_work(p, target_of(p));
  if (!symmetric(p)) {
    std::cout << "L_sym: not defined (needs eps_alpha = 0.5 and tau_alpha = tau_beta)\n";
    std::cout << "W0 = " << format_report(w0) << " J\n";
    return 0;
  }
  const double l = symmetric_length(p, 0.5);
  std::cout << "L_sym = " << format_report(l) << " (J s)^1/2\n";
  std::cout << "W0 = " << format_report(w0) << " J\n";
  std::cout << "minimal excess work at tau = " << format_report(tau) << " s:\n";
  std::cout << "  L_sym^2 / tau = " << format_report(l * l / tau) << " J\n";
  const double ratio = p.tau_h() / p.tau_alpha();
  for (Regime r : {Regime::particle, Regime::heat}) {
    std::cout << "  " << to_string(r) << " limit = " << format_report(limit_min_excess_work(p, tau, r))
              << " J";
    if (!regime_applies(p, r)) {
      std::cout << "  (warning: tau_h/tau_p = " << format_report(ratio) << " is outside this regime)";
    }
    std::cout << '\n';
  }
  return 0;
}

int cmd_geodesic(const Globals& g, int n_scan, int n_samples) {
  const SystemParams p = build_params(g);
  const auto sols = find_all_geodesics(p, target_of(p), n_scan);
  write_text_file(out_path(g, "geodesic_summary.csv"), geodesic_summary_csv(sols));
  std::cout << "index  length [(J s)^1/2]  terminal gap  theta0 [rad]  stop\n";
  for (std::size_t i = 0; i < sols.size(); ++i) {
    write_text_file(out_path(g, "geodesic_" + std::to_string(i) + ".csv"),
                    protocol_csv(to_protocol(sols[i], n_samples)));
    std::cout << i << "      " << format_report(sols[i].length) << "               "
              << format_report(sols[i].terminal_gap) << "     " << format_report(sols[i].theta0)
              << "        " << to_string(sols[i].stop) << '\n';
  }
  return 0;
}

int cmd_simulate(const Globals& g, const std::string& protocol, double tau, int n_scan,
                 int n_output) {
  const SystemParams p = build_params(g);
  const PathSamples path = resolve_protocol(p, protocol, n_scan);
  EvolveOptions opts;
  opts.n_output = n_output;
  const Trajectory traj = evolve(p, path, tau, opts);
  write_text_file(out_path(g, "trajectory.csv"), trajectory_csv(traj));
  const double l = path_length(p, path);
  std::cout << "tau = " << format_report(tau) << " s, endpoint " << to_string(traj.endpoint);
  if (traj.s_end < 1.0) std::cout << " (stopped at s = " << format_report(traj.s_end, 10) << ")";
  std::cout << "\nW = " << format_report(traj.total_work) << " J, W_rev = "
            << format_report(traj.reversible_work) << " J, W_ex = "
            << format_report(traj.excess_work) << " J\n";
  std::cout << "L = " << format_report(l) << " (J s)^1/2, L^2/tau = " << format_report(l * l / tau)
            << " J, W_ex tau / L^2 = " << format_report(traj.excess_work * tau / (l * l)) << '\n';
  return 0;
}

int cmd_sweep(const Globals& g, const std::string& protocol, const std::vector<double>& taus,
              int n_scan) {
  const SystemParams p = build_params(g);
  const PathSamples path = resolve_protocol(p, protocol, n_scan);
  const auto rows = excess_work_sweep(p, path, taus);
  write_text_file(out_path(g, "sweep.csv"), sweep_csv(rows));
  std::cout << "tau [s]  W_ex [J]  L^2/tau [J]\n";
  for (const auto& r : rows) {
    std::cout << format_report(r.tau) << "  " << format_report(r.excess_work) << "  "
              << format_report(r.l_squared_over_tau) << '\n';
  }
  return 0;
}

int cmd_verify(const Globals& g, int n_scan) {
  const SystemParams p = build_params(g);
  VerifyOptions vo;
  vo.n_scan = n_scan;
  bool all = true;
  for (const auto& c : run_invariant_suite(p, vo)) {
    std::cout << (c.passed ? "PASS  " : "FAIL  ") << c.name << ": " << c.detail << '\n';
    all = all && c.passed;
  }
  return all ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal finite-time separation of a binary ideal-gas mixture"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--config", g.config_path, "key = value parameter file");
  app.add_option("--out-dir", g.out_dir, "directory for CSV output");
  for (const char* key : kConfigKeys) {
    const std::string k = key;
    app.add_option_function<std::string>(
        "--" + k, [&g, k](const std::string& v) { g.overrides[k] = v; }, "override " + k);
  }

  double analytic_tau = 100.0;
  auto* analytic = app.add_subcommand("analytic", "closed forms for the symmetric case");
  analytic->add_option("--tau", analytic_tau, "operation time for the limit works [s]");

  int n_scan = 32;
  int n_samples = 1001;
  auto* geodesic = app.add_subcommand("geodesic", "find the geodesics to the separation target");
  geodesic->add_option("--n-scan", n_scan, "launch angles scanned");
  geodesic->add_option("--samples", n_samples, "samples per protocol CSV");

  std::string protocol = "symmetric";
  double sim_tau = 0.0;
  int n_output = 1001;
  auto* simulate = app.add_subcommand("simulate", "run one protocol in finite time");
  simulate->add_option("--protocol", protocol, "symmetric, geodesic, or a protocol CSV");
  simulate->add_option("--tau", sim_tau, "operation time [s]")->required();
  simulate->add_option("--samples", n_output, "trajectory samples");
  simulate->add_option("--n-scan", n_scan, "launch angles scanned for --protocol geodesic");

  std::vector<double> taus{10.0, 30.0, 100.0, 300.0};
  auto* sweep = app.add_subcommand("sweep", "excess work over a range of operation times");
  sweep->add_option("--protocol", protocol, "symmetric, geodesic, or a protocol CSV");
  sweep->add_option("--tau", taus, "operation times [s]")->delimiter(',');
  sweep->add_option("--n-scan", n_scan, "launch angles scanned for --protocol geodesic");

  auto* verify = app.add_subcommand("verify", "run the invariant checks");
  verify->add_option("--n-scan", n_scan, "launch angles scanned");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*analytic) return cmd_analytic(g, analytic_tau);
    if (*geodesic) return cmd_geodesic(g, n_scan, n_samples);
    if (*simulate) return cmd_simulate(g, protocol, sim_tau, n_scan, n_output);
    if (*sweep) return cmd_sweep(g, protocol, taus, n_scan);
    if (*verify) return cmd_verify(g, n_scan);
  } catch (const NumericalError& e) {
    std::cerr << "memsep: numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "memsep: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
