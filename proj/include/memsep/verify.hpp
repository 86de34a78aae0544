#pragma once

// Runtime invariant checks behind `memsep verify`. Each check exercises one
// identity the model must satisfy for the given parameters.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "memsep/analytic.hpp"
#include "memsep/geodesic.hpp"
#include "memsep/geometry.hpp"
#include "memsep/io.hpp"
#include "memsep/model.hpp"
#include "memsep/simulate.hpp"

namespace memsep {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyOptions {
  unsigned seed = 7;
  int n_points = 200;
  int n_scan = 32;
};

namespace detail {

/// Interior point with the metric comfortably away from degeneracy.
inline ConfigPoint random_interior(std::mt19937_64& rng, const SystemParams& p) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  while (true) {
    const ConfigPoint pt{u(rng), u(rng)};
    if (pt.x_l + pt.x_r > 0.98) continue;
    if (metric_at(p, pt).conditioning() < 1e-6) continue;
    return pt;
  }
}

/// Christoffel symbols of the second kind from central differences of G.
inline ChristoffelSymbols christoffel_by_differences(const SystemParams& p, const ConfigPoint& pt) {
  const double h = 1e-6;
  MetricDerivatives dg;
  for (int k = 0; k < 2; ++k) {
    ConfigPoint a = pt;
    ConfigPoint b = pt;
    (k == 0 ? a.x_l : a.x_r) += h;
    (k == 0 ? b.x_l : b.x_r) -= h;
    const MetricTensor ga = metric_raw(p, a.x_l, a.x_r);
    const MetricTensor gb = metric_raw(p, b.x_l, b.x_r);
    dg.d[k] = {(ga.g_ll - gb.g_ll) / (2 * h), (ga.g_lr - gb.g_lr) / (2 * h),
               (ga.g_rr - gb.g_rr) / (2 * h)};
  }
  return christoffel_raw(metric_raw(p, pt.x_l, pt.x_r), dg);
}

inline CheckResult make_check(std::string name, bool ok, std::string detail) {
  return {std::move(name), ok, std::move(detail)};
}

}  // namespace detail

inline std::vector<CheckResult> run_invariant_suite(const SystemParams& params,
                                                    const VerifyOptions& vo = {}) {
  std::vector<CheckResult> out;
  std::mt19937_64 rng(vo.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  {
    double worst = 0.0;
    for (int i = 0; i < vo.n_points; ++i) {
      const ConfigPoint pt = detail::random_interior(rng, params);
      const auto a = christoffel_at(params, pt);
      const auto b = detail::christoffel_by_differences(params, pt);
      double scale = 0.0;
      for (auto& m : b.gamma)
        for (auto& r : m)
          for (double x : r) scale = std::max(scale, std::abs(x));
      for (int k = 0; k < 2; ++k)
        for (int i2 = 0; i2 < 2; ++i2)
          for (int j = 0; j < 2; ++j)
            worst = std::max(worst, std::abs(a.gamma[k][i2][j] - b.gamma[k][i2][j]) / scale);
    }
    out.push_back(detail::make_check("christoffel symbols vs differenced metric", worst < 1e-5,
                                     "max rel err " + format_report(worst)));
  }

  {
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const ConfigPoint pt = detail::random_interior(rng, params);
      const Velocity v{unit(rng), unit(rng)};
      const double a = excess_work_rate(params, pt, v);
      const double b = excess_work_rate_bracket_form(params, pt, v);
      worst = std::max(worst, std::abs(a - b) / std::abs(b));
    }
    out.push_back(detail::make_check("quadratic form equals bracket form", worst < 1e-10,
                                     "max rel diff " + format_report(worst)));
  }

  const ConfigPoint target{params.eps_alpha(), params.eps_beta()};
  {
    const double w0 = quasi_static_work(params, target);
    const double wr = reversible_work(params, target);
    const double rel = std::abs(w0 - wr) / w0;
    out.push_back(detail::make_check("reversible work integral equals W0 at the target",
                                     rel < 1e-12,
                                     "W0 " + format_report(w0) + " J, rel diff " + format_report(rel)));
  }

  if (params.is_symmetric() && std::abs(params.eps_alpha() - 0.5) < 1e-12) {
    std::vector<ConfigPoint> diag;
    for (int i = 0; i <= 20000; ++i) diag.push_back({0.5 * i / 20000.0, 0.5 * i / 20000.0});
    const double closed = symmetric_length(params, 0.5);
    const double quad = path_length(params, PathSamples::uniform(diag));
    const double rel = std::abs(closed - quad) / closed;
    out.push_back(detail::make_check("closed-form diagonal length vs quadrature", rel < 1e-6,
                                     "L " + format_report(closed) + ", rel diff " + format_report(rel)));
  }

  std::vector<GeodesicSolution> sols;
  try {
    sols = find_all_geodesics(params, target, vo.n_scan);
    out.push_back(detail::make_check("geodesic scan", true,
                                     std::to_string(sols.size()) + " geodesic(s) found"));
  } catch (const Error& e) {
    out.push_back(detail::make_check("geodesic scan", false, e.what()));
    return out;
  }

  {
    double drift = 0.0;
    double speed = 0.0;
    double gap = 0.0;
    for (const auto& s : sols) {
      drift = std::max(drift, s.tangent_drift);
      gap = std::max(gap, s.terminal_gap);
      for (const auto& smp : s.samples) {
        if (std::sqrt(detail::dist2(smp.pt, target)) < GeodesicOptions{}.gap_threshold) continue;
        speed = std::max(speed, std::abs(metric_norm_squared(params, smp.pt, smp.dpt_dr) - 1.0));
      }
    }
    out.push_back(detail::make_check("geodesics at unit speed", speed < 1e-8 && drift < 1e-8,
                                     "max |g(v,v) - 1| " + format_report(speed) +
                                         ", tangent drift " + format_report(drift)));
    out.push_back(detail::make_check("geodesics end at the target", gap < GeodesicOptions{}.gap_threshold,
                                     "max terminal gap " + format_report(gap)));
  }

  if (params.is_symmetric()) {
    bool closed = true;
    for (const auto& s : sols) {
      const bool has_mirror = std::any_of(sols.begin(), sols.end(), [&](const auto& t) {
        return std::abs(t.theta0 - (std::numbers::pi / 2 - s.theta0)) < 1e-6 &&
               std::abs(t.length - s.length) <= 1e-6 * s.length;
      });
      closed = closed && has_mirror;
    }
    out.push_back(detail::make_check("solution set closed under mirroring", closed,
                                     std::to_string(sols.size()) + " solution(s)"));
  }

  {
    const auto& best = sols.front();
    const double tau = 300.0 * std::max({params.tau_alpha(), params.tau_beta(), params.tau_h()});
    try {
      const auto traj = evolve(params, to_protocol(best), tau);
      const double balance =
          std::abs(traj.total_work - traj.energy_balance_work) / std::abs(traj.total_work);
      out.push_back(detail::make_check("work equals energy balance", balance < 1e-6,
                                       "rel diff " + format_report(balance)));
      const double ratio = traj.excess_work * tau / (best.length * best.length);
      out.push_back(detail::make_check("shortest geodesic: W_ex tau / L^2 near 1 at slow driving",
                                       std::abs(ratio - 1.0) < 0.02,
                                       "tau " + format_report(tau) + " s, ratio " +
                                           format_report(ratio, 6)));
    } catch (const Error& e) {
      out.push_back(detail::make_check("work equals energy balance", false, e.what()));
    }
  }
  return out;
}

}  // namespace memsep
