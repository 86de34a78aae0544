#pragma once

// Finite-time separation under a prescribed protocol: particle exchange
// through the two membranes, Newtonian heat exchange with the bath, and the
// mechanical work done by the moving membranes.
//
// The particle state is carried as the deviation of each side-compartment
// fraction from its instantaneous equilibrium value. The equations are the
// plain rate equations rewritten in that variable; the rewrite avoids the
// cancellation in N_alphaM / x_M as both vanish at the end of a separation,
// and in N_alphaL / x_L as both vanish at the start.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <future>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "memsep/dopri5.hpp"
#include "memsep/errors.hpp"
#include "memsep/geometry.hpp"
#include "memsep/model.hpp"
#include "memsep/path.hpp"

namespace memsep {

struct TrajectorySample {
  double t = 0.0;  ///< [s]
  GasState state;
  double work = 0.0;  ///< work done on the gas since the start [J]
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  double total_work = 0.0;       ///< [J]
  double reversible_work = 0.0;  ///< model reversible work at `endpoint` [J]
  double excess_work = 0.0;      ///< total_work - reversible_work [J]
  /// Total work recomputed from the energy balance C_V (T_end - T_start) +
  /// heat released to the bath; agrees with total_work to integrator accuracy.
  double energy_balance_work = 0.0;
  ConfigPoint endpoint;
  double s_end = 1.0;  ///< rescaled time at which integration stopped
};

struct EvolveOptions {
  double rtol = 1e-9;
  double atol = 1e-12;
  double max_step = 0.0;         ///< [s]; 0: min(tau_alpha, tau_beta, tau_h) / 10
  double start_offset = 1e-8;    ///< integration starts at s = start_offset
  /// A protocol whose last sample leaves less middle volume than this is
  /// stopped where x_M falls to it. The relaxation time of the middle
  /// compartment scales with x_M, and below about 1e-12 it drops under the
  /// time resolution of a double at t ~ tau.
  double middle_volume_floor = 1e-8;
  int n_output = 1001;  ///< samples on a uniform s grid, plus the start point
  /// Start from this state instead of equilibrium; its config is ignored.
  std::optional<GasState> initial_state;
};

namespace detail {

// y = (dev_alpha, dev_beta, T/T0, W/K, Q/K): deviations of N_alphaL/N_alpha
// and N_betaR/N_beta from equilibrium, temperature, work done on the gas and
// heat released to the bath, with K = N_t k_B T0.
using SimState = std::array<double, 5>;

struct ProtocolClock {
  const ProtocolInterpolant* path;
  double tau;

  struct At {
    ConfigPoint pt;
    Velocity v;  ///< per second
  };
  At operator()(double t) const {
    const auto e = path->at(t / tau);
    return {e.pt, {e.d1.v_l / tau, e.d1.v_r / tau}};
  }
};

/// Equilibrium fractions N_alphaL/N_alpha = x_L/(1-x_R) and N_betaR/N_beta.
inline std::array<double, 2> equilibrium_fractions(const ConfigPoint& pt) {
  return {pt.x_l / (1.0 - pt.x_r), pt.x_r / (1.0 - pt.x_l)};
}

struct GasRhs {
  const SystemParams* params;
  ProtocolClock clock;

  bool operator()(double t, const SimState& y, SimState& dy) const {
    const auto [pt, v] = clock(t);
    const double xm = pt.x_m();
    if (!(pt.x_l > 0.0 && pt.x_r > 0.0 && xm > 0.0)) return false;
    const double ea = params->eps_alpha();
    const double eb = params->eps_beta();
    const double cr = 1.0 / (1.0 - pt.x_r);  // equilibrium concentration of alpha
    const double cl = 1.0 / (1.0 - pt.x_l);  // and of beta
    const double da = y[0];
    const double db = y[1];
    const double theta = y[2];

    // d/dt of the equilibrium fractions.
    const double eq_a_dot = (v.v_l + pt.x_l * v.v_r * cr) * cr;
    const double eq_b_dot = (v.v_r + pt.x_r * v.v_l * cl) * cl;
    dy[0] = -da * (1.0 / xm + 1.0 / pt.x_l) / params->tau_alpha() - eq_a_dot;
    dy[1] = -db * (1.0 / xm + 1.0 / pt.x_r) / params->tau_beta() - eq_b_dot;

    // Pressure differences across each membrane, from n/x per compartment.
    const double on_l = eb * cl - ea * da * (1.0 / xm + 1.0 / pt.x_l) - eb * db / xm;
    const double on_r = ea * cr - eb * db * (1.0 / xm + 1.0 / pt.x_r) - ea * da / xm;
    const double w_dot = theta * (on_l * v.v_l + on_r * v.v_r);
    const double heat_out = 1.5 * (theta - 1.0) / params->tau_h();
    dy[2] = -(theta - 1.0) / params->tau_h() + w_dot / 1.5;
    dy[3] = w_dot;
    dy[4] = heat_out;
    return true;
  }
};

inline GasState to_gas_state(const SystemParams& p, const ConfigPoint& pt, const SimState& y) {
  const auto eq = equilibrium_fractions(pt);
  GasState s;
  s.config = pt;
  s.n_alpha_l = p.n_alpha() * (eq[0] + y[0]);
  s.n_beta_r = p.n_beta() * (eq[1] + y[1]);
  s.temperature = p.t_bath() * y[2];
  return s;
}

/// Rescaled time at which the interpolated protocol's middle volume falls to
/// `floor`, searching the last interval that starts above it.
inline double middle_floor_time(const ProtocolInterpolant& ip, const PathSamples& path,
                                double floor) {
  const auto smp = path.samples();
  std::size_t i = smp.size() - 1;
  while (i > 0 && !(smp[i].pt.x_m() > floor)) --i;
  double lo = smp[i].s;
  double hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (ip.at(mid).pt.x_m() > floor ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace detail

/// Integrates the gas dynamics while the protocol runs from s = start_offset
/// to its end in total time tau_op.
inline Trajectory evolve(const SystemParams& params, const PathSamples& protocol, double tau_op,
                         const EvolveOptions& opts = {}) {
  if (!(tau_op > 0.0) || !std::isfinite(tau_op)) {
    throw DomainError("evolve: tau_op must be finite and > 0");
  }
  if (opts.n_output < 2) throw DomainError("evolve: n_output must be >= 2");
  if (!(opts.start_offset > 0.0 && opts.start_offset < 1.0)) {
    throw DomainError("evolve: start_offset must lie in (0, 1)");
  }
  const ProtocolInterpolant ip(protocol);
  double s_end = 1.0;
  if (!(protocol.back().pt.x_m() > opts.middle_volume_floor)) {
    s_end = detail::middle_floor_time(ip, protocol, opts.middle_volume_floor);
  }
  if (!(s_end > opts.start_offset)) {
    throw DomainError("evolve: protocol closes the middle compartment before it starts");
  }

  const double t0 = tau_op * opts.start_offset;
  const ConfigPoint start = ip.at(opts.start_offset).pt;
  if (!(start.x_l > 0.0 && start.x_r > 0.0 && start.x_m() > 0.0)) {
    throw DomainError("evolve: protocol start " + to_string(start) +
                      " leaves a compartment empty after the start offset");
  }
  detail::SimState y{0.0, 0.0, 1.0, 0.0, 0.0};
  if (opts.initial_state) {
    const auto eq = detail::equilibrium_fractions(start);
    y[0] = opts.initial_state->n_alpha_l / params.n_alpha() - eq[0];
    y[1] = opts.initial_state->n_beta_r / params.n_beta() - eq[1];
    y[2] = opts.initial_state->temperature / params.t_bath();
  }
  const double theta0 = y[2];

  StepperOptions so;
  so.rtol = opts.rtol;
  so.atol = opts.atol;
  so.h_max = opts.max_step > 0.0
                 ? opts.max_step
                 : std::min({params.tau_alpha(), params.tau_beta(), params.tau_h()}) / 10.0;
  so.h_initial = std::min(so.h_max, t0);
  so.h_min = 1e-14 * tau_op;
  Dopri5<5> stepper(so);
  detail::GasRhs rhs{&params, {&ip, tau_op}};
  if (!stepper.start(rhs, t0, y)) {
    throw NumericalError("evolve: cannot evaluate the dynamics at the start " + to_string(start));
  }

  const double k = params.energy_scale();
  Trajectory traj;
  traj.s_end = s_end;
  auto record = [&](double t, const detail::SimState& st) {
    const ConfigPoint pt = ip.at(t / tau_op).pt;
    traj.samples.push_back({t, detail::to_gas_state(params, pt, st), k * st[3]});
  };
  record(t0, y);

  const int n = opts.n_output - 1;
  Dopri5<5>::Step step;
  for (int i = 1; i <= n; ++i) {
    const double s_out = i == n ? s_end : static_cast<double>(i) / n;
    if (s_out <= opts.start_offset) continue;
    if (s_out > s_end) break;
    const double t_out = i == n ? tau_op * s_end : tau_op * s_out;
    while (stepper.t() < t_out) {
      if (stepper.advance(rhs, t_out, step) == Dopri5<5>::Outcome::underflow) {
        const ConfigPoint pt = ip.at(stepper.t() / tau_op).pt;
        throw NumericalError("evolve: step size underflow at t = " + std::to_string(stepper.t()) +
                             " s, s = " + std::to_string(stepper.t() / tau_op) + ", x = " +
                             to_string(pt));
      }
    }
    record(stepper.t(), stepper.y());
    if (t_out >= tau_op * s_end) break;
  }

  const detail::SimState& yf = stepper.y();
  traj.endpoint = ip.at(s_end).pt;
  traj.total_work = k * yf[3];
  traj.energy_balance_work = k * (1.5 * (yf[2] - theta0) + yf[4]);
  traj.reversible_work = reversible_work(params, traj.endpoint);
  traj.excess_work = traj.total_work - traj.reversible_work;
  return traj;
}

struct SweepRow {
  double tau = 0.0;             ///< [s]
  double excess_work = 0.0;     ///< simulated [J]
  double l_squared_over_tau = 0.0;  ///< geometric prediction [J]
};

/// evolve at each operation time, next to the prediction L^2 / tau with L the
/// metric length of the protocol's samples. Runs concurrently when
/// `parallel`; results do not depend on it.
inline std::vector<SweepRow> excess_work_sweep(const SystemParams& params,
                                               const PathSamples& protocol,
                                               const std::vector<double>& taus,
                                               const EvolveOptions& opts = {},
                                               bool parallel = true) {
  for (double t : taus) {
    if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("excess_work_sweep: tau must be > 0");
  }
  const double length = path_length(params, protocol);
  auto one = [&](double tau) {
    return SweepRow{tau, evolve(params, protocol, tau, opts).excess_work, length * length / tau};
  };
  std::vector<SweepRow> rows;
  rows.reserve(taus.size());
  if (!parallel || taus.size() < 2) {
    for (double t : taus) rows.push_back(one(t));
    return rows;
  }
  std::vector<std::future<SweepRow>> jobs;
  jobs.reserve(taus.size());
  for (double t : taus) jobs.push_back(std::async(std::launch::async, one, t));
  for (auto& j : jobs) rows.push_back(j.get());
  return rows;
}

struct FirstOrderDeviation {
  double d_n_alpha_l = 0.0;    ///< N_alphaL minus its equilibrium value
  double d_n_beta_r = 0.0;
  double d_temperature = 0.0;  ///< [K]
};

/// Leading-order (1/tau) departure from equilibrium at rescaled time s.
inline FirstOrderDeviation first_order_deviations(const SystemParams& params,
                                                  const PathSamples& protocol, double tau_op,
                                                  double s) {
  if (!(s > 0.0 && s < 1.0)) {
    throw DomainError("first_order_deviations: s must lie strictly inside (0, 1)");
  }
  if (!(tau_op > 0.0)) throw DomainError("first_order_deviations: tau_op must be > 0");
  const ProtocolInterpolant ip(protocol);
  const auto e = ip.at(s);
  const ConfigPoint& x = e.pt;
  const double xm = x.x_m();
  if (!(x.x_l > 0.0 && x.x_r > 0.0 && xm > 0.0)) {
    throw DomainError("first_order_deviations: empty compartment at " + to_string(x));
  }
  const double vl = e.d1.v_l / tau_op;
  const double vr = e.d1.v_r / tau_op;
  const double u = 1.0 - x.x_l;
  const double w = 1.0 - x.x_r;
  const double fill_l = (vl * w + x.x_l * vr) / (w * w);  // d/dt [x_L / (1 - x_R)]
  const double fill_r = (vr * u + x.x_r * vl) / (u * u);
  FirstOrderDeviation d;
  d.d_n_alpha_l = -params.n_alpha() * params.tau_alpha() * (xm * x.x_l / (xm + x.x_l)) * fill_l;
  d.d_n_beta_r = -params.n_beta() * params.tau_beta() * (xm * x.x_r / (xm + x.x_r)) * fill_r;
  d.d_temperature = 2.0 * params.t_bath() * params.tau_h() / (3.0 * params.n_total()) *
                    (vl * params.n_beta() / u + vr * params.n_alpha() / w);
  return d;
}

}  // namespace memsep
