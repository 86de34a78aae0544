#pragma once

// Geodesics of the thermodynamic metric from the mixed state (0, 0) to a
// complete-separation target, found by shooting on the launch angle.
//
// The metric degenerates at the target (eps_alpha, eps_beta), so geodesics
// aimed at it cannot be integrated through it: the arc length gained per
// step collapses and integration halts once it falls below dr_min, a small
// distance short of the target. That residual gap, and the metric length it
// represents, are reported with every solution.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "memsep/dopri5.hpp"
#include "memsep/errors.hpp"
#include "memsep/geometry.hpp"
#include "memsep/hermite.hpp"
#include "memsep/model.hpp"
#include "memsep/path.hpp"

namespace memsep {

struct GeodesicOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double dr_min = 1e-13;         ///< halt once a step advances r by less [(J s)^(1/2)]
  double h_initial = 1e-3;       ///< first trial step in Euclidean length
  double h_max = 2e-3;           ///< longest step in Euclidean length; keeps samples dense
  double gap_threshold = 1e-6;   ///< accepted Euclidean distance to the target
  double angle_tol = 1e-12;      ///< bisection width on the launch angle [rad]
  double cluster_tol = 1e-4;     ///< launch angles closer than this are one geodesic [rad]
  double bracket_step = 0.01;    ///< first probe offset when bracketing around a guess [rad]
  double r_max = 0.0;            ///< 0: twice the straight-segment length to the target
};

struct GeodesicSample {
  double r = 0.0;  ///< arc length
  ConfigPoint pt;
  Velocity dpt_dr;
  // The same point in the Euclidean arc-length parameter sigma the path was
  // integrated in; smooth up to the target, unlike r.
  double sigma = 0.0;
  Velocity dpt_dsigma;
  double dr_dsigma = 0.0;
};

enum class GeodesicStop { reached_r_max, left_region, step_floor, passed_target };

inline const char* to_string(GeodesicStop s) {
  switch (s) {
    case GeodesicStop::reached_r_max: return "reached_r_max";
    case GeodesicStop::left_region: return "left_region";
    case GeodesicStop::step_floor: return "step_floor";
    case GeodesicStop::passed_target: return "passed_target";
  }
  return "unknown";
}

struct GeodesicSolution {
  std::vector<GeodesicSample> samples;
  double length = 0.0;  ///< r of the last sample [(J s)^(1/2)]
  /// Euclidean distance from the last sample to the target (NaN without one).
  double terminal_gap = std::numeric_limits<double>::quiet_NaN();
  /// Metric length of the straight step from the last sample to the target;
  /// estimates what the step floor cut off.
  double length_deficit = std::numeric_limits<double>::quiet_NaN();
  Velocity initial_direction;  ///< unit tangent under G at the start
  double theta0 = std::numeric_limits<double>::quiet_NaN();  ///< launch angle, if shot
  GeodesicStop stop = GeodesicStop::reached_r_max;
  /// Largest departure of the Euclidean tangent from unit length: the first
  /// integral of the equation actually integrated, so a direct measure of
  /// integration error. (Unit speed under G holds by construction.)
  double tangent_drift = 0.0;

  // Closest approach to the target.
  ConfigPoint closest;
  double closest_r = 0.0;
  double closest_gap = std::numeric_limits<double>::infinity();
  /// Signed perpendicular miss: cross(unit tangent, target - closest).
  double miss = std::numeric_limits<double>::quiet_NaN();
};

/// The integration could not leave its starting point.
class TrajectoryError : public NumericalError {
 public:
  TrajectoryError(const std::string& what, GeodesicSample last)
      : NumericalError(what), last_(last) {}
  const GeodesicSample& last_valid() const noexcept { return last_; }

 private:
  GeodesicSample last_;
};

/// Shooting failed; carries the best launch found so far.
class ShootingError : public ConvergenceError {
 public:
  ShootingError(const std::string& what, std::optional<GeodesicSolution> best)
      : ConvergenceError(what), best_(std::move(best)) {}
  const std::optional<GeodesicSolution>& best_candidate() const noexcept { return best_; }
  double best_miss() const noexcept {
    return best_ ? best_->closest_gap : std::numeric_limits<double>::infinity();
  }

 private:
  std::optional<GeodesicSolution> best_;
};

namespace detail {

// The path is integrated in Euclidean arc length sigma, carrying the metric
// arc length r as a fifth component. Near the target r(sigma) flattens out
// smoothly, whereas x(r) has a square-root singularity there, so this
// parameter lets the integrator follow the path much closer to the target.
using GeoState = std::array<double, 5>;  // x_L, x_R, dx_L/dsigma, dx_R/dsigma, r
using GeoStepper = Dopri5<5>;

struct GeodesicRhs {
  const SystemParams* params;

  bool operator()(double, const GeoState& y, GeoState& dy) const {
    if (!(y[0] < 1.0 && y[1] < 1.0)) return false;
    const MetricTensor g = metric_raw(*params, y[0], y[1]);
    if (!(g.det() > 0.0)) return false;
    const ChristoffelSymbols c = christoffel_raw(g, metric_derivatives_raw(*params, y[0], y[1]));
    const double pl = y[2];
    const double pr = y[3];
    std::array<double, 2> acc{};
    for (std::size_t k = 0; k < 2; ++k) {
      const auto& gk = c.gamma[k];
      acc[k] = -((gk[0][0] * pl * pl + gk[1][1] * pr * pr) + 2.0 * gk[0][1] * pl * pr);
    }
    // Keep |p| = 1: drop the component of the acceleration along p.
    const double along = (acc[0] * pl + acc[1] * pr) / (pl * pl + pr * pr);
    dy[0] = pl;
    dy[1] = pr;
    dy[2] = acc[0] - along * pl;
    dy[3] = acc[1] - along * pr;
    dy[4] = std::sqrt(std::max(0.0, metric_norm_squared(*params, {y[0], y[1]}, {pl, pr})));
    return true;
  }
};

inline double region_margin(double x_l, double x_r) {
  return std::min({x_l, x_r, 1.0 - x_l - x_r});
}

struct SegmentPoint {
  double sigma;
  GeoState y;

  double r() const noexcept { return y[4]; }
  ConfigPoint pt() const noexcept { return {y[0], y[1]}; }
};

inline SegmentPoint eval_segment(const GeoStepper::Step& st, double sigma) {
  SegmentPoint p{sigma, {}};
  for (std::size_t i = 0; i < 5; ++i) {
    p.y[i] = hermite(st.t0, st.t1, st.y0[i], st.y1[i], st.f0[i], st.f1[i], sigma).value;
  }
  return p;
}

inline SegmentPoint step_start(const GeoStepper::Step& st) { return {st.t0, st.y0}; }
inline SegmentPoint step_end(const GeoStepper::Step& st) { return {st.t1, st.y1}; }

/// dx/dr from the Euclidean tangent.
inline Velocity metric_velocity(const SystemParams& params, const GeoState& y) {
  const double n2 = metric_norm_squared(params, {y[0], y[1]}, {y[2], y[3]});
  if (!(n2 > 0.0) || !std::isfinite(n2)) return {y[2], y[3]};
  const double f = 1.0 / std::sqrt(n2);
  return {y[2] * f, y[3] * f};
}

inline GeodesicSample to_sample(const SystemParams& params, const SegmentPoint& p) {
  const double n2 = metric_norm_squared(params, p.pt(), {p.y[2], p.y[3]});
  return {p.r(), p.pt(), metric_velocity(params, p.y), p.sigma, {p.y[2], p.y[3]},
          std::sqrt(std::max(0.0, n2))};
}

inline double dist2(const ConfigPoint& a, const ConfigPoint& b) {
  const double dl = a.x_l - b.x_l;
  const double dr = a.x_r - b.x_r;
  return dl * dl + dr * dr;
}

/// Closest point of a step's Hermite arc to `target` that lies inside the
/// triangle: coarse scan plus golden-section refinement.
inline SegmentPoint closest_on_segment(const GeoStepper::Step& st, const ConfigPoint& target) {
  constexpr int kCoarse = 8;
  const double h = st.t1 - st.t0;
  auto d2 = [&](double sigma) {
    const ConfigPoint p = eval_segment(st, sigma).pt();
    if (region_margin(p.x_l, p.x_r) < 0.0) return std::numeric_limits<double>::infinity();
    return dist2(p, target);
  };
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= kCoarse; ++i) {
    const double d = d2(st.t0 + h * i / kCoarse);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  double lo = st.t0 + h * std::max(0, best - 1) / kCoarse;
  double hi = st.t0 + h * std::min(kCoarse, best + 1) / kCoarse;
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = hi - phi * (hi - lo);
  double b = lo + phi * (hi - lo);
  double fa = d2(a);
  double fb = d2(b);
  for (int it = 0; it < 80 && hi - lo > 1e-16 * std::max(1.0, std::abs(hi)); ++it) {
    if (fa < fb) {
      hi = b;
      b = a;
      fb = fa;
      a = hi - phi * (hi - lo);
      fa = d2(a);
    } else {
      lo = a;
      a = b;
      fa = fb;
      b = lo + phi * (hi - lo);
      fb = d2(b);
    }
  }
  SegmentPoint p = eval_segment(st, 0.5 * (lo + hi));
  // Endpoints are exact states; prefer them when they are at least as close.
  if (region_margin(p.y[0], p.y[1]) < 0.0) p = step_start(st);
  for (const SegmentPoint& e : {step_start(st), step_end(st)}) {
    if (region_margin(e.y[0], e.y[1]) >= 0.0 && dist2(e.pt(), target) <= dist2(p.pt(), target)) {
      p = e;
    }
  }
  return p;
}

/// Last point of a step satisfying `inside`, assuming the step starts inside
/// and ends outside.
template <class Inside>
inline SegmentPoint last_inside(const GeoStepper::Step& st, Inside inside) {
  double lo = st.t0;
  double hi = st.t1;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (inside(eval_segment(st, mid))) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  if (lo == st.t0) return step_start(st);
  return eval_segment(st, lo);
}

}  // namespace detail

/// Launch direction (cos theta, sin theta) scaled to unit speed under G at `start`.
inline Velocity unit_direction(const SystemParams& params, const ConfigPoint& start, double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double n = std::sqrt(metric_at(params, start).quadratic(c, s));
  return {c / n, s / n};
}

/// Integrates d2x^k/dr2 = -Gamma^k_ij dx^i/dr dx^j/dr from `start` along
/// `direction` until r_max, until the path leaves the physical triangle, or
/// until a step advances r by less than dr_min. With `stop_near`, a path
/// that comes within gap_threshold of that point and then recedes ends at
/// its closest approach.
inline GeodesicSolution integrate_geodesic(const SystemParams& params, const ConfigPoint& start,
                                           const Velocity& direction, double r_max,
                                           std::optional<ConfigPoint> stop_near = std::nullopt,
                                           const GeodesicOptions& opts = {}) {
  require_valid(start, "integrate_geodesic");
  const MetricTensor g0 = metric_at(params, start);
  if (!(g0.conditioning() >= kDegeneracyTolerance)) {
    throw DomainError("integrate_geodesic: metric degenerate at start " + to_string(start));
  }
  const double speed2 = g0.quadratic(direction.v_l, direction.v_r);
  if (!(std::abs(speed2 - 1.0) <= 1e-10)) {
    throw DomainError("integrate_geodesic: direction not unit length under G (g(v,v) = " +
                      std::to_string(speed2) + ")");
  }
  if (!(r_max > 0.0)) throw DomainError("integrate_geodesic: r_max must be > 0");

  StepperOptions so;
  so.rtol = opts.rtol;
  so.atol = opts.atol;
  so.h_min = 1e-15;  // Euclidean resolution of the configuration
  so.h_initial = opts.h_initial;
  so.h_max = opts.h_max;
  so.quadrature_tail = 1;  // r
  detail::GeoStepper stepper(so);
  detail::GeodesicRhs rhs{&params};

  GeodesicSolution sol;
  sol.initial_direction = direction;
  const double e = std::hypot(direction.v_l, direction.v_r);
  const detail::GeoState y0{start.x_l, start.x_r, direction.v_l / e, direction.v_r / e, 0.0};
  const GeodesicSample first{0.0, start, direction, 0.0, {y0[2], y0[3]}, 1.0 / e};
  if (!stepper.start(rhs, 0.0, y0)) {
    throw TrajectoryError("integrate_geodesic: cannot evaluate the geodesic equation at start",
                          first);
  }
  sol.samples.push_back(first);
  detail::SegmentPoint closest{0.0, y0};
  if (stop_near) sol.closest_gap = std::sqrt(detail::dist2(start, *stop_near));

  detail::GeoStepper::Step st;
  for (;;) {
    if (stepper.advance(rhs, std::numeric_limits<double>::infinity(), st) ==
        detail::GeoStepper::Outcome::underflow) {
      sol.stop = GeodesicStop::step_floor;
      break;
    }
    GeodesicStop stop = GeodesicStop::step_floor;
    bool done = false;
    detail::SegmentPoint end = detail::step_end(st);
    if (detail::region_margin(end.y[0], end.y[1]) < 0.0) {
      end = detail::last_inside(st, [](const detail::SegmentPoint& p) {
        return detail::region_margin(p.y[0], p.y[1]) >= 0.0;
      });
      if (end.sigma <= st.t0 && sol.samples.size() == 1) {
        throw TrajectoryError("integrate_geodesic: path leaves the configuration triangle at once",
                              sol.samples.back());
      }
      stop = GeodesicStop::left_region;
      done = true;
    }
    if (end.r() >= r_max) {
      end = detail::last_inside(st, [r_max](const detail::SegmentPoint& p) { return p.r() < r_max; });
      stop = GeodesicStop::reached_r_max;
      done = true;
    }
    if (stop_near) {
      detail::GeoStepper::Step seg = st;
      seg.t1 = end.sigma;
      seg.y1 = end.y;
      const auto c = detail::closest_on_segment(seg, *stop_near);
      const double gap = std::sqrt(detail::dist2(c.pt(), *stop_near));
      if (gap < sol.closest_gap) {
        sol.closest_gap = gap;
        closest = c;
      }
      if (sol.closest_gap < opts.gap_threshold && closest.sigma < end.sigma) {
        // Passed within the threshold and is moving away again: end at the
        // closest approach.
        if (closest.r() > sol.samples.back().r) {
          sol.samples.push_back(detail::to_sample(params, closest));
        }
        sol.stop = GeodesicStop::passed_target;
        break;
      }
    }
    sol.tangent_drift =
        std::max(sol.tangent_drift, std::abs(std::hypot(end.y[2], end.y[3]) - 1.0));
    const double dr = end.r() - sol.samples.back().r;
    if (end.r() > sol.samples.back().r) sol.samples.push_back(detail::to_sample(params, end));
    if (done) {
      sol.stop = stop;
      break;
    }
    if (dr < opts.dr_min) {
      sol.stop = GeodesicStop::step_floor;
      break;
    }
  }

  const GeodesicSample& last = sol.samples.back();
  sol.length = last.r;
  if (stop_near) {
    // The final state is always a candidate (step-floor halts land here).
    const double gap = std::sqrt(detail::dist2(last.pt, *stop_near));
    Velocity closest_v = detail::metric_velocity(params, closest.y);
    ConfigPoint closest_pt = closest.pt();
    double closest_r = closest.r();
    if (gap <= sol.closest_gap) {
      sol.closest_gap = gap;
      closest_pt = last.pt;
      closest_r = last.r;
      closest_v = last.dpt_dr;
    }
    sol.closest = closest_pt;
    sol.closest_r = closest_r;
    sol.terminal_gap = gap;
    const double dl = stop_near->x_l - last.pt.x_l;
    const double drr = stop_near->x_r - last.pt.x_r;
    sol.length_deficit = std::sqrt(std::max(0.0, metric_norm_squared(params, last.pt, {dl, drr})));
    const double tn = std::hypot(closest_v.v_l, closest_v.v_r);
    const double ol = stop_near->x_l - closest_pt.x_l;
    const double orr = stop_near->x_r - closest_pt.x_r;
    sol.miss = tn > 0.0 ? (closest_v.v_l * orr - closest_v.v_r * ol) / tn : 0.0;
  }
  return sol;
}

/// Straight-segment metric length from `from` to `to`, used to size r_max.
inline double straight_length(const SystemParams& params, const ConfigPoint& from,
                              const ConfigPoint& to, int n = 2000) {
  std::vector<ConfigPoint> pts;
  pts.reserve(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) {
    const double u = static_cast<double>(i) / n;
    pts.push_back({from.x_l + u * (to.x_l - from.x_l), from.x_r + u * (to.x_r - from.x_r)});
  }
  return path_length(params, PathSamples::uniform(pts));
}

namespace detail {

inline void require_separation_target(const ConfigPoint& target, const char* where) {
  require_valid(target, where);
  if (std::abs(target.x_l + target.x_r - 1.0) > 1e-12 || !(target.x_l > 0.0 && target.x_r > 0.0)) {
    throw DomainError(std::string(where) + ": target " + to_string(target) +
                      " is not an interior point of x_l + x_r = 1");
  }
}

/// One shot from the origin; also the scalar function the root finders see.
struct Shooter {
  const SystemParams& params;
  ConfigPoint target;
  GeodesicOptions opts;
  double r_max;

  Shooter(const SystemParams& p, const ConfigPoint& t, const GeodesicOptions& o)
      : params(p), target(t), opts(o) {
    r_max = opts.r_max > 0.0 ? opts.r_max : 2.0 * straight_length(p, {0.0, 0.0}, t);
  }

  GeodesicSolution shoot(double theta) const {
    const ConfigPoint origin{0.0, 0.0};
    auto sol = integrate_geodesic(params, origin, unit_direction(params, origin, theta), r_max,
                                  target, opts);
    sol.theta0 = theta;
    return sol;
  }

  bool converged(const GeodesicSolution& s) const { return s.terminal_gap < opts.gap_threshold; }

  /// Bisection on the signed miss between two launch angles of opposite sign.
  GeodesicSolution bisect(double lo, double hi, GeodesicSolution s_lo, GeodesicSolution s_hi) const {
    GeodesicSolution best = s_lo.terminal_gap < s_hi.terminal_gap ? s_lo : s_hi;
    auto consider = [&](const GeodesicSolution& s) {
      if (s.terminal_gap < best.terminal_gap) best = s;
    };
    double m_lo = s_lo.miss;
    while (hi - lo > opts.angle_tol) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      GeodesicSolution s = shoot(mid);
      consider(s);
      if (s.miss == 0.0) break;
      if ((s.miss > 0.0) == (m_lo > 0.0)) {
        lo = mid;
        m_lo = s.miss;
      } else {
        hi = mid;
      }
    }
    return best;
  }
};

inline bool opposite(double a, double b) { return (a > 0.0 && b < 0.0) || (a < 0.0 && b > 0.0); }

}  // namespace detail

/// Finds the geodesic from (0, 0) to `target` whose launch angle is the
/// sign change of the signed miss closest to `initial_angle_guess`.
inline GeodesicSolution shoot_to_target(const SystemParams& params, const ConfigPoint& target,
                                        double initial_angle_guess,
                                        const GeodesicOptions& opts = {}) {
  detail::require_separation_target(target, "shoot_to_target");
  constexpr double kHalfPi = std::numbers::pi / 2.0;
  if (!(initial_angle_guess > 0.0 && initial_angle_guess < kHalfPi)) {
    throw DomainError("shoot_to_target: initial angle must lie in (0, pi/2)");
  }
  const detail::Shooter shooter(params, target, opts);

  GeodesicSolution centre = shooter.shoot(initial_angle_guess);
  if (shooter.converged(centre)) return centre;
  std::optional<GeodesicSolution> best = centre;
  auto consider = [&](const GeodesicSolution& s) {
    if (!best || s.terminal_gap < best->terminal_gap) best = s;
  };

  // Widen alternately on each side until a sign change is bracketed.
  double lo_theta = initial_angle_guess;
  double hi_theta = initial_angle_guess;
  GeodesicSolution lo_sol = centre;
  GeodesicSolution hi_sol = centre;
  bool lo_open = true;
  bool hi_open = true;
  for (double step = opts.bracket_step; lo_open || hi_open; step *= 1.5) {
    if (hi_open) {
      const double th = hi_theta + step;
      if (th >= kHalfPi) {
        hi_open = false;
      } else {
        GeodesicSolution s = shooter.shoot(th);
        consider(s);
        if (detail::opposite(hi_sol.miss, s.miss)) {
          auto r = shooter.bisect(hi_theta, th, hi_sol, s);
          if (shooter.converged(r)) return r;
          consider(r);
        }
        hi_theta = th;
        hi_sol = std::move(s);
      }
    }
    if (lo_open) {
      const double th = lo_theta - step;
      if (th <= 0.0) {
        lo_open = false;
      } else {
        GeodesicSolution s = shooter.shoot(th);
        consider(s);
        if (detail::opposite(lo_sol.miss, s.miss)) {
          auto r = shooter.bisect(th, lo_theta, s, lo_sol);
          if (shooter.converged(r)) return r;
          consider(r);
        }
        lo_theta = th;
        lo_sol = std::move(s);
      }
    }
  }
  throw ShootingError("shoot_to_target: no launch angle reaches " + to_string(target) +
                          " (best gap " + std::to_string(best->terminal_gap) + ")",
                      best);
}

/// Scans n_scan launch angles across (0, pi/2), bisects every sign change of
/// the miss, and returns the distinct converged geodesics, shortest first.
inline std::vector<GeodesicSolution> find_all_geodesics(const SystemParams& params,
                                                        const ConfigPoint& target, int n_scan,
                                                        const GeodesicOptions& opts = {}) {
  detail::require_separation_target(target, "find_all_geodesics");
  if (n_scan < 8) throw DomainError("find_all_geodesics: n_scan must be >= 8");
  const detail::Shooter shooter(params, target, opts);
  constexpr double kHalfPi = std::numbers::pi / 2.0;

  std::vector<double> thetas;
  std::vector<GeodesicSolution> scan;
  for (int i = 0; i < n_scan; ++i) {
    thetas.push_back((i + 0.5) * kHalfPi / n_scan);
    scan.push_back(shooter.shoot(thetas.back()));
  }

  std::vector<GeodesicSolution> found;
  std::optional<GeodesicSolution> best;
  auto keep = [&](GeodesicSolution s) {
    if (!best || s.terminal_gap < best->terminal_gap) best = s;
    if (!shooter.converged(s)) return;
    for (auto& f : found) {
      if (std::abs(f.theta0 - s.theta0) < opts.cluster_tol) {
        if (s.terminal_gap < f.terminal_gap) f = std::move(s);
        return;
      }
    }
    found.push_back(std::move(s));
  };
  for (std::size_t i = 0; i < scan.size(); ++i) {
    if (shooter.converged(scan[i])) keep(scan[i]);
    if (i + 1 < scan.size() && detail::opposite(scan[i].miss, scan[i + 1].miss)) {
      keep(shooter.bisect(thetas[i], thetas[i + 1], scan[i], scan[i + 1]));
    }
  }
  if (found.empty()) {
    throw ShootingError("find_all_geodesics: no launch angle reaches " + to_string(target), best);
  }
  std::sort(found.begin(), found.end(),
            [](const auto& a, const auto& b) { return a.length < b.length; });
  return found;
}

/// Reparameterizes a geodesic by s = r / L on a uniform grid. Arc length
/// grows linearly in s, so the protocol runs at constant thermodynamic speed.
/// Positions come from cubic Hermite interpolation in the integration
/// parameter sigma, using the stored tangents. No tangents are attached to the
/// result: dx/ds diverges at the degenerate target, so consumers interpolate
/// between the samples, as they would for a protocol read back from a file.
inline PathSamples to_protocol(const GeodesicSolution& sol, int n_samples = 1001) {
  if (sol.samples.size() < 2 || !(sol.length > 0.0)) {
    throw DomainError("to_protocol: geodesic has no extent");
  }
  if (n_samples < 2) throw DomainError("to_protocol: need at least two samples");
  const auto& smp = sol.samples;
  const double length = sol.length;
  std::vector<PathSample> out;
  out.reserve(static_cast<std::size_t>(n_samples));
  std::size_t seg = 0;
  for (int k = 0; k < n_samples; ++k) {
    if (k + 1 == n_samples) {
      out.push_back({1.0, smp.back().pt});
      break;
    }
    const double s = static_cast<double>(k) / (n_samples - 1);
    const double r = s * length;
    while (seg + 2 < smp.size() && smp[seg + 1].r <= r) ++seg;
    const auto& a = smp[seg];
    const auto& b = smp[seg + 1];
    // Invert r(sigma) on the segment, then evaluate x(sigma).
    auto r_at = [&](double sg) {
      return hermite(a.sigma, b.sigma, a.r, b.r, a.dr_dsigma, b.dr_dsigma, sg).value;
    };
    double lo = a.sigma;
    double hi = b.sigma;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      (r_at(mid) < r ? lo : hi) = mid;
    }
    const double sg = 0.5 * (lo + hi);
    ConfigPoint p{
        hermite(a.sigma, b.sigma, a.pt.x_l, b.pt.x_l, a.dpt_dsigma.v_l, b.dpt_dsigma.v_l, sg).value,
        hermite(a.sigma, b.sigma, a.pt.x_r, b.pt.x_r, a.dpt_dsigma.v_r, b.dpt_dsigma.v_r, sg).value};
    if (k == 0) p = smp.front().pt;
    // Interpolation may overshoot the triangle's edges by rounding amounts.
    p.x_l = std::max(p.x_l, 0.0);
    p.x_r = std::max(p.x_r, 0.0);
    if (const double excess = p.x_l + p.x_r - 1.0; excess > 0.0) {
      p.x_l -= 0.5 * excess;
      p.x_r = 1.0 - p.x_l;
    }
    out.push_back({s, p});
  }
  return PathSamples(std::move(out));
}

}  // namespace memsep
