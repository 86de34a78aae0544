#pragma once

// Closed forms for the symmetric case eps_alpha = eps_beta = 1/2,
// tau_alpha = tau_beta = tau_p, where the optimal path runs along the
// diagonal x_L = x_R = x.

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "memsep/errors.hpp"
#include "memsep/model.hpp"
#include "memsep/path.hpp"

namespace memsep {

enum class Regime { particle, heat };

inline const char* to_string(Regime r) { return r == Regime::particle ? "particle" : "heat"; }

inline std::optional<Regime> parse_regime(std::string_view s) {
  if (s == "particle") return Regime::particle;
  if (s == "heat") return Regime::heat;
  return std::nullopt;
}

namespace detail {

inline void require_symmetric(const SystemParams& p, const char* where) {
  if (!p.is_symmetric(1e-12) || std::abs(p.eps_alpha() - 0.5) > 1e-12) {
    throw DomainError(std::string(where) +
                      ": needs eps_alpha = eps_beta = 0.5 and tau_alpha = tau_beta");
  }
}

/// asinh through log1p, accurate for small z.
inline double stable_asinh(double z) {
  const double a = std::abs(z);
  const double r = std::log1p(a + a * a / (1.0 + std::sqrt(1.0 + a * a)));
  return z < 0.0 ? -r : r;
}

// Antiderivative of sqrt(tau_p/(1-x)^3 + (2/3) tau_h/(1-x)^2), up to the
// factor 2 taken out front.
inline double symmetric_primitive(double tau_p, double tau_h, double x) {
  const double u = 1.0 - x;
  const double h = 2.0 * tau_h / 3.0;
  return std::sqrt(tau_p / u + h) - std::sqrt(h) * stable_asinh(std::sqrt(u * h / tau_p));
}

inline double symmetric_length_raw(const SystemParams& p, double x) {
  const double tp = p.tau_alpha();
  const double th = p.tau_h();
  return 2.0 * std::sqrt(p.energy_scale()) *
         (symmetric_primitive(tp, th, x) - symmetric_primitive(tp, th, 0.0));
}

}  // namespace detail

/// Thermodynamic length [(J s)^(1/2)] of the diagonal from (0, 0) to (x_end, x_end).
inline double symmetric_length(const SystemParams& params, double x_end) {
  detail::require_symmetric(params, "symmetric_length");
  if (!(x_end >= 0.0 && x_end <= 0.5)) {
    throw DomainError("symmetric_length: x_end must lie in [0, 0.5]");
  }
  return detail::symmetric_length_raw(params, x_end);
}

/// dL/dx along the diagonal.
inline double symmetric_speed(const SystemParams& params, double x) {
  detail::require_symmetric(params, "symmetric_speed");
  const double u = 1.0 - x;
  return std::sqrt(params.energy_scale()) *
         std::sqrt(params.tau_alpha() / (u * u * u) + 2.0 * params.tau_h() / (3.0 * u * u));
}

/// The diagonal position x at which the length reaches s times its full
/// value, for s in [0, 1]. Bisection on [0, 0.5] with secant steps taken
/// whenever they stay inside the bracket.
inline double symmetric_protocol(const SystemParams& params, double s) {
  detail::require_symmetric(params, "symmetric_protocol");
  if (!(s >= 0.0 && s <= 1.0)) throw DomainError("symmetric_protocol: s must lie in [0, 1]");
  if (s == 0.0) return 0.0;
  if (s == 1.0) return 0.5;
  const double goal = s * detail::symmetric_length_raw(params, 0.5);
  auto f = [&](double x) { return detail::symmetric_length_raw(params, x) - goal; };
  double lo = 0.0;
  double hi = 0.5;
  double f_lo = -goal;
  double f_hi = f(hi);
  for (int it = 0; it < 200; ++it) {
    if (hi - lo <= 1e-12) break;
    double x = lo - f_lo * (hi - lo) / (f_hi - f_lo);
    // Fall back to bisection when the secant point crowds a bracket end.
    const double margin = 0.05 * (hi - lo);
    if (!(x > lo + margin && x < hi - margin)) x = 0.5 * (lo + hi);
    const double fx = f(x);
    if (fx == 0.0) return x;
    if (fx < 0.0) {
      lo = x;
      f_lo = fx;
    } else {
      hi = x;
      f_hi = fx;
    }
  }
  if (hi - lo > 1e-12) throw ConvergenceError("symmetric_protocol: root not bracketed to 1e-12");
  return std::abs(f_lo) <= std::abs(f_hi) ? lo : hi;
}

/// The symmetric protocol on n uniform s-samples with exact tangents
/// dx/ds = L_sym / (dL/dx).
inline PathSamples symmetric_protocol_path(const SystemParams& params, int n_samples = 1001) {
  detail::require_symmetric(params, "symmetric_protocol_path");
  if (n_samples < 2) throw DomainError("symmetric_protocol_path: need at least two samples");
  const double total = detail::symmetric_length_raw(params, 0.5);
  std::vector<PathSample> pts;
  std::vector<Velocity> tangents;
  for (int i = 0; i < n_samples; ++i) {
    const double s = i + 1 == n_samples ? 1.0 : static_cast<double>(i) / (n_samples - 1);
    const double x = symmetric_protocol(params, s);
    const double dx = total / symmetric_speed(params, x);
    pts.push_back({s, {x, x}});
    tangents.push_back({dx, dx});
  }
  return PathSamples(std::move(pts), std::move(tangents));
}

/// Minimal excess work [J] for operation time tau_op in one of the two
/// relaxation-dominated limits: particle transport (tau_h << tau_p) or heat
/// exchange (tau_h >> tau_p).
inline double limit_min_excess_work(const SystemParams& params, double tau_op, Regime regime) {
  detail::require_symmetric(params, "limit_min_excess_work");
  if (!(tau_op > 0.0)) throw DomainError("limit_min_excess_work: tau_op must be > 0");
  const double k = params.energy_scale();
  if (regime == Regime::particle) {
    return (12.0 - 8.0 * std::numbers::sqrt2) * k * params.tau_alpha() / tau_op;
  }
  return 2.0 * std::numbers::ln2 * std::numbers::ln2 / 3.0 * k * params.tau_h() / tau_op;
}

/// Limiting optimal diagonal protocol x(s) of a regime.
inline double limit_protocol(Regime regime, double s) {
  if (!(s >= 0.0 && s <= 1.0)) throw DomainError("limit_protocol: s must lie in [0, 1]");
  if (regime == Regime::particle) {
    const double d = (std::numbers::sqrt2 - 1.0) * s + 1.0;
    return 1.0 - 1.0 / (d * d);
  }
  return -std::expm1(-s * std::numbers::ln2);
}

/// Whether tau_h / tau_p is far enough into a regime (beyond a factor 100)
/// for its limit formulas to apply.
inline bool regime_applies(const SystemParams& params, Regime regime) {
  const double ratio = params.tau_h() / params.tau_alpha();
  return regime == Regime::particle ? ratio < 1e-2 : ratio > 1e2;
}

}  // namespace memsep
