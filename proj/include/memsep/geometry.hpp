#pragma once

// Thermodynamic metric of the (x_L, x_R) configuration space. For slow
// protocols the excess work rate is the quadratic form xdot^T G xdot, so G
// turns the configuration triangle into a Riemannian manifold whose arc
// length bounds the excess work from below.

#include <array>
#include <cmath>
#include <cstddef>

#include "memsep/errors.hpp"
#include "memsep/model.hpp"
#include "memsep/path.hpp"

namespace memsep {

/// Symmetric 2x2 metric [J s]; index 0 is x_L, index 1 is x_R.
struct MetricTensor {
  double g_ll = 0.0;
  double g_lr = 0.0;
  double g_rr = 0.0;

  double operator()(std::size_t i, std::size_t j) const noexcept {
    if (i != j) return g_lr;
    return i == 0 ? g_ll : g_rr;
  }
  double det() const noexcept { return g_ll * g_rr - g_lr * g_lr; }
  double trace() const noexcept { return g_ll + g_rr; }

  /// v^T G v.
  double quadratic(double v_l, double v_r) const noexcept {
    return (g_ll * v_l * v_l + g_rr * v_r * v_r) + 2.0 * g_lr * v_l * v_r;
  }

  /// det / (trace/2)^2: 1 for an isotropic metric, 0 when degenerate.
  double conditioning() const noexcept {
    const double half = 0.5 * trace();
    return det() / (half * half);
  }
};

/// Metrics below this conditioning are treated as singular.
inline constexpr double kDegeneracyTolerance = 1e-12;

/// Partial derivatives d_l g_ij, with d[0] = d/dx_L and d[1] = d/dx_R.
struct MetricDerivatives {
  std::array<MetricTensor, 2> d;
};

/// gamma[k][i][j] = Gamma^k_ij (second kind) and lowered[i][j][l] = Gamma_ij,l
/// (first kind, lowered index last).
struct ChristoffelSymbols {
  std::array<std::array<std::array<double, 2>, 2>, 2> gamma{};
  std::array<std::array<std::array<double, 2>, 2>, 2> lowered{};
};

namespace detail {

// The components are written so that mirroring (x_L <-> x_R, alpha <-> beta)
// maps each expression onto its partner operation for operation; symmetric
// parameters then give bitwise-symmetric results.

inline MetricTensor metric_raw(const SystemParams& p, double x_l, double x_r) {
  const double a = p.eps_alpha() * p.tau_alpha();
  const double b = p.eps_beta() * p.tau_beta();
  const double h = (2.0 / 3.0) * p.tau_h();
  const double u = 1.0 - x_l;
  const double v = 1.0 - x_r;
  auto diag = [h](double c_other, double x_other, double one_minus_self, double c_self,
                  double one_minus_other, double eps_other) {
    const double s3 = one_minus_self * one_minus_self * one_minus_self;
    const double s2 = one_minus_self * one_minus_self;
    return (c_other * x_other * x_other / s3 + c_self / one_minus_other) +
           h * eps_other * eps_other / s2;
  };
  const double k = p.energy_scale();
  MetricTensor g;
  g.g_ll = k * diag(b, x_r, u, a, v, p.eps_beta());
  g.g_rr = k * diag(a, x_l, v, b, u, p.eps_alpha());
  g.g_lr = k * ((a * x_l / (v * v) + b * x_r / (u * u)) +
                h * (p.eps_alpha() * p.eps_beta()) / (u * v));
  return g;
}

inline MetricDerivatives metric_derivatives_raw(const SystemParams& p, double x_l, double x_r) {
  const double a = p.eps_alpha() * p.tau_alpha();
  const double b = p.eps_beta() * p.tau_beta();
  const double h = (2.0 / 3.0) * p.tau_h();
  const double ee = p.eps_alpha() * p.eps_beta();
  const double u = 1.0 - x_l;
  const double v = 1.0 - x_r;
  const double k = p.energy_scale();
  // d g_self,self / d x_self
  auto d_diag_self = [h](double c_other, double x_other, double one_minus_self, double eps_other) {
    const double s3 = one_minus_self * one_minus_self * one_minus_self;
    return 3.0 * c_other * x_other * x_other / (s3 * one_minus_self) +
           2.0 * h * eps_other * eps_other / s3;
  };
  // d g_self,self / d x_other
  auto d_diag_other = [](double c_other, double x_other, double one_minus_self, double c_self,
                         double one_minus_other) {
    return 2.0 * c_other * x_other / (one_minus_self * one_minus_self * one_minus_self) +
           c_self / (one_minus_other * one_minus_other);
  };
  // d g_lr / d x_self
  auto d_cross = [h, ee](double c_self, double c_other, double x_other, double one_minus_self,
                         double one_minus_other) {
    return (c_self / (one_minus_other * one_minus_other) +
            2.0 * c_other * x_other / (one_minus_self * one_minus_self * one_minus_self)) +
           h * ee / (one_minus_self * one_minus_self * one_minus_other);
  };
  MetricDerivatives out;
  out.d[0].g_ll = k * d_diag_self(b, x_r, u, p.eps_beta());
  out.d[1].g_rr = k * d_diag_self(a, x_l, v, p.eps_alpha());
  out.d[1].g_ll = k * d_diag_other(b, x_r, u, a, v);
  out.d[0].g_rr = k * d_diag_other(a, x_l, v, b, u);
  out.d[0].g_lr = k * d_cross(a, b, x_r, u, v);
  out.d[1].g_lr = k * d_cross(b, a, x_l, v, u);
  return out;
}

inline ChristoffelSymbols christoffel_raw(const MetricTensor& g, const MetricDerivatives& dg) {
  ChristoffelSymbols c;
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      for (std::size_t l = 0; l < 2; ++l) {
        c.lowered[i][j][l] = 0.5 * ((dg.d[j](l, i) + dg.d[i](l, j)) - dg.d[l](i, j));
      }
    }
  }
  const double det = g.det();
  const std::array<std::array<double, 2>, 2> inv{{{g.g_rr / det, -g.g_lr / det},
                                                   {-g.g_lr / det, g.g_ll / det}}};
  for (std::size_t k = 0; k < 2; ++k) {
    for (std::size_t i = 0; i < 2; ++i) {
      for (std::size_t j = 0; j < 2; ++j) {
        c.gamma[k][i][j] = inv[k][0] * c.lowered[i][j][0] + inv[k][1] * c.lowered[i][j][1];
      }
    }
  }
  return c;
}

inline void require_off_pole(const ConfigPoint& pt, const char* where) {
  if (!(pt.x_l < 1.0 && pt.x_r < 1.0) || !std::isfinite(pt.x_l) || !std::isfinite(pt.x_r)) {
    throw DomainError(std::string(where) + ": metric has a pole at " + to_string(pt));
  }
}

}  // namespace detail

/// G at a configuration point. The formula is finite for any x_l, x_r < 1;
/// points outside the physical triangle are accepted so that integrators may
/// probe slightly past its boundary.
inline MetricTensor metric_at(const SystemParams& params, const ConfigPoint& pt) {
  detail::require_off_pole(pt, "metric_at");
  return detail::metric_raw(params, pt.x_l, pt.x_r);
}

inline MetricDerivatives metric_derivatives_at(const SystemParams& params, const ConfigPoint& pt) {
  detail::require_off_pole(pt, "metric_derivatives_at");
  return detail::metric_derivatives_raw(params, pt.x_l, pt.x_r);
}

/// Christoffel symbols from the analytically differentiated metric.
/// Throws SingularityError where G is (numerically) degenerate, which
/// includes the separation target (eps_alpha, eps_beta).
inline ChristoffelSymbols christoffel_at(const SystemParams& params, const ConfigPoint& pt) {
  const MetricTensor g = metric_at(params, pt);
  if (!(g.conditioning() >= kDegeneracyTolerance)) {
    throw SingularityError("christoffel_at: metric degenerate at " + to_string(pt), pt.x_l,
                           pt.x_r);
  }
  return detail::christoffel_raw(g, detail::metric_derivatives_raw(params, pt.x_l, pt.x_r));
}

/// Leading-order excess work rate [W] for velocities in 1/s, as v^T G v.
inline double excess_work_rate(const SystemParams& params, const ConfigPoint& pt,
                               const Velocity& vel) {
  return metric_at(params, pt).quadratic(vel.v_l, vel.v_r);
}

/// The same rate written as a heat-exchange square plus one particle-transport
/// square per membrane. Independent of metric_at; used to cross-check it.
inline double excess_work_rate_bracket_form(const SystemParams& params, const ConfigPoint& pt,
                                            const Velocity& vel) {
  detail::require_off_pole(pt, "excess_work_rate_bracket_form");
  const double k = params.energy_scale();
  const double u = 1.0 - pt.x_l;
  const double v = 1.0 - pt.x_r;
  const double heat = params.eps_alpha() * vel.v_r / v + params.eps_beta() * vel.v_l / u;
  // d/dt [x_L/(1-x_R)] and d/dt [x_R/(1-x_L)]
  const double fill_l = vel.v_l / v + pt.x_l * vel.v_r / (v * v);
  const double fill_r = vel.v_r / u + pt.x_r * vel.v_l / (u * u);
  return 2.0 * k * params.tau_h() / 3.0 * heat * heat +
         k * (params.eps_alpha() * params.tau_alpha() * v * fill_l * fill_l +
              params.eps_beta() * params.tau_beta() * u * fill_r * fill_r);
}

/// v^T G v evaluated as a sum of squares. Unlike MetricTensor::quadratic it
/// keeps full relative accuracy near the target, where G is nearly singular
/// and v can be large along its null direction.
inline double metric_norm_squared(const SystemParams& params, const ConfigPoint& pt,
                                  const Velocity& v) {
  return excess_work_rate_bracket_form(params, pt, v);
}

/// Thermodynamic length [(J s)^(1/2)] of a sampled path: composite midpoint
/// rule, sum of sqrt(dx^T G(midpoint) dx). Second-order accurate and never
/// evaluates G at the samples themselves.
inline double path_length(const SystemParams& params, const PathSamples& path) {
  const auto samples = path.samples();
  for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
    detail::require_off_pole(samples[i].pt, "path_length");
  }
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
    const ConfigPoint& a = samples[i].pt;
    const ConfigPoint& b = samples[i + 1].pt;
    const double dl = b.x_l - a.x_l;
    const double dr = b.x_r - a.x_r;
    if (dl == 0.0 && dr == 0.0) continue;
    const MetricTensor g = detail::metric_raw(params, 0.5 * (a.x_l + b.x_l), 0.5 * (a.x_r + b.x_r));
    total += std::sqrt(std::max(0.0, g.quadratic(dl, dr)));
  }
  return total;
}

}  // namespace memsep
