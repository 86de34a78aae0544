#pragma once

// Physical parameterization of binary membrane separation: two semipermeable
// membranes move inward from the chamber ends, leaving purified alpha gas on
// the left, purified beta gas on the right and the mixture in between. All
// volumes are fractions of the chamber volume.

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "memsep/errors.hpp"

namespace memsep {

inline constexpr double kBoltzmann = 1.380649e-23;  // J/K, exact SI
inline constexpr double kAvogadro = 6.02214076e23;  // 1/mol, exact SI

/// Raw inputs for SystemParams. The defaults describe two moles of an
/// equimolar mixture at room temperature with tau_p = 1 s, tau_h = 0.1 s.
struct SystemValues {
  double n_total = 2.0 * kAvogadro;  ///< N_t, molecule count
  double t_bath = 298.15;            ///< T0 [K]
  double eps_alpha = 0.5;            ///< N_alpha / N_t
  double eps_beta = 0.5;             ///< N_beta / N_t
  double tau_alpha = 1.0;            ///< V_t / (mu_alpha A) [s]
  double tau_beta = 1.0;             ///< V_t / (mu_beta A) [s]
  double tau_h = 0.1;                ///< 1 / cooling rate [s]
  double k_b = kBoltzmann;           ///< [J/K]; 1 for dimensionless runs
};

/// Validated, immutable description of one separation problem.
class SystemParams {
 public:
  SystemParams() : SystemParams(SystemValues{}) {}

  explicit SystemParams(const SystemValues& v) : v_(v) {
    auto positive = [](double x, const char* name) {
      if (!(x > 0.0) || !std::isfinite(x)) {
        throw DomainError(std::string("SystemParams: ") + name + " must be finite and > 0");
      }
    };
    positive(v.n_total, "n_total");
    positive(v.t_bath, "t_bath");
    positive(v.tau_alpha, "tau_alpha");
    positive(v.tau_beta, "tau_beta");
    positive(v.tau_h, "tau_h");
    positive(v.k_b, "k_b");
    if (!(v.eps_alpha > 0.0 && v.eps_alpha < 1.0) || !(v.eps_beta > 0.0 && v.eps_beta < 1.0)) {
      throw DomainError("SystemParams: mixture fractions must lie in (0, 1)");
    }
    if (std::abs(v.eps_alpha + v.eps_beta - 1.0) > 1e-12) {
      std::ostringstream os;
      os.precision(17);
      os << "SystemParams: eps_alpha + eps_beta must equal 1 (got " << v.eps_alpha << " + "
         << v.eps_beta << ")";
      throw DomainError(os.str());
    }
  }

  const SystemValues& values() const noexcept { return v_; }

  double n_total() const noexcept { return v_.n_total; }
  double t_bath() const noexcept { return v_.t_bath; }
  double eps_alpha() const noexcept { return v_.eps_alpha; }
  double eps_beta() const noexcept { return v_.eps_beta; }
  double tau_alpha() const noexcept { return v_.tau_alpha; }
  double tau_beta() const noexcept { return v_.tau_beta; }
  double tau_h() const noexcept { return v_.tau_h; }
  double k_b() const noexcept { return v_.k_b; }

  double n_alpha() const noexcept { return v_.eps_alpha * v_.n_total; }
  double n_beta() const noexcept { return v_.eps_beta * v_.n_total; }

  /// N_t k_B T0 [J], the scale of every work and metric quantity.
  double energy_scale() const noexcept { return v_.n_total * v_.k_b * v_.t_bath; }

  /// Monatomic ideal gas: C_V = 3/2 N_t k_B.
  double heat_capacity() const noexcept { return 1.5 * v_.n_total * v_.k_b; }

  /// tau_alpha == tau_beta and eps_alpha == eps_beta == 1/2.
  bool is_symmetric(double tol = 1e-12) const noexcept {
    return std::abs(v_.tau_alpha - v_.tau_beta) <= tol * std::max(v_.tau_alpha, v_.tau_beta) &&
           std::abs(v_.eps_alpha - 0.5) <= tol && std::abs(v_.eps_beta - 0.5) <= tol;
  }

 private:
  SystemValues v_;
};

/// Side-compartment volume fractions (x_L, x_R) = (V_L, V_R) / V_t.
struct ConfigPoint {
  double x_l = 0.0;
  double x_r = 0.0;

  double x_m() const noexcept { return 1.0 - x_l - x_r; }

  bool is_valid() const noexcept {
    return std::isfinite(x_l) && std::isfinite(x_r) && x_l >= 0.0 && x_r >= 0.0 &&
           x_l + x_r <= 1.0;
  }

  friend bool operator==(const ConfigPoint&, const ConfigPoint&) = default;
};

inline std::string to_string(const ConfigPoint& p) {
  std::ostringstream os;
  os.precision(17);
  os << "(" << p.x_l << ", " << p.x_r << ")";
  return os.str();
}

inline void require_valid(const ConfigPoint& p, const char* where) {
  if (!p.is_valid()) {
    throw DomainError(std::string(where) + ": point " + to_string(p) +
                      " outside 0 <= x_l, 0 <= x_r, x_l + x_r <= 1");
  }
}

/// Membranes are impermeable to the other species, so only N_alphaL and
/// N_betaR are free; the middle counts follow from conservation.
struct GasState {
  double n_alpha_l = 0.0;
  double n_beta_r = 0.0;
  double temperature = 0.0;  ///< [K]
  ConfigPoint config;
};

inline double n_alpha_m(const SystemParams& p, const GasState& s) { return p.n_alpha() - s.n_alpha_l; }
inline double n_beta_m(const SystemParams& p, const GasState& s) { return p.n_beta() - s.n_beta_r; }

/// Partial pressures balanced across both membranes at the bath temperature.
inline GasState equilibrium_partition(const SystemParams& params, const ConfigPoint& pt) {
  require_valid(pt, "equilibrium_partition");
  // V_L/(V_L+V_M) = x_l/(1-x_r) is 0/0 when the right compartment fills the chamber.
  if (pt.x_l >= 1.0 || pt.x_r >= 1.0) {
    throw DomainError("equilibrium_partition: undefined partition at " + to_string(pt));
  }
  GasState s;
  s.config = pt;
  s.temperature = params.t_bath();
  s.n_alpha_l = params.n_alpha() * (pt.x_l / (1.0 - pt.x_r));
  s.n_beta_r = params.n_beta() * (pt.x_r / (1.0 - pt.x_l));
  return s;
}

/// Work of the infinitely slow separation ending on x_l + x_r = 1:
/// W0 = -k_B T0 (N_alpha ln x_l + N_beta ln x_r). Minimal at (eps_alpha, eps_beta).
inline double quasi_static_work(const SystemParams& params, const ConfigPoint& endpoint) {
  require_valid(endpoint, "quasi_static_work");
  if (std::abs(endpoint.x_l + endpoint.x_r - 1.0) > 1e-12) {
    throw DomainError("quasi_static_work: endpoint " + to_string(endpoint) +
                      " is not a complete separation (x_l + x_r != 1)");
  }
  if (!(endpoint.x_l > 0.0 && endpoint.x_l < 1.0)) {
    throw DomainError("quasi_static_work: log divergence at " + to_string(endpoint));
  }
  const double kt = params.k_b() * params.t_bath();
  return -kt * (params.n_alpha() * std::log(endpoint.x_l) + params.n_beta() * std::log(endpoint.x_r));
}

/// Reversible work rate k_B T0 (xdot_L N_beta/(1-x_L) + xdot_R N_alpha/(1-x_R)) [W],
/// with velocities in 1/s.
inline double reversible_work_rate(const SystemParams& params, const ConfigPoint& pt, double v_l,
                                   double v_r) {
  const double kt = params.k_b() * params.t_bath();
  return kt * (v_l * params.n_beta() / (1.0 - pt.x_l) + v_r * params.n_alpha() / (1.0 - pt.x_r));
}

/// Integral of reversible_work_rate from (0, 0); path independent, so it
/// depends on the endpoint only. Partial separations are allowed.
inline double reversible_work(const SystemParams& params, const ConfigPoint& endpoint) {
  require_valid(endpoint, "reversible_work");
  if (endpoint.x_l >= 1.0 || endpoint.x_r >= 1.0) {
    throw DomainError("reversible_work: pole at " + to_string(endpoint));
  }
  const double kt = params.k_b() * params.t_bath();
  return -kt * (params.n_beta() * std::log1p(-endpoint.x_l) +
                params.n_alpha() * std::log1p(-endpoint.x_r));
}

}  // namespace memsep
