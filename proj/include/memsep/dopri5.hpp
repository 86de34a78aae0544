#pragma once

// Dormand-Prince 5(4) with embedded error estimate and FSAL reuse.
//
// The right-hand side reports whether the state is inside its domain; a
// false return (or any non-finite stage) rejects the step and shrinks it,
// which lets callers integrate up to poles and degenerate points and stop
// on a step-size floor.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>

namespace memsep {

struct StepperOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double h_initial = 1e-3;
  double h_min = 1e-13;
  double h_max = std::numeric_limits<double>::infinity();
  /// The last this many components are running integrals. Their error is
  /// weighed against the increment over the step rather than the running
  /// total, which would let the allowance grow with the total.
  std::size_t quadrature_tail = 0;
};

template <std::size_t N>
class Dopri5 {
 public:
  using State = std::array<double, N>;

  /// One accepted step; (y0, f0) and (y1, f1) feed cubic Hermite dense output.
  struct Step {
    double t0 = 0.0;
    double t1 = 0.0;
    State y0{};
    State y1{};
    State f0{};
    State f1{};
  };

  enum class Outcome { accepted, underflow };

  explicit Dopri5(const StepperOptions& opts) : opts_(opts), h_(opts.h_initial) {}

  /// Returns false when the right-hand side rejects the initial state.
  template <class Rhs>
  bool start(Rhs& rhs, double t, const State& y) {
    t_ = t;
    y_ = y;
    h_ = std::clamp(opts_.h_initial, opts_.h_min, opts_.h_max);
    return rhs(t_, y_, f_) && finite(f_);
  }

  /// Replaces the current state (after a projection, say) and keeps the
  /// step-size history. Returns false when the right-hand side rejects it.
  template <class Rhs>
  bool reset_state(Rhs& rhs, const State& y) {
    y_ = y;
    return rhs(t_, y_, f_) && finite(f_);
  }

  double t() const noexcept { return t_; }
  const State& y() const noexcept { return y_; }
  const State& dydt() const noexcept { return f_; }
  /// Step size the controller would try next.
  double h() const noexcept { return h_; }

  /// Attempts steps until one is accepted or the controller asks for a step
  /// below h_min. Never steps past t_limit.
  template <class Rhs>
  Outcome advance(Rhs& rhs, double t_limit, Step& out) {
    for (;;) {
      const double remaining = t_limit - t_;
      const bool clipped = h_ >= remaining;
      const double h = clipped ? remaining : h_;
      if (h < opts_.h_min && !(clipped && remaining > 0.0)) {
        return Outcome::underflow;
      }

      State y1;
      State f1;
      double err = 0.0;
      const bool ok = try_step(rhs, h, y1, f1, err);

      if (ok && err <= 1.0) {
        out.t0 = t_;
        out.y0 = y_;
        out.f0 = f_;
        t_ = clipped ? t_limit : t_ + h;
        y_ = y1;
        f_ = f1;
        out.t1 = t_;
        out.y1 = y_;
        out.f1 = f_;
        const double fac = err > 0.0 ? std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0) : 5.0;
        // A step shortened to land on t_limit says nothing about the natural step size.
        h_ = std::min(opts_.h_max, clipped ? std::max(h_, h * fac) : h * fac);
        return Outcome::accepted;
      }
      const double fac = ok ? std::clamp(0.9 * std::pow(err, -0.2), 0.2, 0.9) : 0.25;
      h_ = h * fac;
    }
  }

 private:
  static bool finite(const State& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
  }

  template <class Rhs>
  bool try_step(Rhs& rhs, double h, State& y1, State& f1, double& err) {
    constexpr double a21 = 1.0 / 5.0;
    constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
    constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
    constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                     a54 = -212.0 / 729.0;
    constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                     a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
    constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                     b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
    constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                     e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

    const State& k1 = f_;
    State k2, k3, k4, k5, k6, tmp;

    for (std::size_t i = 0; i < N; ++i) tmp[i] = y_[i] + h * a21 * k1[i];
    if (!rhs(t_ + h / 5.0, tmp, k2) || !finite(k2)) return false;
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y_[i] + h * (a31 * k1[i] + a32 * k2[i]);
    if (!rhs(t_ + 0.3 * h, tmp, k3) || !finite(k3)) return false;
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y_[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    if (!rhs(t_ + 0.8 * h, tmp, k4) || !finite(k4)) return false;
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y_[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    if (!rhs(t_ + 8.0 / 9.0 * h, tmp, k5) || !finite(k5)) return false;
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y_[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    if (!rhs(t_ + h, tmp, k6) || !finite(k6)) return false;
    for (std::size_t i = 0; i < N; ++i)
      y1[i] = y_[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    if (!finite(y1) || !rhs(t_ + h, y1, f1) || !finite(f1)) return false;

    double sum = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double e =
          h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * f1[i]);
      const double mag = i + opts_.quadrature_tail >= N
                             ? std::abs(y1[i] - y_[i])
                             : std::max(std::abs(y_[i]), std::abs(y1[i]));
      const double sc = opts_.atol + opts_.rtol * mag;
      sum += (e / sc) * (e / sc);
    }
    err = std::sqrt(sum / static_cast<double>(N));
    return std::isfinite(err);
  }

  StepperOptions opts_;
  double t_ = 0.0;
  double h_;
  State y_{};
  State f_{};
};

}  // namespace memsep
