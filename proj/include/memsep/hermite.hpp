#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace memsep {

/// Value, first and second derivative of a scalar cubic Hermite segment.
struct HermiteEval {
  double value;
  double d1;
  double d2;
};

/// Cubic Hermite on [t0, t1] through (y0, d0) and (y1, d1).
inline HermiteEval hermite(double t0, double t1, double y0, double y1, double d0, double d1,
                           double t) {
  const double h = t1 - t0;
  const double u = (t - t0) / h;
  const double u2 = u * u;
  const double u3 = u2 * u;
  const double h00 = 2 * u3 - 3 * u2 + 1;
  const double h10 = u3 - 2 * u2 + u;
  const double h01 = -2 * u3 + 3 * u2;
  const double h11 = u3 - u2;
  const double value = h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1;
  const double dh00 = 6 * u2 - 6 * u;
  const double dh10 = 3 * u2 - 4 * u + 1;
  const double dh01 = -6 * u2 + 6 * u;
  const double dh11 = 3 * u2 - 2 * u;
  const double deriv = (dh00 * y0 + dh01 * y1) / h + dh10 * d0 + dh11 * d1;
  const double ddh00 = 12 * u - 6;
  const double ddh10 = 6 * u - 4;
  const double ddh01 = -12 * u + 6;
  const double ddh11 = 6 * u - 2;
  const double second = (ddh00 * y0 + ddh01 * y1) / (h * h) + (ddh10 * d0 + ddh11 * d1) / h;
  return {value, deriv, second};
}

/// Fritsch-Carlson slopes: the interpolant is monotone wherever the data are.
inline std::vector<double> pchip_slopes(std::span<const double> t, std::span<const double> y) {
  const std::size_t n = t.size();
  std::vector<double> d(n, 0.0);
  if (n < 2) return d;
  std::vector<double> h(n - 1), delta(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = t[i + 1] - t[i];
    delta[i] = (y[i + 1] - y[i]) / h[i];
  }
  if (n == 2) {
    d[0] = d[1] = delta[0];
    return d;
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (delta[i - 1] * delta[i] <= 0.0) {
      d[i] = 0.0;
    } else {
      const double w1 = 2 * h[i] + h[i - 1];
      const double w2 = h[i] + 2 * h[i - 1];
      d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
    }
  }
  // Three-point end formula, limited to keep monotonicity.
  auto end_slope = [](double h0, double h1, double del0, double del1) {
    double s = ((2 * h0 + h1) * del0 - h0 * del1) / (h0 + h1);
    if (s * del0 <= 0.0) {
      s = 0.0;
    } else if (del0 * del1 <= 0.0 && std::abs(s) > std::abs(3 * del0)) {
      s = 3 * del0;
    }
    return s;
  };
  d[0] = end_slope(h[0], h[1], delta[0], delta[1]);
  d[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
  return d;
}

}  // namespace memsep
