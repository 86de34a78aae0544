#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <iostream>
#include <random>
#include <string>

#include "memsep/geometry.hpp"

using namespace memsep;

namespace {

SystemParams asym() {
  SystemValues v;
  v.eps_alpha = 0.3;
  v.eps_beta = 0.7;
  v.tau_alpha = 2.0;
  v.tau_beta = 0.5;
  v.tau_h = 0.2;
  return SystemParams(v);
}

ConfigPoint random_point(std::mt19937_64& rng, const SystemParams& p) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  while (true) {
    const ConfigPoint pt{u(rng), u(rng)};
    if (pt.x_l + pt.x_r > 0.98) continue;
    if (metric_at(p, pt).conditioning() < 1e-6) continue;
    return pt;
  }
}

// Fourth-order central difference of a metric component along one axis.
double dmetric(const SystemParams& p, ConfigPoint pt, int axis, int i, int j) {
  const double h = 1e-4;
  auto g = [&](double off) {
    ConfigPoint q = pt;
    (axis == 0 ? q.x_l : q.x_r) += off;
    return metric_at(p, q)(i, j);
  };
  return (-g(2 * h) + 8 * g(h) - 8 * g(-h) + g(-2 * h)) / (12 * h);
}

// Gamma^k_ij from the textbook definition, all derivatives by differences.
std::array<double, 8> christoffel_oracle(const SystemParams& p, const ConfigPoint& pt) {
  double d[2][2][2];  // d[l][i][j] = d g_ij / d x^l
  for (int l = 0; l < 2; ++l)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) d[l][i][j] = dmetric(p, pt, l, i, j);
  const MetricTensor g = metric_at(p, pt);
  const double det = g.g_ll * g.g_rr - g.g_lr * g.g_lr;
  const double inv[2][2] = {{g.g_rr / det, -g.g_lr / det}, {-g.g_lr / det, g.g_ll / det}};
  std::array<double, 8> out{};
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        double s = 0.0;
        for (int l = 0; l < 2; ++l) s += 0.5 * inv[k][l] * (d[j][l][i] + d[i][l][j] - d[l][i][j]);
        out[4 * k + 2 * i + j] = s;
      }
  return out;
}

}  // namespace

TEST(Geometry, ChristoffelMatchesDifferencedMetric) {
  for (const SystemParams& p : {SystemParams{}, asym()}) {
    std::mt19937_64 rng(11);
    double worst = 0.0;
    for (int n = 0; n < 200; ++n) {
      const ConfigPoint pt = random_point(rng, p);
      const auto c = christoffel_at(p, pt);
      const auto o = christoffel_oracle(p, pt);
      double scale = 0.0;
      for (double x : o) scale = std::max(scale, std::abs(x));
      for (int k = 0; k < 2; ++k)
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j)
            worst = std::max(worst, std::abs(c.gamma[k][i][j] - o[4 * k + 2 * i + j]) / scale);
    }
    EXPECT_LT(worst, 1e-5);
  }
}

TEST(Geometry, ChristoffelLowerIndexSymmetry) {
  const SystemParams p = asym();
  const auto c = christoffel_at(p, {0.2, 0.35});
  for (int k = 0; k < 2; ++k) EXPECT_EQ(c.gamma[k][0][1], c.gamma[k][1][0]);
  for (int l = 0; l < 2; ++l) EXPECT_EQ(c.lowered[0][1][l], c.lowered[1][0][l]);
}

TEST(Geometry, QuadraticFormEqualsBracketForm) {
  for (const SystemParams& p : {SystemParams{}, asym()}) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = 0.0;
    for (int n = 0; n < 1000; ++n) {
      const ConfigPoint pt = random_point(rng, p);
      const Velocity v{u(rng), u(rng)};
      const double a = excess_work_rate(p, pt, v);
      const double b = excess_work_rate_bracket_form(p, pt, v);
      worst = std::max(worst, std::abs(a - b) / std::abs(b));
    }
    EXPECT_LT(worst, 1e-10);
  }
}

TEST(Geometry, MetricAtOrigin) {
  const SystemParams p = asym();
  const double k = p.energy_scale();
  const double h = 2.0 * p.tau_h() / 3.0;
  const MetricTensor g = metric_at(p, {0.0, 0.0});
  EXPECT_NEAR(g.g_ll, k * (0.3 * 2.0 + h * 0.49), 1e-14 * k);
  EXPECT_NEAR(g.g_rr, k * (0.7 * 0.5 + h * 0.09), 1e-14 * k);
  EXPECT_NEAR(g.g_lr, k * h * 0.21, 1e-14 * k);
}

TEST(Geometry, DegenerateOnlyAtTarget) {
  const SystemParams p = asym();
  const MetricTensor g = metric_at(p, {0.3, 0.7});
  EXPECT_LT(std::abs(g.conditioning()), 1e-12);
  // The null direction is along the separation line.
  EXPECT_NEAR(g.g_ll - g.g_lr, 0.0, 1e-12 * g.trace());
  EXPECT_NEAR(g.g_lr - g.g_rr, 0.0, 1e-12 * g.trace());
  EXPECT_THROW(christoffel_at(p, {0.3, 0.7}), SingularityError);
  // Other points of the separation line are regular.
  EXPECT_GT(metric_at(p, {0.5, 0.5}).conditioning(), 1e-3);
}

TEST(Geometry, PositiveDefiniteInInterior) {
  const SystemParams p = asym();
  std::mt19937_64 rng(3);
  for (int n = 0; n < 500; ++n) {
    const ConfigPoint pt = random_point(rng, p);
    const MetricTensor g = metric_at(p, pt);
    EXPECT_GT(g.g_ll, 0.0);
    EXPECT_GT(g.det(), 0.0);
  }
}

TEST(Geometry, NormSquaredKeepsAccuracyNearTarget) {
  // Along the null direction at distance d from the target, v^T G v is of
  // order d^2 |v|^2 while the components of G are O(1).
  const SystemParams p;
  const double d = 1e-7;
  const ConfigPoint pt{0.5 - d, 0.5};
  const Velocity v{1.0, -1.0};
  const double fine = metric_norm_squared(p, pt, v);
  // Oracle: the bracket form expanded by hand in long double.
  const long double k = p.energy_scale();
  const long double u = 1.0L - pt.x_l, w = 1.0L - pt.x_r;
  const long double heat = 0.5L * v.v_r / w + 0.5L * v.v_l / u;
  const long double fl = v.v_l / w + pt.x_l * v.v_r / (w * w);
  const long double fr = v.v_r / u + pt.x_r * v.v_l / (u * u);
  const long double ref = 2.0L * k * 0.1L / 3.0L * heat * heat + k * (0.5L * w * fl * fl + 0.5L * u * fr * fr);
  EXPECT_NEAR(fine, static_cast<double>(ref), 1e-7 * static_cast<double>(ref));
}

TEST(Geometry, PathLengthSecondOrder) {
  const SystemParams p = asym();
  auto curve = [](int n) {
    std::vector<ConfigPoint> pts;
    for (int i = 0; i <= n; ++i) {
      const double s = static_cast<double>(i) / n;
      pts.push_back({0.25 * s, 0.5 * s * s});
    }
    return PathSamples::uniform(pts);
  };
  const double a = path_length(p, curve(50));
  const double b = path_length(p, curve(100));
  const double c = path_length(p, curve(200));
  const double ratio = (a - b) / (b - c);
  EXPECT_NEAR(ratio, 4.0, 0.2);
}

TEST(Geometry, RatesScaleQuadratically) {
  const SystemParams p = asym();
  const ConfigPoint pt{0.1, 0.2};
  const double r1 = excess_work_rate(p, pt, {0.3, 0.1});
  const double r3 = excess_work_rate(p, pt, {0.9, 0.3});
  EXPECT_NEAR(r3, 9.0 * r1, 1e-12 * r3);
}

TEST(Geometry, PoleRejected) {
  const SystemParams p;
  EXPECT_THROW(metric_at(p, {1.0, 0.0}), DomainError);
  EXPECT_THROW(excess_work_rate_bracket_form(p, {0.0, 1.0}, {1.0, 0.0}), DomainError);
}

// A hand-written table of the lowered symbols Gamma_{ij,l}, taken literally
// and compared symbol by symbol with the symbols derived from G. Three
// entries carry slips, asserted below. Asymmetric parameters keep the alpha
// and beta terms apart.
TEST(Geometry, PrintedChristoffelTable) {
  const SystemParams p = asym();
  const ConfigPoint pt{0.2, 0.35};
  const double x1 = pt.x_l, x2 = pt.x_r;
  const double ea = p.eps_alpha(), eb = p.eps_beta();
  const double ta = p.tau_alpha(), tb = p.tau_beta(), th = p.tau_h();
  const double half_k = 0.5 * p.energy_scale();
  const double u = 1.0 - x1, w = 1.0 - x2;

  struct Row {
    const char* name;
    double printed;
    int i, j, l;  // literal reading: Gamma_{ij,l}
  };
  const Row rows[] = {
      {"G111", half_k * (4.0 / 3.0 * eb * eb * th / (u * u * u) + 3.0 * eb * tb * x2 * x2 / (u * u * u * u)), 0, 0, 0},
      {"G222", half_k * (4.0 / 3.0 * ea * ea * th / (w * w * w) + 3.0 * ea * ta * x1 * x1 / (w * w * w * w)), 1, 1, 1},
      {"G121", half_k * (eb * tb / (u * u) + 2.0 * ea * ta * x1 / (w * w * w)), 0, 1, 0},
      {"G122", half_k * (ea * ta / (w * w) + 2.0 * eb * tb * x2 / (u * u * u)), 0, 1, 1},
      {"G221", half_k * (eb * tb / (u * u) + 2.0 * ea * ta * x1 / (w * w * w) + 4.0 / 3.0 * ea * eb * th / (u * w * w)), 1, 1, 0},
      {"G112", half_k * (ea * tb / (w * w) + 2.0 * eb * tb * x2 / (u * u * u) + 4.0 / 3.0 * ea * eb * th / (w * u * u)), 0, 0, 1},
  };
  const auto c = christoffel_at(p, pt);
  auto close = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::abs(b); };
  auto status = [&](const Row& r) {
    const double lit = c.lowered[r.i][r.j][r.l];
    const double swp = c.lowered[r.i][r.j][1 - r.l];
    if (close(r.printed, lit)) return std::string("match");
    if (close(r.printed, swp)) return std::string("mismatch: equals the symbol with the last index swapped");
    return std::string("mismatch");
  };
  for (const Row& r : rows) {
    const std::string s = status(r);
    std::cout << "  printed " << r.name << ": " << s << '\n';
    RecordProperty(r.name, s);
  }
  EXPECT_EQ(status(rows[0]), "match");
  EXPECT_EQ(status(rows[1]), "match");
  EXPECT_EQ(status(rows[4]), "match");
  // G121 and G122 carry each other's values.
  EXPECT_EQ(status(rows[2]), "mismatch: equals the symbol with the last index swapped");
  EXPECT_EQ(status(rows[3]), "mismatch: equals the symbol with the last index swapped");
  // G112 has eps_alpha tau_beta where the derivation gives eps_alpha tau_alpha.
  EXPECT_EQ(status(rows[5]), "mismatch");
  const double corrected =
      half_k * (ea * ta / (w * w) + 2.0 * eb * tb * x2 / (u * u * u) + 4.0 / 3.0 * ea * eb * th / (w * u * u));
  EXPECT_TRUE(close(corrected, c.lowered[0][0][1]));
}
