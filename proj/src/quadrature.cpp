#include <cmath>
#include <numbers>

#include "chdg/basis.hpp"

namespace chdg {

namespace {

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(static_cast<std::size_t>(n), 0.0);
  w.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // Final derivative evaluation at the converged node.
    double p0 = 1.0, p1 = z;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (z * p1 - p0) / (z * z - 1.0);
    const double wi = 2.0 / ((1.0 - z * z) * dp * dp);
    x[static_cast<std::size_t>(i)] = -z;
    x[static_cast<std::size_t>(n - 1 - i)] = z;
    w[static_cast<std::size_t>(i)] = wi;
    w[static_cast<std::size_t>(n - 1 - i)] = wi;
  }
  if (n % 2 == 1) x[static_cast<std::size_t>(n / 2)] = 0.0;
}

void check_exactness(int d) {
  if (d < 0 || d > kMaxQuadratureExactness)
    throw std::invalid_argument("quadrature exactness " + std::to_string(d) + " outside supported range [0, " +
                                std::to_string(kMaxQuadratureExactness) + "]");
}

}  // namespace

SegmentRule segment_rule(int d) {
  check_exactness(d);
  const int n = d / 2 + 1;
  std::vector<double> x, w;
  gauss_legendre(n, x, w);
  SegmentRule rule;
  rule.exactness = 2 * n - 1;
  for (int i = 0; i < n; ++i) {
    rule.points.push_back(0.5 * (x[static_cast<std::size_t>(i)] + 1.0));
    rule.weights.push_back(0.5 * w[static_cast<std::size_t>(i)]);
  }
  return rule;
}

TriangleRule triangle_rule(int d) {
  check_exactness(d);
  // x = u (1 - v), y = v, dx dy = (1 - v) du dv: degree d in u, d + 1 in v.
  const SegmentRule ru = segment_rule(d);
  const SegmentRule rv = segment_rule(d + 1);
  TriangleRule rule;
  rule.exactness = d;
  for (std::size_t j = 0; j < rv.points.size(); ++j) {
    const double v = rv.points[j];
    for (std::size_t i = 0; i < ru.points.size(); ++i) {
      const double u = ru.points[i];
      rule.points.emplace_back(u * (1.0 - v), v);
      rule.weights.push_back(ru.weights[i] * rv.weights[j] * (1.0 - v));
    }
  }
  return rule;
}

}  // namespace chdg
