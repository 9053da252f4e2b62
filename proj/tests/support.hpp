#pragma once

#include <random>

#include "chdg/discretization.hpp"

namespace chdg::testing {

inline const SideTags kMixed{BoundaryKind::dirichlet, BoundaryKind::robin, BoundaryKind::neumann, BoundaryKind::robin};

// Manufactured polynomial pair with q = grad u / (i k) and compatible source.
struct Manufactured {
  double kappa = 2.3;
  Complex u(const Point& x) const { return Complex(1.0 + x.x() * x.y(), 0.5) + Complex(0.2, -0.7) * x.x() * x.x(); }
  Eigen::Vector2cd grad(const Point& x) const {
    return {x.y() + 2.0 * Complex(0.2, -0.7) * x.x(), Complex(x.x(), 0.0)};
  }
  Complex laplacian(const Point&) const { return 2.0 * Complex(0.2, -0.7); }
  Eigen::Vector2cd q(const Point& x) const { return grad(x) / (kImag * kappa); }
  Complex f1(const Point& x) const { return -kImag * kappa * u(x) + laplacian(x) / (kImag * kappa); }
  Complex nq(const Point& x, const Point& n) const { return n.x() * q(x)(0) + n.y() * q(x)(1); }

  ProblemConfig config(int p) const {
    ProblemConfig c;
    c.kappa = kappa;
    c.degree = p;
    c.dirichlet = [this](const Point& x, const Point&) { return u(x); };
    c.neumann = [this](const Point& x, const Point& n) { return nq(x, n); };
    c.robin = [this](const Point& x, const Point& n) { return u(x) - nq(x, n); };
    c.source = [this](const Point& x) { return f1(x); };
    return c;
  }
};

inline Vector random_vector(long n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vector v(n);
  for (long i = 0; i < n; ++i) v(i) = Complex(g(rng), g(rng));
  return v;
}

}  // namespace chdg::testing
