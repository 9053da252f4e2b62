#pragma once

#include <memory>
#include <string>

#include "chdg/dg_core.hpp"

namespace chdg {

/// Reference fields (u_ref, q_ref) for error measurements.
struct ReferenceSolution {
  std::string name;
  ScalarField u;
  VectorField q;
};

/// u = exp(i k d.x), q = d u with d = (cos theta, sin theta).
ReferenceSolution reference_plane_wave(double theta, double kappa);

/// Truncated double sine series of -lap(u) - k^2 u = 1 on ]0,1[^2 with
/// u = 0 on the boundary. Only odd modes up to `truncation` are kept.
class CavitySeries {
 public:
  CavitySeries(double kappa, int truncation);

  double kappa() const { return kappa_; }
  int truncation() const { return truncation_; }
  double u(const Point& x) const;
  Eigen::Vector2cd q(const Point& x) const;
  /// Termwise evaluation of -lap(u_N) - k^2 u_N - 1.
  double residual(const Point& x) const;
  /// Bound on |residual(x)| from the truncated sine series of the source.
  double residual_bound(const Point& x) const;
  /// Uniform bound on |u - u_N| over the square.
  double tail_bound() const;

 private:
  double kappa_;
  int truncation_;
  int modes_;                  // number of odd indices kept
  Eigen::MatrixXd coeff_;      // c_nm for n = 2i+1, m = 2j+1
  void tables(const Point& x, RealVector& sx, RealVector& cx, RealVector& sy, RealVector& cy) const;
};

/// Throws std::invalid_argument when kappa^2 hits a retained eigenvalue.
ReferenceSolution reference_cavity(double kappa, int truncation = 400);

struct BenchmarkCase;

/// Fine-mesh oracle: direct CHDG solve with degree p+1 on the mesh refined
/// by `refinement`, sampled through a point locator.
struct WaveguideOracle {
  std::shared_ptr<const Discretization> disc;
  std::shared_ptr<const ElementFields> fields;
  std::shared_ptr<const PointLocator> locator;
  int refinement = 2;
  int degree = 4;
  ReferenceSolution reference() const;
};

WaveguideOracle make_waveguide_oracle(const BenchmarkCase& bench, int refinement = 2);
ReferenceSolution reference_waveguide_oracle(const BenchmarkCase& bench, int refinement = 2);

/// Relative L2 error of (u_h, q_h), reference values cached at the
/// quadrature points of the discretization.
class ErrorEvaluator {
 public:
  ErrorEvaluator(const Discretization& disc, const ReferenceSolution& ref);
  double operator()(const ElementFields& fields) const;
  double reference_norm() const { return std::sqrt(ref_norm2_); }

 private:
  const Discretization* disc_;
  TriangleRule rule_;
  RealMatrix phi_;                       // basis at rule points, points x N
  std::vector<Eigen::Vector3cd> values_;  // (u, qx, qy) per element and point
  std::vector<double> weights_;           // per element and point
  double ref_norm2_ = 0.0;
};

/// Throws std::invalid_argument for a zero reference.
double relative_error(const Discretization& disc, const ElementFields& fields, const ReferenceSolution& ref);

}  // namespace chdg
