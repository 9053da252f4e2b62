#pragma once

#include <vector>

#include "chdg/dg_core.hpp"

namespace chdg {

/// 2-norm condition number by dense SVD (infinity for singular matrices).
double condition_number(const Matrix& a);

/// Local operator of the lowest-order (p = 0) element problem on a convex
/// polygon, unknowns (u, q_x, q_y) with the constant shape functions.
/// Method::hdg gives the Dirichlet-trace problem, Method::chdg the Robin one.
Matrix p0_polygon_local_matrix(const std::vector<Point>& polygon, double kappa, Method method);

/// Per-element 2-norm condition numbers of the local operators.
std::vector<double> local_condition_numbers(const Discretization& disc, double kappa, Method method);

struct LocalConditioning {
  Method method = Method::chdg;
  int degree = 0;
  double kappa = 0.0;
  double kappa_h = 0.0;  ///< kappa times the mesh h_char
  double max_condition = 0.0;
};

struct GlobalConditioning {
  Method method = Method::dg;
  long size = 0;
  double sigma_max = 0.0;
  double sigma_min = 0.0;
  double condition = 0.0;
  bool dense = false;
  bool converged = true;
};

struct ConditioningReport {
  std::vector<LocalConditioning> local;
  std::vector<GlobalConditioning> global;
};

ConditioningReport local_conditioning_sweep(const TriangleMesh& mesh, const std::vector<int>& degrees,
                                            const std::vector<double>& kappas, const std::vector<Method>& methods);

struct ConditionOptions {
  long dense_threshold = 800;  ///< dense SVD at or below this size
  int max_lanczos = 400;
  double tol = 1e-8;  ///< relative change of the extreme Ritz value
};

/// 2-norm condition estimate: dense SVD for small matrices, otherwise Lanczos
/// with full reorthogonalization on A*A (largest singular value) and on
/// (A*A)^{-1} through a sparse LU (smallest singular value). Throws
/// NumericalError when the factorization fails.
GlobalConditioning estimate_condition(const SparseMatrix& a, Method method, const ConditionOptions& options = {});

ConditioningReport global_conditioning(const std::vector<const SparseSystem*>& systems,
                                       const ConditionOptions& options = {});

}  // namespace chdg
