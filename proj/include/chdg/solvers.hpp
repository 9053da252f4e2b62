#pragma once

#include <functional>
#include <vector>

#include "chdg/dg_core.hpp"

namespace chdg {

using LinearOperator = std::function<Vector(const Vector&)>;

enum class Termination { tolerance, max_iterations, breakdown, stopped };

std::string to_string(Termination reason);

/// Called with the iteration index l = 0, 1, ... and the iterate g^(l);
/// returning true stops the solver (Termination::stopped).
using IterationCallback = std::function<bool(int, const Vector&)>;

struct SolverOptions {
  int max_iter = 1000;
  double tol = 1e-10;  ///< on the relative residual ||b - A g|| / ||b||
  IterationCallback callback;
};

struct SolveReport {
  Vector solution;
  /// Relative residual norms of g^(0) .. g^(iterations); length iterations + 1.
  std::vector<double> residuals;
  int iterations = 0;
  Termination reason = Termination::max_iterations;
};

/// Sparse LU solve. Throws NumericalError on a singular factorization or when
/// the relative residual exceeds 1e-10.
Vector direct_solve(const SparseMatrix& a, const Vector& b);
Vector direct_solve(const SparseSystem& system);

/// Fixed point g^(l+1) = T g^(l) + b for the iteration map T; the residual of
/// (I - T) g = b at g^(l) is g^(l+1) - g^(l).
SolveReport richardson(const LinearOperator& iteration_map, const Vector& b, const Vector& g0,
                       const SolverOptions& options);

/// Conjugate gradient on the normal equations A* A g = A* b (CGNR).
SolveReport cgn(const LinearOperator& a, const LinearOperator& a_adjoint, const Vector& b, const Vector& g0,
                const SolverOptions& options);

/// Full GMRES (modified Gram-Schmidt, Givens rotations, no restart).
SolveReport gmres(const LinearOperator& a, const Vector& b, const Vector& g0, const SolverOptions& options);

LinearOperator matrix_operator(const SparseMatrix& a);
LinearOperator matrix_adjoint_operator(const SparseMatrix& a);

}  // namespace chdg
