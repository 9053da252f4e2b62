#pragma once

#include "chdg/dg_core.hpp"

namespace chdg {

/// Element-wise factorizations of the Dirichlet-trace local problems. For
/// element K the local solution is x_K = sum_f lift[f] * lambda_F + load,
/// where lambda_F are the trace coefficients on the faces of K.
class HdgFactorization {
 public:
  HdgFactorization(const Discretization& disc, const ProblemConfig& config);

  const Discretization& discretization() const { return *disc_; }
  const ProblemConfig& config() const { return config_; }
  int size() const { return disc_->mesh().num_faces() * disc_->face_dofs(); }

  /// A^{-1} B_f, 3N x (p+1).
  const Matrix& lift(int k, int f) const { return lift_[static_cast<std::size_t>(3 * k + f)]; }
  /// A^{-1} F_K, length 3N.
  const Vector& load(int k) const { return load_[static_cast<std::size_t>(k)]; }
  const Eigen::PartialPivLU<Matrix>& lu(int k) const { return lu_[static_cast<std::size_t>(k)]; }
  /// Projected boundary data per face (empty when zero or interior).
  const std::vector<Vector>& boundary_data() const { return data_; }

 private:
  const Discretization* disc_;
  ProblemConfig config_;
  std::vector<Eigen::PartialPivLU<Matrix>> lu_;
  std::vector<Matrix> lift_;
  std::vector<Vector> load_;
  std::vector<Vector> data_;
};

/// Throws NumericalError naming the element when a local matrix is singular.
HdgFactorization factorize_local_hdg(const Discretization& disc, const ProblemConfig& config);

/// Trace system on all faces (Dirichlet faces carry an identity row).
SparseSystem assemble_reduced_hdg(const HdgFactorization& fact);

/// Local solutions for the given trace vector.
ElementFields reconstruct_hdg(const HdgFactorization& fact, const Vector& trace);

}  // namespace chdg
