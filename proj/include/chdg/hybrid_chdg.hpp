#pragma once

#include "chdg/dg_core.hpp"

namespace chdg {

/// Local Robin-problem factorizations plus the scattering and exchange
/// operators on the characteristic skeleton. Skeleton blocks are indexed by
/// (element, local face) as 3k + f, each holding p+1 face coefficients.
class ChdgOperator {
 public:
  ChdgOperator(const Discretization& disc, const ProblemConfig& config);

  const Discretization& discretization() const { return *disc_; }
  const ProblemConfig& config() const { return config_; }
  int block_size() const { return disc_->face_dofs(); }
  int num_blocks() const { return 3 * disc_->num_elements(); }
  int size() const { return block_size() * num_blocks(); }
  static int block(int k, int f) { return 3 * k + f; }

  /// Outgoing traces for incoming data g (no source). Element-parallel,
  /// using the precomputed dense scattering blocks.
  Vector scattering_apply(const Vector& g) const;
  /// Serial reference: one local solve per element through the LU factors.
  Vector scattering_apply_reference(const Vector& g) const;
  /// Adjoint of the scattering operator (blockwise conjugate transpose).
  Vector scattering_adjoint_apply(const Vector& g) const;
  /// Serial reference adjoint via adjoint LU solves.
  Vector scattering_adjoint_apply_reference(const Vector& g) const;
  /// Exchange: swap on interior faces, negate on Dirichlet, copy on Neumann,
  /// zero on Robin. Real and symmetric, hence self-adjoint.
  Vector exchange_apply(const Vector& g) const;

  /// Pi S g
  Vector iteration_apply(const Vector& g) const { return exchange_apply(scattering_apply(g)); }
  /// (I - Pi S) g
  Vector apply(const Vector& g) const { return g - iteration_apply(g); }
  /// (I - S* Pi) g
  Vector apply_adjoint(const Vector& g) const { return g - scattering_adjoint_apply(exchange_apply(g)); }

  /// Projected boundary part b_h: 0, 2 s_D, -2 s_N, s_R per block.
  const Vector& boundary_rhs() const { return boundary_rhs_; }
  /// Outgoing traces produced by the volume source with zero incoming data.
  const Vector& source_trace() const { return source_trace_; }
  /// Right-hand side of (I - Pi S) g = b_h + Pi (source traces).
  const Vector& rhs() const { return rhs_; }

  /// Dense S_K, 3(p+1) square, ordered by local face.
  const Matrix& scattering_block(int k) const { return scatter_[static_cast<std::size_t>(k)]; }
  const Eigen::PartialPivLU<Matrix>& lu(int k) const { return lu_[static_cast<std::size_t>(k)]; }

  /// Local solution of element k for incoming data s (3(p+1) values), with
  /// or without the volume source.
  Vector local_solve(int k, const Vector& s, bool with_source) const;

  ElementFields reconstruct(const Vector& g) const;

  /// | ||u + n.q||^2 + ||u - n.q - s||^2 - ||s||^2 | / ||s||^2 on the boundary
  /// of element k, evaluated by face quadrature of the local solution with
  /// input s and no source. Returns 0 for s = 0.
  double energy_identity_residual(int k, const Vector& s) const;

 private:
  const Discretization* disc_;
  ProblemConfig config_;
  std::vector<Eigen::PartialPivLU<Matrix>> lu_;
  std::vector<Matrix> input_;      // B_K, 3N x 3(p+1)
  std::vector<Matrix> output_;     // R_K, 3(p+1) x 3N
  std::vector<Matrix> lift_;       // A^{-1} B_K
  std::vector<Vector> lift_src_;   // A^{-1} F_K
  std::vector<Matrix> scatter_;    // R_K A^{-1} B_K
  // Exchange map per block: partner block and factor (+1, -1 or 0).
  std::vector<int> partner_;
  std::vector<double> factor_;
  Vector boundary_rhs_;
  Vector source_trace_;
  Vector rhs_;
};

ChdgOperator factorize_local_chdg(const Discretization& disc, const ProblemConfig& config);

/// b_h for the given data.
Vector assemble_rhs_b(const Discretization& disc, const ProblemConfig& config);

/// Explicit sparse matrix of I - Pi S with the full right-hand side.
SparseSystem assemble_reduced_chdg(const ChdgOperator& op);

ElementFields reconstruct_chdg(const ChdgOperator& op, const Vector& g);

}  // namespace chdg
