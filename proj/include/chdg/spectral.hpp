#pragma once

#include <cstdint>
#include <vector>

#include "chdg/solvers.hpp"

namespace chdg {

struct SpectrumOptions {
  int num_eigenvalues = 6;
  int subspace = 40;  ///< Krylov dimension; 0 picks max(4 nev, 60)
  int max_restarts = 1000;
  double tol = 1e-6;  ///< relative Schur residual of the leading half of the wanted block
  /// Iterate on op^power; odd powers keep +-lambda pairs apart. Eigenvalues of
  /// op itself are recovered by Rayleigh-Ritz on the converged Schur subspace.
  int power = 51;
  std::uint64_t seed = 1;
  /// Optional progress hook: (restart, current radius estimate, residual).
  std::function<void(int, double, double)> monitor;
};

struct SpectrumReport {
  std::vector<Complex> eigenvalues;  ///< descending modulus
  double spectral_radius = 0.0;
  double one_minus_rho = 1.0;
  double residual = 0.0;
  int restarts = 0;
  long operator_applies = 0;
  bool converged = false;
};

/// Largest-modulus eigenvalues of a linear operator on C^dim by the
/// Krylov-Schur method.
SpectrumReport spectral_radius(const LinearOperator& op, int dim, const SpectrumOptions& options = {});

/// All eigenvalues of a dense matrix, descending modulus.
SpectrumReport dense_spectrum(const Matrix& a);

}  // namespace chdg
