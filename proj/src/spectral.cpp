#include "chdg/spectral.hpp"

#include <algorithm>
#include <random>

#include <lapacke.h>

namespace chdg {

namespace {

// Swap diagonal entries i and i+1 of the upper triangular t, updating u.
void swap_schur(Matrix& t, Matrix& u, Eigen::Index i) {
  const Complex t11 = t(i, i), t22 = t(i + 1, i + 1), t12 = t(i, i + 1);
  if (t11 == t22) return;
  Complex c = t12, s = t22 - t11;
  const double nrm = std::hypot(std::abs(c), std::abs(s));
  c /= nrm;
  s /= nrm;
  Eigen::Matrix2cd z;
  z << c, -std::conj(s), s, std::conj(c);
  t.middleCols(i, 2) = t.middleCols(i, 2) * z;
  t.middleRows(i, 2) = z.adjoint() * t.middleRows(i, 2);
  u.middleCols(i, 2) = u.middleCols(i, 2) * z;
  t(i + 1, i) = 0.0;
}

// Moves the `count` largest-modulus diagonal entries of t to the front in
// descending order.
void sort_schur(Matrix& t, Matrix& u, Eigen::Index count) {
  const Eigen::Index m = t.rows();
  for (Eigen::Index pos = 0; pos < count; ++pos) {
    Eigen::Index best = pos;
    for (Eigen::Index j = pos + 1; j < m; ++j)
      if (std::abs(t(j, j)) > std::abs(t(best, best))) best = j;
    for (Eigen::Index j = best; j > pos; --j) swap_schur(t, u, j - 1);
  }
}

// Orthogonalizes w against the first j+1 columns of v (classical Gram-Schmidt
// applied twice); returns the coefficients.
Vector orthogonalize(const Matrix& v, Eigen::Index cols, Vector& w) {
  Vector h = v.leftCols(cols).adjoint() * w;
  w.noalias() -= v.leftCols(cols) * h;
  const Vector h2 = v.leftCols(cols).adjoint() * w;
  w.noalias() -= v.leftCols(cols) * h2;
  return h + h2;
}

}  // namespace

SpectrumReport spectral_radius(const LinearOperator& op, int dim, const SpectrumOptions& options) {
  SpectrumReport rep;
  const int nev = std::min(options.num_eigenvalues, dim);
  if (nev <= 0) throw std::invalid_argument("spectral_radius: need at least one eigenvalue");
  int m = options.subspace > 0 ? options.subspace : std::max(4 * nev, 60);
  m = std::min(m, dim);

  if (m >= dim || dim <= 2 * nev + 2) {
    // Small operator: build it densely.
    Matrix a(dim, dim);
    Vector e = Vector::Zero(dim);
    for (int j = 0; j < dim; ++j) {
      e(j) = 1.0;
      a.col(j) = op(e);
      e(j) = 0.0;
    }
    SpectrumReport d = dense_spectrum(a);
    d.eigenvalues.resize(static_cast<std::size_t>(nev));
    d.operator_applies = dim;
    return d;
  }

  if (options.power < 1) throw std::invalid_argument("spectral_radius: power must be positive");
  const auto apply = [&](const Vector& x) {
    Vector y = op(x);
    for (int i = 1; i < options.power; ++i) y = op(y);
    rep.operator_applies += options.power;
    return y;
  };

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> nd;
  Matrix v = Matrix::Zero(dim, m + 1);
  Matrix h = Matrix::Zero(m + 1, m);
  for (int i = 0; i < dim; ++i) v(i, 0) = Complex(nd(rng), nd(rng));
  v.col(0).normalize();

  const int keep = std::min(m - 1, nev + (m - nev) / 2);
  int k = 0;
  Matrix t, u;
  for (int restart = 0; restart <= options.max_restarts; ++restart) {
    for (int j = k; j < m; ++j) {
      Vector w = apply(v.col(j));
      const Vector c = orthogonalize(v, j + 1, w);
      h.col(j).head(j + 1) = c;
      double beta = w.norm();
      if (beta <= 1e-14 * c.norm()) {
        // invariant subspace found: restart direction orthogonal to the basis
        for (int i = 0; i < dim; ++i) w(i) = Complex(nd(rng), nd(rng));
        orthogonalize(v, j + 1, w);
        beta = 0.0;
        v.col(j + 1) = w.normalized();
      } else {
        v.col(j + 1) = w / beta;
      }
      h(j + 1, j) = beta;
    }

    const Eigen::ComplexSchur<Matrix> schur(h.topRows(m));
    t = schur.matrixT();
    u = schur.matrixU();
    sort_schur(t, u, keep);
    const Eigen::RowVectorXcd b = h(m, m - 1) * u.row(m - 1);

    rep.restarts = restart;
    // The leading half of the wanted block must converge; the trailing half
    // guards it and may hold slowly converging Ritz values.
    const int lead = (nev + 1) / 2;
    rep.residual = 0.0;
    for (int i = 0; i < lead; ++i)
      rep.residual = std::max(rep.residual, std::abs(b(i)) / std::max(std::abs(t(i, i)), 1e-300));
    if (options.monitor) options.monitor(restart, std::abs(t(0, 0)), rep.residual);
    if (rep.residual <= options.tol) {
      rep.converged = true;
      break;
    }
    if (restart == options.max_restarts) break;

    v.leftCols(keep) = v.leftCols(m) * u.leftCols(keep);
    v.col(keep) = v.col(m);
    h.setZero();
    h.topLeftCorner(keep, keep) = t.topLeftCorner(keep, keep);
    h.row(keep).head(keep) = b.head(keep);
    k = keep;
  }

  if (options.power == 1) {
    for (int i = 0; i < nev; ++i) rep.eigenvalues.push_back(t(i, i));
  } else {
    const Matrix q = v.leftCols(m) * u.leftCols(nev);
    Matrix aq(dim, nev);
    for (int i = 0; i < nev; ++i) aq.col(i) = op(q.col(i));
    rep.operator_applies += nev;
    const Eigen::ComplexEigenSolver<Matrix> es(q.adjoint() * aq, false);
    for (Eigen::Index i = 0; i < nev; ++i) rep.eigenvalues.push_back(es.eigenvalues()(i));
  }
  std::stable_sort(rep.eigenvalues.begin(), rep.eigenvalues.end(),
                   [](Complex a, Complex b) { return std::abs(a) > std::abs(b); });
  rep.spectral_radius = std::abs(rep.eigenvalues.front());
  rep.one_minus_rho = 1.0 - rep.spectral_radius;
  return rep;
}

SpectrumReport dense_spectrum(const Matrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("dense_spectrum: matrix must be square");
  SpectrumReport rep;
  const auto n = static_cast<lapack_int>(a.rows());
  Matrix work = a;
  Vector w(a.rows());
  const lapack_int info =
      LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n, reinterpret_cast<lapack_complex_double*>(work.data()), n,
                    reinterpret_cast<lapack_complex_double*>(w.data()), nullptr, 1, nullptr, 1);
  if (info != 0) throw NumericalError("dense eigensolver failed (zgeev info " + std::to_string(info) + ")");
  rep.eigenvalues.assign(w.data(), w.data() + w.size());
  std::stable_sort(rep.eigenvalues.begin(), rep.eigenvalues.end(),
                   [](Complex x, Complex y) { return std::abs(x) > std::abs(y); });
  rep.spectral_radius = rep.eigenvalues.empty() ? 0.0 : std::abs(rep.eigenvalues.front());
  rep.one_minus_rho = 1.0 - rep.spectral_radius;
  rep.converged = true;
  return rep;
}

}  // namespace chdg
