#include "chdg/conditioning.hpp"

#include <cmath>
#include <limits>
#include <random>

#include <lapacke.h>

namespace chdg {

namespace {

// Descending singular values by divide and conquer.
RealVector singular_values(Matrix a) {
  const auto m = static_cast<lapack_int>(a.rows()), n = static_cast<lapack_int>(a.cols());
  RealVector s(std::min(m, n));
  if (s.size() == 0) return s;
  const lapack_int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', m, n, reinterpret_cast<lapack_complex_double*>(a.data()),
                                         m, s.data(), nullptr, 1, nullptr, 1);
  if (info != 0) throw NumericalError("singular value decomposition failed (info " + std::to_string(info) + ")");
  return s;
}

}  // namespace

double condition_number(const Matrix& a) {
  const RealVector s = singular_values(a);
  if (s.size() == 0) return 1.0;
  const double smin = s(s.size() - 1);
  return smin > 0.0 ? s(0) / smin : std::numeric_limits<double>::infinity();
}

Matrix p0_polygon_local_matrix(const std::vector<Point>& polygon, double kappa, Method method) {
  if (polygon.size() < 3) throw std::invalid_argument("polygon needs at least three vertices");
  double area = 0.0;
  const std::size_t nv = polygon.size();
  for (std::size_t i = 0; i < nv; ++i) {
    const Point& a = polygon[i];
    const Point& b = polygon[(i + 1) % nv];
    area += 0.5 * (a.x() * b.y() - a.y() * b.x());
  }
  if (!(area > 0.0)) throw std::invalid_argument("polygon must be counterclockwise with positive area");
  Matrix m = -kImag * kappa * area * Matrix::Identity(3, 3);
  for (std::size_t i = 0; i < nv; ++i) {
    const Point e = polygon[(i + 1) % nv] - polygon[i];
    const double len = e.norm();
    const Eigen::Vector3d g(1.0, e.y() / len, -e.x() / len);
    if (method == Method::chdg)
      m += (0.5 * len * g * g.transpose()).cast<Complex>();
    else if (method == Method::hdg)
      m += (len * Eigen::Vector3d(1.0, 0.0, 0.0) * g.transpose()).cast<Complex>();
    else
      throw std::invalid_argument("local matrices exist only for the hybrid methods");
  }
  return m;
}

std::vector<double> local_condition_numbers(const Discretization& disc, double kappa, Method method) {
  if (method == Method::dg) throw std::invalid_argument("local matrices exist only for the hybrid methods");
  std::vector<double> out(static_cast<std::size_t>(disc.num_elements()));
  const int ne = disc.num_elements();
#pragma omp parallel for schedule(static)
  for (int k = 0; k < ne; ++k)
    out[static_cast<std::size_t>(k)] = condition_number(method == Method::chdg ? disc.robin_operator(k, kappa)
                                                                                : disc.dirichlet_operator(k, kappa));
  return out;
}

ConditioningReport local_conditioning_sweep(const TriangleMesh& mesh, const std::vector<int>& degrees,
                                            const std::vector<double>& kappas, const std::vector<Method>& methods) {
  ConditioningReport rep;
  for (int p : degrees) {
    const Discretization disc(mesh, p);
    for (Method method : methods)
      for (double kappa : kappas) {
        const auto c = local_condition_numbers(disc, kappa, method);
        LocalConditioning e;
        e.method = method;
        e.degree = p;
        e.kappa = kappa;
        e.kappa_h = kappa * mesh.h_char;
        e.max_condition = *std::max_element(c.begin(), c.end());
        rep.local.push_back(e);
      }
  }
  return rep;
}

namespace {

// Largest eigenvalue of a Hermitian positive operator by Lanczos with full
// reorthogonalization.
double lanczos_max(const std::function<Vector(const Vector&)>& op, Eigen::Index n, const ConditionOptions& options,
                   bool& converged) {
  std::mt19937_64 rng(12345);
  std::normal_distribution<double> nd;
  const int m = static_cast<int>(std::min<Eigen::Index>(options.max_lanczos, n));
  Matrix v(n, m + 1);
  for (Eigen::Index i = 0; i < n; ++i) v(i, 0) = Complex(nd(rng), nd(rng));
  v.col(0).normalize();
  std::vector<double> alpha, beta;
  double prev = 0.0, theta = 0.0;
  converged = false;
  for (int j = 0; j < m; ++j) {
    Vector w = op(v.col(j));
    const double a = v.col(j).dot(w).real();
    w -= a * v.col(j);
    if (j > 0) w -= beta.back() * v.col(j - 1);
    for (int pass = 0; pass < 2; ++pass) w -= v.leftCols(j + 1) * (v.leftCols(j + 1).adjoint() * w);
    alpha.push_back(a);
    const double b = w.norm();
    RealMatrix tri = RealMatrix::Zero(j + 1, j + 1);
    for (int i = 0; i <= j; ++i) {
      tri(i, i) = alpha[static_cast<std::size_t>(i)];
      if (i < j) tri(i, i + 1) = tri(i + 1, i) = beta[static_cast<std::size_t>(i)];
    }
    theta = Eigen::SelfAdjointEigenSolver<RealMatrix>(tri, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();
    if (j > 2 && std::abs(theta - prev) <= options.tol * std::abs(theta)) {
      converged = true;
      break;
    }
    prev = theta;
    if (b <= 1e-14 * std::abs(theta)) {
      converged = true;
      break;
    }
    beta.push_back(b);
    v.col(j + 1) = w / b;
  }
  return theta;
}

}  // namespace

GlobalConditioning estimate_condition(const SparseMatrix& a, Method method, const ConditionOptions& options) {
  if (a.rows() != a.cols()) throw std::invalid_argument("condition estimate needs a square matrix");
  GlobalConditioning g;
  g.method = method;
  g.size = a.rows();
  if (a.rows() <= options.dense_threshold) {
    const RealVector s = singular_values(Matrix(a));
    g.sigma_max = s(0);
    g.sigma_min = s(s.size() - 1);
    g.dense = true;
  } else {
    Eigen::SparseLU<SparseMatrix> lu;
    lu.analyzePattern(a);
    lu.factorize(a);
    if (lu.info() != Eigen::Success) throw NumericalError("condition estimate: singular matrix");
    bool c1 = false, c2 = false;
    const double lmax = lanczos_max([&](const Vector& x) { return Vector(a.adjoint() * (a * x)); }, a.rows(), options, c1);
    const double linv = lanczos_max(
        [&](const Vector& x) {
          const Vector y = lu.adjoint().solve(x);
          return Vector(lu.solve(y));
        },
        a.rows(), options, c2);
    g.sigma_max = std::sqrt(lmax);
    g.sigma_min = 1.0 / std::sqrt(linv);
    g.converged = c1 && c2;
    if (!g.converged) throw NumericalError("condition estimate: Lanczos did not converge");
  }
  g.condition = g.sigma_min > 0.0 ? g.sigma_max / g.sigma_min : std::numeric_limits<double>::infinity();
  return g;
}

ConditioningReport global_conditioning(const std::vector<const SparseSystem*>& systems, const ConditionOptions& options) {
  ConditioningReport rep;
  for (const SparseSystem* s : systems) rep.global.push_back(estimate_condition(s->matrix, s->layout.method, options));
  return rep;
}

}  // namespace chdg
