#include "chdg/solvers.hpp"

#include <cmath>

namespace chdg {

std::string to_string(Termination reason) {
  switch (reason) {
    case Termination::tolerance: return "tolerance";
    case Termination::max_iterations: return "max-iterations";
    case Termination::breakdown: return "breakdown";
    case Termination::stopped: return "stopped";
  }
  return "unknown";
}

Vector direct_solve(const SparseMatrix& a, const Vector& b) {
  if (a.rows() != a.cols() || a.rows() != b.size()) throw std::invalid_argument("direct_solve: dimension mismatch");
  Eigen::SparseLU<SparseMatrix> lu;
  lu.analyzePattern(a);
  lu.factorize(a);
  if (lu.info() != Eigen::Success) throw NumericalError("direct_solve: singular factorization (" + lu.lastErrorMessage() + ")");
  Vector x = lu.solve(b);
  const double bn = b.norm();
  const double res = (b - a * x).norm();
  if (!(res <= 1e-10 * (bn > 0.0 ? bn : 1.0)))
    throw NumericalError("direct_solve: relative residual " + std::to_string(res / (bn > 0.0 ? bn : 1.0)) + " above 1e-10");
  return x;
}

Vector direct_solve(const SparseSystem& system) { return direct_solve(system.matrix, system.rhs); }

LinearOperator matrix_operator(const SparseMatrix& a) {
  return [&a](const Vector& x) { return Vector(a * x); };
}

LinearOperator matrix_adjoint_operator(const SparseMatrix& a) {
  return [&a](const Vector& x) { return Vector(a.adjoint() * x); };
}

namespace {

double scale_of(const Vector& b) {
  const double n = b.norm();
  return n > 0.0 ? n : 1.0;
}

}  // namespace

SolveReport richardson(const LinearOperator& iteration_map, const Vector& b, const Vector& g0,
                       const SolverOptions& options) {
  SolveReport rep;
  const double bn = scale_of(b);
  Vector g = g0;
  Vector next = iteration_map(g) + b;
  rep.residuals.push_back((next - g).norm() / bn);
  const bool stop0 = options.callback && options.callback(0, g);
  rep.reason = Termination::max_iterations;
  if (rep.residuals.back() <= options.tol) {
    rep.reason = Termination::tolerance;
  } else if (stop0) {
    rep.reason = Termination::stopped;
  } else {
    for (int it = 1; it <= options.max_iter; ++it) {
      g.swap(next);
      next = iteration_map(g) + b;
      rep.residuals.push_back((next - g).norm() / bn);
      rep.iterations = it;
      const bool stop = options.callback && options.callback(it, g);
      if (rep.residuals.back() <= options.tol) {
        rep.reason = Termination::tolerance;
        break;
      }
      if (stop) {
        rep.reason = Termination::stopped;
        break;
      }
    }
  }
  rep.solution = std::move(g);
  return rep;
}

SolveReport cgn(const LinearOperator& a, const LinearOperator& a_adjoint, const Vector& b, const Vector& g0,
                const SolverOptions& options) {
  SolveReport rep;
  const double bn = scale_of(b);
  Vector x = g0;
  Vector r = b - a(x);
  Vector z = a_adjoint(r);
  Vector p = z;
  double zz = z.squaredNorm();
  rep.residuals.push_back(r.norm() / bn);
  const bool stop0 = options.callback && options.callback(0, x);
  rep.reason = Termination::max_iterations;
  if (rep.residuals.back() <= options.tol || stop0) {
    rep.reason = stop0 && rep.residuals.back() > options.tol ? Termination::stopped : Termination::tolerance;
    rep.solution = std::move(x);
    return rep;
  }
  for (int it = 1; it <= options.max_iter; ++it) {
    if (zz == 0.0) {
      rep.reason = Termination::breakdown;
      break;
    }
    const Vector w = a(p);
    const double ww = w.squaredNorm();
    if (ww == 0.0) {
      rep.reason = Termination::breakdown;
      break;
    }
    const double alpha = zz / ww;
    x += alpha * p;
    r -= alpha * w;
    z = a_adjoint(r);
    const double zz_new = z.squaredNorm();
    p = z + (zz_new / zz) * p;
    zz = zz_new;
    rep.iterations = it;
    rep.residuals.push_back(r.norm() / bn);
    const bool stop = options.callback && options.callback(it, x);
    if (rep.residuals.back() <= options.tol) {
      rep.reason = Termination::tolerance;
      break;
    }
    if (stop) {
      rep.reason = Termination::stopped;
      break;
    }
  }
  rep.solution = std::move(x);
  return rep;
}

SolveReport gmres(const LinearOperator& a, const Vector& b, const Vector& g0, const SolverOptions& options) {
  SolveReport rep;
  const double bn = scale_of(b);
  const Eigen::Index n = b.size();
  Vector x = g0;
  const Vector r0 = b - a(x);
  const double beta = r0.norm();
  rep.residuals.push_back(beta / bn);
  const bool stop0 = options.callback && options.callback(0, x);
  rep.reason = Termination::max_iterations;
  if (rep.residuals.back() <= options.tol || stop0) {
    rep.reason = stop0 && rep.residuals.back() > options.tol ? Termination::stopped : Termination::tolerance;
    rep.solution = std::move(x);
    return rep;
  }

  const int m = static_cast<int>(std::min<Eigen::Index>(options.max_iter, n));
  Matrix v(n, m + 1);
  Matrix h = Matrix::Zero(m + 1, m);
  std::vector<double> cs(static_cast<std::size_t>(m));
  std::vector<Complex> sn(static_cast<std::size_t>(m));
  Vector e = Vector::Zero(m + 1);
  e(0) = beta;
  v.col(0) = r0 / beta;

  auto iterate = [&](int j) {
    const Vector y = h.topLeftCorner(j, j).triangularView<Eigen::Upper>().solve(e.head(j));
    return Vector(g0 + v.leftCols(j) * y);
  };

  int j = 0;
  bool happy = false;
  for (; j < m; ++j) {
    Vector w = a(v.col(j));
    for (int i = 0; i <= j; ++i) {
      h(i, j) = v.col(i).dot(w);
      w -= h(i, j) * v.col(i);
    }
    const double hn = w.norm();
    h(j + 1, j) = hn;
    for (int i = 0; i < j; ++i) {
      const Complex t = cs[static_cast<std::size_t>(i)] * h(i, j) + sn[static_cast<std::size_t>(i)] * h(i + 1, j);
      h(i + 1, j) = -std::conj(sn[static_cast<std::size_t>(i)]) * h(i, j) + cs[static_cast<std::size_t>(i)] * h(i + 1, j);
      h(i, j) = t;
    }
    // rotation zeroing h(j+1, j)
    const Complex hjj = h(j, j);
    const double denom = std::hypot(std::abs(hjj), hn);
    double c = 1.0;
    Complex s = 0.0;
    if (denom > 0.0) {
      if (std::abs(hjj) == 0.0) {
        c = 0.0;
        s = 1.0;
      } else {
        c = std::abs(hjj) / denom;
        s = (hjj / std::abs(hjj)) * hn / denom;
      }
    }
    cs[static_cast<std::size_t>(j)] = c;
    sn[static_cast<std::size_t>(j)] = s;
    h(j, j) = c * hjj + s * hn;
    h(j + 1, j) = 0.0;
    e(j + 1) = -std::conj(s) * e(j);
    e(j) = c * e(j);

    rep.iterations = j + 1;
    rep.residuals.push_back(std::abs(e(j + 1)) / bn);
    happy = hn <= 1e-14 * beta;
    const bool stop = options.callback && options.callback(j + 1, iterate(j + 1));
    if (rep.residuals.back() <= options.tol || happy || stop) {
      rep.reason = rep.residuals.back() <= options.tol || happy ? Termination::tolerance : Termination::stopped;
      ++j;
      break;
    }
    v.col(j + 1) = w / hn;
  }
  rep.solution = iterate(std::min(j, m));
  return rep;
}

}  // namespace chdg
