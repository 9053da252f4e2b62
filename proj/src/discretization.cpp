#include "chdg/discretization.hpp"

#include <cmath>

namespace chdg {

Discretization::Discretization(TriangleMesh mesh, int degree)
    : mesh_(std::move(mesh)),
      degree_(degree),
      basis_(degree),
      volume_rule_(triangle_rule(2 * degree + 2)),
      face_rule_(segment_rule(2 * degree + 2)) {
  const int n = basis_.size();
  const int nf = degree_ + 1;

  RealMatrix mref = RealMatrix::Zero(n, n), dxi = RealMatrix::Zero(n, n), deta = RealMatrix::Zero(n, n);
  for (std::size_t q = 0; q < volume_rule_.points.size(); ++q) {
    const double w = volume_rule_.weights[q];
    const RealVector v = basis_.values(volume_rule_.points[q]);
    const Eigen::MatrixX2d g = basis_.gradients(volume_rule_.points[q]);
    mref.noalias() += w * v * v.transpose();
    dxi.noalias() += w * g.col(0) * v.transpose();
    deta.noalias() += w * g.col(1) * v.transpose();
  }

  // Reference trace tables: int_0^1 phi_a(gamma_f(t)) sqrt(2i+1) P_i(2t-1) dt.
  std::array<std::array<RealMatrix, 2>, 3> qref;
  for (int f = 0; f < 3; ++f) {
    for (int r = 0; r < 2; ++r) {
      RealMatrix table = RealMatrix::Zero(n, nf);
      const RealMatrix tr = trace_evaluate(basis_, f, face_rule_.points, r == 1);
      for (std::size_t q = 0; q < face_rule_.points.size(); ++q) {
        const RealVector psi = FaceBasis(degree_, 1.0).values(face_rule_.points[q]);
        table.noalias() += face_rule_.weights[q] * tr.row(static_cast<Eigen::Index>(q)).transpose() * psi.transpose();
      }
      qref[static_cast<std::size_t>(f)][static_cast<std::size_t>(r)] = table;
    }
  }

  const int ne = mesh_.num_elements();
  elements_.resize(static_cast<std::size_t>(ne));
  for (int k = 0; k < ne; ++k) {
    ElementMatrices& em = elements_[static_cast<std::size_t>(k)];
    em.map = affine_map(mesh_, k);
    const double jac = std::abs(em.map.det);
    const Eigen::Matrix2d& inv = em.map.inverse;
    em.mass = jac * mref;
    // d/dx = inv(0,0) d/dxi + inv(1,0) d/deta
    em.dx = jac * (inv(0, 0) * dxi + inv(1, 0) * deta);
    em.dy = jac * (inv(0, 1) * dxi + inv(1, 1) * deta);
    for (int f = 0; f < 3; ++f) {
      const double len = mesh_.face_of(k, f).length;
      em.trace[static_cast<std::size_t>(f)] =
          std::sqrt(len) * qref[static_cast<std::size_t>(f)][mesh_.reversed[k][f] ? 1 : 0];
      em.normal[static_cast<std::size_t>(f)] = mesh_.normals[k][f];
    }
  }
}

Matrix Discretization::volume_operator(int k, double kappa) const {
  const ElementMatrices& em = element(k);
  const int n = scalar_dofs();
  const Complex mik = -kImag * kappa;
  Matrix a = Matrix::Zero(3 * n, 3 * n);
  a.block(0, 0, n, n) = mik * em.mass.cast<Complex>();
  a.block(n, n, n, n) = mik * em.mass.cast<Complex>();
  a.block(2 * n, 2 * n, n, n) = mik * em.mass.cast<Complex>();
  a.block(0, n, n, n) = -em.dx.cast<Complex>();
  a.block(0, 2 * n, n, n) = -em.dy.cast<Complex>();
  a.block(n, 0, n, n) = -em.dx.cast<Complex>();
  a.block(2 * n, 0, n, n) = -em.dy.cast<Complex>();
  return a;
}

namespace {

// Adds (rows x cols) kron block into a 3N x 3N matrix.
void add_kron(Matrix& a, const Eigen::Vector3d& rows, const Eigen::Vector3d& cols, const RealMatrix& block) {
  const Eigen::Index n = block.rows();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const double c = rows(i) * cols(j);
      if (c != 0.0) a.block(i * n, j * n, n, block.cols()) += (c * block).cast<Complex>();
    }
}

}  // namespace

Matrix Discretization::robin_operator(int k, double kappa) const {
  Matrix a = volume_operator(k, kappa);
  const ElementMatrices& em = element(k);
  for (int f = 0; f < 3; ++f) {
    const Point& nrm = em.normal[f];
    const Eigen::Vector3d g(1.0, nrm.x(), nrm.y());
    const RealMatrix& t = em.trace[f];
    add_kron(a, 0.5 * g, g, t * t.transpose());
  }
  return a;
}

Matrix Discretization::dirichlet_operator(int k, double kappa) const {
  Matrix a = volume_operator(k, kappa);
  const ElementMatrices& em = element(k);
  for (int f = 0; f < 3; ++f) {
    const Point& nrm = em.normal[f];
    const RealMatrix& t = em.trace[f];
    add_kron(a, Eigen::Vector3d(1.0, 0.0, 0.0), Eigen::Vector3d(1.0, nrm.x(), nrm.y()), t * t.transpose());
  }
  return a;
}

RealMatrix Discretization::outgoing_trace(int k, int f) const {
  const ElementMatrices& em = element(k);
  const int n = scalar_dofs();
  const RealMatrix tt = em.trace[f].transpose();
  RealMatrix r(face_dofs(), 3 * n);
  r << tt, em.normal[f].x() * tt, em.normal[f].y() * tt;
  return r;
}

RealMatrix Discretization::robin_input(int k, int f) const {
  const ElementMatrices& em = element(k);
  const RealMatrix& t = em.trace[f];
  RealMatrix b(3 * scalar_dofs(), face_dofs());
  b << 0.5 * t, -0.5 * em.normal[f].x() * t, -0.5 * em.normal[f].y() * t;
  return b;
}

RealMatrix Discretization::dirichlet_input(int k, int f) const {
  const ElementMatrices& em = element(k);
  const RealMatrix& t = em.trace[f];
  RealMatrix b(3 * scalar_dofs(), face_dofs());
  b << t, -em.normal[f].x() * t, -em.normal[f].y() * t;
  return b;
}

Vector Discretization::project_face_data(int k, int f, const BoundaryData& data) const {
  const int face = mesh_.element_faces[k][f];
  const double len = mesh_.faces[static_cast<std::size_t>(face)].length;
  const FaceBasis fb(degree_, len);
  const Point& nrm = mesh_.normals[k][f];
  Vector c = Vector::Zero(face_dofs());
  for (std::size_t q = 0; q < face_rule_.points.size(); ++q) {
    const double t = face_rule_.points[q];
    const Complex s = data(mesh_.face_point(face, t), nrm);
    c += (len * face_rule_.weights[q] * s) * fb.values(t).cast<Complex>();
  }
  return c;
}

Vector Discretization::volume_load(int k, const VolumeData& data) const {
  const ElementMatrices& em = element(k);
  const double jac = std::abs(em.map.det);
  Vector load = Vector::Zero(element_dofs());
  for (std::size_t q = 0; q < volume_rule_.points.size(); ++q) {
    const Point& xi = volume_rule_.points[q];
    const Complex fv = data(em.map.to_physical(xi));
    load.head(scalar_dofs()) += (jac * volume_rule_.weights[q] * fv) * basis_.values(xi).cast<Complex>();
  }
  return load;
}

std::vector<Vector> project_boundary_data(const Discretization& disc, const ProblemConfig& config) {
  const TriangleMesh& mesh = disc.mesh();
  std::vector<Vector> out(static_cast<std::size_t>(mesh.num_faces()));
  for (int fi = 0; fi < mesh.num_faces(); ++fi) {
    const Face& face = mesh.faces[static_cast<std::size_t>(fi)];
    if (!face.is_boundary()) continue;
    const BoundaryData* data = nullptr;
    switch (face.kind) {
      case BoundaryKind::dirichlet: data = &config.dirichlet; break;
      case BoundaryKind::neumann: data = &config.neumann; break;
      case BoundaryKind::robin: data = &config.robin; break;
      default:
        throw std::invalid_argument("untagged boundary face " + std::to_string(fi));
    }
    if (*data) out[static_cast<std::size_t>(fi)] = disc.project_face_data(face.sides[0].element, face.sides[0].local_face, *data);
  }
  return out;
}

}  // namespace chdg
