#include "chdg/dg_core.hpp"

#include <stdexcept>

namespace chdg {

std::string to_string(Method method) {
  switch (method) {
    case Method::dg: return "dg";
    case Method::hdg: return "hdg";
    case Method::chdg: return "chdg";
  }
  return "unknown";
}

Method parse_method(const std::string& name) {
  if (name == "dg") return Method::dg;
  if (name == "hdg") return Method::hdg;
  if (name == "chdg") return Method::chdg;
  throw std::invalid_argument("unknown method '" + name + "' (expected dg, hdg or chdg)");
}

ElementFields::ElementFields(int num_elements, int scalar_dofs)
    : num_elements_(num_elements), n_(scalar_dofs), coeffs_(Vector::Zero(3 * num_elements * scalar_dofs)) {}

ElementFields::ElementFields(Vector coefficients, int scalar_dofs)
    : num_elements_(static_cast<int>(coefficients.size()) / (3 * scalar_dofs)),
      n_(scalar_dofs),
      coeffs_(std::move(coefficients)) {
  if (coeffs_.size() != 3 * n_ * num_elements_)
    throw std::invalid_argument("field coefficient vector length is not a multiple of 3N");
}

FluxPair upwind_flux(Complex u, const Eigen::Vector2cd& q, Complex u_nb, const Eigen::Vector2cd& q_nb,
                     const Point& n) {
  const Complex nq = n.x() * q(0) + n.y() * q(1);
  const Complex nq_nb = n.x() * q_nb(0) + n.y() * q_nb(1);
  return {0.5 * (u + u_nb) + 0.5 * (nq - nq_nb), 0.5 * (nq + nq_nb) + 0.5 * (u - u_nb)};
}

FluxPair characteristic_flux(Complex g_out, Complex g_in) { return {0.5 * (g_out + g_in), 0.5 * (g_out - g_in)}; }

void prune_exact_zeros(SparseMatrix& matrix) {
  matrix.prune([](Eigen::Index, Eigen::Index, const Complex& v) { return v != Complex(0.0, 0.0); });
  matrix.makeCompressed();
}

namespace {

using Triplet = Eigen::Triplet<Complex>;

void push_block(std::vector<Triplet>& trip, Eigen::Index row0, Eigen::Index col0, const Matrix& block) {
  for (Eigen::Index j = 0; j < block.cols(); ++j)
    for (Eigen::Index i = 0; i < block.rows(); ++i)
      if (block(i, j) != Complex(0.0, 0.0)) trip.emplace_back(row0 + i, col0 + j, block(i, j));
}

// Rows tau = (-1/2, nx/2, ny/2) times cols c, Kronecker with a real N x M block.
Matrix kron3(const Eigen::Vector3d& rows, const Eigen::Vector3d& cols, const RealMatrix& block) {
  const Eigen::Index n = block.rows(), m = block.cols();
  Matrix out = Matrix::Zero(3 * n, 3 * m);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (rows(i) * cols(j) != 0.0) out.block(i * n, j * m, n, m) = (rows(i) * cols(j) * block).cast<Complex>();
  return out;
}

}  // namespace

SparseSystem assemble_dg(const Discretization& disc, const ProblemConfig& config) {
  const TriangleMesh& mesh = disc.mesh();
  const int ne = mesh.num_elements();
  const int nd = disc.element_dofs();
  const auto data = project_boundary_data(disc, config);

  std::vector<Triplet> trip;
  trip.reserve(static_cast<std::size_t>(ne) * static_cast<std::size_t>(nd * nd) * 4);
  Vector rhs = Vector::Zero(static_cast<Eigen::Index>(ne) * nd);

  for (int k = 0; k < ne; ++k) {
    const ElementMatrices& em = disc.element(k);
    Matrix diag = disc.robin_operator(k, config.kappa);
    if (config.source) rhs.segment(k * nd, nd) += disc.volume_load(k, config.source);
    for (int f = 0; f < 3; ++f) {
      const Point& nrm = em.normal[f];
      const Eigen::Vector3d tau(-0.5, 0.5 * nrm.x(), 0.5 * nrm.y());
      const Eigen::Vector3d out(1.0, nrm.x(), nrm.y());
      const RealMatrix& t = em.trace[f];
      const int face = mesh.element_faces[k][f];
      const Vector& s = data[static_cast<std::size_t>(face)];
      auto add_rhs = [&](double scale) {
        if (s.size() == 0) return;
        const Vector ts = t.cast<Complex>() * s;
        for (int i = 0; i < 3; ++i)
          if (tau(i) != 0.0) rhs.segment(k * nd + i * disc.scalar_dofs(), disc.scalar_dofs()) += (scale * tau(i)) * ts;
      };
      switch (mesh.kind(k, f)) {
        case BoundaryKind::interior: {
          const FaceSide nb = mesh.neighbor(k, f);
          const RealMatrix cross = t * disc.element(nb.element).trace[nb.local_face].transpose();
          push_block(trip, k * nd, nb.element * nd, kron3(tau, Eigen::Vector3d(1.0, -nrm.x(), -nrm.y()), cross));
          break;
        }
        case BoundaryKind::dirichlet:
          diag -= kron3(tau, out, t * t.transpose());
          add_rhs(-2.0);
          break;
        case BoundaryKind::neumann:
          diag += kron3(tau, out, t * t.transpose());
          add_rhs(2.0);
          break;
        case BoundaryKind::robin:
          add_rhs(-1.0);
          break;
        case BoundaryKind::untagged:
          throw std::invalid_argument("untagged boundary face " + std::to_string(face));
      }
    }
    push_block(trip, k * nd, k * nd, diag);
  }

  SparseSystem sys;
  sys.matrix.resize(rhs.size(), rhs.size());
  sys.matrix.setFromTriplets(trip.begin(), trip.end());
  prune_exact_zeros(sys.matrix);
  sys.rhs = std::move(rhs);
  sys.layout = {Method::dg, nd, ne};
  return sys;
}

FieldSample evaluate_in_element(const Discretization& disc, const ElementFields& fields, int k, const Point& xi) {
  const RealVector phi = disc.basis().values(xi);
  FieldSample s;
  s.u = (fields.u(k).transpose() * phi.cast<Complex>())(0);
  s.q(0) = (fields.qx(k).transpose() * phi.cast<Complex>())(0);
  s.q(1) = (fields.qy(k).transpose() * phi.cast<Complex>())(0);
  return s;
}

std::vector<FieldSample> evaluate_solution(const Discretization& disc, const ElementFields& fields,
                                           const std::vector<Point>& points) {
  const PointLocator locator(disc.mesh());
  std::vector<FieldSample> out;
  out.reserve(points.size());
  for (const Point& x : points) {
    const auto loc = locator.locate(x);
    if (!loc) throw std::out_of_range("point (" + std::to_string(x.x()) + ", " + std::to_string(x.y()) + ") outside mesh");
    out.push_back(evaluate_in_element(disc, fields, loc->element, loc->reference));
  }
  return out;
}

ElementFields project_fields(const Discretization& disc, const ScalarField& u, const VectorField& q) {
  const int n = disc.scalar_dofs();
  ElementFields fields(disc.num_elements(), n);
  const TriangleRule& rule = disc.volume_rule();
  for (int k = 0; k < disc.num_elements(); ++k) {
    const ElementMatrices& em = disc.element(k);
    const double jac = std::abs(em.map.det);
    Vector bu = Vector::Zero(n), bx = Vector::Zero(n), by = Vector::Zero(n);
    for (std::size_t i = 0; i < rule.points.size(); ++i) {
      const Point x = em.map.to_physical(rule.points[i]);
      const Eigen::VectorXcd phi = disc.basis().values(rule.points[i]).cast<Complex>();
      const double w = jac * rule.weights[i];
      bu += (w * u(x)) * phi;
      const Eigen::Vector2cd qv = q(x);
      bx += (w * qv(0)) * phi;
      by += (w * qv(1)) * phi;
    }
    const Eigen::LDLT<RealMatrix> mass(em.mass);
    auto seg = fields.element(k);
    seg.segment(0, n) = mass.solve(bu.real()).cast<Complex>() + kImag * mass.solve(bu.imag()).cast<Complex>();
    seg.segment(n, n) = mass.solve(bx.real()).cast<Complex>() + kImag * mass.solve(bx.imag()).cast<Complex>();
    seg.segment(2 * n, n) = mass.solve(by.real()).cast<Complex>() + kImag * mass.solve(by.imag()).cast<Complex>();
  }
  return fields;
}

}  // namespace chdg
