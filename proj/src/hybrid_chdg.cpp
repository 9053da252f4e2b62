#include "chdg/hybrid_chdg.hpp"

#include <limits>

namespace chdg {

Vector assemble_rhs_b(const Discretization& disc, const ProblemConfig& config) {
  const TriangleMesh& mesh = disc.mesh();
  const int nf = disc.face_dofs();
  const auto data = project_boundary_data(disc, config);
  Vector b = Vector::Zero(3 * disc.num_elements() * nf);
  for (int fi = 0; fi < mesh.num_faces(); ++fi) {
    const Face& face = mesh.faces[static_cast<std::size_t>(fi)];
    const Vector& s = data[static_cast<std::size_t>(fi)];
    if (!face.is_boundary() || s.size() == 0) continue;
    const double scale = face.kind == BoundaryKind::dirichlet ? 2.0 : face.kind == BoundaryKind::neumann ? -2.0 : 1.0;
    b.segment(ChdgOperator::block(face.sides[0].element, face.sides[0].local_face) * nf, nf) = scale * s;
  }
  return b;
}

ChdgOperator::ChdgOperator(const Discretization& disc, const ProblemConfig& config) : disc_(&disc), config_(config) {
  const TriangleMesh& mesh = disc.mesh();
  const int ne = disc.num_elements();
  const int nf = disc.face_dofs();
  const int nd = disc.element_dofs();
  lu_.resize(static_cast<std::size_t>(ne));
  input_.resize(static_cast<std::size_t>(ne));
  output_.resize(static_cast<std::size_t>(ne));
  lift_.resize(static_cast<std::size_t>(ne));
  lift_src_.resize(static_cast<std::size_t>(ne));
  scatter_.resize(static_cast<std::size_t>(ne));
  source_trace_ = Vector::Zero(size());
  int bad = -1;

#pragma omp parallel for schedule(static)
  for (int k = 0; k < ne; ++k) {
    const auto ks = static_cast<std::size_t>(k);
    lu_[ks].compute(disc.robin_operator(k, config_.kappa));
    if (!(lu_[ks].rcond() > 1e3 * std::numeric_limits<double>::epsilon())) {
#pragma omp critical
      bad = bad < 0 ? k : std::min(bad, k);
      continue;
    }
    RealMatrix b(nd, 3 * nf), r(3 * nf, nd);
    for (int f = 0; f < 3; ++f) {
      b.middleCols(f * nf, nf) = disc.robin_input(k, f);
      r.middleRows(f * nf, nf) = disc.outgoing_trace(k, f);
    }
    input_[ks] = b.cast<Complex>();
    output_[ks] = r.cast<Complex>();
    lift_[ks] = lu_[ks].solve(input_[ks]);
    scatter_[ks] = output_[ks] * lift_[ks];
    if (config_.source) {
      lift_src_[ks] = lu_[ks].solve(disc.volume_load(k, config_.source));
      source_trace_.segment(3 * k * nf, 3 * nf) = output_[ks] * lift_src_[ks];
    } else {
      lift_src_[ks] = Vector::Zero(nd);
    }
  }
  if (bad >= 0) throw NumericalError("singular local matrix on element " + std::to_string(bad));

  partner_.assign(static_cast<std::size_t>(num_blocks()), -1);
  factor_.assign(static_cast<std::size_t>(num_blocks()), 0.0);
  for (int k = 0; k < ne; ++k)
    for (int f = 0; f < 3; ++f) {
      const auto b = static_cast<std::size_t>(block(k, f));
      switch (mesh.kind(k, f)) {
        case BoundaryKind::interior: {
          const FaceSide nb = mesh.neighbor(k, f);
          partner_[b] = block(nb.element, nb.local_face);
          factor_[b] = 1.0;
          break;
        }
        case BoundaryKind::dirichlet:
          partner_[b] = static_cast<int>(b);
          factor_[b] = -1.0;
          break;
        case BoundaryKind::neumann:
          partner_[b] = static_cast<int>(b);
          factor_[b] = 1.0;
          break;
        case BoundaryKind::robin:
          partner_[b] = static_cast<int>(b);
          factor_[b] = 0.0;
          break;
        case BoundaryKind::untagged:
          throw std::invalid_argument("untagged boundary face " + std::to_string(mesh.element_faces[k][f]));
      }
    }

  boundary_rhs_ = assemble_rhs_b(disc, config_);
  rhs_ = boundary_rhs_ + exchange_apply(source_trace_);
}

Vector ChdgOperator::scattering_apply(const Vector& g) const {
  const int m = 3 * block_size();
  Vector out(size());
  const int ne = disc_->num_elements();
#pragma omp parallel for schedule(static)
  for (int k = 0; k < ne; ++k) out.segment(k * m, m).noalias() = scatter_[static_cast<std::size_t>(k)] * g.segment(k * m, m);
  return out;
}

Vector ChdgOperator::scattering_apply_reference(const Vector& g) const {
  const int m = 3 * block_size();
  Vector out(size());
  for (int k = 0; k < disc_->num_elements(); ++k) {
    const auto ks = static_cast<std::size_t>(k);
    const Vector x = lu_[ks].solve(input_[ks] * g.segment(k * m, m));
    out.segment(k * m, m) = output_[ks] * x;
  }
  return out;
}

Vector ChdgOperator::scattering_adjoint_apply(const Vector& g) const {
  const int m = 3 * block_size();
  Vector out(size());
  const int ne = disc_->num_elements();
#pragma omp parallel for schedule(static)
  for (int k = 0; k < ne; ++k)
    out.segment(k * m, m).noalias() = scatter_[static_cast<std::size_t>(k)].adjoint() * g.segment(k * m, m);
  return out;
}

Vector ChdgOperator::scattering_adjoint_apply_reference(const Vector& g) const {
  const int m = 3 * block_size();
  Vector out(size());
  for (int k = 0; k < disc_->num_elements(); ++k) {
    const auto ks = static_cast<std::size_t>(k);
    const Vector y = lu_[ks].adjoint().solve(output_[ks].adjoint() * g.segment(k * m, m));
    out.segment(k * m, m) = input_[ks].adjoint() * y;
  }
  return out;
}

Vector ChdgOperator::exchange_apply(const Vector& g) const {
  const int nf = block_size();
  Vector out(size());
  const int nb = num_blocks();
#pragma omp parallel for schedule(static)
  for (int b = 0; b < nb; ++b) {
    const auto bs = static_cast<std::size_t>(b);
    if (factor_[bs] == 0.0)
      out.segment(b * nf, nf).setZero();
    else
      out.segment(b * nf, nf) = factor_[bs] * g.segment(partner_[bs] * nf, nf);
  }
  return out;
}

Vector ChdgOperator::local_solve(int k, const Vector& s, bool with_source) const {
  const auto ks = static_cast<std::size_t>(k);
  Vector x = lift_[ks] * s;
  if (with_source) x += lift_src_[ks];
  return x;
}

ElementFields ChdgOperator::reconstruct(const Vector& g) const {
  if (g.size() != size()) throw std::invalid_argument("skeleton vector has wrong length");
  const int m = 3 * block_size();
  ElementFields fields(disc_->num_elements(), disc_->scalar_dofs());
  const int ne = disc_->num_elements();
#pragma omp parallel for schedule(static)
  for (int k = 0; k < ne; ++k) fields.element(k) = local_solve(k, g.segment(k * m, m), true);
  return fields;
}

double ChdgOperator::energy_identity_residual(int k, const Vector& s) const {
  const int nf = block_size();
  const int n = disc_->scalar_dofs();
  const Vector x = local_solve(k, s, false);
  const TriangleMesh& mesh = disc_->mesh();
  const SegmentRule rule = segment_rule(2 * disc_->degree() + 2);
  double out2 = 0.0, rest2 = 0.0, s2 = 0.0;
  for (int f = 0; f < 3; ++f) {
    const Face& face = mesh.face_of(k, f);
    const FaceBasis fb(disc_->degree(), face.length);
    const RealMatrix tr = trace_evaluate(disc_->basis(), f, rule.points, mesh.reversed[k][f]);
    const Point& nrm = mesh.normals[k][f];
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const RealVector phi = tr.row(static_cast<Eigen::Index>(q)).transpose();
      const Complex u = (x.segment(0, n).transpose() * phi.cast<Complex>())(0);
      const Complex qx = (x.segment(n, n).transpose() * phi.cast<Complex>())(0);
      const Complex qy = (x.segment(2 * n, n).transpose() * phi.cast<Complex>())(0);
      const Complex sv = (s.segment(f * nf, nf).transpose() * fb.values(rule.points[q]).cast<Complex>())(0);
      const Complex nq = nrm.x() * qx + nrm.y() * qy;
      const double w = face.length * rule.weights[q];
      out2 += w * std::norm(u + nq);
      rest2 += w * std::norm(u - nq - sv);
      s2 += w * std::norm(sv);
    }
  }
  if (s2 == 0.0) return std::abs(out2 + rest2);
  return std::abs(out2 + rest2 - s2) / s2;
}

ChdgOperator factorize_local_chdg(const Discretization& disc, const ProblemConfig& config) {
  return ChdgOperator(disc, config);
}

SparseSystem assemble_reduced_chdg(const ChdgOperator& op) {
  const Discretization& disc = op.discretization();
  const TriangleMesh& mesh = disc.mesh();
  const int nf = op.block_size();
  const int m = 3 * nf;
  using Triplet = Eigen::Triplet<Complex>;
  std::vector<Triplet> trip;
  trip.reserve(static_cast<std::size_t>(op.num_blocks()) * static_cast<std::size_t>(nf * (m + 1)));

  for (int k = 0; k < disc.num_elements(); ++k)
    for (int f = 0; f < 3; ++f) {
      const int row = ChdgOperator::block(k, f) * nf;
      for (int i = 0; i < nf; ++i) trip.emplace_back(row + i, row + i, 1.0);
      int src = -1;
      double sign = 0.0;
      switch (mesh.kind(k, f)) {
        case BoundaryKind::interior: {
          const FaceSide nb = mesh.neighbor(k, f);
          src = ChdgOperator::block(nb.element, nb.local_face);
          sign = -1.0;
          break;
        }
        case BoundaryKind::dirichlet:
          src = ChdgOperator::block(k, f);
          sign = 1.0;
          break;
        case BoundaryKind::neumann:
          src = ChdgOperator::block(k, f);
          sign = -1.0;
          break;
        default: break;
      }
      if (src < 0) continue;
      const int ke = src / 3, fe = src % 3;
      const Matrix& s = op.scattering_block(ke);
      for (int j = 0; j < m; ++j)
        for (int i = 0; i < nf; ++i) trip.emplace_back(row + i, ke * m + j, sign * s(fe * nf + i, j));
    }

  SparseSystem sys;
  sys.matrix.resize(op.size(), op.size());
  sys.matrix.setFromTriplets(trip.begin(), trip.end());
  prune_exact_zeros(sys.matrix);
  sys.rhs = op.rhs();
  sys.layout = {Method::chdg, nf, op.num_blocks()};
  return sys;
}

ElementFields reconstruct_chdg(const ChdgOperator& op, const Vector& g) { return op.reconstruct(g); }

}  // namespace chdg
