#include "chdg/hybrid_hdg.hpp"

#include <limits>

namespace chdg {

namespace {

void check_factorization(const Eigen::PartialPivLU<Matrix>& lu, int k) {
  const double rc = lu.rcond();
  if (!(rc > 1e3 * std::numeric_limits<double>::epsilon()))
    throw NumericalError("singular local matrix on element " + std::to_string(k));
}

}  // namespace

HdgFactorization::HdgFactorization(const Discretization& disc, const ProblemConfig& config)
    : disc_(&disc), config_(config), data_(project_boundary_data(disc, config)) {
  const int ne = disc.num_elements();
  lu_.resize(static_cast<std::size_t>(ne));
  lift_.resize(static_cast<std::size_t>(3 * ne));
  load_.resize(static_cast<std::size_t>(ne));
  int bad = -1;
#pragma omp parallel for schedule(static)
  for (int k = 0; k < ne; ++k) {
    auto& lu = lu_[static_cast<std::size_t>(k)];
    lu.compute(disc.dirichlet_operator(k, config_.kappa));
    if (!(lu.rcond() > 1e3 * std::numeric_limits<double>::epsilon())) {
#pragma omp critical
      bad = bad < 0 ? k : std::min(bad, k);
      continue;
    }
    for (int f = 0; f < 3; ++f)
      lift_[static_cast<std::size_t>(3 * k + f)] = lu.solve(disc.dirichlet_input(k, f).cast<Complex>());
    load_[static_cast<std::size_t>(k)] =
        config_.source ? Vector(lu.solve(disc.volume_load(k, config_.source))) : Vector::Zero(disc.element_dofs());
  }
  if (bad >= 0) check_factorization(lu_[static_cast<std::size_t>(bad)], bad);
}

HdgFactorization factorize_local_hdg(const Discretization& disc, const ProblemConfig& config) {
  return HdgFactorization(disc, config);
}

SparseSystem assemble_reduced_hdg(const HdgFactorization& fact) {
  const Discretization& disc = fact.discretization();
  const TriangleMesh& mesh = disc.mesh();
  const int nf = disc.face_dofs();
  const auto& data = fact.boundary_data();

  using Triplet = Eigen::Triplet<Complex>;
  std::vector<Triplet> trip;
  Vector rhs = Vector::Zero(fact.size());

  for (int fi = 0; fi < mesh.num_faces(); ++fi) {
    const Face& face = mesh.faces[static_cast<std::size_t>(fi)];
    const Vector& s = data[static_cast<std::size_t>(fi)];
    for (int i = 0; i < nf; ++i) trip.emplace_back(fi * nf + i, fi * nf + i, 1.0);
    double weight = 0.0;
    switch (face.kind) {
      case BoundaryKind::dirichlet:
        if (s.size()) rhs.segment(fi * nf, nf) = s;
        continue;
      case BoundaryKind::interior: weight = 0.5; break;
      case BoundaryKind::neumann:
        weight = 1.0;
        if (s.size()) rhs.segment(fi * nf, nf) -= s;
        break;
      case BoundaryKind::robin:
        weight = 0.5;
        if (s.size()) rhs.segment(fi * nf, nf) += 0.5 * s;
        break;
      case BoundaryKind::untagged:
        throw std::invalid_argument("untagged boundary face " + std::to_string(fi));
    }
    for (int side = 0; side < face.num_sides; ++side) {
      const int k = face.sides[side].element, f = face.sides[side].local_face;
      const RealMatrix r = disc.outgoing_trace(k, f);
      rhs.segment(fi * nf, nf) += weight * (r.cast<Complex>() * fact.load(k));
      for (int g = 0; g < 3; ++g) {
        const Matrix block = -weight * (r.cast<Complex>() * fact.lift(k, g));
        const int col = mesh.element_faces[k][g];
        for (int j = 0; j < nf; ++j)
          for (int i = 0; i < nf; ++i) trip.emplace_back(fi * nf + i, col * nf + j, block(i, j));
      }
    }
  }

  SparseSystem sys;
  sys.matrix.resize(rhs.size(), rhs.size());
  sys.matrix.setFromTriplets(trip.begin(), trip.end());
  prune_exact_zeros(sys.matrix);
  sys.rhs = std::move(rhs);
  sys.layout = {Method::hdg, nf, mesh.num_faces()};
  return sys;
}

ElementFields reconstruct_hdg(const HdgFactorization& fact, const Vector& trace) {
  const Discretization& disc = fact.discretization();
  const TriangleMesh& mesh = disc.mesh();
  const int nf = disc.face_dofs();
  if (trace.size() != fact.size()) throw std::invalid_argument("trace vector has wrong length");
  ElementFields fields(disc.num_elements(), disc.scalar_dofs());
#pragma omp parallel for schedule(static)
  for (int k = 0; k < disc.num_elements(); ++k) {
    Vector x = fact.load(k);
    for (int f = 0; f < 3; ++f) x += fact.lift(k, f) * trace.segment(mesh.element_faces[k][f] * nf, nf);
    fields.element(k) = x;
  }
  return fields;
}

}  // namespace chdg
