#include <doctest.h>

#include <cmath>

#include "chdg/counting.hpp"
#include "chdg/hybrid_chdg.hpp"
#include "chdg/solvers.hpp"
#include "support.hpp"

using namespace chdg;
using chdg::testing::kMixed;
using chdg::testing::Manufactured;
using chdg::testing::random_vector;

TEST_CASE("scattering is a strict contraction") {
  std::mt19937_64 rng(7);
  for (int p : {1, 2, 3}) {
    const Discretization d(generate_rectangle(1.0, 1.0, 3, 3, kMixed), p);
    const ChdgOperator op(d, ProblemConfig{9.0, p});
    for (int i = 0; i < 20; ++i) {
      const Vector g = random_vector(op.size(), rng);
      CHECK(op.scattering_apply(g).norm() < g.norm());
      CHECK(op.iteration_apply(g).norm() < g.norm());
    }
    for (int k = 0; k < d.num_elements(); ++k) {
      const Eigen::JacobiSVD<Matrix> svd(op.scattering_block(k));
      CHECK(svd.singularValues()(0) < 1.0);
    }
  }
}

TEST_CASE("parallel and reference scattering agree") {
  std::mt19937_64 rng(11);
  const Discretization d(generate_structured_unit_square(5, kMixed), 3);
  const ChdgOperator op(d, ProblemConfig{12.0, 3});
  for (int i = 0; i < 5; ++i) {
    const Vector g = random_vector(op.size(), rng);
    const Vector a = op.scattering_apply(g), b = op.scattering_apply_reference(g);
    CHECK((a - b).norm() <= 1e-13 * b.norm());
    const Vector c = op.scattering_adjoint_apply(g), e = op.scattering_adjoint_apply_reference(g);
    CHECK((c - e).norm() <= 1e-13 * e.norm());
  }
}

TEST_CASE("adjoint applications are consistent") {
  std::mt19937_64 rng(5);
  const Discretization d(generate_rectangle(2.0, 1.0, 4, 2, kMixed), 2);
  const ChdgOperator op(d, ProblemConfig{6.0, 2});
  const Vector g = random_vector(op.size(), rng), h = random_vector(op.size(), rng);
  const Complex lhs = op.scattering_apply(g).dot(h), rhs = g.dot(op.scattering_adjoint_apply(h));
  CHECK(std::abs(lhs - rhs) <= 1e-13 * g.norm() * h.norm());
  const Complex l2 = op.apply(g).dot(h), r2 = g.dot(op.apply_adjoint(h));
  CHECK(std::abs(l2 - r2) <= 1e-13 * g.norm() * h.norm());
  const Complex l3 = op.exchange_apply(g).dot(h), r3 = g.dot(op.exchange_apply(h));
  CHECK(std::abs(l3 - r3) <= 1e-14 * g.norm() * h.norm());
}

TEST_CASE("exchange operator algebra") {
  std::mt19937_64 rng(1);
  const SideTags closed{BoundaryKind::dirichlet, BoundaryKind::neumann, BoundaryKind::dirichlet, BoundaryKind::neumann};
  const Discretization dc(generate_structured_unit_square(4, closed), 2);
  const ChdgOperator oc(dc, ProblemConfig{5.0, 2});
  const Discretization dr(generate_structured_unit_square(4, SideTags{}), 2);
  const ChdgOperator orb(dr, ProblemConfig{5.0, 2});
  for (int i = 0; i < 10; ++i) {
    const Vector g = random_vector(oc.size(), rng);
    CHECK((oc.exchange_apply(oc.exchange_apply(g)) - g).norm() == 0.0);
    CHECK(std::abs(oc.exchange_apply(g).norm() - g.norm()) <= 1e-14 * g.norm());
    CHECK(orb.exchange_apply(g).norm() < g.norm());
  }
  // Robin blocks are annihilated, interior ones swapped.
  const TriangleMesh& mesh = dr.mesh();
  const Vector g = random_vector(orb.size(), rng);
  const Vector pg = orb.exchange_apply(g);
  for (int k = 0; k < mesh.num_elements(); ++k)
    for (int f = 0; f < 3; ++f) {
      const int b = ChdgOperator::block(k, f);
      if (mesh.face_of(k, f).is_boundary()) {
        CHECK(pg.segment(3 * b, 3).norm() == 0.0);
        continue;
      }
      const FaceSide nb = mesh.neighbor(k, f);
      CHECK((pg.segment(3 * b, 3) - g.segment(3 * ChdgOperator::block(nb.element, nb.local_face), 3)).norm() == 0.0);
    }
}

TEST_CASE("boundary right-hand side") {
  const Discretization d(generate_structured_unit_square(2, SideTags::all(BoundaryKind::dirichlet)), 1);
  ProblemConfig cfg{3.0, 1};
  cfg.dirichlet = [](const Point&, const Point&) { return Complex(1.0, 0.0); };
  const Vector b = assemble_rhs_b(d, cfg);
  const TriangleMesh& mesh = d.mesh();
  for (int k = 0; k < mesh.num_elements(); ++k)
    for (int f = 0; f < 3; ++f) {
      const Vector blk = b.segment(2 * ChdgOperator::block(k, f), 2);
      if (!mesh.face_of(k, f).is_boundary()) {
        CHECK(blk.norm() == 0.0);
        continue;
      }
      const Face& face = mesh.face_of(k, f);
      CHECK(std::abs(blk(0) - 2.0 * std::sqrt(face.length)) <= 1e-14);
      CHECK(std::abs(blk(1)) <= 1e-14);
    }
}

TEST_CASE("explicit matrix matches the matrix-free operator") {
  std::mt19937_64 rng(2);
  const Manufactured m;
  for (int p : {1, 3}) {
    const Discretization d(generate_rectangle(1.0, 2.0, 2, 4, kMixed), p);
    const ChdgOperator op(d, m.config(p));
    const SparseSystem sys = assemble_reduced_chdg(op);
    CHECK(sys.matrix.rows() == op.size());
    CHECK((sys.rhs - op.rhs()).norm() == 0.0);
    const Vector g = random_vector(op.size(), rng);
    CHECK((sys.matrix * g - op.apply(g)).norm() <= 1e-13 * g.norm());
    CHECK((sys.matrix.adjoint() * g - op.apply_adjoint(g)).norm() <= 1e-13 * g.norm());
    const long structural = structural_nnz(mesh_counts(d.mesh()), p).chdg;
    CHECK(sys.matrix.nonZeros() <= structural);
  }
}

TEST_CASE("energy identity of the local problems") {
  std::mt19937_64 rng(9);
  for (int p : {1, 2, 3}) {
    const Discretization d(generate_structured_unit_square(3, SideTags{}), p);
    const ChdgOperator op(d, ProblemConfig{10.0, p});
    for (int k = 0; k < d.num_elements(); k += 4) {
      CHECK(op.energy_identity_residual(k, random_vector(3 * (p + 1), rng)) <= 1e-11);
    }
    CHECK(op.energy_identity_residual(0, Vector::Zero(3 * (p + 1))) == 0.0);
  }
}

TEST_CASE("reduced CHDG reproduces the DG solution") {
  const Manufactured m;
  for (int p : {1, 2, 3}) {
    const Discretization d(generate_rectangle(2.0, 1.0, 3, 2, kMixed), p);
    const ProblemConfig cfg = m.config(p);
    const SparseSystem dg = assemble_dg(d, cfg);
    const ChdgOperator op = factorize_local_chdg(d, cfg);
    const Vector g = direct_solve(assemble_reduced_chdg(op));
    const ElementFields x = reconstruct_chdg(op, g);
    CHECK((dg.matrix * x.coefficients() - dg.rhs).norm() <= 1e-11 * dg.rhs.norm());
    // Interior incoming data are the outgoing traces of the neighbors.
    const TriangleMesh& mesh = d.mesh();
    for (int k = 0; k < d.num_elements(); ++k)
      for (int f = 0; f < 3; ++f) {
        if (mesh.face_of(k, f).is_boundary()) continue;
        const FaceSide nb = mesh.neighbor(k, f);
        const Vector out = d.outgoing_trace(nb.element, nb.local_face).cast<Complex>() * x.element(nb.element);
        CHECK((g.segment((p + 1) * ChdgOperator::block(k, f), p + 1) - out).norm() <= 1e-11 * (1.0 + out.norm()));
      }
  }
}
