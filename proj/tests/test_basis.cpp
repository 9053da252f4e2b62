#include <doctest.h>

#include <cmath>
#include <random>

#include "chdg/basis.hpp"
#include "chdg/mesh.hpp"

using namespace chdg;

namespace {

double factorial(int n) { return std::tgamma(n + 1.0); }

// int over the reference triangle of x^a y^b = a! b! / (a + b + 2)!
double triangle_monomial(int a, int b) { return factorial(a) * factorial(b) / factorial(a + b + 2); }

}  // namespace

TEST_CASE("segment rule exactness") {
  for (int d = 0; d <= 20; ++d) {
    const SegmentRule r = segment_rule(d);
    CHECK(r.exactness >= d);
    for (double w : r.weights) CHECK(w > 0.0);
    for (int m = 0; m <= d; ++m) {
      double s = 0.0;
      for (std::size_t i = 0; i < r.points.size(); ++i) s += r.weights[i] * std::pow(r.points[i], m);
      CHECK(std::abs(s - 1.0 / (m + 1)) <= 1e-13 / (m + 1));
    }
  }
  const SegmentRule r5 = segment_rule(5);
  double s = 0.0;
  for (std::size_t i = 0; i < r5.points.size(); ++i) s += r5.weights[i] * std::pow(r5.points[i], 5);
  CHECK(s == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
  CHECK_THROWS_AS(segment_rule(-1), std::invalid_argument);
  CHECK_THROWS_AS(segment_rule(kMaxQuadratureExactness + 1), std::invalid_argument);
}

TEST_CASE("triangle rule exactness") {
  for (int d = 0; d <= 22; ++d) {
    const TriangleRule r = triangle_rule(d);
    for (double w : r.weights) CHECK(w > 0.0);
    for (int a = 0; a <= d; ++a)
      for (int b = 0; a + b <= d; ++b) {
        double s = 0.0;
        for (std::size_t i = 0; i < r.points.size(); ++i)
          s += r.weights[i] * std::pow(r.points[i].x(), a) * std::pow(r.points[i].y(), b);
        const double exact = triangle_monomial(a, b);
        CHECK(std::abs(s - exact) <= 1e-13 * exact);
      }
  }
  const TriangleRule r2 = triangle_rule(2);
  double area = 0.0, x2 = 0.0;
  for (std::size_t i = 0; i < r2.points.size(); ++i) {
    area += r2.weights[i];
    x2 += r2.weights[i] * r2.points[i].x() * r2.points[i].x();
  }
  CHECK(area == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(x2 == doctest::Approx(1.0 / 12.0).epsilon(1e-15));
}

TEST_CASE("volume basis counts and kinds") {
  for (int p = 0; p <= kMaxDegree; ++p) {
    const VolumeBasis b = make_volume_basis(p);
    CHECK(b.size() == (p + 1) * (p + 2) / 2);
    int nv = 0, ne = 0, nb = 0;
    for (int i = 0; i < b.size(); ++i) {
      nv += b.kind(i) == ShapeKind::vertex;
      ne += b.kind(i) == ShapeKind::edge;
      nb += b.kind(i) == ShapeKind::bubble;
    }
    if (p == 0) {
      CHECK(b.size() == 1);
      CHECK(b.values(Point(0.2, 0.3))(0) == 1.0);
      continue;
    }
    CHECK(nv == 3);
    CHECK(ne == 3 * (p - 1));
    CHECK(nb == (p - 1) * (p - 2) / 2);
  }
  const VolumeBasis b3(3);
  CHECK(b3.size() == 10);
  CHECK_THROWS_AS(make_volume_basis(-1), std::invalid_argument);
  CHECK_THROWS_AS(make_volume_basis(11), std::invalid_argument);
}

TEST_CASE("bubbles vanish and edge functions live on their edge") {
  const SegmentRule fr = segment_rule(30);
  for (int p = 1; p <= kMaxDegree; ++p) {
    const VolumeBasis b(p);
    for (int f = 0; f < 3; ++f) {
      const RealMatrix tr = trace_evaluate(b, f, fr.points, false);
      for (int i = 0; i < b.size(); ++i) {
        const bool lives = b.kind(i) == ShapeKind::vertex ? (i == f || i == (f + 1) % 3)
                           : b.kind(i) == ShapeKind::edge ? b.edge_of(i) == f
                                                          : false;
        if (!lives) CHECK(tr.col(i).lpNorm<Eigen::Infinity>() <= 1e-13);
      }
    }
  }
  const VolumeBasis b1(1);
  for (int f = 0; f < 3; ++f) {
    const std::vector<double> t0{0.0};
    CHECK(trace_evaluate(b1, f, t0, false)(0, f) == doctest::Approx(1.0));
  }
  CHECK_THROWS(trace_evaluate(b1, 3, std::vector<double>{0.5}, false));
}

TEST_CASE("volume Gram matrix is nonsingular") {
  for (int p = 0; p <= kMaxDegree; ++p) {
    const VolumeBasis b(p);
    const TriangleRule r = triangle_rule(2 * p);
    RealMatrix g = RealMatrix::Zero(b.size(), b.size());
    for (std::size_t i = 0; i < r.points.size(); ++i) {
      const RealVector v = b.values(r.points[i]);
      g += r.weights[i] * v * v.transpose();
    }
    CHECK((g - g.transpose()).norm() <= 1e-15 * g.norm());
    const Eigen::SelfAdjointEigenSolver<RealMatrix> es(g);
    CHECK(es.eigenvalues().minCoeff() > 1e-10 * es.eigenvalues().maxCoeff());
  }
}

TEST_CASE("gradients match finite differences") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(0.05, 0.9);
  const double h = 1e-6;
  for (int p : {1, 2, 3, 5, 8}) {
    const VolumeBasis b(p);
    for (int trial = 0; trial < 20; ++trial) {
      Point x(u(rng), u(rng));
      if (x.sum() > 0.95) x *= 0.9 / x.sum();
      const Eigen::MatrixX2d g = b.gradients(x);
      const RealVector gx = (b.values(x + Point(h, 0)) - b.values(x - Point(h, 0))) / (2 * h);
      const RealVector gy = (b.values(x + Point(0, h)) - b.values(x - Point(0, h))) / (2 * h);
      CHECK((g.col(0) - gx).lpNorm<Eigen::Infinity>() <= 1e-6);
      CHECK((g.col(1) - gy).lpNorm<Eigen::Infinity>() <= 1e-6);
    }
  }
}

TEST_CASE("face basis orthonormality and parity") {
  for (int p = 0; p <= kMaxDegree; ++p)
    for (double len : {1.0, 0.0625, 3.7}) {
      const FaceBasis fb = make_face_basis(p, len);
      const SegmentRule r = segment_rule(2 * p);
      RealMatrix g = RealMatrix::Zero(p + 1, p + 1);
      for (std::size_t i = 0; i < r.points.size(); ++i) {
        const RealVector v = fb.values(r.points[i]);
        g += len * r.weights[i] * v * v.transpose();
      }
      CHECK((g - RealMatrix::Identity(p + 1, p + 1)).lpNorm<Eigen::Infinity>() <= 1e-12);
    }
  const FaceBasis f0(0, 4.0);
  CHECK(f0.values(0.3)(0) == doctest::Approx(0.5));
  const FaceBasis f1(1, 2.0);
  for (double t : {0.1, 0.3, 0.45}) CHECK(f1.values(t)(1) == doctest::Approx(-f1.values(1.0 - t)(1)));
  CHECK_THROWS_AS(make_face_basis(2, 0.0), std::invalid_argument);
}

TEST_CASE("traces agree across a shared face") {
  const auto m = generate_structured_unit_square(3, SideTags{});
  const VolumeBasis b(1);
  const std::vector<double> t{0.0, 0.2, 0.5, 0.77, 1.0};
  for (int fi = 0; fi < m.num_faces(); ++fi) {
    const Face& face = m.faces[static_cast<std::size_t>(fi)];
    if (face.is_boundary()) continue;
    std::array<Eigen::VectorXd, 2> side;
    for (int s = 0; s < 2; ++s) {
      const int k = face.sides[s].element, lf = face.sides[s].local_face;
      // nodal interpolant of x + y in the vertex basis
      Eigen::Vector3d c;
      for (int v = 0; v < 3; ++v) c(v) = m.vertices[m.triangles[k][v]].sum();
      side[s] = trace_evaluate(b, lf, t, m.reversed[k][lf]) * c;
    }
    CHECK((side[0] - side[1]).lpNorm<Eigen::Infinity>() <= 1e-14);
    for (std::size_t q = 0; q < t.size(); ++q) CHECK(side[0](q) == doctest::Approx(m.face_point(fi, t[q]).sum()));
  }
}

TEST_CASE("Legendre face system is the mass-preconditioned Lobatto trace system") {
  // Traces of the hierarchical functions on a face span P_p(F); expressing
  // them in the orthonormal basis gives T with Gram G = T T^T, so G^{-1/2} T
  // is orthogonal.
  const int p = 4;
  const VolumeBasis b(p);
  const double len = 0.3;
  const SegmentRule r = segment_rule(2 * p + 2);
  const int face = 1;
  const RealMatrix tr = trace_evaluate(b, face, r.points, false);
  std::vector<int> live;
  for (int i = 0; i < b.size(); ++i)
    if (tr.col(i).lpNorm<Eigen::Infinity>() > 1e-12) live.push_back(i);
  REQUIRE(static_cast<int>(live.size()) == p + 1);
  const FaceBasis fb(p, len);
  RealMatrix t = RealMatrix::Zero(p + 1, p + 1), g = RealMatrix::Zero(p + 1, p + 1);
  for (std::size_t q = 0; q < r.points.size(); ++q) {
    RealVector v(p + 1);
    for (int j = 0; j <= p; ++j) v(j) = tr(static_cast<Eigen::Index>(q), live[static_cast<std::size_t>(j)]);
    t += len * r.weights[q] * v * fb.values(r.points[q]).transpose();
    g += len * r.weights[q] * v * v.transpose();
  }
  CHECK((g - t * t.transpose()).norm() <= 1e-13 * g.norm());
  const Eigen::SelfAdjointEigenSolver<RealMatrix> es(g);
  const RealMatrix o = es.operatorInverseSqrt() * t;
  CHECK((o * o.transpose() - RealMatrix::Identity(p + 1, p + 1)).norm() <= 1e-11);
}
