#include "chdg/basis.hpp"

#include <array>
#include <cmath>

namespace chdg {

LegendreTable legendre(int n, double x) {
  LegendreTable t;
  const auto size = static_cast<std::size_t>(n + 1);
  t.value.assign(size, 0.0);
  t.d1.assign(size, 0.0);
  t.d2.assign(size, 0.0);
  t.value[0] = 1.0;
  if (n >= 1) {
    t.value[1] = x;
    t.d1[1] = 1.0;
  }
  for (int k = 1; k < n; ++k) {
    const auto i = static_cast<std::size_t>(k);
    const double a = 2.0 * k + 1.0;
    t.value[i + 1] = (a * x * t.value[i] - k * t.value[i - 1]) / (k + 1.0);
    t.d1[i + 1] = (a * (t.value[i] + x * t.d1[i]) - k * t.d1[i - 1]) / (k + 1.0);
    t.d2[i + 1] = (a * (2.0 * t.d1[i] + x * t.d2[i]) - k * t.d2[i - 1]) / (k + 1.0);
  }
  return t;
}

namespace {

const std::array<Point, 3> kRefVertices = {Point(0.0, 0.0), Point(1.0, 0.0), Point(0.0, 1.0)};
const std::array<Point, 3> kBaryGrad = {Point(-1.0, -1.0), Point(1.0, 0.0), Point(0.0, 1.0)};

// Lobatto kernel phi_{k-2}(s) = -2 sqrt(2(2k-1)) / (k(k-1)) P'_{k-1}(s), so that
// l_k(s) = (1 - s^2)/4 phi_{k-2}(s).
double kernel_scale(int k) { return -2.0 * std::sqrt(2.0 * (2.0 * k - 1.0)) / (k * (k - 1.0)); }

}  // namespace

VolumeBasis::VolumeBasis(int p) : p_(p) {
  if (p < 0 || p > kMaxDegree)
    throw std::invalid_argument("polynomial degree " + std::to_string(p) + " outside supported range [0, " +
                                std::to_string(kMaxDegree) + "]");
  if (p == 0) {
    kinds_.push_back(ShapeKind::vertex);
    edges_.push_back(-1);
    return;
  }
  for (int v = 0; v < 3; ++v) {
    kinds_.push_back(ShapeKind::vertex);
    edges_.push_back(-1);
  }
  for (int e = 0; e < 3; ++e) {
    for (int k = 2; k <= p; ++k) {
      kinds_.push_back(ShapeKind::edge);
      edges_.push_back(e);
    }
  }
  for (int total = 0; total <= p - 3; ++total) {
    for (int i = total; i >= 0; --i) {
      kinds_.push_back(ShapeKind::bubble);
      edges_.push_back(-1);
    }
  }
  // Bubbles are normalized to unit L2 norm on the reference triangle.
  const int nb = (p - 1) * (p - 2) / 2;
  bubble_scale_.assign(static_cast<std::size_t>(nb), 1.0);
  if (nb == 0) return;
  const TriangleRule rule = triangle_rule(2 * p);
  RealVector norm2 = RealVector::Zero(nb);
  for (std::size_t q = 0; q < rule.points.size(); ++q)
    norm2 += rule.weights[q] * values(rule.points[q]).tail(nb).cwiseAbs2();
  for (int i = 0; i < nb; ++i) bubble_scale_[static_cast<std::size_t>(i)] = 1.0 / std::sqrt(norm2(i));
}

void VolumeBasis::evaluate(const Point& xi, RealVector* val, Eigen::MatrixX2d* grad) const {
  const int n = size();
  if (val) val->resize(n);
  if (grad) grad->resize(n, 2);
  if (p_ == 0) {
    if (val) (*val)(0) = 1.0;
    if (grad) grad->setZero();
    return;
  }
  const std::array<double, 3> lam = {1.0 - xi.x() - xi.y(), xi.x(), xi.y()};
  int idx = 0;
  for (int v = 0; v < 3; ++v, ++idx) {
    if (val) (*val)(idx) = lam[v];
    if (grad) grad->row(idx) = kBaryGrad[v].transpose();
  }
  for (int e = 0; e < 3; ++e) {
    const int a = e, b = (e + 1) % 3;
    const double s = lam[b] - lam[a];
    const Point ds = kBaryGrad[b] - kBaryGrad[a];
    const Point dab = lam[b] * kBaryGrad[a] + lam[a] * kBaryGrad[b];
    const LegendreTable L = legendre(p_ - 1, s);
    for (int k = 2; k <= p_; ++k, ++idx) {
      const double c = kernel_scale(k);
      const double phi = c * L.d1[static_cast<std::size_t>(k - 1)];
      const double dphi = c * L.d2[static_cast<std::size_t>(k - 1)];
      if (val) (*val)(idx) = lam[a] * lam[b] * phi;
      if (grad) grad->row(idx) = (phi * dab + lam[a] * lam[b] * dphi * ds).transpose();
    }
  }
  if (p_ >= 3) {
    const double s = lam[1] - lam[0];
    const double t = 2.0 * lam[2] - 1.0;
    const Point ds(2.0, 1.0), dt(0.0, 2.0);
    const double b = lam[0] * lam[1] * lam[2];
    const Point db = lam[1] * lam[2] * kBaryGrad[0] + lam[0] * lam[2] * kBaryGrad[1] + lam[0] * lam[1] * kBaryGrad[2];
    const LegendreTable Ls = legendre(p_ - 3, s);
    const LegendreTable Lt = legendre(p_ - 3, t);
    for (int total = 0; total <= p_ - 3; ++total) {
      for (int i = total; i >= 0; --i, ++idx) {
        const auto ii = static_cast<std::size_t>(i), jj = static_cast<std::size_t>(total - i);
        const double q = bubble_scale_[static_cast<std::size_t>(idx - 3 * p_)] * Ls.value[ii] * Lt.value[jj];
        if (val) (*val)(idx) = b * q;
        if (grad) {
          const Point dq = bubble_scale_[static_cast<std::size_t>(idx - 3 * p_)] *
                           (Ls.d1[ii] * Lt.value[jj] * ds + Ls.value[ii] * Lt.d1[jj] * dt);
          grad->row(idx) = (q * db + b * dq).transpose();
        }
      }
    }
  }
}

RealVector VolumeBasis::values(const Point& xi) const {
  RealVector v;
  evaluate(xi, &v, nullptr);
  return v;
}

Eigen::MatrixX2d VolumeBasis::gradients(const Point& xi) const {
  Eigen::MatrixX2d g;
  evaluate(xi, nullptr, &g);
  return g;
}

VolumeBasis make_volume_basis(int p) { return VolumeBasis(p); }

FaceBasis::FaceBasis(int p, double length) : p_(p), length_(length) {
  if (p < 0 || p > kMaxDegree) throw std::invalid_argument("face basis degree out of range");
  if (!(length > 0.0)) throw std::invalid_argument("face basis on a degenerate face");
}

RealVector FaceBasis::values(double t) const {
  const LegendreTable L = legendre(p_, 2.0 * t - 1.0);
  RealVector v(p_ + 1);
  for (int i = 0; i <= p_; ++i) v(i) = std::sqrt((2.0 * i + 1.0) / length_) * L.value[static_cast<std::size_t>(i)];
  return v;
}

FaceBasis make_face_basis(int p, double length) { return FaceBasis(p, length); }

Point reference_face_point(int face, double t, bool reversed) {
  const double s = reversed ? 1.0 - t : t;
  const Point& a = kRefVertices[static_cast<std::size_t>(face)];
  const Point& b = kRefVertices[static_cast<std::size_t>((face + 1) % 3)];
  return a + s * (b - a);
}

RealMatrix trace_evaluate(const VolumeBasis& basis, int face, std::span<const double> t, bool reversed) {
  if (face < 0 || face > 2) throw std::invalid_argument("local face index must be in 0..2");
  RealMatrix table(static_cast<Eigen::Index>(t.size()), basis.size());
  for (std::size_t q = 0; q < t.size(); ++q)
    table.row(static_cast<Eigen::Index>(q)) = basis.values(reference_face_point(face, t[q], reversed)).transpose();
  return table;
}

}  // namespace chdg
