#pragma once

#include <span>
#include <vector>

#include "chdg/types.hpp"

namespace chdg {

/// Legendre polynomials P_0..P_n at x with first and second derivatives.
struct LegendreTable {
  std::vector<double> value, d1, d2;
};
LegendreTable legendre(int n, double x);

/// Gauss rule on [0, 1].
struct SegmentRule {
  std::vector<double> points;
  std::vector<double> weights;
  int exactness = 0;
};

/// Rule on the reference triangle (0,0), (1,0), (0,1).
struct TriangleRule {
  std::vector<Point> points;
  std::vector<double> weights;
  int exactness = 0;
};

inline constexpr int kMaxQuadratureExactness = 60;

/// Gauss-Legendre rule exact for polynomials of degree <= d on [0, 1].
SegmentRule segment_rule(int d);

/// Collapsed (Duffy) Gauss rule exact for polynomials of total degree <= d.
TriangleRule triangle_rule(int d);

enum class ShapeKind { vertex, edge, bubble };

inline constexpr int kMaxDegree = 10;

/// Hierarchical basis of P_p on the reference triangle: vertex functions are
/// the barycentric coordinates, edge functions are l_a l_b times the Lobatto
/// kernel in (l_b - l_a), bubbles are l_0 l_1 l_2 times products of Legendre
/// polynomials. For p = 0 the basis is the constant 1.
///
/// Edge e joins reference vertices e and (e+1)%3, matching the local face
/// numbering of the mesh.
class VolumeBasis {
 public:
  explicit VolumeBasis(int p);

  int degree() const { return p_; }
  int size() const { return static_cast<int>(kinds_.size()); }
  ShapeKind kind(int i) const { return kinds_[static_cast<std::size_t>(i)]; }
  /// Edge index of an edge function, -1 otherwise.
  int edge_of(int i) const { return edges_[static_cast<std::size_t>(i)]; }

  /// Values of all shape functions at a reference point.
  RealVector values(const Point& xi) const;
  /// Reference gradients, one row per shape function.
  Eigen::MatrixX2d gradients(const Point& xi) const;

 private:
  void evaluate(const Point& xi, RealVector* val, Eigen::MatrixX2d* grad) const;

  int p_;
  std::vector<ShapeKind> kinds_;
  std::vector<int> edges_;
  std::vector<double> bubble_scale_;
};

VolumeBasis make_volume_basis(int p);

/// Orthonormal Legendre family on a physical face of length L, in the
/// canonical coordinate t in [0, 1]: phi_i(t) = sqrt((2i+1)/L) P_i(2t-1).
class FaceBasis {
 public:
  FaceBasis(int p, double length);

  int degree() const { return p_; }
  int size() const { return p_ + 1; }
  double length() const { return length_; }
  RealVector values(double t) const;

 private:
  int p_;
  double length_;
};

FaceBasis make_face_basis(int p, double length);

/// Reference point of local face `face` at canonical coordinate t. When
/// `reversed` is set the canonical direction runs from vertex (face+1)%3 to
/// vertex face.
Point reference_face_point(int face, double t, bool reversed);

/// Values of the volume shape functions at face points given in canonical
/// coordinates: one row per point, one column per shape function.
RealMatrix trace_evaluate(const VolumeBasis& basis, int face, std::span<const double> t, bool reversed);

}  // namespace chdg
