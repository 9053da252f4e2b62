#pragma once

#include <array>
#include <functional>
#include <vector>

#include "chdg/basis.hpp"
#include "chdg/mesh.hpp"

namespace chdg {

/// Boundary data s(x) on a face with unit outward normal n.
using BoundaryData = std::function<Complex(const Point& x, const Point& normal)>;
/// Volume data f(x).
using VolumeData = std::function<Complex(const Point& x)>;

/// Problem data for -i k u + div q = f, -i k q + grad u = 0 with
/// u = s_D, n.q = s_N, u - n.q = s_R on the tagged boundary parts.
/// Empty closures stand for zero data.
struct ProblemConfig {
  double kappa = 1.0;
  int degree = 3;
  BoundaryData dirichlet;
  BoundaryData neumann;
  BoundaryData robin;
  VolumeData source;
};

/// Element-local real matrices in the physical element.
struct ElementMatrices {
  RealMatrix mass;  ///< (phi_a, phi_b)_K
  RealMatrix dx;    ///< (d_x phi_a, phi_b)_K
  RealMatrix dy;    ///< (d_y phi_a, phi_b)_K
  /// (phi_a, psi_i)_F for each local face: N x (p+1). Because traces of
  /// degree-p functions lie in the face space, the face mass matrix of two
  /// traces is trace[f] * trace[f]^T exactly.
  std::array<RealMatrix, 3> trace;
  std::array<Point, 3> normal;
  AffineMap map;
};

/// Mesh + polynomial spaces + all element matrices. Field unknowns of an
/// element are ordered (u, q_x, q_y), each block holding N = (p+1)(p+2)/2
/// coefficients.
class Discretization {
 public:
  Discretization(TriangleMesh mesh, int degree);

  const TriangleMesh& mesh() const { return mesh_; }
  const VolumeBasis& basis() const { return basis_; }
  int degree() const { return degree_; }
  int num_elements() const { return mesh_.num_elements(); }
  /// N, coefficients of one scalar field on one element.
  int scalar_dofs() const { return basis_.size(); }
  /// 3N, coefficients of (u, q) on one element.
  int element_dofs() const { return 3 * basis_.size(); }
  /// p + 1, coefficients on one face.
  int face_dofs() const { return degree_ + 1; }

  const ElementMatrices& element(int k) const { return elements_[static_cast<std::size_t>(k)]; }
  const TriangleRule& volume_rule() const { return volume_rule_; }
  const SegmentRule& face_rule() const { return face_rule_; }

  /// Volume part of the first-order operator (no face terms).
  Matrix volume_operator(int k, double kappa) const;
  /// Local operator of the Robin-type element problem (characteristic hybrid).
  Matrix robin_operator(int k, double kappa) const;
  /// Local operator of the Dirichlet-trace element problem (standard hybrid).
  Matrix dirichlet_operator(int k, double kappa) const;
  /// Face coefficients of u + n.q on local face f: (p+1) x 3N.
  RealMatrix outgoing_trace(int k, int f) const;
  /// Right-hand side map of the Robin-type problem for data on face f: 3N x (p+1).
  RealMatrix robin_input(int k, int f) const;
  /// Right-hand side map of the Dirichlet-trace problem for data on face f: 3N x (p+1).
  RealMatrix dirichlet_input(int k, int f) const;

  /// L2 projection of boundary data onto the face basis of local face f of k.
  Vector project_face_data(int k, int f, const BoundaryData& data) const;
  /// Element load vector (f, phi_a)_K placed in the u block, length 3N.
  Vector volume_load(int k, const VolumeData& data) const;

 private:
  TriangleMesh mesh_;
  int degree_;
  VolumeBasis basis_;
  TriangleRule volume_rule_;
  SegmentRule face_rule_;
  std::vector<ElementMatrices> elements_;
};

/// Projected boundary data for every face (empty vector on interior faces
/// and on faces whose data closure is empty). Each boundary face carries the
/// projection of the datum matching its tag.
std::vector<Vector> project_boundary_data(const Discretization& disc, const ProblemConfig& config);

}  // namespace chdg
