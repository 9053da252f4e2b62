#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "chdg/types.hpp"

namespace chdg {

enum class BoundaryKind : std::uint8_t { interior, dirichlet, neumann, robin, untagged };

std::string to_string(BoundaryKind kind);

/// One owner of a face: element index and local face index in 0..2.
struct FaceSide {
  int element = -1;
  int local_face = -1;
};

/// Mesh edge. `vertices` is sorted, and the canonical face coordinate
/// t in [0, 1] runs from vertices[0] to vertices[1].
struct Face {
  std::array<int, 2> vertices{};
  std::array<FaceSide, 2> sides{};
  int num_sides = 0;
  BoundaryKind kind = BoundaryKind::untagged;
  double length = 0.0;

  bool is_boundary() const { return num_sides == 1; }
};

/// Conforming triangular mesh. Local face f of a triangle joins its local
/// vertices f and (f + 1) % 3; triangles are stored counterclockwise.
///
/// The data members are public so that diagnostics can be exercised on
/// deliberately corrupted meshes; everything else treats a mesh as immutable.
struct TriangleMesh {
  std::vector<Point> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<Face> faces;
  /// element -> local face -> global face index
  std::vector<std::array<int, 3>> element_faces;
  /// element -> local face -> unit outward normal
  std::vector<std::array<Point, 3>> normals;
  /// element -> local face -> true when the local edge direction (vertex f to
  /// vertex f+1) is opposite to the canonical face direction
  std::vector<std::array<bool, 3>> reversed;
  std::vector<double> areas;
  double h_char = 0.0;

  int num_elements() const { return static_cast<int>(triangles.size()); }
  int num_faces() const { return static_cast<int>(faces.size()); }
  int num_boundary_faces() const;
  int num_interior_faces() const { return num_faces() - num_boundary_faces(); }

  const Face& face_of(int element, int local_face) const {
    return faces[static_cast<std::size_t>(element_faces[element][local_face])];
  }
  /// The other owner of the face seen from (element, local_face). Only valid
  /// on interior faces.
  FaceSide neighbor(int element, int local_face) const;
  BoundaryKind kind(int element, int local_face) const { return face_of(element, local_face).kind; }

  /// Physical point of the canonical face coordinate t on a face.
  Point face_point(int face, double t) const;
};

/// Boundary edge with an explicit tag.
struct TaggedEdge {
  int a = 0;
  int b = 0;
  BoundaryKind kind = BoundaryKind::untagged;
};

class MeshError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Builds connectivity, normals and orientation data. Triangles must be
/// counterclockwise. Boundary faces not listed in `tagged` get `default_kind`.
/// Throws MeshError on non-conforming connectivity or tags on interior faces.
TriangleMesh build_mesh(std::vector<Point> vertices, std::vector<std::array<int, 3>> triangles,
                        const std::vector<TaggedEdge>& tagged,
                        BoundaryKind default_kind = BoundaryKind::untagged);

/// Boundary tags of the four sides of an axis-aligned rectangle.
struct SideTags {
  BoundaryKind left = BoundaryKind::robin;
  BoundaryKind right = BoundaryKind::robin;
  BoundaryKind bottom = BoundaryKind::robin;
  BoundaryKind top = BoundaryKind::robin;

  static SideTags all(BoundaryKind kind) { return {kind, kind, kind, kind}; }
};

/// Structured mesh of ]0,lx[ x ]0,ly[: an nx x ny grid of cells, each split
/// along its (x0,y0)-(x1,y1) diagonal.
TriangleMesh generate_rectangle(double lx, double ly, int nx, int ny, const SideTags& tags);

TriangleMesh generate_structured_unit_square(int n, const SideTags& tags);

struct ValidationReport {
  bool ok = true;
  std::string message;
};

/// Checks the mesh invariants and reports the first violation.
ValidationReport validate(const TriangleMesh& mesh);

/// Locates physical points in a mesh using a uniform bucket grid.
class PointLocator {
 public:
  explicit PointLocator(const TriangleMesh& mesh);

  struct Location {
    int element = -1;
    Point reference;  ///< coordinates on the reference triangle (0,0),(1,0),(0,1)
  };

  /// Returns std::nullopt when the point is outside the mesh (with a small tolerance).
  std::optional<Location> locate(const Point& x) const;

 private:
  const TriangleMesh* mesh_;
  Point lo_, hi_;
  int nx_ = 1, ny_ = 1;
  std::vector<std::vector<int>> buckets_;
};

/// Affine map data of an element: x = v0 + J * xi.
struct AffineMap {
  Point origin;
  Eigen::Matrix2d jacobian;
  Eigen::Matrix2d inverse;
  double det = 0.0;

  Point to_physical(const Point& xi) const { return origin + jacobian * xi; }
  Point to_reference(const Point& x) const { return inverse * (x - origin); }
};

AffineMap affine_map(const TriangleMesh& mesh, int element);

}  // namespace chdg
