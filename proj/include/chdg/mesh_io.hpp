#pragma once

#include <iosfwd>
#include <string>

#include "chdg/mesh.hpp"

namespace chdg {

/// Reader/writer for the subset of the MSH 2.2 ASCII layout made of nodes,
/// 2-node boundary lines and 3-node triangles. Point elements (type 15) are
/// skipped; any other element type is rejected.
///
/// Boundary tags come from the first (physical) tag of each line element:
/// a $PhysicalNames entry whose name contains "dirichlet", "neumann" or
/// "robin" (case-insensitive) maps to that kind; otherwise the numeric tag
/// 1/2/3 maps to Dirichlet/Neumann/Robin.
///
/// Clockwise triangles are reoriented. Errors are reported as MeshError with
/// the offending line number.
TriangleMesh read_mesh(std::istream& in, BoundaryKind default_kind = BoundaryKind::untagged);
TriangleMesh read_mesh_file(const std::string& path, BoundaryKind default_kind = BoundaryKind::untagged);

void write_mesh(std::ostream& out, const TriangleMesh& mesh);
void write_mesh_file(const std::string& path, const TriangleMesh& mesh);

}  // namespace chdg
