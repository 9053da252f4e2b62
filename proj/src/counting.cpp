#include "chdg/counting.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace chdg {

MeshCounts mesh_counts(const TriangleMesh& mesh) {
  MeshCounts c;
  c.triangles = mesh.num_elements();
  c.faces = mesh.num_faces();
  for (const Face& f : mesh.faces) {
    if (!f.is_boundary()) {
      ++c.interior_faces;
      continue;
    }
    ++c.boundary_faces;
    c.dirichlet_faces += f.kind == BoundaryKind::dirichlet;
    c.neumann_faces += f.kind == BoundaryKind::neumann;
    c.robin_faces += f.kind == BoundaryKind::robin;
  }
  return c;
}

MethodCounts dof_counts(long triangles, long faces, int p) {
  return {3 * triangles * dofs_per_triangle(p), faces * dofs_per_face(p), 3 * triangles * dofs_per_face(p)};
}

MethodCounts nnz_upper_bounds(long triangles, long faces, int p) {
  const long nt = dofs_per_triangle(p), nf = dofs_per_face(p);
  return {triangles * (7 * nt * nt + 54 * nf * nf), faces * 5 * nf * nf, faces * 8 * nf * nf};
}

MethodCounts structural_nnz(const MeshCounts& c, int p) {
  const long b = dofs_per_face(p) * dofs_per_face(p);
  MethodCounts out;
  out.hdg = b * (5 * c.interior_faces + 3 * (c.robin_faces + c.neumann_faces) + c.dirichlet_faces);
  out.chdg = b * (8 * c.interior_faces + c.robin_faces + 3 * (c.dirichlet_faces + c.neumann_faces));
  return out;
}

long block_nnz(const SparseMatrix& a, int block) {
  if (block < 1 || a.rows() % block || a.cols() % block) throw std::invalid_argument("block size does not tile the matrix");
  std::vector<long> keys;
  keys.reserve(static_cast<std::size_t>(a.nonZeros()));
  const long nb = a.cols() / block;
  for (int j = 0; j < a.outerSize(); ++j)
    for (SparseMatrix::InnerIterator it(a, j); it; ++it)
      if (it.value() != 0.0) keys.push_back(it.row() / block * nb + it.col() / block);
  std::sort(keys.begin(), keys.end());
  const auto distinct = std::unique(keys.begin(), keys.end()) - keys.begin();
  return static_cast<long>(distinct) * block * block;
}

}  // namespace chdg
