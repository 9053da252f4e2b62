#pragma once

#include "chdg/mesh.hpp"
#include "chdg/types.hpp"

namespace chdg {

struct MeshCounts {
  long triangles = 0;
  long faces = 0;
  long boundary_faces = 0;
  long interior_faces = 0;
  long dirichlet_faces = 0;
  long neumann_faces = 0;
  long robin_faces = 0;

  /// 3 N_tri = N_bnd + 2 N_int and N_fce = N_bnd + N_int
  bool identities_hold() const {
    return 3 * triangles == boundary_faces + 2 * interior_faces && faces == boundary_faces + interior_faces;
  }
};

MeshCounts mesh_counts(const TriangleMesh& mesh);

inline long dofs_per_triangle(int p) { return (p + 1L) * (p + 2L) / 2; }
inline long dofs_per_face(int p) { return p + 1L; }

struct MethodCounts {
  long dg = 0;
  long hdg = 0;
  long chdg = 0;
};

MethodCounts dof_counts(long triangles, long faces, int p);

/// Upper bounds N_tri (7 N_tri_dof^2 + 54 N_fce_dof^2), 5 N_fce N_fce_dof^2
/// and 8 N_fce N_fce_dof^2.
MethodCounts nnz_upper_bounds(long triangles, long faces, int p);

/// Block-structural nonzero counts of the reduced systems, counting each
/// coupled face block as dense. The DG entry is left at zero since its
/// structure depends on the volume basis.
MethodCounts structural_nnz(const MeshCounts& counts, int p);

/// Stored entries of `a` in block-sparse storage with square blocks of the
/// given size: every block holding a nonzero counts as dense.
long block_nnz(const SparseMatrix& a, int block);

}  // namespace chdg
