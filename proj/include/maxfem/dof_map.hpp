#pragma once

#include <vector>

#include "maxfem/mesh.hpp"
#include "maxfem/reference_basis.hpp"

namespace maxfem {

// Local-to-global DOF numbering. Global DOFs are attached to mesh entities
// (edges/faces/elements, plus vertices for the scalar family). Because the
// per-element reference bases are built against the global orientation of
// each entity, shared DOFs coincide between neighbors and all coupling
// coefficients are +1.
struct DofMap {
  Family family = Family::NedelecI;
  int order = 0;
  int n_global = 0;

  int per_vertex = 0, per_edge = 0, per_face = 0, per_interior = 0;
  int vertex_offset = 0, edge_offset = 0, face_offset = 0, interior_offset = 0;

  // cell_dofs[t][l] = global dof of local dof l (ordering of
  // ReferenceBasis::local_dofs).
  std::vector<std::vector<int>> cell_dofs;

  int vertex_dof(int v) const { return vertex_offset + v; }
  int edge_dof(int e, int i) const { return edge_offset + e * per_edge + i; }
  int face_dof(int f, int i) const { return face_offset + f * per_face + i; }
  int interior_dof(int t, int i) const { return interior_offset + t * per_interior + i; }
};

DofMap build_dof_map(const Mesh& m, Family family, int order);

}  // namespace maxfem
