#include "maxfem/dof_map.hpp"

#include <stdexcept>

namespace maxfem {

DofMap build_dof_map(const Mesh& m, Family family, int order) {
  const ReferenceBasis& basis = oriented_basis(family, order, {0, 1, 2, 3});

  DofMap dm;
  dm.family = family;
  dm.order = order;
  dm.per_vertex = family == Family::H1 ? 1 : 0;
  dm.per_edge = basis.dofs_per_edge;
  dm.per_face = basis.dofs_per_face;
  dm.per_interior = basis.dofs_per_interior;

  dm.vertex_offset = 0;
  dm.edge_offset = dm.per_vertex * m.n_vertices();
  dm.face_offset = dm.edge_offset + dm.per_edge * m.n_edges();
  dm.interior_offset = dm.face_offset + dm.per_face * m.n_faces();
  dm.n_global = dm.interior_offset + dm.per_interior * m.n_tets();

  dm.cell_dofs.resize(m.n_tets());
  for (int t = 0; t < m.n_tets(); ++t) {
    auto& cd = dm.cell_dofs[t];
    cd.reserve(basis.local_dofs.size());
    for (const LocalDof& ld : basis.local_dofs) {
      switch (ld.kind) {
        case EntityKind::Vertex:
          cd.push_back(dm.vertex_dof(m.tets[t][ld.entity]));
          break;
        case EntityKind::Edge:
          cd.push_back(dm.edge_dof(m.tet_to_edges[t][ld.entity], ld.index));
          break;
        case EntityKind::Face:
          cd.push_back(dm.face_dof(m.tet_to_faces[t][ld.entity], ld.index));
          break;
        case EntityKind::Interior:
          cd.push_back(dm.interior_dof(t, ld.index));
          break;
      }
    }
    if (cd.size() != static_cast<size_t>(basis.dim))
      throw std::logic_error("build_dof_map: local dof count mismatch");
  }
  return dm;
}

}  // namespace maxfem
