#include <doctest.h>

#include <set>

#include "maxfem/dof_map.hpp"

using namespace maxfem;

TEST_CASE("global dof counts on the single-cell cube mesh") {
  Mesh m = build_structured_cube_mesh(1);
  CHECK(build_dof_map(m, Family::NedelecI, 0).n_global == 19);   // one per edge
  CHECK(build_dof_map(m, Family::H1, 1).n_global == 8);          // one per vertex
  CHECK(build_dof_map(m, Family::NedelecI, 1).n_global == 2 * 19 + 2 * 18);
}

TEST_CASE("every global dof is referenced and cell dofs are consistent") {
  Mesh m = build_structured_cube_mesh(2);
  for (Family fam : {Family::NedelecI, Family::NedelecII}) {
    for (int p = (fam == Family::NedelecII ? 1 : 0); p <= 2; ++p) {
      DofMap dm = build_dof_map(m, fam, p);
      std::set<int> seen;
      for (const auto& cd : dm.cell_dofs)
        for (int g : cd) {
          CHECK(g >= 0);
          CHECK(g < dm.n_global);
          seen.insert(g);
        }
      CHECK(static_cast<int>(seen.size()) == dm.n_global);
    }
  }
}

TEST_CASE("shared edge dofs coincide between neighboring elements") {
  Mesh m = build_structured_cube_mesh(1);
  DofMap dm = build_dof_map(m, Family::NedelecI, 1);
  // count how many elements reference each global dof; edge dofs on the cube
  // diagonal are shared by all six tets
  std::vector<int> refs(dm.n_global, 0);
  for (const auto& cd : dm.cell_dofs)
    for (int g : cd) ++refs[g];
  int shared = 0;
  for (int r : refs)
    if (r > 1) ++shared;
  CHECK(shared > 0);
}

TEST_CASE("dof totals match entity multiplicities") {
  Mesh m = build_structured_cube_mesh(2);
  for (int p = 0; p <= 3; ++p) {
    DofMap dm = build_dof_map(m, Family::NedelecI, p);
    int expect = (p + 1) * m.n_edges() + p * (p + 1) * m.n_faces() +
                 p * (p + 1) * (p - 1) / 2 * m.n_tets();
    CHECK(dm.n_global == expect);
  }
  for (int q = 1; q <= 3; ++q) {
    DofMap dm = build_dof_map(m, Family::H1, q);
    int expect = m.n_vertices() + (q - 1) * m.n_edges() +
                 (q - 1) * (q - 2) / 2 * m.n_faces() +
                 (q - 1) * (q - 2) * (q - 3) / 6 * m.n_tets();
    CHECK(dm.n_global == expect);
  }
}
