#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace maxfem {

// Affine map x = F x_ref + b from the reference tetrahedron
// (0, e1, e2, e3) onto a physical element.
struct ElementMap {
  Eigen::Matrix3d F;
  Eigen::Vector3d b;
  double det = 0.0;       // > 0 for valid elements
  double diameter = 0.0;  // max pairwise vertex distance

  Eigen::Vector3d apply(const Eigen::Vector3d& x_ref) const { return F * x_ref + b; }
};

struct AxisBox {
  Eigen::Vector3d lo;
  Eigen::Vector3d hi;
  bool contains(const Eigen::Vector3d& x) const {
    return (x.array() >= lo.array()).all() && (x.array() <= hi.array()).all();
  }
};

struct BoundaryFace {
  int face = -1;        // global face id
  int tet = -1;         // adjacent element
  int local_face = -1;  // local face index in that element
  int tag = 0;          // boundary patch tag (cube side 1..6)
  Eigen::Vector3d normal;  // unit outward normal
};

// Local entity numbering on the reference tetrahedron.
inline constexpr std::array<std::array<int, 2>, 6> kLocalEdges = {
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
// Local face i is opposite local vertex i.
inline constexpr std::array<std::array<int, 3>, 4> kLocalFaces = {
    {{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}}};

// Conforming tetrahedral mesh with subdomain tags. Edge and face vertex
// tuples are stored with ascending vertex ids; connectivity is rebuilt
// deterministically from the element list.
class Mesh {
 public:
  std::vector<Eigen::Vector3d> vertices;
  std::vector<std::array<int, 4>> tets;  // positive orientation
  std::vector<int> tet_tags;

  std::vector<std::array<int, 2>> edges;
  std::vector<std::array<int, 3>> faces;
  std::vector<std::array<int, 6>> tet_to_edges;
  std::vector<std::array<int, 4>> tet_to_faces;
  std::vector<BoundaryFace> boundary_faces;
  std::vector<int> interface_faces;  // interior faces joining different tags

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_tets() const { return static_cast<int>(tets.size()); }
  int n_edges() const { return static_cast<int>(edges.size()); }
  int n_faces() const { return static_cast<int>(faces.size()); }

  // Rebuilds edges/faces/adjacency/boundary data from vertices+tets.
  // Throws std::runtime_error on non-conforming or inverted elements.
  void build_connectivity();

  double max_diameter() const;
  double total_volume() const;

  // First (lowest-id) element adjacent to the given entity.
  int edge_owner(int edge) const { return edge_owner_[edge]; }
  int face_owner(int face) const { return face_owner_[face]; }

  // Plain-text dump, one section per entity kind, 17 significant digits.
  std::string dump() const;

 private:
  std::vector<int> edge_owner_;
  std::vector<int> face_owner_;
};

// Unit cube [0,1]^3, n subdivisions per axis, each cell split into 6
// tetrahedra sharing the cell diagonal. If inner_box is given its corners
// must be grid-aligned; elements inside it get tag 1, the rest tag 2.
// Without inner_box all elements are tagged 1.
Mesh build_structured_cube_mesh(int n, const std::optional<AxisBox>& inner_box = std::nullopt);

// Splits every element into 8 children (corner cut-off plus octahedron
// split along a fixed interior diagonal). Tags are inherited.
Mesh refine_uniform(const Mesh& m);

// Affine map of element t. Throws on degenerate elements.
ElementMap element_map(const Mesh& m, int t);

}  // namespace maxfem
