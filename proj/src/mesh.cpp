#include "maxfem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

namespace maxfem {

namespace {

std::array<int, 2> sorted2(int a, int b) { return a < b ? std::array<int, 2>{a, b} : std::array<int, 2>{b, a}; }

std::array<int, 3> sorted3(int a, int b, int c) {
  std::array<int, 3> f{a, b, c};
  std::sort(f.begin(), f.end());
  return f;
}

double tet_det(const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Eigen::Vector3d& c,
               const Eigen::Vector3d& d) {
  Eigen::Matrix3d F;
  F.col(0) = b - a;
  F.col(1) = c - a;
  F.col(2) = d - a;
  return F.determinant();
}

}  // namespace

void Mesh::build_connectivity() {
  edges.clear();
  faces.clear();
  tet_to_edges.assign(tets.size(), {});
  tet_to_faces.assign(tets.size(), {});
  boundary_faces.clear();
  interface_faces.clear();
  edge_owner_.clear();
  face_owner_.clear();

  if (tet_tags.size() != tets.size()) throw std::runtime_error("mesh: tag list size mismatch");

  std::map<std::array<int, 2>, int> edge_ids;
  std::map<std::array<int, 3>, int> face_ids;
  // adjacency per face: (tet, local_face), up to two entries
  std::vector<std::array<std::array<int, 2>, 2>> face_adj;
  std::vector<int> face_count;

  for (int t = 0; t < n_tets(); ++t) {
    const auto& tv = tets[t];
    if (tet_det(vertices[tv[0]], vertices[tv[1]], vertices[tv[2]], vertices[tv[3]]) <= 0.0)
      throw std::runtime_error("mesh: element " + std::to_string(t) + " is degenerate or inverted");
    for (int le = 0; le < 6; ++le) {
      auto key = sorted2(tv[kLocalEdges[le][0]], tv[kLocalEdges[le][1]]);
      auto [it, inserted] = edge_ids.try_emplace(key, static_cast<int>(edges.size()));
      if (inserted) {
        edges.push_back(key);
        edge_owner_.push_back(t);
      }
      tet_to_edges[t][le] = it->second;
    }
    for (int lf = 0; lf < 4; ++lf) {
      auto key = sorted3(tv[kLocalFaces[lf][0]], tv[kLocalFaces[lf][1]], tv[kLocalFaces[lf][2]]);
      auto [it, inserted] = face_ids.try_emplace(key, static_cast<int>(faces.size()));
      if (inserted) {
        faces.push_back(key);
        face_owner_.push_back(t);
        face_adj.push_back({});
        face_count.push_back(0);
      }
      int f = it->second;
      if (face_count[f] >= 2)
        throw std::runtime_error("mesh: face shared by more than two elements (non-conforming)");
      face_adj[f][face_count[f]++] = {t, lf};
      tet_to_faces[t][lf] = f;
    }
  }

  for (int f = 0; f < n_faces(); ++f) {
    if (face_count[f] == 1) {
      BoundaryFace bf;
      bf.face = f;
      bf.tet = face_adj[f][0][0];
      bf.local_face = face_adj[f][0][1];
      const auto& tv = tets[bf.tet];
      const auto& lf = kLocalFaces[bf.local_face];
      Eigen::Vector3d a = vertices[tv[lf[0]]];
      Eigen::Vector3d u = vertices[tv[lf[1]]] - a;
      Eigen::Vector3d v = vertices[tv[lf[2]]] - a;
      Eigen::Vector3d n = u.cross(v).normalized();
      // orient outward: away from the opposite vertex
      Eigen::Vector3d opp = vertices[tv[bf.local_face]];
      if (n.dot(a - opp) < 0.0) n = -n;
      bf.normal = n;
      int axis = 0;
      n.cwiseAbs().maxCoeff(&axis);
      bf.tag = 2 * axis + (n[axis] > 0.0 ? 2 : 1);
      boundary_faces.push_back(bf);
    } else {
      int t0 = face_adj[f][0][0], t1 = face_adj[f][1][0];
      if (tet_tags[t0] != tet_tags[t1]) interface_faces.push_back(f);
    }
  }
}

double Mesh::max_diameter() const {
  double h = 0.0;
  for (int t = 0; t < n_tets(); ++t) {
    for (int a = 0; a < 4; ++a)
      for (int b = a + 1; b < 4; ++b)
        h = std::max(h, (vertices[tets[t][a]] - vertices[tets[t][b]]).norm());
  }
  return h;
}

double Mesh::total_volume() const {
  double v = 0.0;
  for (int t = 0; t < n_tets(); ++t) {
    const auto& tv = tets[t];
    v += tet_det(vertices[tv[0]], vertices[tv[1]], vertices[tv[2]], vertices[tv[3]]) / 6.0;
  }
  return v;
}

std::string Mesh::dump() const {
  std::ostringstream os;
  char buf[96];
  os << "vertices " << n_vertices() << "\n";
  for (const auto& v : vertices) {
    std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g\n", v[0], v[1], v[2]);
    os << buf;
  }
  os << "tets " << n_tets() << "\n";
  for (int t = 0; t < n_tets(); ++t)
    os << tets[t][0] << ' ' << tets[t][1] << ' ' << tets[t][2] << ' ' << tets[t][3] << ' '
       << tet_tags[t] << "\n";
  os << "edges " << n_edges() << "\n";
  for (const auto& e : edges) os << e[0] << ' ' << e[1] << "\n";
  os << "faces " << n_faces() << "\n";
  for (const auto& f : faces) os << f[0] << ' ' << f[1] << ' ' << f[2] << "\n";
  os << "boundary_faces " << boundary_faces.size() << "\n";
  for (const auto& bf : boundary_faces) os << bf.face << ' ' << bf.tag << "\n";
  return os.str();
}

Mesh build_structured_cube_mesh(int n, const std::optional<AxisBox>& inner_box) {
  if (n < 1) throw std::invalid_argument("build_structured_cube_mesh: n must be >= 1");
  if (inner_box) {
    for (int d = 0; d < 3; ++d) {
      for (double c : {inner_box->lo[d], inner_box->hi[d]}) {
        double scaled = c * n;
        if (std::abs(scaled - std::round(scaled)) > 1e-9)
          throw std::invalid_argument(
              "build_structured_cube_mesh: inner_box coordinate " + std::to_string(c) +
              " is not a multiple of 1/" + std::to_string(n));
      }
    }
  }

  Mesh m;
  const int s = n + 1;
  m.vertices.reserve(static_cast<size_t>(s) * s * s);
  for (int z = 0; z < s; ++z)
    for (int y = 0; y < s; ++y)
      for (int x = 0; x < s; ++x)
        m.vertices.emplace_back(double(x) / n, double(y) / n, double(z) / n);

  auto vid = [&](int x, int y, int z) { return x + s * (y + s * z); };
  // 6 tetrahedra per cell, all sharing the cell diagonal
  static constexpr std::array<std::array<int, 3>, 6> perms = {
      {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};

  for (int z = 0; z < n; ++z)
    for (int y = 0; y < n; ++y)
      for (int x = 0; x < n; ++x) {
        for (const auto& perm : perms) {
          std::array<int, 3> c = {x, y, z};
          std::array<int, 4> tv;
          tv[0] = vid(c[0], c[1], c[2]);
          for (int j = 0; j < 3; ++j) {
            c[perm[j]] += 1;
            tv[j + 1] = vid(c[0], c[1], c[2]);
          }
          if (tet_det(m.vertices[tv[0]], m.vertices[tv[1]], m.vertices[tv[2]],
                      m.vertices[tv[3]]) < 0.0)
            std::swap(tv[2], tv[3]);
          m.tets.push_back(tv);
          if (inner_box) {
            Eigen::Vector3d centroid = (m.vertices[tv[0]] + m.vertices[tv[1]] +
                                        m.vertices[tv[2]] + m.vertices[tv[3]]) /
                                       4.0;
            m.tet_tags.push_back(inner_box->contains(centroid) ? 1 : 2);
          } else {
            m.tet_tags.push_back(1);
          }
        }
      }

  m.build_connectivity();
  return m;
}

Mesh refine_uniform(const Mesh& m) {
  Mesh r;
  r.vertices = m.vertices;
  std::map<std::array<int, 2>, int> midpoint;
  auto mid = [&](int a, int b) {
    auto key = sorted2(a, b);
    auto [it, inserted] = midpoint.try_emplace(key, r.n_vertices());
    if (inserted) r.vertices.push_back(0.5 * (m.vertices[a] + m.vertices[b]));
    return it->second;
  };

  auto push_oriented = [&](std::array<int, 4> tv, int tag) {
    if (tet_det(r.vertices[tv[0]], r.vertices[tv[1]], r.vertices[tv[2]], r.vertices[tv[3]]) < 0.0)
      std::swap(tv[2], tv[3]);
    r.tets.push_back(tv);
    r.tet_tags.push_back(tag);
  };

  for (int t = 0; t < m.n_tets(); ++t) {
    std::array<int, 4> w = m.tets[t];
    std::sort(w.begin(), w.end());
    int m01 = mid(w[0], w[1]), m02 = mid(w[0], w[2]), m03 = mid(w[0], w[3]);
    int m12 = mid(w[1], w[2]), m13 = mid(w[1], w[3]), m23 = mid(w[2], w[3]);
    int tag = m.tet_tags[t];

    push_oriented({w[0], m01, m02, m03}, tag);
    push_oriented({w[1], m01, m12, m13}, tag);
    push_oriented({w[2], m02, m12, m23}, tag);
    push_oriented({w[3], m03, m13, m23}, tag);

    // octahedron: split along the shortest interior diagonal (fixed tie order)
    const std::array<std::array<int, 2>, 3> diag = {{{m01, m23}, {m02, m13}, {m03, m12}}};
    const std::array<std::array<int, 4>, 3> ring = {
        {{m02, m03, m13, m12}, {m01, m03, m23, m12}, {m01, m02, m23, m13}}};
    int best = 0;
    double best_len = (r.vertices[diag[0][0]] - r.vertices[diag[0][1]]).squaredNorm();
    for (int d = 1; d < 3; ++d) {
      double len = (r.vertices[diag[d][0]] - r.vertices[diag[d][1]]).squaredNorm();
      if (len < best_len * (1.0 - 1e-12)) {
        best = d;
        best_len = len;
      }
    }
    for (int e = 0; e < 4; ++e)
      push_oriented({diag[best][0], diag[best][1], ring[best][e], ring[best][(e + 1) % 4]}, tag);
  }

  r.build_connectivity();
  return r;
}

ElementMap element_map(const Mesh& m, int t) {
  if (t < 0 || t >= m.n_tets()) throw std::invalid_argument("element_map: element id out of range");
  const auto& tv = m.tets[t];
  ElementMap em;
  em.b = m.vertices[tv[0]];
  em.F.col(0) = m.vertices[tv[1]] - em.b;
  em.F.col(1) = m.vertices[tv[2]] - em.b;
  em.F.col(2) = m.vertices[tv[3]] - em.b;
  em.det = em.F.determinant();
  em.diameter = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b)
      em.diameter = std::max(em.diameter, (m.vertices[tv[a]] - m.vertices[tv[b]]).norm());
  if (em.det <= 1e-14 * std::pow(em.diameter, 3))
    throw std::runtime_error("element_map: element " + std::to_string(t) + " is degenerate");
  return em;
}

}  // namespace maxfem
