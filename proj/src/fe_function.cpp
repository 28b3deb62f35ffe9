#include "maxfem/fe_function.hpp"

#include <stdexcept>

namespace maxfem {

FESpace make_fe_space(const Mesh& m, Family family, int order) {
  FESpace s;
  s.mesh = &m;
  s.family = family;
  s.order = order;
  s.dm = build_dof_map(m, family, order);
  return s;
}

BasisEvalCache::BasisEvalCache(Family family, int order, std::vector<Eigen::Vector3d> pts)
    : family_(family), order_(order), pts_(std::move(pts)) {
  dim_ = family == Family::H1 ? h1_dim(order) : nedelec_dim(order, family);
}

const BasisEvalCache::Entry& BasisEvalCache::get(const std::array<int, 4>& rank) {
  auto it = entries_.find(rank);
  if (it != entries_.end()) return it->second;
  const ReferenceBasis& basis = oriented_basis(family_, order_, rank);
  Entry e;
  if (family_ == Family::H1) {
    Eigen::MatrixXd vals, grads;
    basis.eval_scalar(pts_, vals, grads);
    e.values = vals;
    e.curls = grads;
  } else {
    basis.eval(pts_, e.values, e.curls);
  }
  return entries_.emplace(rank, std::move(e)).first->second;
}

void BasisEvalCache::warm(const Mesh& m) {
  for (int t = 0; t < m.n_tets(); ++t) get(vertex_rank_pattern(m.tets[t]));
}

void eval_on_element(const FEFunction& u, int t, BasisEvalCache& cache, Eigen::Matrix3Xcd& values,
                     Eigen::Matrix3Xcd& curls) {
  const FESpace& s = *u.space;
  if (s.family == Family::H1)
    throw std::logic_error("eval_on_element: vector families only");
  const Mesh& m = *s.mesh;
  const auto& entry = cache.get(vertex_rank_pattern(m.tets[t]));
  const auto& cd = s.dm.cell_dofs[t];

  Eigen::VectorXcd local(cd.size());
  for (size_t l = 0; l < cd.size(); ++l) local[l] = u.coeffs[cd[l]];

  const int npts = static_cast<int>(cache.points().size());
  ElementMap em = element_map(m, t);
  Eigen::Matrix3d Finv_t = em.F.inverse().transpose();
  Eigen::Matrix3d Fdet = em.F / em.det;

  values.resize(3, npts);
  curls.resize(3, npts);
  for (int q = 0; q < npts; ++q) {
    Eigen::Vector3cd vhat = entry.values.middleRows(3 * q, 3).cast<Complex>() * local;
    Eigen::Vector3cd chat = entry.curls.middleRows(3 * q, 3).cast<Complex>() * local;
    values.col(q) = Finv_t.cast<Complex>() * vhat;
    curls.col(q) = Fdet.cast<Complex>() * chat;
  }
}

std::vector<Eigen::Vector3d> face_reference_points(int local_face, const QuadratureRule& tri) {
  static const std::array<Eigen::Vector3d, 4> ref = {
      Eigen::Vector3d(0, 0, 0), Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(0, 1, 0),
      Eigen::Vector3d(0, 0, 1)};
  const auto& fv = kLocalFaces[local_face];
  const Eigen::Vector3d &a = ref[fv[0]], &b = ref[fv[1]], &c = ref[fv[2]];
  std::vector<Eigen::Vector3d> pts(tri.points.size());
  for (size_t q = 0; q < tri.points.size(); ++q)
    pts[q] = a + tri.points[q][0] * (b - a) + tri.points[q][1] * (c - a);
  return pts;
}

double face_jacobian(const Mesh& m, const BoundaryFace& bf) {
  const auto& fv = kLocalFaces[bf.local_face];
  const auto& tet = m.tets[bf.tet];
  Eigen::Vector3d pa = m.vertices[tet[fv[0]]];
  Eigen::Vector3d pb = m.vertices[tet[fv[1]]];
  Eigen::Vector3d pc = m.vertices[tet[fv[2]]];
  return (pb - pa).cross(pc - pa).norm();
}

}  // namespace maxfem
