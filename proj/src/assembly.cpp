#include "maxfem/assembly.hpp"

#include <array>
#include <exception>
#include <memory>
#include <stdexcept>
#include <thread>

#include "maxfem/quadrature.hpp"

namespace maxfem {

namespace {

// Everything the per-element kernels read; immutable during the parallel loop.
struct Workspace {
  const Mesh* mesh = nullptr;
  Family family;
  int order = 0;
  int dim = 0;

  QuadratureRule vol_rule;
  QuadratureRule tri_rule;
  std::unique_ptr<BasisEvalCache> vol_cache;
  std::array<std::unique_ptr<BasisEvalCache>, 4> face_caches;

  // boundary faces grouped by adjacent element
  std::vector<std::vector<int>> tet_boundary;

  Workspace(const Mesh& m, const ReferenceBasis& basis, int vol_degree, int face_degree) {
    mesh = &m;
    family = basis.family;
    order = basis.order;
    dim = basis.dim;
    vol_rule = quadrature_simplex(3, vol_degree);
    tri_rule = quadrature_simplex(2, face_degree);
    vol_cache = std::make_unique<BasisEvalCache>(family, order, vol_rule.points);
    vol_cache->warm(m);
    tet_boundary.resize(m.n_tets());
    for (size_t bi = 0; bi < m.boundary_faces.size(); ++bi)
      tet_boundary[m.boundary_faces[bi].tet].push_back(static_cast<int>(bi));
    for (int lf = 0; lf < 4; ++lf) {
      face_caches[lf] =
          std::make_unique<BasisEvalCache>(family, order, face_reference_points(lf, tri_rule));
      face_caches[lf]->warm(m);
    }
  }
};

using LocalMatrix = Eigen::MatrixXcd;
using LocalVector = Eigen::VectorXcd;

// Runs kernel(t) for every element, optionally across opt.threads threads.
// Kernels write only to per-element slots, so the result is independent of
// the schedule.
template <typename Kernel>
void for_each_element(int n_tets, int threads, Kernel&& kernel) {
  if (threads <= 1 || n_tets < 2 * threads) {
    for (int t = 0; t < n_tets; ++t) kernel(t);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  int chunk = (n_tets + threads - 1) / threads;
  for (int w = 0; w < threads; ++w) {
    int lo = w * chunk, hi = std::min(n_tets, lo + chunk);
    pool.emplace_back([&, lo, hi, w]() {
      try {
        for (int t = lo; t < hi; ++t) kernel(t);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

// Merges per-element contributions into the global system in element order.
ComplexSparseSystem reduce(const Mesh& m, const DofMap& dm,
                           const std::vector<LocalMatrix>& Alocs,
                           const std::vector<LocalVector>* blocs) {
  const int n = dm.n_global;
  std::vector<TripletC> trips;
  size_t per = Alocs.empty() ? 0 : Alocs[0].rows() * Alocs[0].cols();
  trips.reserve(per * Alocs.size());
  ComplexSparseSystem sys;
  sys.b = Eigen::VectorXcd::Zero(n);
  for (int t = 0; t < m.n_tets(); ++t) {
    const auto& cd = dm.cell_dofs[t];
    const LocalMatrix& A = Alocs[t];
    for (int i = 0; i < A.rows(); ++i)
      for (int j = 0; j < A.cols(); ++j) trips.emplace_back(cd[i], cd[j], A(i, j));
    if (blocs)
      for (int i = 0; i < A.rows(); ++i) sys.b[cd[i]] += (*blocs)[t][i];
  }
  sys.A = matrix_from_triplets(n, n, trips);
  return sys;
}

void check_inputs(const Mesh& m, const ReferenceBasis& basis, const DofMap& dm) {
  if (basis.family == Family::H1)
    throw std::invalid_argument("assembly: curl-conforming families only");
  if (dm.family != basis.family || dm.order != basis.order)
    throw std::invalid_argument("assembly: dof map does not match basis");
  if (dm.cell_dofs.size() != static_cast<size_t>(m.n_tets()))
    throw std::invalid_argument("assembly: dof map does not match mesh");
}

}  // namespace

ComplexSparseSystem assemble_system(const Mesh& m, const ReferenceBasis& basis, const DofMap& dm,
                                    const ProblemData& pd, const AssemblyOptions& opt) {
  check_inputs(m, basis, dm);
  const int p = basis.order;
  const int coeff_deg =
      std::max(pd.mu_inv.max_poly_degree(), pd.eps.max_poly_degree());
  Workspace ws(m, basis, 2 * p + 2 + coeff_deg + opt.quad_bump, 2 * p + 2 + opt.quad_bump);

  const Complex k = pd.k;
  const Complex k2 = k * k;
  const Complex mik(0.0, -1.0);  // -i

  std::vector<LocalMatrix> Alocs(m.n_tets());
  std::vector<LocalVector> blocs(m.n_tets());

  for_each_element(m.n_tets(), opt.threads, [&](int t) {
    const auto rank = vertex_rank_pattern(m.tets[t]);
    const auto& vol = ws.vol_cache->get(rank);
    ElementMap em = element_map(m, t);
    Eigen::Matrix3d Finv_t = em.F.inverse().transpose();
    Eigen::Matrix3d Fdet = em.F / em.det;
    int tag = m.tet_tags[t];

    LocalMatrix A = LocalMatrix::Zero(ws.dim, ws.dim);
    LocalVector b = LocalVector::Zero(ws.dim);

    for (size_t q = 0; q < ws.vol_rule.points.size(); ++q) {
      double w = ws.vol_rule.weights[q] * em.det;
      Eigen::Vector3d x = em.apply(ws.vol_rule.points[q]);
      Eigen::MatrixXcd Vp = (Finv_t * vol.values.middleRows(3 * q, 3)).cast<Complex>();
      Eigen::MatrixXcd Cp = (Fdet * vol.curls.middleRows(3 * q, 3)).cast<Complex>();
      Eigen::Matrix3cd Mu = pd.mu_inv.eval(tag, x);
      Eigen::Matrix3cd Eps = pd.eps.eval(tag, x);
      A += w * (Cp.transpose() * (Mu * Cp) - k2 * (Vp.transpose() * (Eps * Vp)));
      b += w * (Vp.transpose() * pd.f(x));
    }

    for (int bi : ws.tet_boundary[t]) {
      const BoundaryFace& bf = m.boundary_faces[bi];
      const auto& fc = ws.face_caches[bf.local_face]->get(rank);
      double J = face_jacobian(m, bf);
      Eigen::Matrix3d T = Eigen::Matrix3d::Identity() - bf.normal * bf.normal.transpose();
      for (size_t q = 0; q < ws.tri_rule.points.size(); ++q) {
        double w = ws.tri_rule.weights[q] * J;
        Eigen::Vector3d x = em.apply(ws.face_caches[bf.local_face]->points()[q]);
        Eigen::MatrixXcd Vt = (T * (Finv_t * fc.values.middleRows(3 * q, 3))).cast<Complex>();
        Eigen::Matrix3cd Z = pd.zeta.eval(x);
        A += (mik * k * w) * (Vt.transpose() * (Z * Vt));
        b += w * (Vt.transpose() * pd.g(x, bf.normal));
      }
    }

    Alocs[t] = std::move(A);
    blocs[t] = std::move(b);
  });

  return reduce(m, dm, Alocs, &blocs);
}

ComplexSparseSystem assemble_hxik_gram(const Mesh& m, const ReferenceBasis& basis,
                                       const DofMap& dm, Complex k, const AssemblyOptions& opt) {
  check_inputs(m, basis, dm);
  const int p = basis.order;
  Workspace ws(m, basis, 2 * p + 2 + opt.quad_bump, 2 * p + 2 + opt.quad_bump);
  const double kabs = std::abs(k);
  const double kabs2 = kabs * kabs;

  std::vector<LocalMatrix> Alocs(m.n_tets());

  for_each_element(m.n_tets(), opt.threads, [&](int t) {
    const auto rank = vertex_rank_pattern(m.tets[t]);
    const auto& vol = ws.vol_cache->get(rank);
    ElementMap em = element_map(m, t);
    Eigen::Matrix3d Finv_t = em.F.inverse().transpose();
    Eigen::Matrix3d Fdet = em.F / em.det;

    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(ws.dim, ws.dim);
    for (size_t q = 0; q < ws.vol_rule.points.size(); ++q) {
      double w = ws.vol_rule.weights[q] * em.det;
      Eigen::MatrixXd Vp = Finv_t * vol.values.middleRows(3 * q, 3);
      Eigen::MatrixXd Cp = Fdet * vol.curls.middleRows(3 * q, 3);
      A += w * (Cp.transpose() * Cp + kabs2 * (Vp.transpose() * Vp));
    }
    for (int bi : ws.tet_boundary[t]) {
      const BoundaryFace& bf = m.boundary_faces[bi];
      const auto& fc = ws.face_caches[bf.local_face]->get(rank);
      double J = face_jacobian(m, bf);
      Eigen::Matrix3d T = Eigen::Matrix3d::Identity() - bf.normal * bf.normal.transpose();
      for (size_t q = 0; q < ws.tri_rule.points.size(); ++q) {
        double w = ws.tri_rule.weights[q] * J;
        Eigen::MatrixXd Vt = T * (Finv_t * fc.values.middleRows(3 * q, 3));
        A += (kabs * w) * (Vt.transpose() * Vt);
      }
    }
    Alocs[t] = A.cast<Complex>();
  });

  return reduce(m, dm, Alocs, nullptr);
}

ComplexSparseSystem assemble_bk_pairing(const Mesh& m, const ReferenceBasis& basis,
                                        const DofMap& dm, const ProblemData& pd,
                                        const AssemblyOptions& opt) {
  check_inputs(m, basis, dm);
  const int p = basis.order;
  Workspace ws(m, basis, 2 * p + 2 + pd.eps.max_poly_degree() + opt.quad_bump,
               2 * p + 2 + opt.quad_bump);
  const Complex k = pd.k;
  const Complex k2 = k * k;
  const Complex ik(0.0, 1.0);

  std::vector<LocalMatrix> Alocs(m.n_tets());

  for_each_element(m.n_tets(), opt.threads, [&](int t) {
    const auto rank = vertex_rank_pattern(m.tets[t]);
    const auto& vol = ws.vol_cache->get(rank);
    ElementMap em = element_map(m, t);
    Eigen::Matrix3d Finv_t = em.F.inverse().transpose();
    int tag = m.tet_tags[t];

    LocalMatrix A = LocalMatrix::Zero(ws.dim, ws.dim);
    for (size_t q = 0; q < ws.vol_rule.points.size(); ++q) {
      double w = ws.vol_rule.weights[q] * em.det;
      Eigen::Vector3d x = em.apply(ws.vol_rule.points[q]);
      Eigen::MatrixXcd Vp = (Finv_t * vol.values.middleRows(3 * q, 3)).cast<Complex>();
      Eigen::Matrix3cd Eps = pd.eps.eval(tag, x);
      A += (k2 * w) * (Vp.transpose() * (Eps * Vp));
    }
    for (int bi : ws.tet_boundary[t]) {
      const BoundaryFace& bf = m.boundary_faces[bi];
      const auto& fc = ws.face_caches[bf.local_face]->get(rank);
      double J = face_jacobian(m, bf);
      Eigen::Matrix3d T = Eigen::Matrix3d::Identity() - bf.normal * bf.normal.transpose();
      for (size_t q = 0; q < ws.tri_rule.points.size(); ++q) {
        double w = ws.tri_rule.weights[q] * J;
        Eigen::Vector3d x = em.apply(ws.face_caches[bf.local_face]->points()[q]);
        Eigen::MatrixXcd Vt = (T * (Finv_t * fc.values.middleRows(3 * q, 3))).cast<Complex>();
        Eigen::Matrix3cd Z = pd.zeta.eval(x);
        A += (ik * k * w) * (Vt.transpose() * (Z * Vt));
      }
    }
    Alocs[t] = std::move(A);
  });

  return reduce(m, dm, Alocs, nullptr);
}

}  // namespace maxfem
