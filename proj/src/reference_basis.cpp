#include "maxfem/reference_basis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "maxfem/quadrature.hpp"

namespace maxfem {

namespace {

const std::array<Eigen::Vector3d, 4> kRefVertices = {
    Eigen::Vector3d(0, 0, 0), Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(0, 1, 0),
    Eigen::Vector3d(0, 0, 1)};

constexpr std::array<std::array<int, 2>, 6> kEdges = {
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
constexpr std::array<std::array<int, 3>, 4> kFaces = {
    {{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}}};

std::vector<std::array<int, 3>> monomials3(int max_deg) {
  std::vector<std::array<int, 3>> out;
  for (int d = 0; d <= max_deg; ++d)
    for (int a = d; a >= 0; --a)
      for (int b = d - a; b >= 0; --b) out.push_back({a, b, d - a - b});
  return out;
}

std::vector<std::array<int, 2>> monomials2(int max_deg) {
  std::vector<std::array<int, 2>> out;
  if (max_deg < 0) return out;
  for (int d = 0; d <= max_deg; ++d)
    for (int a = d; a >= 0; --a) out.push_back({a, d - a});
  return out;
}

double legendre(int j, double x) {
  double p0 = 1.0, p1 = x;
  if (j == 0) return p0;
  if (j == 1) return p1;
  for (int m = 1; m < j; ++m) {
    double p2 = ((2.0 * m + 1.0) * x * p1 - m * p0) / (m + 1.0);
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

struct MonomialIndex {
  explicit MonomialIndex(const std::vector<std::array<int, 3>>& list) {
    for (int i = 0; i < static_cast<int>(list.size()); ++i) map_[list[i]] = i;
  }
  int operator()(int a, int b, int c) const { return map_.at({a, b, c}); }
  std::map<std::array<int, 3>, int> map_;
};

Eigen::VectorXd monomial_values(const std::vector<std::array<int, 3>>& expo,
                                const Eigen::Vector3d& x) {
  Eigen::VectorXd v(expo.size());
  for (size_t m = 0; m < expo.size(); ++m)
    v[m] = std::pow(x[0], expo[m][0]) * std::pow(x[1], expo[m][1]) * std::pow(x[2], expo[m][2]);
  return v;
}

// 2D moment fields on the canonical face triangle.
std::vector<std::array<Eigen::VectorXd, 2>> face_moment_fields(Family family, int p,
                                                               std::vector<std::array<int, 2>>& e2,
                                                               int& field_deg) {
  std::vector<std::array<Eigen::VectorXd, 2>> fields;
  e2 = monomials2(std::max(p - 1, 0));  // fields of degree <= p-1 for both families
  field_deg = std::max(p - 1, 0);
  auto idx2 = [&](int a, int b) {
    for (size_t i = 0; i < e2.size(); ++i)
      if (e2[i][0] == a && e2[i][1] == b) return static_cast<int>(i);
    throw std::logic_error("face moment index");
  };
  const int n2 = static_cast<int>(e2.size());
  if (family == Family::NedelecI) {
    // (P_{p-1})^2
    auto lows = monomials2(p - 1);
    for (int d = 0; d < 2; ++d)
      for (const auto& m : lows) {
        std::array<Eigen::VectorXd, 2> f = {Eigen::VectorXd::Zero(n2), Eigen::VectorXd::Zero(n2)};
        f[d][idx2(m[0], m[1])] = 1.0;
        fields.push_back(f);
      }
  } else {
    // RT space (P_{p-2})^2 + (xi,eta) * homogeneous(p-2)
    auto lows = monomials2(p - 2);
    for (int d = 0; d < 2; ++d)
      for (const auto& m : lows) {
        std::array<Eigen::VectorXd, 2> f = {Eigen::VectorXd::Zero(n2), Eigen::VectorXd::Zero(n2)};
        f[d][idx2(m[0], m[1])] = 1.0;
        fields.push_back(f);
      }
    if (p >= 2)
      for (const auto& m : monomials2(p - 2))
        if (m[0] + m[1] == p - 2) {
          std::array<Eigen::VectorXd, 2> f = {Eigen::VectorXd::Zero(n2),
                                              Eigen::VectorXd::Zero(n2)};
          f[0][idx2(m[0] + 1, m[1])] = 1.0;
          f[1][idx2(m[0], m[1] + 1)] = 1.0;
          fields.push_back(f);
        }
  }
  return fields;
}

// 3D interior moment fields (coefficients over monomials3(deg)).
std::vector<std::array<Eigen::VectorXd, 3>> interior_moment_fields(
    Family family, int p, std::vector<std::array<int, 3>>& e3) {
  std::vector<std::array<Eigen::VectorXd, 3>> fields;
  e3 = monomials3(std::max(p - 2, 0));  // both families: fields of degree <= p-2
  MonomialIndex idx(e3);
  const int n3 = static_cast<int>(e3.size());
  auto zero = [&]() {
    return std::array<Eigen::VectorXd, 3>{Eigen::VectorXd::Zero(n3), Eigen::VectorXd::Zero(n3),
                                          Eigen::VectorXd::Zero(n3)};
  };
  const int low = (family == Family::NedelecI) ? p - 2 : p - 3;
  for (int d = 0; d < 3; ++d)
    for (const auto& m : monomials3(low)) {
      auto f = zero();
      f[d][idx(m[0], m[1], m[2])] = 1.0;
      fields.push_back(f);
    }
  if (family == Family::NedelecII && p >= 3)
    for (const auto& m : monomials3(p - 3))
      if (m[0] + m[1] + m[2] == p - 3) {
        auto f = zero();
        f[0][idx(m[0] + 1, m[1], m[2])] = 1.0;
        f[1][idx(m[0], m[1] + 1, m[2])] = 1.0;
        f[2][idx(m[0], m[1], m[2] + 1)] = 1.0;
        fields.push_back(f);
      }
  return fields;
}

void build_nedelec(ReferenceBasis& basis) {
  const int p = basis.order;
  const bool type1 = basis.family == Family::NedelecI;
  const int n = nedelec_dim(p, basis.family);
  basis.dim = n;
  basis.dofs_per_edge = p + 1;
  basis.dofs_per_face = type1 ? p * (p + 1) : (p - 1) * (p + 1);
  basis.dofs_per_interior =
      type1 ? p * (p + 1) * (p - 1) / 2 : (p - 1) * (p - 2) * (p + 1) / 2;

  // --- candidate span ------------------------------------------------
  basis.expo = monomials3(p + 1);
  MonomialIndex idx(basis.expo);
  const int nm = static_cast<int>(basis.expo.size());

  const auto low_monos = monomials3(p);
  int n_homog = 0;
  for (const auto& m : low_monos)
    if (m[0] + m[1] + m[2] == p) ++n_homog;
  const int n_cand = 3 * static_cast<int>(low_monos.size()) + (type1 ? 3 * n_homog : 0);

  std::array<Eigen::MatrixXd, 3> cand;
  for (int c = 0; c < 3; ++c) cand[c] = Eigen::MatrixXd::Zero(nm, n_cand);
  int col = 0;
  for (int comp = 0; comp < 3; ++comp)
    for (const auto& m : low_monos) cand[comp](idx(m[0], m[1], m[2]), col++) = 1.0;
  if (type1) {
    // x cross (e_c * m) for homogeneous m of degree p
    for (int comp = 0; comp < 3; ++comp)
      for (const auto& m : low_monos) {
        if (m[0] + m[1] + m[2] != p) continue;
        int a = m[0], b = m[1], c = m[2];
        if (comp == 0) {  // x cross e1 = (0, z, -y)
          cand[1](idx(a, b, c + 1), col) = 1.0;
          cand[2](idx(a, b + 1, c), col) = -1.0;
        } else if (comp == 1) {  // x cross e2 = (-z, 0, x)
          cand[0](idx(a, b, c + 1), col) = -1.0;
          cand[2](idx(a + 1, b, c), col) = 1.0;
        } else {  // x cross e3 = (y, -x, 0)
          cand[0](idx(a, b + 1, c), col) = 1.0;
          cand[1](idx(a + 1, b, c), col) = -1.0;
        }
        ++col;
      }
  }

  // Orthonormalize the candidate span in L2(T̂) so the DOF matrix below is
  // well conditioned even at the highest supported order.
  {
    QuadratureRule tet = quadrature_simplex(3, 2 * (p + 1));
    Eigen::MatrixXd E(3 * tet.size(), n_cand);
    for (int m = 0; m < tet.size(); ++m) {
      Eigen::VectorXd mono = monomial_values(basis.expo, tet.points[m]);
      double s = std::sqrt(tet.weights[m]);
      for (int c = 0; c < 3; ++c) E.row(3 * m + c) = s * (mono.transpose() * cand[c]);
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(E);
    Eigen::MatrixXd R = qr.matrixQR().topRows(n_cand).triangularView<Eigen::Upper>();
    Eigen::MatrixXd Rinv =
        R.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(n_cand, n_cand));
    for (int c = 0; c < 3; ++c) cand[c] = cand[c] * Rinv;
  }

  // --- DOF functionals -----------------------------------------------
  basis.dofs.clear();
  basis.local_dofs.clear();

  std::vector<double> gl_p, gl_w;
  gauss_legendre_01(p + 3, gl_p, gl_w);
  for (int le = 0; le < 6; ++le) {
    int i = kEdges[le][0], j = kEdges[le][1];
    if (basis.rank[i] > basis.rank[j]) std::swap(i, j);
    Eigen::Vector3d a = kRefVertices[i], tau = kRefVertices[j] - kRefVertices[i];
    for (int mom = 0; mom <= p; ++mom) {
      DofFunctional f;
      for (size_t m = 0; m < gl_p.size(); ++m) {
        f.points.push_back(a + gl_p[m] * tau);
        f.weights.push_back(tau * (gl_w[m] * legendre(mom, 2.0 * gl_p[m] - 1.0)));
      }
      basis.dofs.push_back(std::move(f));
      basis.local_dofs.push_back({EntityKind::Edge, le, mom});
    }
  }

  if (basis.dofs_per_face > 0) {
    QuadratureRule tri = quadrature_simplex(2, 2 * p + 2);
    std::vector<std::array<int, 2>> e2;
    int fdeg = 0;
    auto fields = face_moment_fields(basis.family, p, e2, fdeg);
    for (int lf = 0; lf < 4; ++lf) {
      std::array<int, 3> fv = kFaces[lf];
      std::sort(fv.begin(), fv.end(),
                [&](int u, int v) { return basis.rank[u] < basis.rank[v]; });
      Eigen::Vector3d v0 = kRefVertices[fv[0]];
      Eigen::Vector3d b0 = kRefVertices[fv[1]] - v0, b1 = kRefVertices[fv[2]] - v0;
      for (size_t q = 0; q < fields.size(); ++q) {
        DofFunctional f;
        for (int m = 0; m < tri.size(); ++m) {
          double xi = tri.points[m][0], eta = tri.points[m][1];
          double q0 = 0.0, q1 = 0.0;
          for (size_t t = 0; t < e2.size(); ++t) {
            double mono = std::pow(xi, e2[t][0]) * std::pow(eta, e2[t][1]);
            q0 += fields[q][0][t] * mono;
            q1 += fields[q][1][t] * mono;
          }
          f.points.push_back(v0 + xi * b0 + eta * b1);
          f.weights.push_back((q0 * b0 + q1 * b1) * tri.weights[m]);
        }
        basis.dofs.push_back(std::move(f));
        basis.local_dofs.push_back({EntityKind::Face, lf, static_cast<int>(q)});
      }
    }
  }

  if (basis.dofs_per_interior > 0) {
    QuadratureRule tet = quadrature_simplex(3, 2 * p + 2);
    std::vector<std::array<int, 3>> e3;
    auto fields = interior_moment_fields(basis.family, p, e3);
    for (size_t q = 0; q < fields.size(); ++q) {
      DofFunctional f;
      for (int m = 0; m < tet.size(); ++m) {
        Eigen::VectorXd mono = monomial_values(e3, tet.points[m]);
        Eigen::Vector3d w(fields[q][0].dot(mono), fields[q][1].dot(mono),
                          fields[q][2].dot(mono));
        f.points.push_back(tet.points[m]);
        f.weights.push_back(w * tet.weights[m]);
      }
      basis.dofs.push_back(std::move(f));
      basis.local_dofs.push_back({EntityKind::Interior, 0, static_cast<int>(q)});
    }
  }

  if (static_cast<int>(basis.dofs.size()) != n)
    throw std::logic_error("nedelec basis: dof count mismatch");

  // --- dual basis -----------------------------------------------------
  Eigen::MatrixXd D(n, n_cand);
  for (int i = 0; i < n; ++i) {
    const auto& f = basis.dofs[i];
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(n_cand);
    for (size_t m = 0; m < f.points.size(); ++m) {
      Eigen::VectorXd mono = monomial_values(basis.expo, f.points[m]);
      for (int c = 0; c < 3; ++c)
        row += f.weights[m][c] * (mono.transpose() * cand[c]);
    }
    D.row(i) = row;
  }

  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(D);
  if (cod.rank() < n)
    throw std::runtime_error("nedelec basis: DOF functionals are not unisolvent");
  Eigen::MatrixXd X = cod.solve(Eigen::MatrixXd::Identity(n, n));
  for (int it = 0; it < 2; ++it) X += cod.solve(Eigen::MatrixXd::Identity(n, n) - D * X);
  basis.unisolvence_error = (D * X - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();

  for (int c = 0; c < 3; ++c) basis.comp_coef[c] = cand[c] * X;

  // curls from the coefficient tables
  for (int c = 0; c < 3; ++c) basis.curl_coef[c] = Eigen::MatrixXd::Zero(nm, n);
  MonomialIndex full_idx(basis.expo);
  auto add_deriv = [&](Eigen::MatrixXd& target, const Eigen::MatrixXd& src, int axis, double s) {
    for (int m = 0; m < nm; ++m) {
      std::array<int, 3> e = basis.expo[m];
      if (e[axis] == 0) continue;
      double fac = e[axis];
      e[axis] -= 1;
      target.row(full_idx(e[0], e[1], e[2])) += s * fac * src.row(m);
    }
  };
  add_deriv(basis.curl_coef[0], basis.comp_coef[2], 1, 1.0);
  add_deriv(basis.curl_coef[0], basis.comp_coef[1], 2, -1.0);
  add_deriv(basis.curl_coef[1], basis.comp_coef[0], 2, 1.0);
  add_deriv(basis.curl_coef[1], basis.comp_coef[2], 0, -1.0);
  add_deriv(basis.curl_coef[2], basis.comp_coef[1], 0, 1.0);
  add_deriv(basis.curl_coef[2], basis.comp_coef[0], 1, -1.0);
}

void build_h1(ReferenceBasis& basis) {
  const int q = basis.order;
  const int n = h1_dim(q);
  basis.dim = n;
  basis.dofs_per_edge = q - 1;
  basis.dofs_per_face = (q - 1) * (q - 2) / 2;
  basis.dofs_per_interior = (q - 1) * (q - 2) * (q - 3) / 6;

  basis.expo = monomials3(q);
  const int nm = static_cast<int>(basis.expo.size());

  auto point_dof = [](const Eigen::Vector3d& x) {
    DofFunctional f;
    f.points.push_back(x);
    f.weights.push_back(Eigen::Vector3d(1, 0, 0));
    return f;
  };

  for (int v = 0; v < 4; ++v) {
    basis.dofs.push_back(point_dof(kRefVertices[v]));
    basis.local_dofs.push_back({EntityKind::Vertex, v, 0});
  }
  for (int le = 0; le < 6; ++le) {
    int i = kEdges[le][0], j = kEdges[le][1];
    if (basis.rank[i] > basis.rank[j]) std::swap(i, j);
    for (int m = 1; m < q; ++m) {
      Eigen::Vector3d x =
          kRefVertices[i] + (double(m) / q) * (kRefVertices[j] - kRefVertices[i]);
      basis.dofs.push_back(point_dof(x));
      basis.local_dofs.push_back({EntityKind::Edge, le, m - 1});
    }
  }
  for (int lf = 0; lf < 4; ++lf) {
    std::array<int, 3> fv = kFaces[lf];
    std::sort(fv.begin(), fv.end(), [&](int u, int v) { return basis.rank[u] < basis.rank[v]; });
    int node = 0;
    for (int a = 1; a <= q - 2; ++a)
      for (int b = 1; b <= q - 1 - a; ++b) {
        Eigen::Vector3d x = kRefVertices[fv[0]] +
                            (double(a) / q) * (kRefVertices[fv[1]] - kRefVertices[fv[0]]) +
                            (double(b) / q) * (kRefVertices[fv[2]] - kRefVertices[fv[0]]);
        basis.dofs.push_back(point_dof(x));
        basis.local_dofs.push_back({EntityKind::Face, lf, node++});
      }
  }
  int node = 0;
  for (int a = 1; a <= q - 3; ++a)
    for (int b = 1; b <= q - 2 - a; ++b)
      for (int c = 1; c <= q - 1 - a - b; ++c) {
        basis.dofs.push_back(point_dof(Eigen::Vector3d(double(a) / q, double(b) / q, double(c) / q)));
        basis.local_dofs.push_back({EntityKind::Interior, 0, node++});
      }

  if (static_cast<int>(basis.dofs.size()) != n) throw std::logic_error("h1 basis: dof count");

  Eigen::MatrixXd D(n, nm);
  for (int i = 0; i < n; ++i)
    D.row(i) = monomial_values(basis.expo, basis.dofs[i].points[0]).transpose();
  if (nm != n) throw std::logic_error("h1 basis: monomial count");

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(D);
  Eigen::MatrixXd X = lu.solve(Eigen::MatrixXd::Identity(n, n));
  for (int it = 0; it < 2; ++it) X += lu.solve(Eigen::MatrixXd::Identity(n, n) - D * X);
  basis.unisolvence_error = (D * X - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();

  basis.comp_coef[0] = X;
  basis.comp_coef[1] = Eigen::MatrixXd::Zero(nm, n);
  basis.comp_coef[2] = Eigen::MatrixXd::Zero(nm, n);

  // gradients
  MonomialIndex full_idx(basis.expo);
  for (int c = 0; c < 3; ++c) basis.curl_coef[c] = Eigen::MatrixXd::Zero(nm, n);
  for (int m = 0; m < nm; ++m) {
    for (int axis = 0; axis < 3; ++axis) {
      std::array<int, 3> e = basis.expo[m];
      if (e[axis] == 0) continue;
      double fac = e[axis];
      e[axis] -= 1;
      basis.curl_coef[axis].row(full_idx(e[0], e[1], e[2])) += fac * basis.comp_coef[0].row(m);
    }
  }
}

}  // namespace

int nedelec_dim(int p, Family family) {
  if (family == Family::NedelecI) return (p + 1) * (p + 3) * (p + 4) / 2;
  return (p + 1) * (p + 2) * (p + 3) / 2;
}

int h1_dim(int q) { return (q + 1) * (q + 2) * (q + 3) / 6; }

std::array<int, 4> vertex_rank_pattern(const std::array<int, 4>& g) {
  std::array<int, 4> rank{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (g[j] < g[i]) ++rank[i];
  return rank;
}

ReferenceBasis nedelec_basis(int p, Family family) {
  if (family == Family::H1) throw std::invalid_argument("nedelec_basis: wrong family");
  if (family == Family::NedelecI && (p < 0 || p > 4))
    throw std::invalid_argument("nedelec_basis: order must be in [0, 4]");
  if (family == Family::NedelecII && (p < 1 || p > 4))
    throw std::invalid_argument("nedelec_basis: type II order must be in [1, 4]");
  ReferenceBasis basis;
  basis.family = family;
  basis.order = p;
  build_nedelec(basis);
  return basis;
}

ReferenceBasis h1_basis(int q) {
  if (q < 1 || q > 5) throw std::invalid_argument("h1_basis: degree must be in [1, 5]");
  ReferenceBasis basis;
  basis.family = Family::H1;
  basis.order = q;
  build_h1(basis);
  return basis;
}

const ReferenceBasis& oriented_basis(Family family, int order, const std::array<int, 4>& rank) {
  static std::map<std::tuple<int, int, int>, ReferenceBasis> cache;
  static std::mutex mtx;
  int code = ((rank[0] * 4 + rank[1]) * 4 + rank[2]) * 4 + rank[3];
  std::scoped_lock lock(mtx);
  auto key = std::make_tuple(static_cast<int>(family), order, code);
  auto it = cache.find(key);
  if (it == cache.end()) {
    ReferenceBasis basis;
    basis.family = family;
    basis.order = order;
    basis.rank = rank;
    if (family == Family::H1)
      build_h1(basis);
    else
      build_nedelec(basis);
    it = cache.emplace(key, std::move(basis)).first;
  }
  return it->second;
}

void ReferenceBasis::eval(const std::vector<Eigen::Vector3d>& pts, Eigen::MatrixXd& values,
                          Eigen::MatrixXd& curls) const {
  const int np = static_cast<int>(pts.size());
  Eigen::MatrixXd M(np, expo.size());
  for (int i = 0; i < np; ++i) M.row(i) = monomial_values(expo, pts[i]).transpose();
  values.resize(3 * np, dim);
  curls.resize(3 * np, dim);
  for (int c = 0; c < 3; ++c) {
    Eigen::MatrixXd vc = M * comp_coef[c];
    Eigen::MatrixXd cc = M * curl_coef[c];
    for (int i = 0; i < np; ++i) {
      values.row(3 * i + c) = vc.row(i);
      curls.row(3 * i + c) = cc.row(i);
    }
  }
}

void ReferenceBasis::eval_scalar(const std::vector<Eigen::Vector3d>& pts, Eigen::MatrixXd& values,
                                 Eigen::MatrixXd& grads) const {
  const int np = static_cast<int>(pts.size());
  Eigen::MatrixXd M(np, expo.size());
  for (int i = 0; i < np; ++i) M.row(i) = monomial_values(expo, pts[i]).transpose();
  values = M * comp_coef[0];
  grads.resize(3 * np, dim);
  for (int c = 0; c < 3; ++c) {
    Eigen::MatrixXd gc = M * curl_coef[c];
    for (int i = 0; i < np; ++i) grads.row(3 * i + c) = gc.row(i);
  }
}

double ReferenceBasis::apply_dof(int i, const Eigen::MatrixXd& c0, const Eigen::MatrixXd& c1,
                                 const Eigen::MatrixXd& c2, int column) const {
  const auto& f = dofs[i];
  double acc = 0.0;
  for (size_t m = 0; m < f.points.size(); ++m) {
    Eigen::VectorXd mono = monomial_values(expo, f.points[m]);
    acc += f.weights[m][0] * mono.dot(c0.col(column));
    if (c1.size()) acc += f.weights[m][1] * mono.dot(c1.col(column));
    if (c2.size()) acc += f.weights[m][2] * mono.dot(c2.col(column));
  }
  return acc;
}

}  // namespace maxfem
