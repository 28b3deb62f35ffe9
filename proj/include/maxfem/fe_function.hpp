#pragma once

#include <map>
#include <vector>

#include "maxfem/coefficients.hpp"
#include "maxfem/dof_map.hpp"
#include "maxfem/mesh.hpp"
#include "maxfem/quadrature.hpp"
#include "maxfem/reference_basis.hpp"

namespace maxfem {

// A finite element space: mesh + family + order + global numbering.
struct FESpace {
  const Mesh* mesh = nullptr;
  Family family = Family::NedelecI;
  int order = 0;
  DofMap dm;

  int n_dofs() const { return dm.n_global; }
};

FESpace make_fe_space(const Mesh& m, Family family, int order);

// Discrete field: coefficient vector over a space.
struct FEFunction {
  const FESpace* space = nullptr;
  Eigen::VectorXcd coeffs;

  FEFunction() = default;
  explicit FEFunction(const FESpace& s) : space(&s), coeffs(Eigen::VectorXcd::Zero(s.n_dofs())) {}
};

// Reference-basis evaluations at a fixed point set, cached per vertex-rank
// pattern so each of the (at most 24) element orientations is tabulated once.
class BasisEvalCache {
 public:
  BasisEvalCache(Family family, int order, std::vector<Eigen::Vector3d> pts);

  struct Entry {
    Eigen::MatrixXd values;  // (3*npts) x dim, rows grouped by point
    Eigen::MatrixXd curls;   // same layout (gradients for H1)
  };

  const Entry& get(const std::array<int, 4>& rank);
  const std::vector<Eigen::Vector3d>& points() const { return pts_; }
  int dim() const { return dim_; }

  // Tabulates every rank pattern occurring in the mesh (call before any
  // concurrent use; get() is then read-only).
  void warm(const Mesh& m);

 private:
  Family family_;
  int order_;
  int dim_ = 0;
  std::vector<Eigen::Vector3d> pts_;
  std::map<std::array<int, 4>, Entry> entries_;
};

// Physical values and curls of u at reference points of element t
// (covariant pushforward). Each output is 3 x npts.
void eval_on_element(const FEFunction& u, int t, BasisEvalCache& cache, Eigen::Matrix3Xcd& values,
                     Eigen::Matrix3Xcd& curls);

// Triangle quadrature points mapped onto local face lf of the reference
// tetrahedron.
std::vector<Eigen::Vector3d> face_reference_points(int local_face, const QuadratureRule& tri);

// Jacobian scale of a boundary face: twice its area (quadrature weights on
// the reference triangle sum to 1/2).
double face_jacobian(const Mesh& m, const BoundaryFace& bf);

}  // namespace maxfem
