#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

namespace maxfem {

enum class Family { NedelecI, NedelecII, H1 };

enum class EntityKind { Vertex, Edge, Face, Interior };

struct LocalDof {
  EntityKind kind;
  int entity;  // local entity index
  int index;   // moment / node index within the entity
};

// A degree of freedom as a quadrature-weighted evaluation rule on the
// reference tetrahedron: l(u) = sum_m weights[m] . u(points[m]).
// For scalar bases only weights[m][0] is used.
struct DofFunctional {
  std::vector<Eigen::Vector3d> points;
  std::vector<Eigen::Vector3d> weights;
};

// Shape functions and DOF functionals on the reference tetrahedron.
//
// Entity-associated DOFs are defined with respect to a vertex-rank pattern:
// rank[i] is the rank of local vertex i among the element's global vertex
// ids. Edges are oriented from lower to higher rank and face coordinate
// systems use rank-sorted vertices, so DOFs on shared entities coincide
// between neighboring elements without any sign bookkeeping.
class ReferenceBasis {
 public:
  Family family = Family::NedelecI;
  int order = 0;  // Nedelec order p, or H1 polynomial degree q
  std::array<int, 4> rank = {0, 1, 2, 3};

  int dim = 0;
  int dofs_per_edge = 0;
  int dofs_per_face = 0;
  int dofs_per_interior = 0;
  std::vector<LocalDof> local_dofs;
  std::vector<DofFunctional> dofs;

  // Max deviation of (dof functionals applied to shape functions) from the
  // identity matrix, computed at construction time.
  double unisolvence_error = 0.0;

  bool scalar() const { return family == Family::H1; }

  // Vector families: values/curls as (3*npts) x dim matrices, rows grouped
  // by point.
  void eval(const std::vector<Eigen::Vector3d>& pts, Eigen::MatrixXd& values,
            Eigen::MatrixXd& curls) const;
  // Scalar family: values npts x dim, gradients (3*npts) x dim.
  void eval_scalar(const std::vector<Eigen::Vector3d>& pts, Eigen::MatrixXd& values,
                   Eigen::MatrixXd& grads) const;

  // Applies DOF functional i to a polynomial given by coefficient tables
  // (used by unit tests; general fields go through interpolation).
  double apply_dof(int i, const Eigen::MatrixXd& comp_coef0, const Eigen::MatrixXd& comp_coef1,
                   const Eigen::MatrixXd& comp_coef2, int column) const;

  // Coefficient tables over reference monomials (exponents in `expo`):
  // comp_coef[c](m, s) is the coefficient of monomial m in component c of
  // shape function s.
  std::vector<std::array<int, 3>> expo;
  std::array<Eigen::MatrixXd, 3> comp_coef;
  std::array<Eigen::MatrixXd, 3> curl_coef;  // gradients for H1
};

// Constructs a basis for the identity rank pattern (spec-facing entry
// points; throw std::invalid_argument for unsupported orders).
ReferenceBasis nedelec_basis(int p, Family family = Family::NedelecI);
ReferenceBasis h1_basis(int q);

// Cached, orientation-aware basis lookup used by assembly and dof maps.
const ReferenceBasis& oriented_basis(Family family, int order, const std::array<int, 4>& rank);

// Rank pattern of an element's global vertex ids.
std::array<int, 4> vertex_rank_pattern(const std::array<int, 4>& global_ids);

int nedelec_dim(int p, Family family);
int h1_dim(int q);

}  // namespace maxfem
