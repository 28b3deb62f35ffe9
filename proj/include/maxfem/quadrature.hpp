#pragma once

#include <vector>

#include <Eigen/Dense>

namespace maxfem {

// Quadrature on the reference simplex (unit triangle or unit tetrahedron).
// Weights are positive and sum to the reference measure (1/2 resp. 1/6).
struct QuadratureRule {
  int dim = 0;     // 2 or 3
  int degree = 0;  // exact for all polynomials of total degree <= degree
  std::vector<Eigen::Vector3d> points;  // z component unused for dim==2
  std::vector<double> weights;

  int size() const { return static_cast<int>(points.size()); }
};

// Conical-product Gauss-Jacobi rule. dim in {2,3}, degree <= 20.
QuadratureRule quadrature_simplex(int dim, int degree);

// Gauss-Legendre rule on [0,1].
void gauss_legendre_01(int npoints, std::vector<double>& points, std::vector<double>& weights);

}  // namespace maxfem
