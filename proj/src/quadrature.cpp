#include "maxfem/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace maxfem {

namespace {

// Gauss-Jacobi nodes/weights on [0,1] for the weight (1-t)^alpha, via
// Golub-Welsch on the symmetric Jacobi recurrence.
void gauss_jacobi_01(int n, int alpha, std::vector<double>& pts, std::vector<double>& wts) {
  const double a = alpha;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    double diag = (i == 0) ? -a / (a + 2.0)
                           : -a * a / ((2.0 * i + a) * (2.0 * i + a + 2.0));
    J(i, i) = diag;
    if (i + 1 < n) {
      double m = i + 1.0;
      double beta = 4.0 * m * m * (m + a) * (m + a) /
                    ((2.0 * m + a) * (2.0 * m + a) * (2.0 * m + a + 1.0) * (2.0 * m + a - 1.0));
      J(i, i + 1) = J(i + 1, i) = std::sqrt(beta);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  const double beta0 = std::pow(2.0, a + 1.0) / (a + 1.0);
  pts.resize(n);
  wts.resize(n);
  for (int i = 0; i < n; ++i) {
    pts[i] = 0.5 * (1.0 + es.eigenvalues()[i]);
    double v0 = es.eigenvectors()(0, i);
    wts[i] = beta0 * v0 * v0 / std::pow(2.0, a + 1.0);
  }
}

}  // namespace

void gauss_legendre_01(int npoints, std::vector<double>& points, std::vector<double>& weights) {
  gauss_jacobi_01(npoints, 0, points, weights);
}

QuadratureRule quadrature_simplex(int dim, int degree) {
  if (dim != 2 && dim != 3) throw std::invalid_argument("quadrature_simplex: dim must be 2 or 3");
  if (degree < 0 || degree > 20)
    throw std::invalid_argument("quadrature_simplex: degree must be in [0, 20]");

  const int n = degree / 2 + 1;  // conical product is exact up to 2n-1
  QuadratureRule rule;
  rule.dim = dim;
  rule.degree = degree;

  std::vector<double> p0, w0, p1, w1, p2, w2;
  if (dim == 3) {
    gauss_jacobi_01(n, 2, p0, w0);
    gauss_jacobi_01(n, 1, p1, w1);
    gauss_jacobi_01(n, 0, p2, w2);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double x = p0[i];
          double y = (1.0 - p0[i]) * p1[j];
          double z = (1.0 - p0[i]) * (1.0 - p1[j]) * p2[k];
          rule.points.emplace_back(x, y, z);
          rule.weights.push_back(w0[i] * w1[j] * w2[k]);
        }
  } else {
    gauss_jacobi_01(n, 1, p0, w0);
    gauss_jacobi_01(n, 0, p1, w1);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        rule.points.emplace_back(p0[i], (1.0 - p0[i]) * p1[j], 0.0);
        rule.weights.push_back(w0[i] * w1[j]);
      }
  }
  return rule;
}

}  // namespace maxfem
