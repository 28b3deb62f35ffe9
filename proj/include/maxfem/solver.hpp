#pragma once

#include <memory>

#include "maxfem/sparse.hpp"

namespace maxfem {

// Sparse direct solve of the (non-Hermitian, complex symmetric-ish) assembled
// systems. Wraps a sparse LU factorization; after the back-substitution one
// step of iterative refinement is applied and the residual is checked against
// a hard tolerance so a quietly ill-conditioned factorization cannot leak
// garbage into the convergence study.
class DirectSolver {
 public:
  DirectSolver();
  ~DirectSolver();
  DirectSolver(DirectSolver&&) noexcept;
  DirectSolver& operator=(DirectSolver&&) noexcept;

  // Throws std::runtime_error if the factorization fails (structurally
  // singular or numerically rank deficient).
  void factorize(const SparseMatrixC& A);

  // Solves A x = b with one refinement pass. Throws std::runtime_error if the
  // relative residual ||Ax - b|| / ||b|| exceeds the tolerance.
  Eigen::VectorXcd solve(const Eigen::VectorXcd& b, double rel_residual_tol = 1e-9) const;

  double last_rel_residual() const { return last_rel_residual_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  mutable double last_rel_residual_ = 0.0;
};

// Convenience: factorize + solve in one call.
Eigen::VectorXcd solve_direct(const ComplexSparseSystem& sys, double rel_residual_tol = 1e-9);

}  // namespace maxfem
