#include "maxfem/solver.hpp"

#include <stdexcept>

#include <Eigen/UmfPackSupport>

namespace maxfem {

struct DirectSolver::Impl {
  Eigen::UmfPackLU<SparseMatrixC> lu;
  SparseMatrixC A;
};

DirectSolver::DirectSolver() : impl_(std::make_unique<Impl>()) {}
DirectSolver::~DirectSolver() = default;
DirectSolver::DirectSolver(DirectSolver&&) noexcept = default;
DirectSolver& DirectSolver::operator=(DirectSolver&&) noexcept = default;

void DirectSolver::factorize(const SparseMatrixC& A) {
  if (A.rows() != A.cols()) throw std::invalid_argument("DirectSolver: matrix must be square");
  impl_->A = A;
  impl_->A.makeCompressed();
  // The sparsity pattern of FEM systems is structurally symmetric; the
  // symmetric strategy gives markedly less fill than UMFPACK's default
  // auto-selection on these matrices.
  impl_->lu.umfpackControl()[UMFPACK_STRATEGY] = UMFPACK_STRATEGY_SYMMETRIC;
  // Nested dissection keeps fill-in manageable for the larger 3D systems.
  impl_->lu.umfpackControl()[UMFPACK_ORDERING] = UMFPACK_ORDERING_METIS;
  impl_->lu.compute(impl_->A);
  if (impl_->lu.info() != Eigen::Success)
    throw std::runtime_error("DirectSolver: LU factorization failed (matrix is singular or "
                             "severely ill-conditioned)");
}

Eigen::VectorXcd DirectSolver::solve(const Eigen::VectorXcd& b, double rel_residual_tol) const {
  if (b.size() != impl_->A.rows())
    throw std::invalid_argument("DirectSolver: right-hand side size mismatch");
  Eigen::VectorXcd x = impl_->lu.solve(b);
  if (impl_->lu.info() != Eigen::Success)
    throw std::runtime_error("DirectSolver: back substitution failed");

  // One step of iterative refinement.
  Eigen::VectorXcd r = b - impl_->A * x;
  x += impl_->lu.solve(r);
  r = b - impl_->A * x;

  double bnorm = b.norm();
  last_rel_residual_ = bnorm > 0.0 ? r.norm() / bnorm : r.norm();
  if (!(last_rel_residual_ <= rel_residual_tol))
    throw std::runtime_error("DirectSolver: relative residual " +
                             std::to_string(last_rel_residual_) + " exceeds tolerance (the "
                             "system appears too ill-conditioned for a trustworthy solve)");
  return x;
}

Eigen::VectorXcd solve_direct(const ComplexSparseSystem& sys, double rel_residual_tol) {
  DirectSolver s;
  s.factorize(sys.A);
  return s.solve(sys.b, rel_residual_tol);
}

}  // namespace maxfem
