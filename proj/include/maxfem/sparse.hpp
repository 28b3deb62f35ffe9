#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Sparse>

namespace maxfem {

using SparseMatrixC = Eigen::SparseMatrix<std::complex<double>>;
using TripletC = Eigen::Triplet<std::complex<double>>;

// Assembled complex linear system A x = b. The matrix is built from triplets
// with a stable (row, col) sort so that repeated assembly of the same problem
// produces bit-identical results regardless of the order the element
// contributions arrived in.
struct ComplexSparseSystem {
  SparseMatrixC A;
  Eigen::VectorXcd b;

  int n() const { return static_cast<int>(A.rows()); }
  int nnz() const { return static_cast<int>(A.nonZeros()); }

  // Writes the matrix in coordinate format: one "row col re im" line per
  // stored entry, in column-major storage order.
  void dump_matrix(const std::string& path) const;
};

// Deterministic triplet reduction: entries are stably sorted by (row, col)
// and duplicates are summed in their original insertion order.
SparseMatrixC matrix_from_triplets(int rows, int cols, std::vector<TripletC>& triplets);

}  // namespace maxfem
