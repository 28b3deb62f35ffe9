#include <doctest.h>

#include <random>

#include "maxfem/solver.hpp"

using namespace maxfem;
using Complex = std::complex<double>;

namespace {

SparseMatrixC dense_to_sparse(const Eigen::MatrixXcd& m) {
  std::vector<TripletC> trips;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      if (m(i, j) != Complex(0, 0)) trips.emplace_back(i, j, m(i, j));
  return matrix_from_triplets(static_cast<int>(m.rows()), static_cast<int>(m.cols()), trips);
}

}  // namespace

TEST_CASE("identity system returns the input") {
  SparseMatrixC A = dense_to_sparse(Eigen::MatrixXcd::Identity(5, 5));
  DirectSolver s;
  s.factorize(A);
  Eigen::VectorXcd b(5);
  b << Complex(1, 2), Complex(0, -1), 3.0, 4.0, Complex(-2, 5);
  CHECK((s.solve(b) - b).norm() <= 1e-14);
}

TEST_CASE("permutation matrix requires pivoting and swaps entries") {
  Eigen::MatrixXcd m(2, 2);
  m << 0, 1, 1, 0;
  DirectSolver s;
  s.factorize(dense_to_sparse(m));
  Eigen::VectorXcd b(2);
  b << Complex(3, 1), Complex(-2, 0);
  Eigen::VectorXcd x = s.solve(b);
  CHECK(x[0] == b[1]);
  CHECK(x[1] == b[0]);
}

TEST_CASE("complex diagonal solve") {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
  m(0, 0) = Complex(1, 1);
  m(1, 1) = 2.0;
  DirectSolver s;
  s.factorize(dense_to_sparse(m));
  Eigen::VectorXcd b(2);
  b << Complex(1, 1), 4.0;
  Eigen::VectorXcd x = s.solve(b);
  CHECK(std::abs(x[0] - Complex(1, 0)) <= 1e-14);
  CHECK(std::abs(x[1] - Complex(2, 0)) <= 1e-14);
}

TEST_CASE("zero right-hand side yields the zero solution") {
  Eigen::MatrixXcd m(3, 3);
  m << 4, 1, 0, 1, Complex(3, -1), 1, 0, 1, 5;
  DirectSolver s;
  s.factorize(dense_to_sparse(m));
  CHECK(s.solve(Eigen::VectorXcd::Zero(3)).norm() == 0.0);
}

TEST_CASE("singular matrix is reported") {
  Eigen::MatrixXcd m(2, 2);
  m << 1, 2, 2, 4;
  DirectSolver s;
  CHECK_THROWS_AS(
      [&] {
        s.factorize(dense_to_sparse(m));
        s.solve(Eigen::VectorXcd::Ones(2));
      }(),
      std::runtime_error);
}

TEST_CASE("round trip on random systems stays within 1e-8") {
  std::mt19937_64 rng(11);
  auto uni = [&]() { return 2.0 * (double(rng() >> 11) * 0x1.0p-53) - 1.0; };
  Eigen::MatrixXcd m(30, 30);
  for (int i = 0; i < 30; ++i)
    for (int j = 0; j < 30; ++j) m(i, j) = Complex(uni(), uni());
  m += 10.0 * Eigen::MatrixXcd::Identity(30, 30);  // keep it comfortably nonsingular
  DirectSolver s;
  s.factorize(dense_to_sparse(m));
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::VectorXcd y(30);
    for (int i = 0; i < 30; ++i) y[i] = Complex(uni(), uni());
    Eigen::VectorXcd x = s.solve(m * y);
    CHECK((x - y).norm() <= 1e-8 * y.norm());
  }
}

TEST_CASE("factorization is deterministic") {
  Eigen::MatrixXcd m(4, 4);
  m << 4, 1, 0, Complex(0, 1), 1, 5, 2, 0, 0, 2, 6, 1, Complex(0, -1), 0, 1, 7;
  SparseMatrixC A = dense_to_sparse(m);
  Eigen::VectorXcd b = Eigen::VectorXcd::Ones(4);
  DirectSolver s1, s2;
  s1.factorize(A);
  s2.factorize(A);
  Eigen::VectorXcd x1 = s1.solve(b), x2 = s2.solve(b);
  for (int i = 0; i < 4; ++i) CHECK(x1[i] == x2[i]);
}

TEST_CASE("triplet reduction is deterministic and sums duplicates") {
  std::vector<TripletC> t1 = {{0, 0, 1.0}, {1, 1, 2.0}, {0, 0, 3.0}};
  std::vector<TripletC> t2 = {{1, 1, 2.0}, {0, 0, 3.0}, {0, 0, 1.0}};
  SparseMatrixC a = matrix_from_triplets(2, 2, t1);
  SparseMatrixC b = matrix_from_triplets(2, 2, t2);
  CHECK(a.coeff(0, 0) == Complex(4, 0));
  CHECK(a.nonZeros() == 2);
  CHECK(b.coeff(0, 0) == Complex(4, 0));
}
