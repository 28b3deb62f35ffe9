#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "maxfem/analysis.hpp"
#include "maxfem/assembly.hpp"
#include "maxfem/solver.hpp"

using namespace maxfem;

namespace {

// One reference tetrahedron as a mesh.
Mesh single_tet() {
  Mesh m;
  m.vertices = {Eigen::Vector3d(0, 0, 0), Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(0, 1, 0),
                Eigen::Vector3d(0, 0, 1)};
  m.tets = {{0, 1, 2, 3}};
  m.tet_tags = {1};
  m.build_connectivity();
  return m;
}

ProblemData vacuum_problem(Complex k) {
  ProblemData pd;
  pd.name = "vacuum";
  pd.k = k;
  pd.mu_inv = CoefficientField::constant_tensor(Eigen::Matrix3cd::Identity());
  pd.eps = CoefficientField::constant_tensor(Eigen::Matrix3cd::Identity());
  pd.f = [](const Eigen::Vector3d&) { return Eigen::Vector3cd::Zero().eval(); };
  pd.g = [](const Eigen::Vector3d&, const Eigen::Vector3d&) {
    return Eigen::Vector3cd::Zero().eval();
  };
  return pd;
}

}  // namespace

TEST_CASE("curl-curl diagonal entry on the reference tet matches the analytic value") {
  // For the p=0 edge (0,1) function, curl = 2 grad l0 x grad l1 = (0,-2,2),
  // so the stiffness diagonal is |curl|^2 * vol = 8/6 = 4/3. With k=1 the
  // system entry is stiffness - mass - ik boundary; isolate the stiffness by
  // comparing two assemblies with different k.
  Mesh m = single_tet();
  const ReferenceBasis& basis = oriented_basis(Family::NedelecI, 0, {0, 1, 2, 3});
  DofMap dm = build_dof_map(m, Family::NedelecI, 0);

  ComplexSparseSystem s1 = assemble_system(m, basis, dm, vacuum_problem(Complex(1, 0)));
  ComplexSparseSystem s2 = assemble_system(m, basis, dm, vacuum_problem(Complex(2, 0)));
  // entries: a(k) = S - k^2 M - i k B; solve for S from two real k values:
  // S = (4 a(1) - a(2)) / 3 has the boundary term -i(4-2)/3 B k-residue...
  // simpler: use three assemblies to eliminate both M and B.
  ComplexSparseSystem s3 = assemble_system(m, basis, dm, vacuum_problem(Complex(3, 0)));
  // S - k^2 M - i k B for k=1,2,3: Lagrange combination reproducing k=0:
  // c1*a1 + c2*a2 + c3*a3 with c = (3, -3, 1) gives S at k=0.
  int e01 = dm.edge_dof(0, 0);  // edge 0 is (0,1): lowest vertex ids
  Complex S = 3.0 * s1.A.coeff(e01, e01) - 3.0 * s2.A.coeff(e01, e01) + s3.A.coeff(e01, e01);
  CHECK(std::abs(S - Complex(4.0 / 3.0, 0)) <= 1e-12);
}

TEST_CASE("mass entry matches an independent quadrature oracle") {
  // m(phi, phi) for the p=0 edge (0,1) function, integrated with two
  // independent dense rules.
  Mesh m = single_tet();
  const ReferenceBasis& basis = oriented_basis(Family::NedelecI, 0, {0, 1, 2, 3});
  DofMap dm = build_dof_map(m, Family::NedelecI, 0);
  int e01 = dm.edge_dof(0, 0);

  double oracle = 0.0, oracle2 = 0.0;
  for (int deg : {4, 8}) {
    QuadratureRule r = quadrature_simplex(3, deg);
    Eigen::MatrixXd V, C;
    basis.eval(r.points, V, C);
    double acc = 0;
    for (int q = 0; q < r.size(); ++q)
      acc += r.weights[q] * V.block(3 * q, 0, 3, 1).squaredNorm();
    (deg == 4 ? oracle : oracle2) = acc;
  }
  CHECK(std::abs(oracle - oracle2) <= 1e-12);

  ComplexSparseSystem s1 = assemble_system(m, basis, dm, vacuum_problem(Complex(1, 0)));
  ComplexSparseSystem s2 = assemble_system(m, basis, dm, vacuum_problem(Complex(2, 0)));
  ComplexSparseSystem s3 = assemble_system(m, basis, dm, vacuum_problem(Complex(3, 0)));
  // quadratic-in-k coefficient of -a(k) is the mass entry:
  // M = -(a1 - 2 a2 + a3)/2
  Complex M = -(s1.A.coeff(e01, e01) - 2.0 * s2.A.coeff(e01, e01) + s3.A.coeff(e01, e01)) / 2.0;
  CHECK(std::abs(M - Complex(oracle, 0)) <= 1e-12);
}

TEST_CASE("real symmetric coefficients give a complex-symmetric matrix") {
  Mesh m = build_structured_cube_mesh(1);
  for (int p : {0, 1}) {
    const ReferenceBasis& basis = oriented_basis(Family::NedelecI, p, {0, 1, 2, 3});
    DofMap dm = build_dof_map(m, Family::NedelecI, p);
    ProblemData pd = builtin_problem("exp1_interface", Complex(5, 0));
    Mesh mt = build_structured_cube_mesh(
        2, AxisBox{Eigen::Vector3d(0, 0, 0), Eigen::Vector3d(0.5, 0.5, 0.5)});
    DofMap dmt = build_dof_map(mt, Family::NedelecI, p);
    ComplexSparseSystem sys = assemble_system(mt, basis, dmt, pd);
    SparseMatrixC diff = SparseMatrixC(sys.A - SparseMatrixC(sys.A.transpose()));
    double rel = diff.norm() / sys.A.norm();
    CHECK(rel <= 1e-10);
  }
}

TEST_CASE("hxik gram realizes the norm of a constant field") {
  // u = (1,0,0): ||u||^2 = 1, curl = 0, tangential trace on 4 of 6 unit faces
  Mesh m = build_structured_cube_mesh(2);
  for (double kabs : {1.0, 4.0}) {
    const ReferenceBasis& basis = oriented_basis(Family::NedelecI, 1, {0, 1, 2, 3});
    DofMap dm = build_dof_map(m, Family::NedelecI, 1);
    FESpace space = make_fe_space(m, Family::NedelecI, 1);
    FEFunction u = interpolate(
        [](const Eigen::Vector3d&) { return Eigen::Vector3cd(1, 0, 0); }, space);
    ComplexSparseSystem gram = assemble_hxik_gram(m, basis, dm, Complex(kabs, 0));
    Complex q = u.coeffs.dot(gram.A * u.coeffs);
    CHECK(std::abs(q - Complex(kabs * kabs + 4.0 * kabs, 0)) <= 1e-9 * std::abs(q));
  }
}

TEST_CASE("hxik gram is Hermitian positive definite") {
  Mesh m = build_structured_cube_mesh(1);
  const ReferenceBasis& basis = oriented_basis(Family::NedelecI, 0, {0, 1, 2, 3});
  DofMap dm = build_dof_map(m, Family::NedelecI, 0);
  ComplexSparseSystem gram = assemble_hxik_gram(m, basis, dm, Complex(1, 0));
  SparseMatrixC diff = SparseMatrixC(gram.A - SparseMatrixC(gram.A.adjoint()));
  CHECK(diff.norm() <= 1e-12 * gram.A.norm());
  DirectSolver s;
  CHECK_NOTHROW(s.factorize(gram.A));  // positivity via successful factorization
  Eigen::MatrixXcd dense = Eigen::MatrixXcd(gram.A);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense);
  CHECK(es.eigenvalues().minCoeff() > 0.0);
}

TEST_CASE("b_k pairing is k^2 mass + ik boundary for identity coefficients") {
  Mesh m = build_structured_cube_mesh(1);
  const ReferenceBasis& basis = oriented_basis(Family::NedelecI, 0, {0, 1, 2, 3});
  DofMap dm = build_dof_map(m, Family::NedelecI, 0);
  ProblemData pd2 = vacuum_problem(Complex(2, 0));
  ProblemData pd3 = vacuum_problem(Complex(3, 0));
  ComplexSparseSystem b2 = assemble_bk_pairing(m, basis, dm, pd2);
  ComplexSparseSystem b3 = assemble_bk_pairing(m, basis, dm, pd3);
  // B(k) = k^2 M + i k T: recover M and T and check consistency
  // M = (3 B2 - 2 B3) / (12 - 18)?? simpler: solve 2x2 per entry
  for (int col = 0; col < b2.A.outerSize(); ++col) {
    for (SparseMatrixC::InnerIterator it(b2.A, col); it; ++it) {
      Complex v2 = it.value();
      Complex v3 = b3.A.coeff(it.row(), it.col());
      // [4 2i; 9 3i] [M; T] = [v2; v3]
      Complex det = Complex(4, 0) * Complex(0, 3) - Complex(0, 2) * Complex(9, 0);
      Complex M = (Complex(0, 3) * v2 - Complex(0, 2) * v3) / det;
      Complex T = (Complex(4, 0) * v3 - Complex(9, 0) * v2) / det;
      CHECK(std::abs(M.imag()) <= 1e-12);
      CHECK(std::abs(T.imag()) <= 1e-12);
      // rebuild B at k=5 and compare
      ComplexSparseSystem b5 = assemble_bk_pairing(m, basis, dm, vacuum_problem(Complex(5, 0)));
      Complex expect = 25.0 * M + Complex(0, 5) * T;
      CHECK(std::abs(b5.A.coeff(it.row(), it.col()) - expect) <= 1e-10);
      break;  // one entry per column suffices
    }
    if (col > 3) break;
  }
}

TEST_CASE("quadrature refinement does not change entries for declared degrees") {
  Mesh m = build_structured_cube_mesh(1);
  const ReferenceBasis& basis = oriented_basis(Family::NedelecI, 1, {0, 1, 2, 3});
  DofMap dm = build_dof_map(m, Family::NedelecI, 1);
  ProblemData pd = builtin_problem("exp2_smooth", Complex(5, 0));
  AssemblyOptions bumped;
  bumped.quad_bump = 2;
  ComplexSparseSystem a = assemble_system(m, basis, dm, pd);
  ComplexSparseSystem b = assemble_system(m, basis, dm, pd, bumped);
  SparseMatrixC diff = SparseMatrixC(a.A - b.A);
  CHECK(diff.norm() <= 1e-10 * a.A.norm());
  CHECK((a.b - b.b).norm() <= 1e-10 * std::max(1.0, a.b.norm()));
}

TEST_CASE("assembly is deterministic, also with threaded kernels") {
  Mesh m = build_structured_cube_mesh(2);
  const ReferenceBasis& basis = oriented_basis(Family::NedelecI, 1, {0, 1, 2, 3});
  DofMap dm = build_dof_map(m, Family::NedelecI, 1);
  ProblemData pd = builtin_problem("exp2_smooth", Complex(10, 0));
  ComplexSparseSystem a = assemble_system(m, basis, dm, pd);
  AssemblyOptions threaded;
  threaded.threads = 4;
  ComplexSparseSystem b = assemble_system(m, basis, dm, pd, threaded);
  REQUIRE(a.A.nonZeros() == b.A.nonZeros());
  for (int i = 0; i < a.A.nonZeros(); ++i) CHECK(a.A.valuePtr()[i] == b.A.valuePtr()[i]);
  for (int i = 0; i < a.b.size(); ++i) CHECK(a.b[i] == b.b[i]);
}

TEST_CASE("Galerkin consistency: discrete solution reproduces an in-space exact solution") {
  Mesh m = build_structured_cube_mesh(2);
  for (Complex k : {Complex(1, 0), Complex(5, 2)}) {
    ProblemData pd = builtin_problem("manufactured_linear", k);
    FESpace space = make_fe_space(m, Family::NedelecI, 1);
    const ReferenceBasis& basis = oriented_basis(Family::NedelecI, 1, {0, 1, 2, 3});
    ComplexSparseSystem sys = assemble_system(m, basis, space.dm, pd);
    FEFunction u(space);
    u.coeffs = solve_direct(sys);
    FEFunction exact = interpolate(
        [](const Eigen::Vector3d& x) { return Eigen::Vector3cd(x[2], 0, 0); }, space);
    CHECK((u.coeffs - exact.coeffs).norm() <= 1e-9 * exact.coeffs.norm());
  }
}

TEST_CASE("mismatched inputs are rejected") {
  Mesh m = build_structured_cube_mesh(1);
  const ReferenceBasis& basis = oriented_basis(Family::NedelecI, 1, {0, 1, 2, 3});
  DofMap dm0 = build_dof_map(m, Family::NedelecI, 0);
  CHECK_THROWS_AS(assemble_system(m, basis, dm0, vacuum_problem(Complex(1, 0))),
                  std::invalid_argument);
}

TEST_CASE("matrix dump writes coordinate format") {
  Mesh m = single_tet();
  const ReferenceBasis& basis = oriented_basis(Family::NedelecI, 0, {0, 1, 2, 3});
  DofMap dm = build_dof_map(m, Family::NedelecI, 0);
  ComplexSparseSystem sys = assemble_system(m, basis, dm, vacuum_problem(Complex(1, 0)));
  std::string path = "dump_test.txt";
  sys.dump_matrix(path);
  std::ifstream in(path);
  REQUIRE(in.good());
  int row, col;
  double re, im;
  int lines = 0;
  while (in >> row >> col >> re >> im) ++lines;
  CHECK(lines == sys.nnz());
  std::remove(path.c_str());
}
