#include <doctest.h>

#include <random>

#include "maxfem/analysis.hpp"
#include "maxfem/assembly.hpp"
#include "maxfem/solver.hpp"

using namespace maxfem;

namespace {

std::mt19937_64 g_rng(2024);
double uni() { return 2.0 * (double(g_rng() >> 11) * 0x1.0p-53) - 1.0; }

FEFunction random_function(const FESpace& s) {
  FEFunction f(s);
  for (int i = 0; i < f.coeffs.size(); ++i) f.coeffs[i] = Complex(uni(), uni());
  return f;
}

}  // namespace

TEST_CASE("curl-k norm of u=(z,0,0) on the unit cube") {
  Mesh m = build_structured_cube_mesh(2);
  FESpace space = make_fe_space(m, Family::NedelecI, 1);
  FEFunction u = interpolate(
      [](const Eigen::Vector3d& x) { return Eigen::Vector3cd(x[2], 0, 0); }, space);
  // curl = (0,1,0), integral of z^2 = 1/3
  CHECK(norm_curlk(u, Complex(1, 0)) == doctest::Approx(std::sqrt(1 + 1.0 / 3.0)).epsilon(1e-10));
  CHECK(norm_curlk(FEFunction(space), Complex(1, 0)) == 0.0);
}

TEST_CASE("hxik norm of a constant field includes the boundary term") {
  Mesh m = build_structured_cube_mesh(2);
  FESpace space = make_fe_space(m, Family::NedelecI, 1);
  FEFunction u = interpolate(
      [](const Eigen::Vector3d&) { return Eigen::Vector3cd(1, 0, 0); }, space);
  // ||u||^2 = 1, curl = 0, |u_T|^2 integrates to 4 (four faces tangent to e_x)
  CHECK(norm_hxik(u, Complex(4, 0)) == doctest::Approx(std::sqrt(32.0)).epsilon(1e-10));
}

TEST_CASE("norm homogeneity, ordering, and triangle inequality on random fields") {
  Mesh m = build_structured_cube_mesh(1);
  FESpace space = make_fe_space(m, Family::NedelecI, 1);
  Complex k(3, 1);
  for (int trial = 0; trial < 50; ++trial) {
    FEFunction a = random_function(space), b = random_function(space);
    double na = norm_hxik(a, k);
    CHECK(norm_hxik(a, k) >= norm_curlk(a, k) - 1e-12 * na);
    FEFunction two(space);
    two.coeffs = 2.0 * a.coeffs;
    CHECK(norm_curlk(two, k) == doctest::Approx(2.0 * norm_curlk(a, k)).epsilon(1e-12));
    FEFunction sum(space);
    sum.coeffs = a.coeffs + b.coeffs;
    CHECK(norm_hxik(sum, k) <= na + norm_hxik(b, k) + 1e-12);
  }
}

TEST_CASE("interpolation is a projection: members of the space are reproduced") {
  Mesh m = build_structured_cube_mesh(2);
  for (int p : {0, 1, 2}) {
    FESpace space = make_fe_space(m, Family::NedelecI, p);
    for (int trial = 0; trial < 20; ++trial) {
      FEFunction w = random_function(space);
      FEFunction w2 = interpolate_discrete(w, space);
      CHECK((w.coeffs - w2.coeffs).norm() <= 1e-11 * w.coeffs.norm());
    }
  }
}

TEST_CASE("constant fields are exactly representable at every order") {
  Mesh m = build_structured_cube_mesh(1);
  for (int p : {0, 1}) {
    FESpace space = make_fe_space(m, Family::NedelecI, p);
    FEFunction u = interpolate(
        [](const Eigen::Vector3d&) { return Eigen::Vector3cd(1, 0, 0); }, space);
    ErrorReport rep = error_report_exact(
        u, [](const Eigen::Vector3d&) { return Eigen::Vector3cd(1, 0, 0); },
        [](const Eigen::Vector3d&) { return Eigen::Vector3cd::Zero().eval(); }, Complex(1, 0));
    CHECK(rep.abs_curlk <= 1e-11);
  }
}

TEST_CASE("exact sequence: gradients of scalar functions live in the Nedelec space") {
  Mesh m = build_structured_cube_mesh(2);
  for (int p : {0, 1, 2, 3}) {
    FESpace scalar = make_fe_space(m, Family::H1, p + 1);
    FESpace ned = make_fe_space(m, Family::NedelecI, p);
    for (int trial = 0; trial < 5; ++trial) {
      FEFunction w = random_function(scalar);
      FEFunction gw = interpolate_gradient(w, ned);
      CHECK(grad_l2_distance(w, gw) <= 1e-10 * std::max(1.0, w.coeffs.norm()));
    }
  }
}

TEST_CASE("gradient interpolation commutes with scalar interpolation") {
  // For a degree-(p+1) polynomial phi, the scalar interpolant reproduces phi,
  // so interpolating grad(scalar interpolant) must coincide with directly
  // interpolating grad phi into the Nedelec space.
  Mesh m = build_structured_cube_mesh(1);
  for (int p : {0, 1, 2}) {
    int q = p + 1;
    auto phi = [q](const Eigen::Vector3d& x) {
      return Complex(std::pow(0.3 + x[0] - 2 * x[1] + 0.5 * x[2], q), 0.0);
    };
    auto grad_phi = [q](const Eigen::Vector3d& x) {
      double base = q * std::pow(0.3 + x[0] - 2 * x[1] + 0.5 * x[2], q - 1);
      return Eigen::Vector3cd(base, -2 * base, 0.5 * base);
    };
    FESpace scalar = make_fe_space(m, Family::H1, q);
    FESpace ned = make_fe_space(m, Family::NedelecI, p);
    FEFunction w = interpolate_scalar(phi, scalar);
    FEFunction lhs = interpolate_gradient(w, ned);
    FEFunction rhs = interpolate(grad_phi, ned);
    CHECK((lhs.coeffs - rhs.coeffs).norm() <= 1e-10 * std::max(1.0, rhs.coeffs.norm()));
    // and both represent grad phi exactly
    CHECK(grad_l2_distance(w, rhs) <= 1e-10);
  }
}

TEST_CASE("error report basics") {
  Mesh m = build_structured_cube_mesh(1);
  FESpace space = make_fe_space(m, Family::NedelecI, 1);
  FEFunction u = random_function(space);
  ErrorReport same = error_report(u, u, Complex(2, 0));
  CHECK(same.abs_curlk <= 1e-12 * same.ref_norm_curlk);
  FEFunction zero(space);
  ErrorReport z = error_report(zero, u, Complex(2, 0));
  CHECK(z.rel_curlk == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(!same.subdomain_abs_curlk.empty());
}

TEST_CASE("delta_k: zero error gives zero, discrete directions give positive values") {
  Mesh m = build_structured_cube_mesh(1);
  FESpace space = make_fe_space(m, Family::NedelecI, 1);
  ProblemData pd = builtin_problem("exp2_smooth", Complex(2, 0));
  FEFunction u = random_function(space);
  CHECK(delta_k_diagnostic(u, u, space, pd) == 0.0);
  FEFunction e(space);
  e.coeffs[3] = 1.0;  // a single basis function
  FEFunction zero(space);
  CHECK(delta_k_diagnostic(e, zero, space, pd) > 0.0);
}

TEST_CASE("delta_k Gram formula is the exact supremum: random probing never exceeds it") {
  // choose e inside the coarse space so b_k(e, w) is exactly w^H B e and the
  // Gram solve must dominate every sampled direction
  Mesh m = build_structured_cube_mesh(1);
  FESpace space = make_fe_space(m, Family::NedelecI, 1);
  ProblemData pd = builtin_problem("exp2_smooth", Complex(3, 0));
  FEFunction e = random_function(space);
  FEFunction zero(space);
  double dk = delta_k_diagnostic(e, zero, space, pd);

  const ReferenceBasis& basis = oriented_basis(Family::NedelecI, 1, {0, 1, 2, 3});
  ComplexSparseSystem B = assemble_bk_pairing(m, basis, space.dm, pd);
  ComplexSparseSystem M = assemble_hxik_gram(m, basis, space.dm, pd.k);
  double enorm = norm_hxik(e, pd.k);
  double best = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    FEFunction w = random_function(space);
    Complex bk = w.coeffs.dot(B.A * e.coeffs);  // b_k(e, w) with test-slot conjugation
    double wnorm = std::sqrt(std::real(w.coeffs.dot(M.A * w.coeffs)));
    best = std::max(best, 2.0 * std::abs(bk) / (enorm * wnorm));
  }
  CHECK(dk >= best * (1.0 - 1e-9));
}

TEST_CASE("quasiopt ratio: in-space reference is flagged not-applicable") {
  Mesh m = build_structured_cube_mesh(1);
  FESpace space = make_fe_space(m, Family::NedelecI, 1);
  FESpace ref = make_fe_space(m, Family::NedelecI, 3);
  FEFunction u = random_function(space);
  FEFunction u_in_ref = interpolate_discrete(u, ref);
  FEFunction u_coarse = interpolate_discrete(u_in_ref, space);
  auto ratio = quasiopt_ratio(u_in_ref, u_coarse, space, Complex(2, 0));
  CHECK(!ratio.has_value());

  FEFunction v = random_function(ref);
  FEFunction v_coarse = interpolate_discrete(v, space);
  auto r2 = quasiopt_ratio(v, v_coarse, space, Complex(2, 0));
  REQUIRE(r2.has_value());
  CHECK(*r2 >= 0.0);
}

TEST_CASE("Galerkin orthogonality: solved system passes, perturbed one fails") {
  // The p=3 discrete solution is Galerkin-orthogonal to the p=1 one on the
  // same mesh: A_k(u_ref - u_N, phi_i) = F(phi_i) - F(phi_i) = 0 for every
  // coarse test function, up to solver accuracy.
  Mesh m = build_structured_cube_mesh(2);
  ProblemData pd = builtin_problem("manufactured_trig", Complex(2, 0));
  FESpace space = make_fe_space(m, Family::NedelecI, 1);
  const ReferenceBasis& basis = oriented_basis(Family::NedelecI, 1, {0, 1, 2, 3});
  // bump the coarse quadrature to the p=3 degree so the trigonometric source
  // is integrated identically in both systems
  AssemblyOptions opts;
  opts.quad_bump = 4;
  ComplexSparseSystem sys = assemble_system(m, basis, space.dm, pd, opts);
  FEFunction u_N(space);
  u_N.coeffs = solve_direct(sys);
  FESpace ref = make_fe_space(m, Family::NedelecI, 3);
  const ReferenceBasis& rbasis = oriented_basis(Family::NedelecI, 3, {0, 1, 2, 3});
  ComplexSparseSystem rsys = assemble_system(m, rbasis, ref.dm, pd);
  FEFunction u_exact(ref);
  u_exact.coeffs = solve_direct(rsys);
  double clean = galerkin_orthogonality_check(u_exact, u_N, space, pd);
  CHECK(clean <= 1e-8);

  FEFunction bad = u_N;
  bad.coeffs[5] += 1e-3;
  double dirty = galerkin_orthogonality_check(u_exact, bad, space, pd);
  CHECK(dirty > 100 * std::max(clean, 1e-12));

  // zero data: zero solution, trivially orthogonal
  FEFunction zero_ref(ref), zero(space);
  CHECK(galerkin_orthogonality_check(zero_ref, zero, space, pd) == 0.0);
}
