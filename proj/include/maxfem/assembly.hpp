#pragma once

#include "maxfem/coefficients.hpp"
#include "maxfem/dof_map.hpp"
#include "maxfem/fe_function.hpp"
#include "maxfem/mesh.hpp"
#include "maxfem/reference_basis.hpp"
#include "maxfem/sparse.hpp"

namespace maxfem {

struct AssemblyOptions {
  int quad_bump = 0;  // added to every quadrature exactness degree
  int threads = 1;    // element kernels run concurrently; reduction order is fixed
};

// Galerkin system for the impedance problem
//   A[i][j] = (mu^-1 curl phi_j, curl phi_i) - k^2 (eps phi_j, phi_i)
//             - i k (zeta (phi_j)_T, (phi_i)_T)_Gamma,
//   b[i]    = (f, phi_i) + (g, (phi_i)_T)_Gamma,
// with conjugation on the test slot (rows index test functions).
ComplexSparseSystem assemble_system(const Mesh& m, const ReferenceBasis& basis, const DofMap& dm,
                                    const ProblemData& pd, const AssemblyOptions& opt = {});

// Gram matrix of the wavenumber-weighted norm
//   ||u||^2 = ||curl u||^2 + |k|^2 ||u||^2 + |k| ||u_T||^2_Gamma.
// Hermitian positive definite.
ComplexSparseSystem assemble_hxik_gram(const Mesh& m, const ReferenceBasis& basis,
                                       const DofMap& dm, Complex k,
                                       const AssemblyOptions& opt = {});

// Pairing matrix B[i][j] = b_k(phi_j, phi_i) with
//   b_k(u, v) = k^2 (eps u, v) + i k (zeta u_T, v_T)_Gamma.
ComplexSparseSystem assemble_bk_pairing(const Mesh& m, const ReferenceBasis& basis,
                                        const DofMap& dm, const ProblemData& pd,
                                        const AssemblyOptions& opt = {});

}  // namespace maxfem
