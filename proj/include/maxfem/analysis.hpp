#pragma once

#include <functional>
#include <map>
#include <optional>

#include "maxfem/assembly.hpp"
#include "maxfem/fe_function.hpp"

namespace maxfem {

using VectorField = std::function<Eigen::Vector3cd(const Eigen::Vector3d&)>;
using ScalarField = std::function<Complex(const Eigen::Vector3d&)>;

// ||u||^2_{curl,k} = ||curl u||^2 + |k|^2 ||u||^2 (volume quadrature 2p+4).
double norm_curlk(const FEFunction& u, Complex k);

// ||u||^2_{X,k} = ||curl u||^2 + |k|^2 ||u||^2 + |k| ||u_T||^2_Gamma.
double norm_hxik(const FEFunction& u, Complex k);

// Same norms for a closed-form field (curl supplied by the caller).
double field_norm_curlk(const Mesh& m, const VectorField& u, const VectorField& curl_u, Complex k,
                        int quad_degree);

// DOF interpolation of a smooth field into a curl-conforming space. Every DOF
// functional is applied on the owning element via the covariant pullback, so
// the result is single-valued on shared entities by construction.
FEFunction interpolate(const VectorField& field, const FESpace& space);

// Nodal interpolation into an H1 (Lagrange) space.
FEFunction interpolate_scalar(const ScalarField& field, const FESpace& space);

// Interpolation of a discrete field into another space on the same mesh
// (exact on nested spaces).
FEFunction interpolate_discrete(const FEFunction& u, const FESpace& target);

// Interpolation of the gradient of an H1 function into a curl-conforming
// space on the same mesh.
FEFunction interpolate_gradient(const FEFunction& w, const FESpace& target);

// L2 distance || grad w - v || for scalar w and curl-conforming v on the same
// mesh (exact-sequence / commuting checks).
double grad_l2_distance(const FEFunction& w, const FEFunction& v);

struct ErrorReport {
  double abs_curlk = 0.0, rel_curlk = 0.0;
  double abs_hxik = 0.0, rel_hxik = 0.0;
  double ref_norm_curlk = 0.0, ref_norm_hxik = 0.0;
  std::map<int, double> subdomain_abs_curlk;  // per-subdomain-tag breakdown
};

// Error of u_h against a reference field on the same mesh (typically a
// higher-order solve). Integrated with the higher order's 2p+4 rule.
ErrorReport error_report(const FEFunction& u_h, const FEFunction& u_ref, Complex k);

// Error against a closed-form exact solution.
ErrorReport error_report_exact(const FEFunction& u_h, const VectorField& u,
                               const VectorField& curl_u, Complex k);

// Schatz-type diagnostic
//   delta_k(e) = sup over w_N in the coarse space of 2 |b_k(e, w_N)| /
//                (||e||_{X,k} ||w_N||_{X,k}),
// with e = u_ref - u_N. The supremum is attained exactly through one
// Hermitian Gram solve: delta = 2 sqrt(g^H M^-1 g) / ||e||, g_i = b_k(e, phi_i).
// Returns 0 for e = 0.
double delta_k_diagnostic(const FEFunction& u_ref, const FEFunction& u_N, const FESpace& coarse,
                          const ProblemData& pd);

// ||u_ref - u_N||_{X,k} / ||u_ref - I u_ref||_{X,k} with I the DOF
// interpolant onto the coarse space (an upper proxy for the best
// approximation). nullopt when the denominator vanishes (< 1e-14).
std::optional<double> quasiopt_ratio(const FEFunction& u_ref, const FEFunction& u_N,
                                     const FESpace& coarse, Complex k);

// max_i |A_k(u_ref - u_N, phi_i)| / (||u_ref - u_N||_{X,k} ||phi_i||_{X,k})
// over the coarse test basis; ~0 when Galerkin orthogonality holds.
double galerkin_orthogonality_check(const FEFunction& u_ref, const FEFunction& u_N,
                                    const FESpace& coarse, const ProblemData& pd);

}  // namespace maxfem
