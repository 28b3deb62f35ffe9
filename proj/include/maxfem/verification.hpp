#pragma once

#include <cstdint>
#include <string>

#include "maxfem/analysis.hpp"
#include "maxfem/coefficients.hpp"

namespace maxfem {

// Closed-form exact solution with matching problem data, used to certify the
// assembled operator independently of the analysis pipeline.
struct ManufacturedCase {
  std::string name;
  ProblemData problem;    // mu_inv, eps, zeta, f, g, k
  VectorField u_exact;
  VectorField curl_u_exact;
};

// Names: manufactured_linear, manufactured_trig. Throws on unknown names.
ManufacturedCase builtin_manufactured(const std::string& name, Complex k);

// Maximum residual of the strong form
//   || curl mu^-1 curl u - k^2 eps u - f ||    at random interior samples
//   || mu^-1 curl u x n - i k zeta u_T - g ||  at random boundary samples,
// with curls evaluated by 6th-order Richardson-extrapolated central finite
// differences (step 1e-2). Certifies the hand-derived data.
double residual_probe(const ManufacturedCase& mc, int interior_samples, int boundary_samples,
                      std::uint64_t seed = 20240817);

}  // namespace maxfem
