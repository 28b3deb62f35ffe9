#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <string>

#include <Eigen/Dense>

namespace maxfem {

using Complex = std::complex<double>;

// Wavenumber k with |k| >= 1 (complex k is supported throughout).
struct Wavenumber {
  Complex value;
  explicit Wavenumber(Complex k);
};

// Piecewise tensor-valued coefficient: one 3x3 complex tensor field per
// subdomain tag.
class CoefficientField {
 public:
  using TensorFn = std::function<Eigen::Matrix3cd(const Eigen::Vector3d&)>;

  void set(int tag, TensorFn fn, bool constant, int poly_degree);
  static CoefficientField constant_tensor(const Eigen::Matrix3cd& t,
                                          std::initializer_list<int> tags = {1, 2});

  Eigen::Matrix3cd eval(int tag, const Eigen::Vector3d& x) const;  // throws on bad tag / NaN
  bool is_constant(int tag) const;
  int poly_degree(int tag) const;
  int max_poly_degree() const;
  const std::map<int, TensorFn>& entries() const { return by_tag_; }

 private:
  std::map<int, TensorFn> by_tag_;
  std::map<int, bool> constant_;
  std::map<int, int> degree_;
};

// Boundary impedance; a scalar is promoted to scalar * identity, which maps
// tangent fields to tangent fields.
class ImpedanceField {
 public:
  static ImpedanceField scalar(Complex z);
  static ImpedanceField tensor(CoefficientField::TensorFn fn);

  Eigen::Matrix3cd eval(const Eigen::Vector3d& x) const;

 private:
  CoefficientField::TensorFn fn_;
};

struct ProblemData {
  std::string name;
  CoefficientField mu_inv;
  CoefficientField eps;
  ImpedanceField zeta = ImpedanceField::scalar(1.0);
  std::function<Eigen::Vector3cd(const Eigen::Vector3d&)> f;
  // impedance data g(x, n); tangential by construction
  std::function<Eigen::Vector3cd(const Eigen::Vector3d&, const Eigen::Vector3d&)> g;
  Complex k{1.0, 0.0};
};

struct CoercivityResult {
  bool passed = false;
  double worst_constant = 0.0;  // max over alpha of min over samples of
                                // lambda_min(Re(alpha M))
  Complex worst_alpha{1.0, 0.0};
};

// Samples the field at random points and searches a 360-point unimodular
// alpha grid for a uniform coercivity constant. A failed probe is a result,
// not an error.
CoercivityResult coercivity_probe(const CoefficientField& field, int samples, std::uint64_t seed,
                                  double c0 = 0.01);

// Built-in problems: exp1_interface, exp2_smooth, manufactured_linear,
// manufactured_trig. Throws std::invalid_argument on unknown names.
ProblemData builtin_problem(const std::string& name, Complex k);

}  // namespace maxfem
