#include "maxfem/coefficients.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace maxfem {

Wavenumber::Wavenumber(Complex k) : value(k) {
  if (std::abs(k) < 1.0) throw std::invalid_argument("wavenumber must satisfy |k| >= 1");
}

void CoefficientField::set(int tag, TensorFn fn, bool constant, int poly_degree) {
  by_tag_[tag] = std::move(fn);
  constant_[tag] = constant;
  degree_[tag] = poly_degree;
}

CoefficientField CoefficientField::constant_tensor(const Eigen::Matrix3cd& t,
                                                   std::initializer_list<int> tags) {
  CoefficientField f;
  for (int tag : tags) f.set(tag, [t](const Eigen::Vector3d&) { return t; }, true, 0);
  return f;
}

Eigen::Matrix3cd CoefficientField::eval(int tag, const Eigen::Vector3d& x) const {
  auto it = by_tag_.find(tag);
  if (it == by_tag_.end())
    throw std::runtime_error("coefficient not defined for subdomain tag " + std::to_string(tag));
  Eigen::Matrix3cd m = it->second(x);
  if (!m.allFinite()) throw std::runtime_error("coefficient evaluated to a non-finite tensor");
  return m;
}

bool CoefficientField::is_constant(int tag) const {
  auto it = constant_.find(tag);
  return it != constant_.end() && it->second;
}

int CoefficientField::poly_degree(int tag) const {
  auto it = degree_.find(tag);
  return it == degree_.end() ? 0 : it->second;
}

int CoefficientField::max_poly_degree() const {
  int d = 0;
  for (const auto& [tag, deg] : degree_) d = std::max(d, deg);
  return d;
}

ImpedanceField ImpedanceField::scalar(Complex z) {
  ImpedanceField f;
  f.fn_ = [z](const Eigen::Vector3d&) { return Eigen::Matrix3cd(z * Eigen::Matrix3cd::Identity()); };
  return f;
}

ImpedanceField ImpedanceField::tensor(CoefficientField::TensorFn fn) {
  ImpedanceField f;
  f.fn_ = std::move(fn);
  return f;
}

Eigen::Matrix3cd ImpedanceField::eval(const Eigen::Vector3d& x) const { return fn_(x); }

CoercivityResult coercivity_probe(const CoefficientField& field, int samples, std::uint64_t seed,
                                  double c0) {
  if (samples < 1) throw std::invalid_argument("coercivity_probe: samples must be >= 1");

  std::mt19937_64 rng(seed);
  auto uniform = [&rng]() { return double(rng() >> 11) * 0x1.0p-53; };

  std::vector<Eigen::Matrix3cd> tensors;
  for (const auto& [tag, fn] : field.entries()) {
    for (int s = 0; s < samples; ++s) {
      Eigen::Vector3d x(uniform(), uniform(), uniform());
      Eigen::Matrix3cd m = fn(x);
      if (!m.allFinite()) throw std::runtime_error("coercivity_probe: non-finite coefficient");
      tensors.push_back(m);
    }
  }

  CoercivityResult res;
  res.worst_constant = -1e300;
  for (int deg = 0; deg < 360; ++deg) {
    double theta = deg * std::numbers::pi / 180.0;
    Complex alpha(std::cos(theta), std::sin(theta));
    double worst = 1e300;
    for (const auto& m : tensors) {
      Eigen::Matrix3cd h = 0.5 * (alpha * m + (alpha * m).adjoint());
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> es(h);
      worst = std::min(worst, es.eigenvalues().minCoeff());
      if (worst < res.worst_constant) break;
    }
    if (worst > res.worst_constant) {
      res.worst_constant = worst;
      res.worst_alpha = alpha;
    }
  }
  res.passed = res.worst_constant >= c0;
  return res;
}

ProblemData builtin_problem(const std::string& name, Complex k) {
  Wavenumber wn(k);  // validates |k| >= 1
  ProblemData pd;
  pd.name = name;
  pd.k = wn.value;
  pd.zeta = ImpedanceField::scalar(1.0);

  const Eigen::Matrix3cd id = Eigen::Matrix3cd::Identity();

  if (name == "exp1_interface") {
    Eigen::Matrix3cd mu_inv_outer, eps_outer;
    mu_inv_outer << 3, 1, 0, 1, 3, 1, 0, 1, 3;
    eps_outer << 2, 1, 0, 1, 2, 0, 0, 0, 3;
    pd.mu_inv = CoefficientField::constant_tensor(id, {1});
    pd.mu_inv.set(2, [mu_inv_outer](const Eigen::Vector3d&) { return mu_inv_outer; }, true, 0);
    pd.eps = CoefficientField::constant_tensor(id, {1});
    pd.eps.set(2, [eps_outer](const Eigen::Vector3d&) { return eps_outer; }, true, 0);
    pd.f = [](const Eigen::Vector3d& x) { return Eigen::Vector3cd(x[2], 0.0, 0.0); };
    pd.g = [](const Eigen::Vector3d&, const Eigen::Vector3d&) {
      return Eigen::Vector3cd::Zero().eval();
    };
  } else if (name == "exp2_smooth") {
    pd.mu_inv = CoefficientField();
    auto mu_fn = [id](const Eigen::Vector3d& x) {
      return Eigen::Matrix3cd((1.0 + x[0] * x[0]) * id);
    };
    pd.mu_inv.set(1, mu_fn, false, 2);
    pd.mu_inv.set(2, mu_fn, false, 2);
    pd.eps = CoefficientField::constant_tensor(id);
    pd.f = [](const Eigen::Vector3d& x) { return Eigen::Vector3cd(x[2], 2.0 * x[0], 0.0); };
    pd.g = [](const Eigen::Vector3d&, const Eigen::Vector3d&) {
      return Eigen::Vector3cd::Zero().eval();
    };
  } else if (name == "manufactured_linear") {
    // u = (z, 0, 0), curl u = (0, 1, 0), curl curl u = 0
    pd.mu_inv = CoefficientField::constant_tensor(id);
    pd.eps = CoefficientField::constant_tensor(id);
    Complex k2 = k * k;
    pd.f = [k2](const Eigen::Vector3d& x) {
      return Eigen::Vector3cd(-k2 * x[2], 0.0, 0.0);
    };
    pd.g = [k](const Eigen::Vector3d& x, const Eigen::Vector3d& n) {
      Eigen::Vector3cd curl_u(0.0, 1.0, 0.0);
      Eigen::Vector3cd u(x[2], 0.0, 0.0);
      Eigen::Vector3cd u_t = u - (u.dot(n.cast<Complex>())) * n.cast<Complex>();
      return Eigen::Vector3cd(curl_u.cross(n.cast<Complex>()) - Complex(0, 1) * k * u_t);
    };
  } else if (name == "manufactured_trig") {
    // u = (sin(pi y) sin(pi z), 0, 0), curl curl u = 2 pi^2 u
    pd.mu_inv = CoefficientField::constant_tensor(id);
    pd.eps = CoefficientField::constant_tensor(id);
    const double pi = std::numbers::pi;
    Complex k2 = k * k;
    pd.f = [k2, pi](const Eigen::Vector3d& x) {
      double s = std::sin(pi * x[1]) * std::sin(pi * x[2]);
      return Eigen::Vector3cd((2.0 * pi * pi - k2) * s, 0.0, 0.0);
    };
    pd.g = [k, pi](const Eigen::Vector3d& x, const Eigen::Vector3d& n) {
      Eigen::Vector3cd curl_u(0.0, pi * std::sin(pi * x[1]) * std::cos(pi * x[2]),
                              -pi * std::cos(pi * x[1]) * std::sin(pi * x[2]));
      Eigen::Vector3cd u(std::sin(pi * x[1]) * std::sin(pi * x[2]), 0.0, 0.0);
      Eigen::Vector3cd u_t = u - (u.dot(n.cast<Complex>())) * n.cast<Complex>();
      return Eigen::Vector3cd(curl_u.cross(n.cast<Complex>()) - Complex(0, 1) * k * u_t);
    };
  } else {
    throw std::invalid_argument("unknown builtin problem: " + name);
  }
  return pd;
}

}  // namespace maxfem
