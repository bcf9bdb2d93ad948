#pragma once

// Scalar coefficient functions: trigonometric Pochhammer symbols, the
// V/F products, classical sign factors, the hopping coefficients W_nu and
// the ground-state weight Delta_p.

#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "rscd/errors.hpp"
#include "rscd/model.hpp"
#include "rscd/rootsys.hpp"

namespace rscd {

inline constexpr double kPoleThreshold = 1e-14;

namespace detail {

inline double checked_sine(double arg, const char* what) {
  const double s = std::sin(arg);
  if (std::abs(s) < kPoleThreshold) {
    std::ostringstream os;
    os << "vanishing sine in " << what << " (argument " << arg << ")";
    throw SingularValue(os.str());
  }
  return s;
}

}  // namespace detail

/// (z : sin_alpha)_m, with half-angle sines sin(alpha/2 * .).
inline double trig_pochhammer(double z, int m, double alpha) {
  const double h = 0.5 * alpha;
  double prod = 1.0;
  if (m > 0) {
    for (int k = 0; k < m; ++k) prod *= std::sin(h * (z + k));
    return prod;
  }
  for (int k = 1; k <= -m; ++k) prod *= detail::checked_sine(h * (z - k), "Pochhammer denominator");
  return 1.0 / prod;
}

/// V_nu(g; x): product over roots a with <a, nu> = 1 of
/// sin(alpha/2 (<a,x> + g)) / sin(alpha/2 <a,x>).
inline double V_nu(double g_eff, double alpha, const Weight& nu, const Eigen::VectorXd& x) {
  const int n = nu.dim();
  const double h = 0.5 * alpha;
  double prod = 1.0;
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      if (j == k || nu.scaled()[j] - nu.scaled()[k] != n) continue;
      const double ax = x[j] - x[k];
      const double den = std::sin(h * ax);
      if (std::abs(den) < kPoleThreshold) {
        std::ostringstream os;
        os << "V_nu pole at root e_" << j + 1 << " - e_" << k + 1;
        throw SingularValue(os.str());
      }
      prod *= std::sin(h * (ax + g_eff)) / den;
    }
  }
  return prod;
}

/// V_J(g; x) for a 0-based index set J; 1 for J empty or everything.
inline double V_J(double g, double alpha, const std::vector<int>& J, const Eigen::VectorXd& x) {
  const int n = static_cast<int>(x.size());
  std::vector<bool> in(n, false);
  for (int j : J) in[j] = true;
  const double h = 0.5 * alpha;
  double prod = 1.0;
  for (int j : J)
    for (int k = 0; k < n; ++k)
      if (!in[k]) prod *= std::sin(h * (x[j] - x[k] + g)) / detail::checked_sine(h * (x[j] - x[k]), "V_J");
  return prod;
}

/// F_J(x): removes the intra-J factors from prod_{j in J} V_j.
inline double F_J(double alpha, double g, const std::vector<int>& J, const Eigen::VectorXd& x) {
  const double h = 0.5 * alpha;
  double prod = 1.0;
  for (int j : J)
    for (int k : J)
      if (j != k)
        prod *= std::sin(h * (x[j] - x[k])) / detail::checked_sine(h * (x[j] - x[k] + g), "F_J");
  return prod;
}

// Sign of V_nu(g; x) on the open simplex, evaluated at the barycenter.
inline int sign_s(const Model& model, const Weight& nu) {
  const auto& mp = model.params();
  Eigen::VectorXd x = model.barycenter();
  for (int attempt = 0; attempt < 8; ++attempt) {
    const double v = V_nu(mp.g, mp.alpha, nu, x);
    if (std::abs(v) > 1e-12) return v > 0 ? 1 : -1;
    // Nudge toward the first vertex; stays interior.
    x = 0.9 * x + 0.1 * model.vertices()[attempt % model.vertices().size()];
  }
  throw Error("sign factor undetermined: V_nu vanishes near the barycenter of " + nu.str());
}

inline int sign_s(const Model& model, const std::vector<int>& J) {
  return sign_s(model, Weight::from_subset(model.n(), J));
}

// s(g; nu) for every orbit vector of every r.
class SignTable {
 public:
  explicit SignTable(const Model& model) {
    for (int r = 1; r <= model.n() - 1; ++r)
      for (const auto& nu : model.orbit_of(r)) signs_[nu] = sign_s(model, nu);
  }
  int operator()(const Weight& nu) const {
    auto it = signs_.find(nu);
    if (it == signs_.end()) throw InvalidInput("no sign recorded for " + nu.str());
    return it->second;
  }
  const std::map<Weight, int>& entries() const { return signs_; }

 private:
  std::map<Weight, int> signs_;
};

/// W_nu(rho_p + sgn(M) mu). Exactly zero when mu + nu leaves the truncated
/// cone (the continuity-in-g value); otherwise
/// s(g;nu) * sqrt(V_nu(x) V_nu(-x - sgn(M) nu)) with both V factors finite on
/// the closed simplex. The product is formed before the root is taken.
inline double W_nu(const Model& model, const SignTable& signs, const Weight& nu,
                   const std::vector<int>& mu) {
  if (!model.contains(mu)) throw InvalidInput("W_nu: index outside the truncated cone");
  if (!model.contains(model.shifted(mu, nu))) return 0.0;
  const auto& mp = model.params();
  const Eigen::VectorXd x = model.lattice_point(mu);
  const Eigen::VectorXd y = -x - model.s() * nu.to_real();
  const double sq = V_nu(mp.g, mp.alpha, nu, x) * V_nu(mp.g, mp.alpha, nu, y);
  if (sq < -1e-12) {
    std::ostringstream os;
    os << "negative W^2 = " << sq << " for nu = " << nu.str();
    throw FormulaViolation(os.str());
  }
  return signs(nu) * std::sqrt(std::max(sq, 0.0));
}

/// Same quantity through F_J^2 prod_{j in J} V_j(x) V_j(y). Only usable where
/// F_J has no pole, i.e. off the facets x_k - x_j = g with j, k in J.
inline double W_nu_factorized(const Model& model, const SignTable& signs, const Weight& nu,
                              const std::vector<int>& mu) {
  if (!model.contains(mu)) throw InvalidInput("W_nu: index outside the truncated cone");
  if (!model.contains(model.shifted(mu, nu))) return 0.0;
  const auto& mp = model.params();
  const Eigen::VectorXd x = model.lattice_point(mu);
  const Eigen::VectorXd y = -x - model.s() * nu.to_real();
  const auto J = orbit_subset(nu);
  const double f = F_J(mp.alpha, mp.g, J, x);
  double sq = f * f;
  for (int j : J) sq *= V_J(mp.g, mp.alpha, {j}, x) * V_J(mp.g, mp.alpha, {j}, y);
  return signs(nu) * std::sqrt(std::max(sq, 0.0));
}

/// Delta_p(mu) by the direct product over the p-positive roots.
inline double delta_p(const Model& model, const std::vector<int>& mu) {
  const auto& mp = model.params();
  const int s = model.s();
  const Eigen::VectorXd rho = model.rho_p();
  const Eigen::VectorXd x = model.lattice_point(mu);
  const Weight muw = model.weight_of(mu);
  const double h = 0.5 * mp.alpha;
  double prod = 1.0;
  for (const auto& pr : model.positive_roots()) {
    const Eigen::VectorXd a = pr.root.to_real();
    const double arho = a.dot(rho);
    const int amu = s * static_cast<int>(integral_inner(pr.root, muw));
    const double lead = std::sin(h * a.dot(x)) / detail::checked_sine(h * arho, "Delta_p");
    const double den = trig_pochhammer(arho + 1.0 - s * mp.g, amu, mp.alpha);
    if (std::abs(den) < kPoleThreshold) throw SingularValue("Delta_p: vanishing Pochhammer denominator");
    prod *= lead * trig_pochhammer(arho + s * mp.g, amu, mp.alpha) / den;
  }
  return prod;
}

/// Delta_p(mu) by chaining the ratio V_nu(x)/V_nu(-x - sgn(M)nu) along
/// omega_{j,p} steps from 0 (m_1 first, then m_2, ...).
inline double delta_p_recurrence(const Model& model, const std::vector<int>& mu) {
  if (!model.contains(mu)) throw InvalidInput("delta_p_recurrence: index outside the truncated cone");
  const auto& mp = model.params();
  std::vector<int> cur(model.n() - 1, 0);
  double val = 1.0;
  for (int j = 0; j < model.n() - 1; ++j) {
    const Weight& nu = model.base().fundamental_weights[j];
    const Eigen::VectorXd step = model.s() * nu.to_real();
    for (int t = 0; t < mu[j]; ++t) {
      const Eigen::VectorXd x = model.lattice_point(cur);
      val *= V_nu(mp.g, mp.alpha, nu, x) / V_nu(mp.g, mp.alpha, nu, -x - step);
      ++cur[j];
    }
  }
  return val;
}

// Delta_p over the lattice, plus its zero extension one step outside.
class DeltaTable {
 public:
  explicit DeltaTable(const Model& model) : model_(&model) {
    values_.reserve(model.size());
    for (const auto& pt : model.points()) {
      const double v = delta_p(model, pt.m);
      if (!(v > 0.0) || !std::isfinite(v)) {
        std::ostringstream os;
        os << "Delta_p not positive at a lattice point (value " << v << ")";
        throw FormulaViolation(os.str());
      }
      values_.push_back(v);
    }
  }

  double operator[](std::size_t i) const { return values_[i]; }
  double at(const std::vector<int>& m) const {
    if (auto i = model_->index_of(m)) return values_[*i];
    if (one_step_outside(m)) return 0.0;
    throw InvalidInput("Delta_p requested beyond one step outside the lattice");
  }
  const std::vector<double>& values() const { return values_; }

  bool one_step_outside(const std::vector<int>& m) const {
    if (model_->contains(m)) return false;
    for (int r = 1; r <= model_->n() - 1; ++r)
      for (const auto& nu : model_->orbit_of(r))
        if (model_->contains(model_->shifted(m, -nu))) return true;
    return false;
  }

 private:
  const Model* model_;
  std::vector<double> values_;
};

}  // namespace rscd
