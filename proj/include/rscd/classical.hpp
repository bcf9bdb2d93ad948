#pragma once

// Classical compactified Hamiltonians: the full n-particle H, the reduced
// H_r in root notation, the radicand identity and the sign pattern of V_j.

#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "rscd/coeffs.hpp"
#include "rscd/errors.hpp"
#include "rscd/model.hpp"

namespace rscd {

struct PhasePoint {
  Eigen::VectorXd x;
  Eigen::VectorXd momenta;
};

/// sum_j cos(p_j) sqrt(prod_{k != j} (1 - sin^2(alpha g/2) / sin^2(alpha/2 (x_j - x_k))))
inline double classical_H(double g, double alpha, const PhasePoint& pt) {
  const auto n = pt.x.size();
  if (pt.momenta.size() != n) throw InvalidInput("classical_H: positions and momenta differ in length");
  const double sg = std::sin(0.5 * alpha * g);
  double total = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    double rad = 1.0;
    for (Eigen::Index k = 0; k < n; ++k) {
      if (k == j) continue;
      const double s = detail::checked_sine(0.5 * alpha * (pt.x[j] - pt.x[k]), "classical_H");
      rad *= 1.0 - sg * sg / (s * s);
    }
    if (rad < -1e-12) {
      std::ostringstream os;
      os << "negative radicand " << rad << " for particle " << j + 1;
      throw OutsideConfigurationSpace(os.str());
    }
    total += std::cos(pt.momenta[j]) * std::sqrt(std::max(rad, 0.0));
  }
  return total;
}

/// |prod_{j in J, k not in J} (1 - sin^2(alpha g/2)/sin^2(alpha/2 (x_j-x_k))) - V_J(x) V_J(-x)|
inline double radicand_identity_check(double g, double alpha, const std::vector<int>& J, const Eigen::VectorXd& x) {
  const int n = static_cast<int>(x.size());
  std::vector<bool> in(n, false);
  for (int j : J) in[j] = true;
  const double sg = std::sin(0.5 * alpha * g);
  double lhs = 1.0;
  for (int j : J)
    for (int k = 0; k < n; ++k) {
      if (in[k]) continue;
      const double s = detail::checked_sine(0.5 * alpha * (x[j] - x[k]), "radicand");
      lhs *= 1.0 - sg * sg / (s * s);
    }
  return std::abs(lhs - V_J(g, alpha, J, x) * V_J(g, alpha, J, -x));
}

/// Reduced H_r at coupling `signed_g` (g or -g; the value does not depend on
/// the choice). Requires x strictly inside the simplex.
inline double classical_Hr(const Model& model, int r, const PhasePoint& pt, double signed_g) {
  if (r < 1 || r > model.n() - 1) throw InvalidParameter("r must lie in 1..n-1");
  if (model.in_simplex(pt.x).region != SimplexLocation::Region::kInterior)
    throw OutsideConfigurationSpace("classical_Hr: x is not inside the open simplex");
  const double alpha = model.alpha();
  const Eigen::VectorXd bary = model.barycenter();
  double total = 0.0;
  for (const auto& nu : model.orbit_of(r)) {
    const double vb = V_nu(signed_g, alpha, nu, bary);
    const double s = vb > 0 ? 1.0 : -1.0;
    const double prod = V_nu(signed_g, alpha, nu, pt.x) * V_nu(signed_g, alpha, nu, -pt.x);
    if (prod < -1e-12) throw FormulaViolation("V_nu(x) V_nu(-x) negative inside the simplex");
    total += s * std::cos(nu.to_real().dot(pt.momenta)) * std::sqrt(std::max(prod, 0.0));
  }
  return total;
}

inline double classical_Hr(const Model& model, int r, const PhasePoint& pt) {
  return classical_Hr(model, r, pt, model.params().g);
}

/// Uniform sample of the simplex: p-base coordinates t drawn from the box
/// [0, |M|]^{n-1} and kept when sum(t) <= |M| (strictly inside when
/// `interior`, with margin `eps`).
inline Eigen::VectorXd sample_simplex(const Model& model, std::mt19937_64& rng, bool interior = true,
                                      double eps = 1e-6) {
  const int n1 = model.n() - 1;
  const double top = model.params().abs_M();
  std::uniform_real_distribution<double> unif(0.0, top);
  std::vector<double> t(n1);
  while (true) {
    double sum = 0.0;
    bool ok = true;
    for (int j = 0; j < n1; ++j) {
      t[j] = unif(rng);
      sum += t[j];
      if (interior && t[j] < eps) ok = false;
    }
    if (interior ? sum > top - eps : sum > top) ok = false;
    if (!ok) continue;
    Eigen::VectorXd x = model.rho_p();
    for (int j = 0; j < n1; ++j) x += model.s() * t[j] * model.omega_real()[j];
    return x;
  }
}

/// Smallest value of (-1)^{p-1} sgn(M) V_j(+-x) over j; non-negative on the
/// closed simplex.
inline double sign_pattern_min(const Model& model, const Eigen::VectorXd& x) {
  const auto& mp = model.params();
  const double pref = ((mp.p - 1) % 2 == 0 ? 1.0 : -1.0) * mp.sgnM;
  double worst = std::numeric_limits<double>::infinity();
  for (int j = 0; j < mp.n; ++j) {
    worst = std::min(worst, pref * V_J(mp.g, mp.alpha, {j}, x));
    worst = std::min(worst, pref * V_J(mp.g, mp.alpha, {j}, -x));
  }
  return worst;
}

}  // namespace rscd
