#pragma once

// A_{n-1} Macdonald polynomials at unitary parameters, restricted to the
// truncated cone of dominant weights with <a_max, lambda> <= top.
//
// Procedure: the expansion coefficients of D_r m_kappa in the monomial basis
// are recovered by sampling at random real points and solving a complex
// least-squares problem; P_lambda is then the joint null vector of the
// stacked systems (C^r - E_r(rho + lambda)).

#include <algorithm>
#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "rscd/coeffs.hpp"
#include "rscd/errors.hpp"
#include "rscd/model.hpp"
#include "rscd/rootsys.hpp"

namespace rscd {

using cplx = std::complex<double>;

/// E_r(u) = sum over the orbit of omega_r of exp(i alpha <nu, u>).
inline cplx elementary_E(int n, double alpha, int r, const Eigen::VectorXd& u) {
  cplx sum = 0.0;
  for (const auto& nu : orbit(n, r)) sum += std::polar(1.0, alpha * nu.to_real().dot(u));
  return sum;
}

/// Cosine version: sum over the orbit of cos(alpha <nu, u>).
inline double E_cos(int n, double alpha, int r, const Eigen::VectorXd& u) {
  double sum = 0.0;
  for (const auto& nu : orbit(n, r)) sum += std::cos(alpha * nu.to_real().dot(u));
  return sum;
}

/// Distinct permutations of a weight's coordinates, as real vectors.
inline std::vector<Eigen::VectorXd> weight_orbit_real(const Weight& lam) {
  std::vector<std::int64_t> c = lam.scaled();
  std::sort(c.begin(), c.end());
  std::vector<Eigen::VectorXd> out;
  const double n = lam.dim();
  do {
    Eigen::VectorXd v(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) v[static_cast<Eigen::Index>(i)] = c[i] / n;
    out.push_back(std::move(v));
  } while (std::next_permutation(c.begin(), c.end()));
  return out;
}

inline cplx orbit_sum(const std::vector<Eigen::VectorXd>& orb, double alpha, const Eigen::VectorXd& x) {
  cplx sum = 0.0;
  for (const auto& mu : orb) sum += std::polar(1.0, alpha * mu.dot(x));
  return sum;
}

/// m_lambda(x) = sum over the S_n-orbit of lambda of exp(i alpha <mu, x>).
inline cplx monomial_m(const Weight& lam, double alpha, const Eigen::VectorXd& x) {
  return orbit_sum(weight_orbit_real(lam), alpha, x);
}

/// |sum_nu V_nu(g; x) - E_r(rho(g))|.
inline double macdonald_identity_residual(int n, double alpha, double g, int r, const Eigen::VectorXd& x) {
  double lhs = 0.0;
  for (const auto& nu : orbit(n, r)) lhs += V_nu(g, alpha, nu, x);
  return std::abs(lhs - elementary_E(n, alpha, r, rho_standard(n, g)));
}

struct MacPoly {
  std::vector<int> lam;                  // standard-base coordinates
  std::vector<std::size_t> support;      // indices into the cone, all mu <= lam
  Eigen::VectorXcd coeffs;               // aligned with support; 1 at lam
  double joint_residual = 0.0;           // max_r |(C^r - E_r) u|
  double smallest_singular = 0.0;
  double second_singular = std::numeric_limits<double>::infinity();
};

struct SamplingOptions {
  std::uint64_t seed = 42;
  double oversample = 3.0;        // samples per basis function, at least 2
  double pole_margin = 1e-3;      // reject |sin(alpha/2 (x_j - x_k))| below this
  double fit_tol = 1e-8;
  double null_tol = 1e-9;
  double gap_tol = 1e-6;
  int attempts = 3;
};

class MacdonaldSystem {
 public:
  MacdonaldSystem(int n, double alpha, double g_eff, int top, SamplingOptions opt = {})
      : n_(n), alpha_(alpha), g_(g_eff), top_(top), opt_(opt), base_(RootBase::make(n, 1)) {
    if (n < 2) throw InvalidParameter("n must be >= 2");
    if (top < 0) throw InvalidParameter("cone height must be non-negative");
    cone_ = cone_indices(n, top);
    for (const auto& m : cone_) {
      weights_.push_back(base_.from_coords(m));
      orbits_.push_back(weight_orbit_real(weights_.back()));
    }
    rho_ = rho_standard(n, g_eff);
    for (int r = 1; r <= n - 1; ++r) fit_operator(r);
  }

  // Built for a model: alpha, sgn(M) g and |M|.
  explicit MacdonaldSystem(const Model& model, SamplingOptions opt = {})
      : MacdonaldSystem(model.n(), model.alpha(), model.s() * model.params().g, model.params().abs_M(), opt) {}

  int n() const { return n_; }
  double alpha() const { return alpha_; }
  double g_eff() const { return g_; }
  std::size_t size() const { return cone_.size(); }
  const std::vector<std::vector<int>>& cone() const { return cone_; }
  const Weight& weight(std::size_t i) const { return weights_[i]; }
  const Eigen::VectorXd& rho() const { return rho_; }

  std::size_t index_of(const std::vector<int>& lam) const {
    auto it = std::find(cone_.begin(), cone_.end(), lam);
    if (it == cone_.end()) throw InvalidInput("weight outside the truncated cone");
    return static_cast<std::size_t>(it - cone_.begin());
  }

  /// Column kappa holds the fitted coefficients of D_r m_kappa.
  const Eigen::MatrixXcd& C(int r) const { return C_.at(r - 1); }
  double fit_residual() const { return fit_residual_; }

  /// Largest fitted coefficient on a monomial that is not dominance-below kappa.
  double triangularity_defect() const {
    double worst = 0.0;
    for (const auto& c : C_)
      for (std::size_t k = 0; k < size(); ++k)
        for (std::size_t mu = 0; mu < size(); ++mu)
          if (!leq(mu, k)) worst = std::max(worst, std::abs(c(mu, k)));
    return worst;
  }

  /// max_{r, kappa} |c^r_{kappa kappa} - E_r(rho + kappa)|
  double diagonal_defect() const {
    double worst = 0.0;
    for (int r = 1; r <= n_ - 1; ++r)
      for (std::size_t k = 0; k < size(); ++k)
        worst = std::max(worst, std::abs(C(r)(k, k) - eigenvalue(r, k)));
    return worst;
  }

  cplx eigenvalue(int r, std::size_t lam) const {
    return elementary_E(n_, alpha_, r, rho_ + weights_[lam].to_real());
  }

  std::vector<cplx> eig_tuple(std::size_t lam) const {
    std::vector<cplx> t;
    for (int r = 1; r <= n_ - 1; ++r) t.push_back(eigenvalue(r, lam));
    return t;
  }

  /// Smallest Euclidean distance between eigenvalue tuples of distinct cone
  /// points; throws Degeneracy below `tol`.
  double audit_distinctness(double tol = 1e-8) const {
    double best = std::numeric_limits<double>::infinity();
    std::vector<std::vector<cplx>> tuples;
    for (std::size_t i = 0; i < size(); ++i) tuples.push_back(eig_tuple(i));
    for (std::size_t i = 0; i < size(); ++i)
      for (std::size_t j = i + 1; j < size(); ++j) {
        double d2 = 0.0;
        for (int r = 0; r < n_ - 1; ++r) d2 += std::norm(tuples[i][r] - tuples[j][r]);
        best = std::min(best, std::sqrt(d2));
      }
    if (best < tol) {
      std::ostringstream os;
      os << "eigenvalue tuples collide (min distance " << best << ")";
      throw Degeneracy(os.str());
    }
    return best;
  }

  MacPoly P(std::size_t lam) const {
    MacPoly out;
    out.lam = cone_[lam];
    for (std::size_t mu = 0; mu < size(); ++mu)
      if (leq(mu, lam)) out.support.push_back(mu);
    const auto s = static_cast<Eigen::Index>(out.support.size());
    Eigen::MatrixXcd stacked(static_cast<Eigen::Index>(n_ - 1) * s, s);
    for (int r = 1; r <= n_ - 1; ++r) {
      const cplx e = eigenvalue(r, lam);
      for (Eigen::Index i = 0; i < s; ++i)
        for (Eigen::Index j = 0; j < s; ++j)
          stacked((r - 1) * s + i, j) = C(r)(out.support[i], out.support[j]) - (i == j ? e : cplx(0.0));
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(stacked, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    out.smallest_singular = sv[s - 1];
    if (s > 1) out.second_singular = sv[s - 2];
    if (out.smallest_singular > opt_.null_tol || out.second_singular < opt_.gap_tol) {
      std::ostringstream os;
      os << "joint kernel is not one-dimensional for lambda index " << lam << " (sigma_min "
         << out.smallest_singular << ", sigma_2 " << out.second_singular << ")";
      throw Degeneracy(os.str());
    }
    Eigen::VectorXcd u = svd.matrixV().col(s - 1);
    const auto top = std::find(out.support.begin(), out.support.end(), lam) - out.support.begin();
    u /= u[top];
    u[top] = 1.0;
    out.coeffs = u;
    out.joint_residual = (stacked * u).cwiseAbs().maxCoeff();
    return out;
  }

  MacPoly P(const std::vector<int>& lam) const { return P(index_of(lam)); }

  cplx evaluate(const MacPoly& poly, const Eigen::VectorXd& x) const {
    cplx sum = 0.0;
    for (std::size_t i = 0; i < poly.support.size(); ++i)
      sum += poly.coeffs[static_cast<Eigen::Index>(i)] * orbit_sum(orbits_[poly.support[i]], alpha_, x);
    return sum;
  }

  /// prod_{a > 0} (<a,rho> : sin)_{<a,lam>} / (<a,rho> + g : sin)_{<a,lam>}
  double renormalization(std::size_t lam) const {
    const Eigen::VectorXd l = weights_[lam].to_real();
    double prod = 1.0;
    for (const auto& [j, k] : all_root_pairs(n_)) {
      if (j > k) continue;
      const double arho = rho_[j] - rho_[k];
      const int m = static_cast<int>(std::lround(l[j] - l[k]));
      const double den = trig_pochhammer(arho + g_, m, alpha_);
      if (std::abs(den) < kPoleThreshold) throw SingularValue("renormalization: vanishing Pochhammer symbol");
      prod *= trig_pochhammer(arho, m, alpha_) / den;
    }
    return prod;
  }

  /// P-tilde_lam(x) for every lam in the cone, built once.
  const std::vector<MacPoly>& polynomials() const {
    if (polys_.empty()) {
      for (std::size_t i = 0; i < size(); ++i) {
        polys_.push_back(P(i));
        norms_.push_back(renormalization(i));
      }
    }
    return polys_;
  }

  cplx P_tilde(std::size_t lam, const Eigen::VectorXd& x) const {
    polynomials();
    return norms_[lam] * evaluate(polys_[lam], x);
  }

  /// max |P~_lam(rho + mu) - P~_mu(rho + lam)| over the cone.
  double self_duality_defect() const {
    double worst = 0.0;
    for (std::size_t a = 0; a < size(); ++a)
      for (std::size_t b = a + 1; b < size(); ++b) {
        const cplx lhs = P_tilde(a, rho_ + weights_[b].to_real());
        const cplx rhs = P_tilde(b, rho_ + weights_[a].to_real());
        worst = std::max(worst, std::abs(lhs - rhs));
      }
    return worst;
  }

  /// (D_r f)(x) = sum_nu V_nu(g; x) f(x + nu) for a monomial f = m_kappa.
  cplx apply_D(int r, std::size_t kappa, const Eigen::VectorXd& x) const {
    cplx sum = 0.0;
    for (const auto& nu : orbit(n_, r)) {
      const Eigen::VectorXd shift = nu.to_real();
      sum += V_nu(g_, alpha_, nu, x) * orbit_sum(orbits_[kappa], alpha_, x + shift);
    }
    return sum;
  }

  /// Residual of D_r P = E_r(rho + lam) P at x.
  double difference_equation_residual(const MacPoly& poly, int r, const Eigen::VectorXd& x) const {
    const std::size_t lam = index_of(poly.lam);
    cplx lhs = 0.0;
    for (const auto& nu : orbit(n_, r)) lhs += V_nu(g_, alpha_, nu, x) * evaluate(poly, x + nu.to_real());
    return std::abs(lhs - eigenvalue(r, lam) * evaluate(poly, x));
  }

  /// Random point of E_n away from every sine-denominator zero.
  Eigen::VectorXd sample_point(std::mt19937_64& rng) const {
    const double width = kTwoPi / alpha_;
    std::uniform_real_distribution<double> unif(0.0, width);
    for (int tries = 0; tries < 100000; ++tries) {
      Eigen::VectorXd x(n_);
      for (int i = 0; i < n_; ++i) x[i] = unif(rng);
      x.array() -= x.mean();
      bool ok = true;
      for (int j = 0; j < n_ && ok; ++j)
        for (int k = j + 1; k < n_ && ok; ++k)
          if (std::abs(std::sin(0.5 * alpha_ * (x[j] - x[k]))) < opt_.pole_margin) ok = false;
      if (ok) return x;
    }
    throw IllConditionedSampling("could not draw a sample point away from the poles");
  }

 private:
  bool leq(std::size_t mu, std::size_t lam) const { return dominance_leq(weights_[mu], weights_[lam], base_); }

  void fit_operator(int r) {
    const auto dim = static_cast<Eigen::Index>(size());
    const auto samples = static_cast<Eigen::Index>(
        std::max<double>(2.0 * dim, std::ceil(opt_.oversample * dim)) + 2);
    Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(dim, dim);
    for (Eigen::Index kappa = 0; kappa < dim; ++kappa) {
      double best = std::numeric_limits<double>::infinity();
      for (int attempt = 0; attempt < opt_.attempts; ++attempt) {
        std::seed_seq seq{static_cast<std::uint32_t>(opt_.seed), static_cast<std::uint32_t>(opt_.seed >> 32),
                          static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(kappa),
                          static_cast<std::uint32_t>(attempt)};
        std::mt19937_64 rng(seq);
        Eigen::MatrixXcd A(samples, dim);
        Eigen::VectorXcd b(samples);
        for (Eigen::Index i = 0; i < samples; ++i) {
          const Eigen::VectorXd x = sample_point(rng);
          for (Eigen::Index mu = 0; mu < dim; ++mu) A(i, mu) = orbit_sum(orbits_[mu], alpha_, x);
          b[i] = apply_D(r, static_cast<std::size_t>(kappa), x);
        }
        const Eigen::VectorXcd c = A.colPivHouseholderQr().solve(b);
        const double res = (A * c - b).cwiseAbs().maxCoeff() / std::max(1.0, b.cwiseAbs().maxCoeff());
        if (res < best) {
          best = res;
          C.col(kappa) = c;
        }
        if (res < opt_.fit_tol) break;
      }
      if (!(best < opt_.fit_tol)) {
        std::ostringstream os;
        os << "monomial fit residual " << best << " above tolerance (r = " << r << ")";
        throw IllConditionedSampling(os.str());
      }
      fit_residual_ = std::max(fit_residual_, best);
    }
    C_.push_back(std::move(C));
  }

  int n_;
  double alpha_;
  double g_;
  int top_;
  SamplingOptions opt_;
  RootBase base_;
  std::vector<std::vector<int>> cone_;
  std::vector<Weight> weights_;
  std::vector<std::vector<Eigen::VectorXd>> orbits_;
  Eigen::VectorXd rho_;
  std::vector<Eigen::MatrixXcd> C_;
  double fit_residual_ = 0.0;
  mutable std::vector<MacPoly> polys_;
  mutable std::vector<double> norms_;
};

}  // namespace rscd
