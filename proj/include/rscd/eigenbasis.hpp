#pragma once

// Joint eigenfunctions Psi_lambda of the lattice operators: normalisation,
// orthonormality, self-duality, the forward and dual eigen-equations, and a
// brute-force cross-check against a dense Hermitian eigensolver.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "rscd/coeffs.hpp"
#include "rscd/errors.hpp"
#include "rscd/macdonald.hpp"
#include "rscd/model.hpp"
#include "rscd/operators.hpp"

namespace rscd {

inline constexpr double kN0Tol = 1e-9;

/// 2^{(n-1)(|M|-1)} n prod_k (1 + sgn(M) k g : sin_alpha)_{|M|-1}, as written.
/// The sign of this expression is not always positive; see n0_product.
inline double n0_product_signed(const ModelParams& mp) {
  const int m = mp.abs_M() - 1;
  double prod = std::ldexp(static_cast<double>(mp.n), (mp.n - 1) * m);
  for (int k = 1; k <= mp.n - 1; ++k) prod *= trig_pochhammer(1.0 + mp.sgnM * k * mp.g, m, mp.alpha);
  return prod;
}

/// Magnitude of the closed-form product; equals the lattice sum of Delta_p.
inline double n0_product(const ModelParams& mp) { return std::abs(n0_product_signed(mp)); }

struct N0Result {
  double sum = 0.0;
  double product = 0.0;         // magnitude
  double product_signed = 0.0;  // the closed form without absolute value
  double rel_dev = 0.0;         // |sum - product| / sum
};

inline N0Result n0_check(const Model& model, const DeltaTable& delta) {
  N0Result out;
  for (double v : delta.values()) out.sum += v;
  out.product_signed = n0_product_signed(model.params());
  out.product = std::abs(out.product_signed);
  out.rel_dev = std::abs(out.sum - out.product) / out.sum;
  return out;
}

/// Sum of Delta_p over the lattice; throws FormulaViolation when the product
/// formula disagrees beyond 1e-9 relative.
inline double N0(const Model& model) {
  const DeltaTable delta(model);
  const auto r = n0_check(model, delta);
  if (r.rel_dev > kN0Tol) {
    std::ostringstream os;
    os << "N0 lattice sum " << r.sum << " disagrees with product formula " << r.product;
    throw FormulaViolation(os.str());
  }
  return r.sum;
}

inline LatticeFunction psi_0(const Model& model, const DeltaTable& delta, double n0) {
  LatticeFunction out(static_cast<Eigen::Index>(model.size()));
  for (std::size_t i = 0; i < model.size(); ++i) out[static_cast<Eigen::Index>(i)] = std::sqrt(delta[i] / n0);
  return out;
}

inline LatticeFunction psi_0(const Model& model) {
  const DeltaTable delta(model);
  return psi_0(model, delta, N0(model));
}

struct CrosscheckReport {
  std::vector<double> eigenvalue_dev;  // per r: sorted spectrum of H_r vs predicted
  double tuple_match_dev = 0.0;        // worst distance of a numeric joint tuple to its match
  double overlap_dev = 0.0;            // max | |<v, Psi>| - 1 |
  double min_separation = 0.0;         // smallest gap in the combined spectrum
  bool matched = false;
};

class EigenBasis {
 public:
  explicit EigenBasis(const Model& model, SamplingOptions opt = {})
      : model_(&model), signs_(model), delta_(model), mac_(model, opt) {
    const auto n0 = n0_check(model, delta_);
    n0_ = n0;
    if (n0.rel_dev > kN0Tol) {
      std::ostringstream os;
      os << "N0 lattice sum " << n0.sum << " disagrees with product formula " << n0.product;
      throw FormulaViolation(os.str());
    }
    mac_.audit_distinctness();
    S_ = build_all_S(model, signs_);
    const double g_eff = model.s() * model.params().g;
    rho_eff_ = rho_standard(model.n(), g_eff);
    rho_check_ = rho_check_p(model, g_eff);

    const auto D = static_cast<Eigen::Index>(model.size());
    table_.resize(D, D);
    for (std::size_t l = 0; l < model.size(); ++l) {
      const auto& lam = model.point(l).m;
      const std::size_t mac_index = mac_.index_of(model.to_standard(lam));
      std_index_.push_back(mac_index);
      for (std::size_t m = 0; m < model.size(); ++m) {
        const Eigen::VectorXd x = rho_check_ + model.weight_of(model.point(m).m).to_real();
        table_(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(l)) =
            std::sqrt(delta_[l] * delta_[m] / n0_.sum) * mac_.P_tilde(mac_index, x);
      }
    }
  }

  const Model& model() const { return *model_; }
  const SignTable& signs() const { return signs_; }
  const DeltaTable& delta() const { return delta_; }
  const MacdonaldSystem& macdonald() const { return mac_; }
  const N0Result& n0() const { return n0_; }
  const std::vector<OperatorMatrix>& S() const { return S_; }
  std::size_t size() const { return model_->size(); }

  /// Column l is Psi_{lambda_l} on the ordered lattice.
  const Eigen::MatrixXcd& table() const { return table_; }
  LatticeFunction psi(std::size_t lam) const { return table_.col(static_cast<Eigen::Index>(lam)); }

  /// sigma_p(lambda) in the standard base, as a real vector.
  Eigen::VectorXd sigma_lambda(std::size_t lam) const { return mac_.weight(std_index_[lam]).to_real(); }

  /// E_r(rho(sgn(M) g) + sigma_p(lambda)), complex exponential sum.
  cplx eigenvalue(std::size_t lam, int r) const {
    return elementary_E(model_->n(), model_->alpha(), r, rho_eff_ + sigma_lambda(lam));
  }
  /// Cosine version: eigenvalue of H_r.
  double energy(std::size_t lam, int r) const {
    return E_cos(model_->n(), model_->alpha(), r, rho_eff_ + sigma_lambda(lam));
  }

  Eigen::MatrixXcd gram() const { return table_.adjoint() * table_; }

  double gram_max_dev() const {
    const auto D = static_cast<Eigen::Index>(size());
    return (gram() - Eigen::MatrixXcd::Identity(D, D)).cwiseAbs().maxCoeff();
  }

  double completeness_dev() const {
    const auto D = static_cast<Eigen::Index>(size());
    return (table_ * table_.adjoint() - Eigen::MatrixXcd::Identity(D, D)).cwiseAbs().maxCoeff();
  }

  /// max |Psi_lambda(mu) - Psi_mu(lambda)|
  double self_duality_dev() const { return (table_ - table_.transpose()).cwiseAbs().maxCoeff(); }

  double max_imag() const { return table_.imag().cwiseAbs().maxCoeff(); }

  /// max over r of max |(S_r Psi_lambda - E_r Psi_lambda)(mu)|
  double forward_residual(std::size_t lam) const {
    double worst = 0.0;
    const LatticeFunction v = psi(lam);
    for (int r = 1; r <= model_->n() - 1; ++r)
      worst = std::max(worst, (S_[r - 1] * v - eigenvalue(lam, r) * v).cwiseAbs().maxCoeff());
    return worst;
  }

  /// Residual of the eigen-equation in the spectral variable at (lambda, mu).
  /// The two orbit sums make up S_r + S_{n-r}, so they are halved before
  /// comparing with the cosine eigenvalue.
  double dual_eigen_check(int r, std::size_t lam, std::size_t mu) const {
    const auto& m = model_->point(mu).m;
    cplx lhs = 0.0;
    for (const auto& nu : model_->orbit_of(r)) {
      for (const Weight& step : {nu, -nu}) {
        const auto target = model_->index_of(model_->shifted(m, step));
        if (!target) continue;
        lhs += W_nu(*model_, signs_, step, m) * value(*target, lam);
      }
    }
    return std::abs(0.5 * lhs - energy(lam, r) * value(mu, lam));
  }

  /// Psi_{mu}(rho_p + sgn(M) lambda): row lambda, column mu of the table.
  cplx value(std::size_t mu_label, std::size_t at) const {
    return table_(static_cast<Eigen::Index>(at), static_cast<Eigen::Index>(mu_label));
  }

  /// max |W_{omega_j,p}(mu) - W_{-omega_j,p}(mu + omega_j,p)| over lattice
  /// steps, and the smallest |W| seen (must be nonzero).
  std::pair<double, double> norm_recurrence_check() const {
    double worst = 0.0, smallest = std::numeric_limits<double>::infinity();
    for (const auto& pt : model_->points()) {
      for (const auto& w : model_->base().fundamental_weights) {
        const auto next = model_->shifted(pt.m, w);
        if (!model_->contains(next)) continue;
        const double a = W_nu(*model_, signs_, w, pt.m);
        const double b = W_nu(*model_, signs_, -w, next);
        worst = std::max(worst, std::abs(a - b));
        smallest = std::min(smallest, std::abs(a));
      }
    }
    return {worst, smallest};
  }

  /// Diagonalise each H_r and a random Hermitian combination of the H_r and
  /// K_r = (S_r - S_{n-r})/(2i), then match joint eigenvectors to Psi_lambda.
  CrosscheckReport spectral_crosscheck(std::uint64_t seed, double tuple_tol = 1e-8) const {
    CrosscheckReport rep;
    const int n = model_->n();
    const auto D = static_cast<Eigen::Index>(size());
    for (int r = 1; r <= n - 1; ++r) {
      const auto H = build_H(*model_, signs_, r);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H.entries, Eigen::EigenvaluesOnly);
      std::vector<double> predicted;
      for (std::size_t l = 0; l < size(); ++l) predicted.push_back(energy(l, r));
      std::sort(predicted.begin(), predicted.end());
      double dev = 0.0;
      for (Eigen::Index i = 0; i < D; ++i) dev = std::max(dev, std::abs(es.eigenvalues()[i] - predicted[i]));
      rep.eigenvalue_dev.push_back(dev);
    }

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(D, D);
    for (int r = 1; r <= n - 1; ++r) {
      const Eigen::MatrixXd& s = S_[r - 1].entries;
      const Eigen::MatrixXd h = 0.5 * (s + s.transpose());
      const Eigen::MatrixXcd k = (s - s.transpose()).cast<cplx>() / cplx(0.0, 2.0);
      A += unif(rng) * h.cast<cplx>() + unif(rng) * k;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(A);
    rep.min_separation = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 1; i < D; ++i)
      rep.min_separation = std::min(rep.min_separation, es.eigenvalues()[i] - es.eigenvalues()[i - 1]);

    std::vector<bool> used(size(), false);
    rep.matched = true;
    for (Eigen::Index i = 0; i < D; ++i) {
      const Eigen::VectorXcd v = es.eigenvectors().col(i);
      std::vector<cplx> tuple;
      for (int r = 1; r <= n - 1; ++r) tuple.push_back(v.dot(S_[r - 1] * v));
      std::size_t best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t l = 0; l < size(); ++l) {
        double d2 = 0.0;
        for (int r = 1; r <= n - 1; ++r) d2 += std::norm(tuple[r - 1] - eigenvalue(l, r));
        if (d2 < best_d) {
          best_d = d2;
          best = l;
        }
      }
      best_d = std::sqrt(best_d);
      rep.tuple_match_dev = std::max(rep.tuple_match_dev, best_d);
      if (used[best] || best_d > tuple_tol) rep.matched = false;
      used[best] = true;
      rep.overlap_dev = std::max(rep.overlap_dev, std::abs(std::abs(psi(best).dot(v)) - 1.0));
    }
    return rep;
  }

 private:
  const Model* model_;
  SignTable signs_;
  DeltaTable delta_;
  MacdonaldSystem mac_;
  N0Result n0_;
  std::vector<OperatorMatrix> S_;
  Eigen::VectorXd rho_eff_;
  Eigen::VectorXd rho_check_;
  std::vector<std::size_t> std_index_;
  Eigen::MatrixXcd table_;
};

/// Throws SpectralMismatch unless every numeric joint eigenvector matched.
inline CrosscheckReport spectral_crosscheck(const EigenBasis& basis, std::uint64_t seed) {
  auto rep = basis.spectral_crosscheck(seed);
  if (!rep.matched) throw SpectralMismatch("numeric joint eigenvectors could not be matched one-to-one");
  return rep;
}

}  // namespace rscd
