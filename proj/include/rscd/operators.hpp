#pragma once

// Dense matrix realisations of the restricted difference operators on the
// lattice Hilbert space. Every coefficient is real, so matrices are stored
// as real doubles; lattice functions are complex.

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "rscd/coeffs.hpp"
#include "rscd/errors.hpp"
#include "rscd/model.hpp"

namespace rscd {

using LatticeFunction = Eigen::VectorXcd;

/// (phi, psi) = sum_mu phi(mu) conj(psi(mu)).
inline std::complex<double> inner_product(const LatticeFunction& phi, const LatticeFunction& psi) {
  if (phi.size() != psi.size()) throw InvalidInput("inner_product: length mismatch");
  return psi.dot(phi);  // Eigen conjugates the left operand
}

struct OperatorMatrix {
  enum class Kind { kS, kD, kH };
  Kind kind = Kind::kS;
  int r = 0;
  Eigen::MatrixXd entries;

  Eigen::Index dim() const { return entries.rows(); }
  LatticeFunction operator*(const LatticeFunction& phi) const {
    if (phi.size() != entries.cols()) throw InvalidInput("operator/vector dimension mismatch");
    return entries.cast<std::complex<double>>() * phi;
  }
};

inline const char* to_string(OperatorMatrix::Kind k) {
  switch (k) {
    case OperatorMatrix::Kind::kS: return "S";
    case OperatorMatrix::Kind::kD: return "D";
    case OperatorMatrix::Kind::kH: return "H";
  }
  return "?";
}

namespace detail {

template <typename Coefficient>
Eigen::MatrixXd banded_matrix(const Model& model, int r, Coefficient&& coef) {
  if (r < 1 || r > model.n() - 1) throw InvalidParameter("r must lie in 1..n-1");
  const auto dim = static_cast<Eigen::Index>(model.size());
  Eigen::MatrixXd mat = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index row = 0; row < dim; ++row) {
    const auto& mu = model.point(row).m;
    for (const auto& nu : model.orbit_of(r)) {
      const auto col = model.index_of(model.shifted(mu, nu));
      if (!col) continue;
      mat(row, static_cast<Eigen::Index>(*col)) += coef(nu, mu);
    }
  }
  return mat;
}

}  // namespace detail

/// S_{r,M}: (S phi)(mu) = sum_{nu in S_n(omega_r), mu+nu in cone} W_nu(mu) phi(mu+nu).
inline OperatorMatrix build_S(const Model& model, const SignTable& signs, int r) {
  return {OperatorMatrix::Kind::kS, r,
          detail::banded_matrix(model, r, [&](const Weight& nu, const std::vector<int>& mu) {
            return W_nu(model, signs, nu, mu);
          })};
}

inline OperatorMatrix build_S(const Model& model, int r) { return build_S(model, SignTable(model), r); }

/// D_{r,M}: same band structure with V_nu(rho_p + sgn(M) mu) as coefficient.
inline OperatorMatrix build_D(const Model& model, int r) {
  const auto& mp = model.params();
  return {OperatorMatrix::Kind::kD, r,
          detail::banded_matrix(model, r, [&](const Weight& nu, const std::vector<int>& mu) {
            return V_nu(mp.g, mp.alpha, nu, model.lattice_point(mu));
          })};
}

inline OperatorMatrix build_H(const Model& model, const SignTable& signs, int r) {
  const auto a = build_S(model, signs, r);
  const auto b = build_S(model, signs, model.n() - r);
  return {OperatorMatrix::Kind::kH, r, 0.5 * (a.entries + b.entries)};
}

inline OperatorMatrix build_H(const Model& model, int r) { return build_H(model, SignTable(model), r); }

/// max |S_r - S_{n-r}^T| over entries.
inline double adjoint_check(const Model& model, const SignTable& signs, int r) {
  const auto a = build_S(model, signs, r);
  const auto b = build_S(model, signs, model.n() - r);
  return (a.entries - b.entries.transpose()).cwiseAbs().maxCoeff();
}

inline double commutator_norm(const OperatorMatrix& a, const OperatorMatrix& b) {
  if (a.dim() != b.dim()) throw InvalidInput("commutator_norm: dimension mismatch");
  return (a.entries * b.entries - b.entries * a.entries).norm();
}

// All S_{r,M}, r = 1..n-1 (index r-1).
inline std::vector<OperatorMatrix> build_all_S(const Model& model, const SignTable& signs) {
  std::vector<OperatorMatrix> out;
  for (int r = 1; r <= model.n() - 1; ++r) out.push_back(build_S(model, signs, r));
  return out;
}

}  // namespace rscd
