#include <gtest/gtest.h>

#include <random>

#include "rscd/eigenbasis.hpp"

using namespace rscd;

namespace {

using Config = std::tuple<int, int, int, double>;

class EigenOnConfig : public ::testing::TestWithParam<Config> {
 protected:
  static Model make(const Config& c) {
    const auto& [n, p, M, g] = c;
    return Model(n, p, M, g);
  }
};

}  // namespace

TEST(N0, TrivialLatticeGivesN) {
  for (auto [n, p, M, g] : {Config{3, 1, 1, 0.2}, Config{5, 2, 1, 1.5}, Config{4, 1, -1, 2.8}}) {
    const Model m(n, p, M, g);
    EXPECT_NEAR(N0(m), n, 1e-12);
    EXPECT_NEAR(n0_product(m.params()), n, 1e-12);
  }
}

TEST(N0, ProductMagnitudeMatchesSum) {
  for (auto [n, p, M, g] : {Config{2, 1, 4, 0.3}, Config{2, 1, -2, 4.0}, Config{3, 2, 2, 3.0},
                            Config{4, 3, 2, 5.0}, Config{3, 1, 4, 0.1}}) {
    const Model m(n, p, M, g);
    const auto res = n0_check(m, DeltaTable(m));
    EXPECT_LE(res.rel_dev, 1e-9);
    EXPECT_NEAR(std::abs(res.product_signed), res.product, 0.0);
  }
}

TEST_P(EigenOnConfig, GroundStateIsEigenvector) {
  const Model m = make(GetParam());
  const SignTable signs(m);
  const LatticeFunction psi = psi_0(m);
  EXPECT_NEAR(psi.norm(), 1.0, 1e-12);
  const Eigen::VectorXd rho = rho_standard(m.n(), m.s() * m.params().g);
  for (int r = 1; r < m.n(); ++r) {
    const auto S = build_S(m, signs, r);
    const cplx e = elementary_E(m.n(), m.alpha(), r, rho);
    EXPECT_LE((S * psi - e * psi).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST_P(EigenOnConfig, BasisIdentities) {
  const Model m = make(GetParam());
  const EigenBasis basis(m);
  EXPECT_LE(basis.gram_max_dev(), 1e-8);
  EXPECT_LE(basis.completeness_dev(), 1e-8);
  EXPECT_LE(basis.self_duality_dev(), 1e-9);
  for (std::size_t l = 0; l < basis.size(); ++l) EXPECT_LE(basis.forward_residual(l), 1e-8);
  // lambda = 0 reproduces the ground state
  EXPECT_LE((basis.psi(0) - psi_0(m)).cwiseAbs().maxCoeff(), 1e-10);
  const auto [worst, smallest] = basis.norm_recurrence_check();
  EXPECT_LE(worst, 1e-10);
  EXPECT_GT(smallest, 0.0);
}

TEST_P(EigenOnConfig, DualEigenEquation) {
  const Model m = make(GetParam());
  const EigenBasis basis(m);
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<std::size_t> pick(0, basis.size() - 1);
  std::uniform_int_distribution<int> rpick(1, m.n() - 1);
  for (int t = 0; t < 100; ++t) EXPECT_LE(basis.dual_eigen_check(rpick(rng), pick(rng), pick(rng)), 1e-8);
}

TEST_P(EigenOnConfig, DenseSolverAgrees) {
  const Model m = make(GetParam());
  const EigenBasis basis(m);
  const auto rep = basis.spectral_crosscheck(99);
  for (double d : rep.eigenvalue_dev) EXPECT_LE(d, 1e-8);
  EXPECT_TRUE(rep.matched);
  EXPECT_LE(rep.overlap_dev, 1e-7);
  EXPECT_NO_THROW(spectral_crosscheck(basis, 99));
}

TEST_P(EigenOnConfig, EnergiesAreRealParts) {
  const Model m = make(GetParam());
  const EigenBasis basis(m);
  for (std::size_t l = 0; l < basis.size(); ++l)
    for (int r = 1; r < m.n(); ++r) {
      EXPECT_NEAR(basis.energy(l, r), basis.eigenvalue(l, r).real(), 1e-12);
      // E_{n-r} is the conjugate of E_r
      EXPECT_NEAR(std::abs(basis.eigenvalue(l, m.n() - r) - std::conj(basis.eigenvalue(l, r))), 0.0, 1e-12);
    }
}

INSTANTIATE_TEST_SUITE_P(Configs, EigenOnConfig,
                         ::testing::Values(Config{3, 1, 2, 0.5}, Config{3, 2, 1, 1.5}, Config{3, 2, -1, 1.6},
                                           Config{4, 1, -2, 2.5}, Config{4, 3, 2, 5.0}, Config{5, 2, 1, 1.5},
                                           Config{2, 1, 3, 0.7}, Config{4, 1, 3, 0.3}));
