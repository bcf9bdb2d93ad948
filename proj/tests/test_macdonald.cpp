#include <gtest/gtest.h>

#include <random>

#include "rscd/macdonald.hpp"

using namespace rscd;

namespace {

// e_r(z_1, ..., z_n) with z_j = exp(i alpha u_j).
cplx elementary_symmetric(int r, double alpha, const Eigen::VectorXd& u) {
  std::vector<cplx> e(r + 1, 0.0);
  e[0] = 1.0;
  for (Eigen::Index j = 0; j < u.size(); ++j) {
    const cplx z = std::polar(1.0, alpha * u[j]);
    for (int k = r; k >= 1; --k) e[k] += z * e[k - 1];
  }
  return e[r];
}

Eigen::VectorXd random_centred(int n, std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x[i] = u(rng);
  x.array() -= x.mean();
  return x;
}

}  // namespace

TEST(Elementary, MatchesSymmetricFunction) {
  std::mt19937_64 rng(1);
  for (int n = 2; n <= 6; ++n)
    for (int r = 1; r < n; ++r)
      for (int t = 0; t < 5; ++t) {
        const Eigen::VectorXd u = random_centred(n, rng, 3.0);
        EXPECT_NEAR(std::abs(elementary_E(n, 0.8, r, u) - elementary_symmetric(r, 0.8, u)), 0.0, 1e-12);
        EXPECT_NEAR(E_cos(n, 0.8, r, u), elementary_E(n, 0.8, r, u).real(), 1e-12);
      }
}

TEST(Monomial, SmallOrbits) {
  const Eigen::VectorXd x = (Eigen::VectorXd(3) << 0.4, -0.1, -0.3).finished();
  EXPECT_NEAR(std::abs(monomial_m(Weight::zero(3), 0.7, x) - 1.0), 0.0, 1e-15);
  const Weight om1 = Weight::from_subset(3, {0});
  EXPECT_NEAR(std::abs(monomial_m(om1, 0.7, x) - elementary_symmetric(1, 0.7, x)), 0.0, 1e-14);
  EXPECT_EQ(weight_orbit_real(om1 + om1).size(), 3u);
  EXPECT_EQ(weight_orbit_real(om1 - Weight::from_subset(3, {2})).size(), 6u);
}

TEST(MacdonaldIdentity, RandomPoints) {
  std::mt19937_64 rng(2);
  for (int n = 2; n <= 6; ++n)
    for (double g : {0.3, 1.7, -0.45})
      for (int t = 0; t < 20; ++t) {
        const Eigen::VectorXd x = random_centred(n, rng, 2.0);
        for (int r = 1; r < n; ++r) EXPECT_LE(macdonald_identity_residual(n, 1.3, g, r, x), 1e-9);
      }
}

TEST(MacdonaldSystem, RogersPolynomialsForTwoParticles) {
  // P_k = sum_j R_j R_{k-j} / R_k z^{k-2j},
  // R_j = prod_{i<j} sin(alpha(g+i)/2) / sin(alpha(1+i)/2).
  const double alpha = 0.9, g = 0.37;
  const MacdonaldSystem ms(2, alpha, g, 5);
  auto R = [&](int j) {
    double r = 1.0;
    for (int i = 0; i < j; ++i) r *= std::sin(alpha * (g + i) / 2) / std::sin(alpha * (1 + i) / 2);
    return r;
  };
  for (int k = 0; k <= 5; ++k) {
    const auto P = ms.P(std::vector<int>{k});
    ASSERT_EQ(P.support.size(), static_cast<std::size_t>(k / 2 + 1));
    for (std::size_t i = 0; i < P.support.size(); ++i) {
      const int deg = ms.cone()[P.support[i]][0];
      const int j = (k - deg) / 2;
      EXPECT_NEAR(std::abs(P.coeffs[static_cast<Eigen::Index>(i)] - R(j) * R(k - j) / R(k)), 0.0, 1e-9);
    }
  }
}

class MacdonaldOnModel : public ::testing::TestWithParam<std::tuple<int, int, int, double>> {};

TEST_P(MacdonaldOnModel, FitIsTriangularWithKnownDiagonal) {
  const auto& [n, p, M, g] = GetParam();
  const Model model(n, p, M, g);
  const MacdonaldSystem ms(model);
  EXPECT_LE(ms.fit_residual(), 1e-8);
  EXPECT_LE(ms.triangularity_defect(), 1e-8);
  EXPECT_LE(ms.diagonal_defect(), 1e-8);
  EXPECT_GT(ms.audit_distinctness(), 1e-8);
}

TEST_P(MacdonaldOnModel, PolynomialsSolveDifferenceEquations) {
  const auto& [n, p, M, g] = GetParam();
  const Model model(n, p, M, g);
  const MacdonaldSystem ms(model);
  std::mt19937_64 rng(21);
  for (const auto& P : ms.polynomials()) {
    EXPECT_LE(P.smallest_singular, 1e-9);
    EXPECT_GT(P.second_singular, 1e-6);
    const auto top = std::find(P.support.begin(), P.support.end(), ms.index_of(P.lam)) - P.support.begin();
    EXPECT_EQ(P.coeffs[top], cplx(1.0));
    for (int t = 0; t < 3; ++t) {
      const Eigen::VectorXd x = ms.sample_point(rng);
      for (int r = 1; r < n; ++r) EXPECT_LE(ms.difference_equation_residual(P, r, x), 1e-8);
    }
  }
}

TEST_P(MacdonaldOnModel, RenormalisedPolynomialsAreSelfDual) {
  const auto& [n, p, M, g] = GetParam();
  const Model model(n, p, M, g);
  const MacdonaldSystem ms(model);
  EXPECT_NEAR(ms.renormalization(0), 1.0, 1e-15);
  EXPECT_LE(ms.self_duality_defect(), 1e-9);
  for (std::size_t l = 0; l < ms.size(); ++l) EXPECT_NEAR(std::abs(ms.P_tilde(l, ms.rho()) - 1.0), 0.0, 1e-9);
}

INSTANTIATE_TEST_SUITE_P(Configs, MacdonaldOnModel,
                         ::testing::Values(std::tuple{3, 1, 2, 0.5}, std::tuple{3, 2, 1, 1.5},
                                           std::tuple{3, 2, -1, 1.6}, std::tuple{4, 1, -2, 2.5},
                                           std::tuple{2, 1, 3, 0.7}, std::tuple{4, 1, 3, 0.3}));

TEST(MacdonaldSystem, DeterministicForFixedSeed) {
  const MacdonaldSystem a(3, 0.8, 0.4, 2), b(3, 0.8, 0.4, 2);
  for (int r = 1; r <= 2; ++r) EXPECT_EQ(a.C(r), b.C(r));
}

TEST(MacdonaldSystem, SamplePointsAvoidPoles) {
  const MacdonaldSystem ms(4, 0.8, 0.4, 1);
  std::mt19937_64 rng(4);
  for (int t = 0; t < 50; ++t) {
    const Eigen::VectorXd x = ms.sample_point(rng);
    EXPECT_NEAR(x.sum(), 0.0, 1e-12);
    for (int j = 0; j < 4; ++j)
      for (int k = j + 1; k < 4; ++k) EXPECT_GE(std::abs(std::sin(0.4 * (x[j] - x[k]))), 1e-3);
  }
}

TEST(MacdonaldSystem, RejectsBadInput) {
  EXPECT_THROW(MacdonaldSystem(1, 0.8, 0.4, 1), InvalidParameter);
  EXPECT_THROW(MacdonaldSystem(3, 0.8, 0.4, -1), InvalidParameter);
  const MacdonaldSystem ms(3, 0.8, 0.4, 1);
  EXPECT_THROW(ms.index_of({2, 0}), InvalidInput);
}
