#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <tuple>

#include "rscd/coeffs.hpp"

using namespace rscd;

namespace {

using Config = std::tuple<int, int, int, double>;

const std::vector<Config>& configs() {
  static const std::vector<Config> c = {{3, 1, 2, 0.5},  {3, 2, 1, 1.5},  {3, 2, -1, 1.6},
                                        {4, 1, -2, 2.5}, {4, 3, 2, 5.0},  {5, 2, 1, 1.5},
                                        {2, 1, 3, 0.7},  {4, 1, 3, 0.3}};
  return c;
}

Model make(const Config& c) { return Model(std::get<0>(c), std::get<1>(c), std::get<2>(c), std::get<3>(c)); }

// Random point of the open simplex as a convex combination of its vertices.
Eigen::VectorXd interior_point(const Model& m, std::mt19937_64& rng) {
  std::gamma_distribution<double> gd(1.0, 1.0);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(m.n());
  double total = 0.0;
  for (const auto& v : m.vertices()) {
    const double w = gd(rng) + 1e-3;
    x += w * v;
    total += w;
  }
  return x / total;
}

// Independent V_J: explicit double loop over (j in J, k not in J).
double v_oracle(double g, double alpha, const std::vector<int>& J, const Eigen::VectorXd& x) {
  double prod = 1.0;
  for (int k = 0; k < x.size(); ++k) {
    if (std::find(J.begin(), J.end(), k) != J.end()) continue;
    for (int j : J) prod *= std::sin(alpha / 2 * (x[j] - x[k] + g)) / std::sin(alpha / 2 * (x[j] - x[k]));
  }
  return prod;
}

}  // namespace

TEST(Pochhammer, Branches) {
  const double a = 0.7, z = 0.3;
  EXPECT_DOUBLE_EQ(trig_pochhammer(z, 0, a), 1.0);
  EXPECT_NEAR(trig_pochhammer(z, 2, a), std::sin(a / 2 * z) * std::sin(a / 2 * (z + 1)), 1e-15);
  EXPECT_NEAR(trig_pochhammer(z, -2, a), 1.0 / (std::sin(a / 2 * (z - 1)) * std::sin(a / 2 * (z - 2))), 1e-13);
}

TEST(Pochhammer, RatioAndInverse) {
  const double a = 1.1;
  for (double z : {0.2, 1.7, -0.45})
    for (int m = -4; m <= 4; ++m) {
      EXPECT_NEAR(trig_pochhammer(z, m + 1, a) / trig_pochhammer(z, m, a), std::sin(a / 2 * (z + m)), 1e-12);
      EXPECT_NEAR(trig_pochhammer(z, m, a) * trig_pochhammer(z + m, -m, a), 1.0, 1e-12);
    }
  EXPECT_THROW(trig_pochhammer(2.0, -2, 1.0), SingularValue);
}

TEST(VNu, MatchesSubsetOracle) {
  std::mt19937_64 rng(3);
  for (const auto& c : configs()) {
    const Model m = make(c);
    const auto& mp = m.params();
    for (int trial = 0; trial < 10; ++trial) {
      const Eigen::VectorXd x = interior_point(m, rng);
      for (int r = 1; r < m.n(); ++r)
        for (const auto& nu : m.orbit_of(r)) {
          const auto J = orbit_subset(nu);
          const double ref = v_oracle(mp.g, mp.alpha, J, x);
          EXPECT_NEAR(V_nu(mp.g, mp.alpha, nu, x), ref, 1e-12 * std::max(1.0, std::abs(ref)));
          EXPECT_NEAR(V_J(mp.g, mp.alpha, J, x), ref, 1e-12 * std::max(1.0, std::abs(ref)));
        }
    }
  }
}

TEST(VNu, TrivialCouplingAndPeriodicity) {
  std::mt19937_64 rng(5);
  const Model m(4, 1, 3, 0.3);
  const double P = m.period();
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::VectorXd x = interior_point(m, rng);
    Eigen::VectorXd y = x;
    y[0] += P;
    y[2] -= P;
    for (const auto& nu : m.orbit_of(2)) {
      EXPECT_NEAR(V_nu(0.0, m.alpha(), nu, x), 1.0, 1e-14);
      EXPECT_NEAR(V_nu(0.3, m.alpha(), nu, y), V_nu(0.3, m.alpha(), nu, x), 1e-10);
    }
  }
}

TEST(VNu, PoleThrows) {
  const Eigen::VectorXd x = Eigen::VectorXd::Zero(3);
  EXPECT_THROW(V_nu(0.5, 1.0, Weight::from_subset(3, {0}), x), SingularValue);
}

TEST(FJ, RemovesIntraSubsetFactors) {
  std::mt19937_64 rng(9);
  const Model m(5, 2, 1, 1.5);
  const auto& mp = m.params();
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::VectorXd x = interior_point(m, rng);
    for (const std::vector<int>& J : {std::vector<int>{0, 2}, {1, 3, 4}}) {
      double prod = F_J(mp.alpha, mp.g, J, x);
      for (int j : J) prod *= V_J(mp.g, mp.alpha, {j}, x);
      EXPECT_NEAR(prod, V_J(mp.g, mp.alpha, J, x), 1e-10);
    }
  }
}

TEST(Signs, ConstantOnSimplex) {
  std::mt19937_64 rng(13);
  for (const auto& c : configs()) {
    const Model m = make(c);
    const SignTable signs(m);
    const auto& mp = m.params();
    for (int trial = 0; trial < 20; ++trial) {
      const Eigen::VectorXd x = interior_point(m, rng);
      for (const auto& [nu, s] : signs.entries()) {
        const double v = V_nu(mp.g, mp.alpha, nu, x);
        if (std::abs(v) > 1e-9) EXPECT_EQ(v > 0 ? 1 : -1, s) << nu.str();
      }
    }
  }
}

TEST(Signs, FourParticleNegativeM) {
  const Model m(4, 1, -2, 2.5);
  const auto& om = m.standard_base().fundamental_weights;
  EXPECT_EQ(sign_s(m, om[1]), -1);
  const Weight nu = om[0] - om[1] + om[2];
  EXPECT_EQ(nu, Weight::from_subset(4, {0, 2}));
  EXPECT_EQ(sign_s(m, nu), 1);
  EXPECT_EQ(sign_s(m, std::vector<int>{0, 2}), 1);
}

TEST(W, VanishesExactlyWhenLeavingCone) {
  for (const auto& c : configs()) {
    const Model m = make(c);
    const SignTable signs(m);
    for (const auto& pt : m.points())
      for (int r = 1; r < m.n(); ++r)
        for (const auto& nu : m.orbit_of(r)) {
          const double w = W_nu(m, signs, nu, pt.m);
          if (m.contains(m.shifted(pt.m, nu))) EXPECT_GT(std::abs(w), 1e-12);
          else EXPECT_EQ(w, 0.0);
        }
  }
}

TEST(W, ExcludedCouplingStillFinite) {
  const Model m(3, 1, 2, 0.5);
  ASSERT_TRUE(g_is_excluded(m.params()));
  const SignTable signs(m);
  for (const auto& pt : m.points())
    for (const auto& nu : m.orbit_of(1)) EXPECT_TRUE(std::isfinite(W_nu(m, signs, nu, pt.m)));
}

TEST(W, ReversedHopIsSymmetric) {
  for (const auto& c : configs()) {
    const Model m = make(c);
    const SignTable signs(m);
    for (const auto& pt : m.points())
      for (int r = 1; r < m.n(); ++r)
        for (const auto& nu : m.orbit_of(r)) {
          const auto to = m.shifted(pt.m, nu);
          if (!m.contains(to)) continue;
          EXPECT_NEAR(W_nu(m, signs, nu, pt.m), W_nu(m, signs, -nu, to), 1e-11);
        }
  }
}

TEST(W, FactorizedFormAgreesOffPoles) {
  int compared = 0;
  for (const auto& c : configs()) {
    const Model m = make(c);
    const SignTable signs(m);
    for (const auto& pt : m.points())
      for (int r = 1; r < m.n(); ++r)
        for (const auto& nu : m.orbit_of(r)) {
          double f = 0.0;
          try {
            f = W_nu_factorized(m, signs, nu, pt.m);
          } catch (const SingularValue&) {
            continue;
          }
          EXPECT_NEAR(W_nu(m, signs, nu, pt.m), f, 1e-10);
          ++compared;
        }
  }
  EXPECT_GT(compared, 100);
}

TEST(Delta, DirectMatchesRecurrence) {
  for (const auto& c : configs()) {
    const Model m = make(c);
    EXPECT_NEAR(delta_p(m, m.point(0).m), 1.0, 1e-13);
    const DeltaTable table(m);
    for (std::size_t i = 0; i < m.size(); ++i) {
      const double rec = delta_p_recurrence(m, m.point(i).m);
      EXPECT_GT(table[i], 0.0);
      EXPECT_NEAR(table[i], rec, 1e-11 * std::max(1.0, rec));
    }
  }
}

TEST(Delta, ZeroOneStepOutside) {
  const Model m(3, 1, 2, 0.5);
  const DeltaTable table(m);
  EXPECT_EQ(table.at({3, 0}), 0.0);
  EXPECT_EQ(table.at({-1, 1}), 0.0);
  EXPECT_THROW(table.at({5, 5}), InvalidInput);
}
