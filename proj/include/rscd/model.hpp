#pragma once

// Model parameters, coupling classification, the finite lattice over the
// configuration simplex, and simplex geometry.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numbers>
#include <numeric>
#include <optional>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "rscd/errors.hpp"
#include "rscd/rootsys.hpp"

namespace rscd {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kGeometryTol = 1e-10;

// Multiplicative inverse of p modulo n (extended Euclid); requires gcd = 1.
inline int inverse_mod(int p, int n) {
  int r0 = n, r1 = p, t0 = 0, t1 = 1;
  while (r1 != 0) {
    const int qt = r0 / r1;
    std::tie(r0, r1) = std::pair{r1, r0 - qt * r1};
    std::tie(t0, t1) = std::pair{t1, t0 - qt * t1};
  }
  if (r0 != 1) throw InvalidParameter(InvalidParameter::Reason::kNotCoprime, "p not coprime to n");
  return ((t0 % n) + n) % n;
}

// One quantised type (i) model. alpha is derived from (n, p, M, g) so the
// quantisation condition holds by construction.
struct ModelParams {
  int n = 0;
  int p = 0;
  int q = 0;
  int M = 0;
  double g = 0.0;
  double alpha = 0.0;
  int sgnM = 0;

  // 2*pi/alpha, evaluated as (ng + M)/p rather than by dividing by alpha.
  double period() const { return (n * g + M) / p; }
  int abs_M() const { return std::abs(M); }
  // alpha*g/(2*pi)
  double gamma() const { return p * g / (n * g + M); }
};

struct TypeIInterval {
  double lower = 0.0;  // in units of gamma = alpha*g/(2*pi)
  double upper = 0.0;
};

// The type (i) gamma-interval adjacent to p/n on the side selected by sgnM
// (M > 0 below p/n, M < 0 above).
inline TypeIInterval type_i_interval(int n, int p, int q, int sgnM) {
  const double centre = static_cast<double>(p) / n;
  if (sgnM > 0) return {centre - 1.0 / (static_cast<double>(n) * q), centre};
  return {centre, centre + 1.0 / (static_cast<double>(n) * (n - q))};
}

inline ModelParams build_params(int n, int p, int M, double g) {
  if (n < 2) throw InvalidParameter(InvalidParameter::Reason::kRange, "n must be >= 2");
  if (p < 1 || p > n - 1)
    throw InvalidParameter(InvalidParameter::Reason::kRange, "p must lie in 1..n-1");
  if (M == 0) throw InvalidParameter(InvalidParameter::Reason::kRange, "M must be nonzero");
  if (!(g > 0.0) || !std::isfinite(g))
    throw InvalidParameter(InvalidParameter::Reason::kRange, "g must be positive");
  require_coprime(n, p);

  ModelParams mp;
  mp.n = n;
  mp.p = p;
  mp.q = inverse_mod(p, n);
  mp.M = M;
  mp.g = g;
  mp.sgnM = M > 0 ? 1 : -1;
  if (!(n * g + M > 0.0))
    throw InvalidParameter(InvalidParameter::Reason::kNonPositiveScale,
                           "ng + M must be positive (alpha = 2*pi*p/(ng+M) > 0)");
  mp.alpha = kTwoPi * p / (n * g + M);

  const auto iv = type_i_interval(n, p, mp.q, mp.sgnM);
  const double gam = mp.gamma();
  if (!(gam > iv.lower && gam < iv.upper)) {
    std::ostringstream os;
    os << "g outside the type (i) interval for the " << (mp.sgnM > 0 ? "M>0" : "M<0")
       << " branch: alpha*g/2pi = " << gam << " not in (" << iv.lower << ", " << iv.upper << ")";
    throw InvalidParameter(InvalidParameter::Reason::kOutsideTypeI, os.str());
  }
  // Implied by the interval; guards against rounding at the endpoints.
  const double bound = mp.sgnM > 0 ? mp.q : n - mp.q;
  if (!(mp.period() > bound))
    throw InvalidParameter(InvalidParameter::Reason::kOutsideTypeI, "scale bound 2*pi/alpha violated");
  return mp;
}

struct CouplingClass {
  enum class Kind { kTypeI, kTypeII, kExcluded };
  Kind kind = Kind::kTypeII;
  int p = 0;      // type (i) only
  int q = 0;
  int sgnM = 0;   // +1: interval below p/n, -1: above
};

inline const char* to_string(CouplingClass::Kind k) {
  switch (k) {
    case CouplingClass::Kind::kTypeI: return "type_i";
    case CouplingClass::Kind::kTypeII: return "type_ii";
    case CouplingClass::Kind::kExcluded: return "excluded";
  }
  return "?";
}

/// Classify gamma = alpha*g/(2*pi) in (0,1). The excluded points are all
/// rationals with denominator <= n; every type (i) endpoint and puncture
/// is among them.
inline CouplingClass classify_coupling(int n, double gamma, double tol = 1e-12) {
  if (n < 2) throw InvalidParameter("n must be >= 2");
  if (!(gamma > 0.0 && gamma < 1.0)) throw InvalidParameter("gamma must lie in (0,1)");
  for (int den = 1; den <= n; ++den) {
    const double k = std::round(gamma * den);
    if (std::abs(gamma - k / den) <= tol) return {CouplingClass::Kind::kExcluded};
  }
  for (int p = 1; p < n; ++p) {
    if (std::gcd(n, p) != 1) continue;
    const int q = inverse_mod(p, n);
    for (int s : {1, -1}) {
      const auto iv = type_i_interval(n, p, q, s);
      if (gamma > iv.lower && gamma < iv.upper) return {CouplingClass::Kind::kTypeI, p, q, s};
    }
  }
  return {CouplingClass::Kind::kTypeII};
}

/// Couplings at which a boundary coefficient V_nu(-x - sgn(M)nu) may be
/// singular: (1 - sgn(M)A + B*2pi/alpha)/C over the index box.
inline std::vector<double> excluded_g_values(const ModelParams& mp) {
  std::vector<double> out;
  for (int A = 0; A <= mp.abs_M(); ++A)
    for (int B = 0; B <= mp.p - 1; ++B)
      for (int C = 1; C <= mp.n - 1; ++C)
        out.push_back((1.0 - mp.sgnM * A + B * mp.period()) / C);
  std::sort(out.begin(), out.end());
  std::vector<double> dedup;
  for (double v : out)
    if (dedup.empty() || std::abs(v - dedup.back()) > 1e-12) dedup.push_back(v);
  return dedup;
}

inline bool g_is_excluded(const ModelParams& mp, double tol = 1e-10) {
  for (double v : excluded_g_values(mp))
    if (std::abs(v - mp.g) <= tol) return true;
  return false;
}

struct DominantIndex {
  std::vector<int> m;  // m_1..m_{n-1}
  int m_n = 0;         // |M| - sum m_j

  int degree() const { return std::accumulate(m.begin(), m.end(), 0); }
  friend bool operator==(const DominantIndex&, const DominantIndex&) = default;
};

struct SimplexLocation {
  enum class Region { kInterior, kBoundary, kOutside };
  Region region = Region::kOutside;
  // 1..n-1: <a_{j,p}, x - rho_p> = 0; n: maximal-root facet.
  std::vector<int> active_facets;
};

/// Coefficient vectors (m_1..m_{n-1}) with sum(m) <= top, graded by sum and
/// lexicographically descending within a grade.
inline std::vector<std::vector<int>> cone_indices(int n, int top) {
  std::vector<std::vector<int>> out;
  const int n1 = n - 1;
  for (int deg = 0; deg <= top; ++deg) {
    std::vector<int> m(n1, 0);
    m[0] = deg;
    while (true) {
      out.push_back(m);
      // previous composition in lex order
      int i = n1 - 2;
      while (i >= 0 && m[i] == 0) --i;
      if (i < 0) break;
      --m[i];
      int rest = 1;
      for (int k = i + 1; k < n1; ++k) {
        rest += m[k];
        m[k] = 0;
      }
      m[i + 1] = rest;
    }
  }
  return out;
}

// Immutable bundle of everything derived from ModelParams: root data in the
// p-base and the standard base, orbits, rho_p and the ordered lattice.
class Model {
 public:
  explicit Model(const ModelParams& params)
      : params_(params),
        base_(RootBase::make(params.n, params.p)),
        std_base_(RootBase::make(params.n, 1)),
        sigma_p_(rscd::sigma_p(params.n, params.p)),
        positive_roots_(positive_roots_p(params.n, params.p)) {
    const int n = params.n;
    for (const auto& w : base_.fundamental_weights) omega_real_.push_back(w.to_real());
    for (const auto& w : std_base_.fundamental_weights) omega_std_real_.push_back(w.to_real());
    for (const auto& a : base_.simple_roots) simple_real_.push_back(a.to_real());
    amax_real_ = base_.maximal_root.to_real();
    for (int r = 1; r <= n - 1; ++r) orbits_.push_back(orbit(n, r));

    rho_p_ = Eigen::VectorXd::Zero(n);
    for (int j = 1; j <= n - 1; ++j) {
      const double coef = j <= n - params.p ? params.g : params.g - params.period();
      rho_p_ += coef * omega_real_[j - 1];
    }
    enumerate();
  }

  explicit Model(int n, int p, int M, double g) : Model(build_params(n, p, M, g)) {}

  const ModelParams& params() const { return params_; }
  int n() const { return params_.n; }
  int s() const { return params_.sgnM; }
  double alpha() const { return params_.alpha; }
  double period() const { return params_.period(); }
  const RootBase& base() const { return base_; }
  const RootBase& standard_base() const { return std_base_; }
  const Permutation& sigma() const { return sigma_p_; }
  const std::vector<PositiveRoot>& positive_roots() const { return positive_roots_; }
  const std::vector<Eigen::VectorXd>& omega_real() const { return omega_real_; }
  const std::vector<Eigen::VectorXd>& omega_std_real() const { return omega_std_real_; }
  const Eigen::VectorXd& simple_real(int j) const { return simple_real_[j - 1]; }
  const Eigen::VectorXd& max_root_real() const { return amax_real_; }
  const std::vector<Weight>& orbit_of(int r) const { return orbits_.at(r - 1); }

  const Eigen::VectorXd& rho_p() const { return rho_p_; }

  // Lattice, graded by sum(m) and lexicographically descending within a
  // grade, so |M| = 1 lists 0, omega_1, ..., omega_{n-1}.
  std::size_t size() const { return points_.size(); }
  const std::vector<DominantIndex>& points() const { return points_; }
  const DominantIndex& point(std::size_t i) const { return points_[i]; }

  std::optional<std::size_t> index_of(const std::vector<int>& m) const {
    auto it = index_.find(m);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  bool contains(const std::vector<int>& m) const {
    if (static_cast<int>(m.size()) != n() - 1) return false;
    int sum = 0;
    for (int v : m) {
      if (v < 0) return false;
      sum += v;
    }
    return sum <= params_.abs_M();
  }

  // p-base coordinates of mu + nu.
  std::vector<int> shifted(const std::vector<int>& m, const Weight& nu) const {
    std::vector<int> out(m);
    for (int j = 0; j < n() - 1; ++j)
      out[j] += static_cast<int>(integral_inner(base_.simple_roots[j], nu));
    return out;
  }

  Weight weight_of(const std::vector<int>& m) const { return base_.from_coords(m); }

  // rho_p + sgn(M) sum_j m_j omega_{j,p}
  Eigen::VectorXd lattice_point(const std::vector<int>& m) const {
    Eigen::VectorXd x = rho_p_;
    for (int j = 0; j < n() - 1; ++j) x += (s() * m[j]) * omega_real_[j];
    return x;
  }
  Eigen::VectorXd lattice_point(const DominantIndex& mu) const {
    if (!contains(mu.m)) throw InvalidInput("index outside the truncated cone");
    return lattice_point(mu.m);
  }

  std::vector<Eigen::VectorXd> vertices() const {
    std::vector<Eigen::VectorXd> v{rho_p_};
    for (int k = 0; k < n() - 1; ++k) v.push_back(rho_p_ + params_.M * omega_real_[k]);
    return v;
  }

  Eigen::VectorXd barycenter() const {
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n());
    for (const auto& v : vertices()) b += v;
    return b / n();
  }

  SimplexLocation in_simplex(const Eigen::VectorXd& x, double tol = kGeometryTol) const {
    if (x.size() != n()) throw InvalidInput("point dimension mismatch");
    if (std::abs(x.sum()) > 1e-9) throw InvalidInput("point not in the centre-of-mass hyperplane");
    SimplexLocation loc;
    const Eigen::VectorXd d = x - rho_p_;
    bool outside = false;
    for (int j = 1; j <= n() - 1; ++j) {
      const double v = s() * simple_real_[j - 1].dot(d);
      if (v < -tol) outside = true;
      else if (v <= tol) loc.active_facets.push_back(j);
    }
    const double top = s() * amax_real_.dot(d) - params_.abs_M();
    if (top > tol) outside = true;
    else if (top >= -tol) loc.active_facets.push_back(n());

    // Weyl alcove x_1 > ... > x_n > x_1 - 2pi/alpha.
    for (int i = 0; i + 1 < n(); ++i)
      if (!(x[i] > x[i + 1])) outside = true;
    if (!(x[n() - 1] > x[0] - period())) outside = true;

    if (outside) {
      loc.region = SimplexLocation::Region::kOutside;
      loc.active_facets.clear();
    } else {
      loc.region = loc.active_facets.empty() ? SimplexLocation::Region::kInterior
                                             : SimplexLocation::Region::kBoundary;
    }
    return loc;
  }

  // sigma_p acting on a p-base lattice index gives standard-base coordinates:
  // m'_k = m_{sigma(k)}.
  std::vector<int> to_standard(const std::vector<int>& m) const {
    const Permutation base_perm = sigma_p_.inverse();
    std::vector<int> out(m.size());
    for (int k = 1; k <= n() - 1; ++k) out[k - 1] = m[base_perm(k) - 1];
    return out;
  }

 private:
  void enumerate() {
    const int top = params_.abs_M();
    for (auto& m : cone_indices(n(), top)) {
      const int deg = std::accumulate(m.begin(), m.end(), 0);
      points_.push_back({std::move(m), top - deg});
    }
    for (std::size_t i = 0; i < points_.size(); ++i) index_[points_[i].m] = i;
  }

  ModelParams params_;
  RootBase base_;
  RootBase std_base_;
  Permutation sigma_p_;
  std::vector<PositiveRoot> positive_roots_;
  std::vector<Eigen::VectorXd> omega_real_;
  std::vector<Eigen::VectorXd> omega_std_real_;
  std::vector<Eigen::VectorXd> simple_real_;
  Eigen::VectorXd amax_real_;
  std::vector<std::vector<Weight>> orbits_;
  Eigen::VectorXd rho_p_;
  std::vector<DominantIndex> points_;
  std::map<std::vector<int>, std::size_t> index_;
};

/// rho-check_p(g) = g * sum_j omega_{j,p}; equals rho_p shifted by
/// (2pi/alpha)(omega_{n-p+1,p} + ... + omega_{n-1,p}) when signed_g = g.
inline Eigen::VectorXd rho_check_p(const Model& model, double signed_g) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(model.n());
  for (const auto& w : model.omega_real()) v += signed_g * w;
  return v;
}

/// Standard weighted half-sum rho(g) = g * sum_j omega_j.
inline Eigen::VectorXd rho_standard(int n, double g) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
  for (int k = 1; k <= n - 1; ++k)
    for (int i = 0; i < n; ++i) v[i] += g * ((i < k ? 1.0 : 0.0) - static_cast<double>(k) / n);
  return v;
}

inline std::size_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::size_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace rscd
