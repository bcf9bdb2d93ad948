#pragma once

// Exact A_{n-1} root-system combinatorics.
//
// Every vector living in the zero-sum hyperplane E_n that we care about
// (roots, fundamental weights, orbit vectors, lattice weights) has
// coordinates in (1/n)Z. A Weight stores the integer vector n*x, so all
// arithmetic here is exact; doubles only appear in to_real().

#include <algorithm>
#include <compare>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <boost/rational.hpp>

#include "rscd/errors.hpp"

namespace rscd {

using Rational = boost::rational<std::int64_t>;

class Weight {
 public:
  Weight() = default;

  // `scaled` holds n * coordinates; must sum to zero.
  explicit Weight(std::vector<std::int64_t> scaled) : scaled_(std::move(scaled)) {
    if (scaled_.size() < 2) throw InvalidParameter("weight dimension must be >= 2");
    if (std::accumulate(scaled_.begin(), scaled_.end(), std::int64_t{0}) != 0)
      throw InvalidInput("weight coordinates must sum to zero");
  }

  static Weight zero(int n) { return Weight(std::vector<std::int64_t>(n, 0)); }

  // e_j - e_k with 0-based coordinate indices.
  static Weight root(int n, int j, int k) {
    std::vector<std::int64_t> s(n, 0);
    s[j] += n;
    s[k] -= n;
    return Weight(std::move(s));
  }

  // sum_{j in J} e_j - (|J|/n)(e_1 + ... + e_n), J given as 0-based indices.
  static Weight from_subset(int n, const std::vector<int>& subset) {
    std::vector<std::int64_t> s(n, -static_cast<std::int64_t>(subset.size()));
    for (int j : subset) s[j] += n;
    return Weight(std::move(s));
  }

  int dim() const { return static_cast<int>(scaled_.size()); }
  const std::vector<std::int64_t>& scaled() const { return scaled_; }
  Rational coord(int i) const { return Rational(scaled_[i], dim()); }

  Eigen::VectorXd to_real() const {
    Eigen::VectorXd v(dim());
    for (int i = 0; i < dim(); ++i) v[i] = static_cast<double>(scaled_[i]) / dim();
    return v;
  }

  bool is_zero() const {
    return std::all_of(scaled_.begin(), scaled_.end(), [](auto c) { return c == 0; });
  }

  Weight operator-() const {
    Weight w = *this;
    for (auto& c : w.scaled_) c = -c;
    return w;
  }
  Weight& operator+=(const Weight& o) {
    check_dim(o);
    for (int i = 0; i < dim(); ++i) scaled_[i] += o.scaled_[i];
    return *this;
  }
  Weight& operator-=(const Weight& o) { return *this += -o; }
  friend Weight operator+(Weight a, const Weight& b) { return a += b; }
  friend Weight operator-(Weight a, const Weight& b) { return a -= b; }
  friend Weight operator*(std::int64_t k, Weight w) {
    for (auto& c : w.scaled_) c *= k;
    return w;
  }

  friend Rational inner(const Weight& a, const Weight& b) {
    a.check_dim(b);
    std::int64_t acc = 0;
    for (int i = 0; i < a.dim(); ++i) acc += a.scaled_[i] * b.scaled_[i];
    const std::int64_t n = a.dim();
    return Rational(acc, n * n);
  }

  friend bool operator==(const Weight&, const Weight&) = default;
  friend auto operator<=>(const Weight&, const Weight&) = default;

  std::string str() const {
    std::string out = "(";
    for (int i = 0; i < dim(); ++i) {
      if (i) out += ", ";
      const Rational c = coord(i);
      out += std::to_string(c.numerator());
      if (c.denominator() != 1) out += "/" + std::to_string(c.denominator());
    }
    return out + ")";
  }

 private:
  void check_dim(const Weight& o) const {
    if (o.dim() != dim()) throw InvalidInput("weight dimension mismatch");
  }

  std::vector<std::int64_t> scaled_;
};

// <a, w> for a root or weight pair known to pair integrally.
inline std::int64_t integral_inner(const Weight& a, const Weight& b) {
  const Rational r = inner(a, b);
  if (r.denominator() != 1) throw InvalidInput("pairing is not integral");
  return r.numerator();
}

inline void require_coprime(int n, int p) {
  if (n < 2) throw InvalidParameter(InvalidParameter::Reason::kRange, "n must be >= 2");
  if (p < 1 || p > n - 1)
    throw InvalidParameter(InvalidParameter::Reason::kRange, "p must lie in 1..n-1");
  if (std::gcd(n, p) != 1)
    throw InvalidParameter(InvalidParameter::Reason::kNotCoprime, "p not coprime to n");
}

// 1-based cyclic index: wraps j into 1..n.
inline int wrap_index(int j, int n) { return ((j - 1) % n + n) % n + 1; }

/// a_{j,p} = e_j - e_{j+p} (indices mod n), j = 1..n-1. Element j-1 of the
/// result is a_{j,p}.
inline std::vector<Weight> simple_roots_p(int n, int p) {
  require_coprime(n, p);
  std::vector<Weight> roots;
  roots.reserve(n - 1);
  for (int j = 1; j <= n - 1; ++j) roots.push_back(Weight::root(n, j - 1, wrap_index(j + p, n) - 1));
  return roots;
}

/// Fundamental weights dual to simple_roots_p, obtained by solving
/// <a_{j,p}, w> = delta_jk together with sum(w) = 0 in exact arithmetic.
inline std::vector<Weight> fundamental_weights_p(int n, int p) {
  const auto roots = simple_roots_p(n, p);
  std::vector<Weight> weights;
  weights.reserve(n - 1);
  for (int k = 0; k < n - 1; ++k) {
    // Augmented n x (n+1) system; rows 0..n-2 are the duality equations.
    std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n + 1, Rational(0)));
    for (int j = 0; j < n - 1; ++j) {
      for (int i = 0; i < n; ++i) a[j][i] = roots[j].coord(i);
      a[j][n] = Rational(j == k ? 1 : 0);
    }
    for (int i = 0; i < n; ++i) a[n - 1][i] = Rational(1);
    a[n - 1][n] = Rational(0);

    for (int col = 0; col < n; ++col) {
      int piv = col;
      while (piv < n && a[piv][col].numerator() == 0) ++piv;
      if (piv == n) throw Error("singular duality system");
      std::swap(a[piv], a[col]);
      const Rational inv = Rational(1) / a[col][col];
      for (auto& v : a[col]) v *= inv;
      for (int row = 0; row < n; ++row) {
        if (row == col || a[row][col].numerator() == 0) continue;
        const Rational f = a[row][col];
        for (int c = col; c <= n; ++c) a[row][c] -= f * a[col][c];
      }
    }
    std::vector<std::int64_t> scaled(n);
    for (int i = 0; i < n; ++i) {
      const Rational s = a[i][n] * Rational(n);
      if (s.denominator() != 1) throw Error("fundamental weight outside (1/n)Z^n");
      scaled[i] = s.numerator();
    }
    weights.emplace_back(std::move(scaled));
  }
  return weights;
}

struct RootBase {
  int n = 0;
  int p = 0;
  std::vector<Weight> simple_roots;
  std::vector<Weight> fundamental_weights;
  Weight maximal_root;

  static RootBase make(int n, int p) {
    RootBase b;
    b.n = n;
    b.p = p;
    b.simple_roots = simple_roots_p(n, p);
    b.fundamental_weights = fundamental_weights_p(n, p);
    b.maximal_root = Weight::zero(n);
    for (const auto& a : b.simple_roots) b.maximal_root += a;
    return b;
  }

  // Coefficients of w in the fundamental-weight basis, i.e. <a_{j,p}, w>.
  std::vector<Rational> weight_coords(const Weight& w) const {
    std::vector<Rational> c;
    c.reserve(simple_roots.size());
    for (const auto& a : simple_roots) c.push_back(inner(a, w));
    return c;
  }

  Weight from_coords(const std::vector<int>& m) const {
    Weight w = Weight::zero(n);
    for (std::size_t j = 0; j < m.size(); ++j) w += static_cast<std::int64_t>(m[j]) * fundamental_weights[j];
    return w;
  }
};

/// All r-subsets J of {0..n-1} in lexicographic order.
inline std::vector<std::vector<int>> subsets_lex(int n, int r) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(r);
  std::iota(cur.begin(), cur.end(), 0);
  while (true) {
    out.push_back(cur);
    int i = r - 1;
    while (i >= 0 && cur[i] == n - r + i) --i;
    if (i < 0) break;
    ++cur[i];
    for (int k = i + 1; k < r; ++k) cur[k] = cur[k - 1] + 1;
  }
  return out;
}

/// S_n-orbit of omega_r, lexicographic in the index set J.
inline std::vector<Weight> orbit(int n, int r) {
  if (n < 2) throw InvalidParameter("n must be >= 2");
  if (r < 1 || r > n - 1) throw InvalidParameter("r must lie in 1..n-1");
  std::vector<Weight> out;
  for (const auto& subset : subsets_lex(n, r)) out.push_back(Weight::from_subset(n, subset));
  return out;
}

// Index set J (0-based) of an orbit vector: coordinates with positive entry.
inline std::vector<int> orbit_subset(const Weight& nu) {
  std::vector<int> subset;
  for (int i = 0; i < nu.dim(); ++i)
    if (nu.scaled()[i] > 0) subset.push_back(i);
  return subset;
}

// A permutation pi of {1..n}, acting on E_n by pi(e_i) = e_{pi(i)}.
struct Permutation {
  std::vector<int> image;  // image[i-1] = pi(i), 1-based values

  int operator()(int i) const { return image[i - 1]; }
  int size() const { return static_cast<int>(image.size()); }

  Permutation inverse() const {
    Permutation inv{std::vector<int>(image.size())};
    for (int i = 1; i <= size(); ++i) inv.image[image[i - 1] - 1] = i;
    return inv;
  }

  Weight apply(const Weight& w) const {
    std::vector<std::int64_t> s(w.dim());
    for (int i = 1; i <= size(); ++i) s[image[i - 1] - 1] = w.scaled()[i - 1];
    return Weight(std::move(s));
  }

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const {
    Eigen::VectorXd y(x.size());
    for (int i = 1; i <= size(); ++i) y[image[i - 1] - 1] = x[i - 1];
    return y;
  }

  bool is_identity() const {
    for (int i = 1; i <= size(); ++i)
      if (image[i - 1] != i) return false;
    return true;
  }
};

/// sigma(j) = jp mod n, taking values in 1..n. Sends a_j to a_{sigma(j),p}.
inline Permutation base_permutation(int n, int p) {
  require_coprime(n, p);
  Permutation s{std::vector<int>(n)};
  for (int j = 1; j <= n; ++j) s.image[j - 1] = wrap_index(j * p, n);
  return s;
}

/// sigma_p: maps {omega_{j,p}} onto the standard {omega_j}.
inline Permutation sigma_p(int n, int p) { return base_permutation(n, p).inverse(); }

/// mu <= lambda in the dominance order of `base`: lambda - mu is a
/// non-negative integer combination of the simple roots.
inline bool dominance_leq(const Weight& mu, const Weight& lambda, const RootBase& base) {
  const Weight diff = lambda - mu;
  for (const auto& w : base.fundamental_weights) {
    const Rational c = inner(diff, w);
    if (c.denominator() != 1 || c.numerator() < 0) return false;
  }
  return true;
}

struct PositiveRoot {
  Weight root;
  int j = 0, k = 0;             // root = e_j - e_k, 1-based
  std::vector<int> index_set;   // I: root = sum_{i in I} a_{i,p}
  int wrap_count = 0;           // |K| = #{i in I : n-p < i <= n}
};

/// Positive roots of the p-dependent base, each with its telescoping
/// decomposition into p-simple roots.
inline std::vector<PositiveRoot> positive_roots_p(int n, int p) {
  const Permutation s = base_permutation(n, p);
  std::vector<PositiveRoot> out;
  for (int a = 1; a <= n; ++a) {
    for (int b = a + 1; b <= n; ++b) {
      PositiveRoot pr;
      pr.j = s(a);
      pr.k = s(b);
      pr.root = Weight::root(n, pr.j - 1, pr.k - 1);
      for (int c = a; c < b; ++c) {
        const int i = s(c);
        pr.index_set.push_back(i);
        if (i > n - p) ++pr.wrap_count;
      }
      out.push_back(std::move(pr));
    }
  }
  return out;
}

/// Every root e_j - e_k, j != k (0-based pairs).
inline std::vector<std::pair<int, int>> all_root_pairs(int n) {
  std::vector<std::pair<int, int>> out;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      if (j != k) out.emplace_back(j, k);
  return out;
}

}  // namespace rscd
