#pragma once

// Finite groups with normalized counting (Haar) measure, convolution
//   (f*g)(x) = (1/n) sum_y f(y) g(y^{-1} x),
// Young's inequality and submultiplicativity of restricted GLS norms.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gls/errors.hpp"
#include "gls/norms.hpp"
#include "gls/pgrid.hpp"
#include "gls/psi.hpp"
#include "gls/rv_models.hpp"

namespace gls {

class FiniteGroup {
 public:
  using Element = std::uint32_t;

  /// Tables are checked against the group axioms; associativity is exhaustive up to order 24.
  FiniteGroup(std::size_t order, std::vector<Element> mul, std::string label)
      : n_(order), mul_(std::move(mul)), label_(std::move(label)) {
    if (n_ == 0 || mul_.size() != n_ * n_) throw AxiomViolationError("multiplication table has wrong size");
    for (Element e : mul_) {
      if (e >= n_) throw AxiomViolationError("multiplication table entry out of range");
    }
    derive_identity_and_inverses();
    check_associativity();
  }

  static FiniteGroup cyclic(std::size_t n) {
    if (n < 1) throw DomainError("cyclic group needs n >= 1");
    std::vector<Element> mul(n * n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) mul[a * n + b] = static_cast<Element>((a + b) % n);
    return {n, std::move(mul), "cyclic:" + std::to_string(n)};
  }

  /// Order 2n; index k < n is the rotation r^k, index n + k is r^k s.
  static FiniteGroup dihedral(std::size_t n) {
    if (n < 2) throw DomainError("dihedral group needs n >= 2");
    const std::size_t N = 2 * n;
    std::vector<Element> mul(N * N);
    for (std::size_t a = 0; a < N; ++a) {
      for (std::size_t b = 0; b < N; ++b) {
        const std::size_t k1 = a % n, f1 = a / n, k2 = b % n, f2 = b / n;
        // r^k1 s^f1 r^k2 s^f2 = r^(k1 + (-1)^f1 k2) s^(f1 xor f2)
        const std::size_t k = f1 ? (k1 + n - k2) % n : (k1 + k2) % n;
        mul[a * N + b] = static_cast<Element>((f1 ^ f2) * n + k);
      }
    }
    return {N, std::move(mul), "dihedral:" + std::to_string(n)};
  }

  /// Permutations of {0..n-1} in lexicographic order; (s t)(i) = s(t(i)).
  static FiniteGroup symmetric(std::size_t n) {
    if (n < 1 || n > 5) throw DomainError("symmetric group supported for 1 <= n <= 5");
    std::vector<std::vector<int>> perms;
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    do perms.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    const std::size_t N = perms.size();
    std::vector<Element> mul(N * N);
    std::vector<int> comp(n);
    for (std::size_t a = 0; a < N; ++a) {
      for (std::size_t b = 0; b < N; ++b) {
        for (std::size_t i = 0; i < n; ++i) comp[i] = perms[a][perms[b][i]];
        const auto it = std::lower_bound(perms.begin(), perms.end(), comp);
        mul[a * N + b] = static_cast<Element>(it - perms.begin());
      }
    }
    return {N, std::move(mul), "symmetric:" + std::to_string(n)};
  }

  /// Direct product; (g, h) has index g * |H| + h.
  static FiniteGroup product(const FiniteGroup& G, const FiniteGroup& H) {
    const std::size_t m = H.order();
    const std::size_t N = G.order() * m;
    std::vector<Element> mul(N * N);
    for (std::size_t a = 0; a < N; ++a)
      for (std::size_t b = 0; b < N; ++b)
        mul[a * N + b] = static_cast<Element>(G.mul(static_cast<Element>(a / m), static_cast<Element>(b / m)) * m +
                                              H.mul(static_cast<Element>(a % m), static_cast<Element>(b % m)));
    return {N, std::move(mul), "product:" + G.label() + "x" + H.label()};
  }

  std::size_t order() const noexcept { return n_; }
  Element mul(Element a, Element b) const noexcept { return mul_[a * n_ + b]; }
  Element inv(Element a) const noexcept { return inv_[a]; }
  Element identity() const noexcept { return identity_; }
  double haar_weight() const noexcept { return 1.0 / static_cast<double>(n_); }
  const std::string& label() const noexcept { return label_; }

  bool is_abelian() const {
    for (Element a = 0; a < n_; ++a)
      for (Element b = 0; b < n_; ++b)
        if (mul(a, b) != mul(b, a)) return false;
    return true;
  }

  /// Smallest k >= 1 with a^k = e.
  std::size_t element_order(Element a) const {
    Element x = a;
    std::size_t k = 1;
    while (x != identity_) {
      x = mul(x, a);
      ++k;
    }
    return k;
  }

 private:
  void derive_identity_and_inverses() {
    bool found = false;
    for (Element e = 0; e < n_ && !found; ++e) {
      bool ok = true;
      for (Element a = 0; a < n_ && ok; ++a) ok = mul(e, a) == a && mul(a, e) == a;
      if (ok) {
        identity_ = e;
        found = true;
      }
    }
    if (!found) throw AxiomViolationError("no identity element");
    inv_.assign(n_, 0);
    for (Element a = 0; a < n_; ++a) {
      bool ok = false;
      for (Element b = 0; b < n_ && !ok; ++b) {
        if (mul(a, b) == identity_ && mul(b, a) == identity_) {
          inv_[a] = b;
          ok = true;
        }
      }
      if (!ok) throw AxiomViolationError("element without inverse");
    }
  }

  void check_associativity() const {
    auto check = [&](Element a, Element b, Element c) {
      if (mul(mul(a, b), c) != mul(a, mul(b, c))) throw AxiomViolationError("multiplication is not associative");
    };
    if (n_ <= 24) {
      for (Element a = 0; a < n_; ++a)
        for (Element b = 0; b < n_; ++b)
          for (Element c = 0; c < n_; ++c) check(a, b, c);
      return;
    }
    std::mt19937_64 eng(0x5eed);
    for (int i = 0; i < 20000; ++i) {
      check(static_cast<Element>(eng() % n_), static_cast<Element>(eng() % n_), static_cast<Element>(eng() % n_));
    }
  }

  std::size_t n_;
  std::vector<Element> mul_;
  std::vector<Element> inv_;
  Element identity_ = 0;
  std::string label_;
};

/// Real function on the group, indexed by element.
struct GroupFunction {
  std::vector<double> values;

  std::size_t size() const noexcept { return values.size(); }
  bool operator==(const GroupFunction&) const = default;
};

/// n * indicator(identity): the unit of convolution under normalized measure.
inline GroupFunction unit_element(const FiniteGroup& G) {
  GroupFunction u{std::vector<double>(G.order(), 0.0)};
  u.values[G.identity()] = static_cast<double>(G.order());
  return u;
}

inline GroupFunction load_group_function(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open group function file: " + path);
  GroupFunction f;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    try {
      f.values.push_back(std::stod(line.substr(first)));
    } catch (const std::exception&) {
      throw ParseError("bad value in " + path + ": " + line);
    }
  }
  return f;
}

/// Summation runs over y in index order, then the sum is divided by n.
inline GroupFunction convolve(const FiniteGroup& G, const GroupFunction& f, const GroupFunction& g) {
  const std::size_t n = G.order();
  if (f.size() != n || g.size() != n) throw SizeMismatchError("convolve: function size differs from group order");
  GroupFunction out{std::vector<double>(n, 0.0)};
  for (FiniteGroup::Element x = 0; x < n; ++x) {
    double acc = 0.0;
    for (FiniteGroup::Element y = 0; y < n; ++y) acc += f.values[y] * g.values[G.mul(G.inv(y), x)];
    out.values[x] = acc / static_cast<double>(n);
  }
  return out;
}

inline constexpr double kInfinityExponent = std::numeric_limits<double>::infinity();

/// ((1/n) sum |f|^p)^{1/p}; max |f| for p = inf.
inline double group_lp_norm(const FiniteGroup& G, const GroupFunction& f, double p) {
  if (f.size() != G.order()) throw SizeMismatchError("group_lp_norm: function size differs from group order");
  if (!(p >= 1.0)) throw DomainError("group_lp_norm requires p >= 1");
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : f.values) m = std::max(m, std::abs(v));
    return m;
  }
  if (p == 1.0) {
    double s = 0.0;
    for (double v : f.values) s += std::abs(v);
    return s / static_cast<double>(f.size());
  }
  return detail::empirical_lp_norm(f.values, p);
}

/// Exponents with 1 + 1/r = 1/p + 1/q (1/inf = 0).
struct YoungTriple {
  double p = 1.0;
  double q = 1.0;
  double r = 1.0;

  static double reciprocal(double e) { return std::isinf(e) ? 0.0 : 1.0 / e; }
  double defect() const { return std::abs(1.0 + reciprocal(r) - reciprocal(p) - reciprocal(q)); }
  bool admissible() const { return p >= 1.0 && q >= 1.0 && r >= 1.0 && defect() <= 1e-12; }

  /// r from p and q; requires 1/p + 1/q >= 1.
  static YoungTriple from_pq(double p, double q) {
    const double s = reciprocal(p) + reciprocal(q) - 1.0;
    if (s < -1e-15) throw DomainError("Young exponents need 1/p + 1/q >= 1");
    return {p, q, s <= 1e-15 ? kInfinityExponent : 1.0 / s};
  }
};

struct YoungReport {
  YoungTriple triple;
  double lhs = 0.0;  // |f*g|_r
  double norm_f = 0.0;
  double norm_g = 0.0;
  double rhs = 0.0;  // |f|_p |g|_q
  bool pass = true;
};

inline constexpr double kYoungSlack = 1e-12;

inline YoungReport young_check(const FiniteGroup& G, const GroupFunction& f, const GroupFunction& g,
                               const YoungTriple& t) {
  if (!t.admissible()) throw DomainError("Young triple violates 1 + 1/r = 1/p + 1/q");
  YoungReport rep;
  rep.triple = t;
  rep.lhs = group_lp_norm(G, convolve(G, f, g), t.r);
  rep.norm_f = group_lp_norm(G, f, t.p);
  rep.norm_g = group_lp_norm(G, g, t.q);
  rep.rhs = rep.norm_f * rep.norm_g;
  rep.pass = rep.lhs <= rep.rhs * (1.0 + kYoungSlack);
  return rep;
}

/// Group function as a random variable on (G, normalized counting measure).
inline RandomVariableModel as_model(const FiniteGroup& G, const GroupFunction& f, std::string label) {
  if (f.size() != G.order()) throw SizeMismatchError("as_model: function size differs from group order");
  return RandomVariableModel::finite_measure(f.values, std::move(label));
}

struct AlgebraReport {
  double norm_fg = 0.0;
  double norm_f = 0.0;
  double norm_g = 0.0;
  double constant = 1.0;  // psi(1): 1 for normalized psi
  double bound = 0.0;
  double tolerance = 0.0;
  double p_max = kDefaultNormPMax;
  // p -> inf diagnostics: max |.| and psi(p_max)
  double linf_fg = 0.0;
  double linf_f = 0.0;
  double linf_g = 0.0;
  double psi_at_p_max = 1.0;
  bool pass = true;
};

/// ||f*g||_(S) <= psi(1) ||f||_(S) ||g||_(S), norms over S cut at p_max.
inline AlgebraReport algebra_check(const FiniteGroup& G, const GroupFunction& f, const GroupFunction& g,
                                   const GeneratingFunction& psi, const RestrictedSet& S,
                                   double p_max = kDefaultNormPMax, double refine_tol = kDefaultRefineTol) {
  if (!S.contains(1.0)) throw DomainError("algebra_check requires 1 in S");
  const auto fg = convolve(G, f, g);
  AlgebraReport rep;
  rep.p_max = p_max;
  rep.norm_fg = restricted_norm(as_model(G, fg, "f*g"), psi, S, p_max, refine_tol).value;
  rep.norm_f = restricted_norm(as_model(G, f, "f"), psi, S, p_max, refine_tol).value;
  rep.norm_g = restricted_norm(as_model(G, g, "g"), psi, S, p_max, refine_tol).value;
  rep.constant = psi.value_at_one();
  rep.bound = rep.constant * rep.norm_f * rep.norm_g;
  rep.tolerance = 1e-9 + refine_tol;
  rep.linf_fg = group_lp_norm(G, fg, kInfinityExponent);
  rep.linf_f = group_lp_norm(G, f, kInfinityExponent);
  rep.linf_g = group_lp_norm(G, g, kInfinityExponent);
  rep.psi_at_p_max = psi(p_max);
  rep.pass = rep.norm_fg <= rep.bound * (1.0 + rep.tolerance);
  return rep;
}

}  // namespace gls
