#pragma once

// Tail behaviour of discrete-GLS random variables:
//   h[q,psi](x) = sup_m q(m) (ln x - ln psi(q(m)))
//   P(|xi| >= x) <= exp(-h(x / ||xi||)),  x >= e ||xi||
// plus Monte Carlo verification and the reverse estimate of K.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "gls/errors.hpp"
#include "gls/norms.hpp"
#include "gls/pgrid.hpp"
#include "gls/psi.hpp"
#include "gls/rv_models.hpp"

namespace gls {

/// Number of indices enumerated past the first m with psi(q(m)) >= x.
inline constexpr std::size_t kHSafetyMargin = 5;

struct HTransformResult {
  double value = 0.0;
  std::size_t arg_m = 1;
  std::size_t last_m = 1;  // last index enumerated
};

/// One term of the sup; shared with test oracles so both sides use identical arithmetic.
inline double h_term(double q_m, double log_x, double psi_q_m) { return q_m * (log_x - std::log(psi_q_m)); }

/// Terms past the first index with psi(q(m)) >= x are <= 0 and, for increasing
/// psi, decreasing; enumeration stops kHSafetyMargin indices later (or at M).
inline HTransformResult h_transform_detail(const GridSequence& q, const GeneratingFunction& psi, double x) {
  if (!(x >= 1.0)) throw DomainError("h_transform requires x >= 1");
  const double log_x = std::log(x);
  HTransformResult res;
  res.value = -std::numeric_limits<double>::infinity();
  std::size_t stop = q.M();
  bool reached = false;
  for (std::size_t m = 1; m <= stop; ++m) {
    const double qm = q.q(m);
    const double pv = psi(qm);
    const double term = h_term(qm, log_x, pv);
    if (term > res.value) {
      res.value = term;
      res.arg_m = m;
    }
    res.last_m = m;
    if (!reached && pv >= x) {
      reached = true;
      stop = std::min(q.M(), m + kHSafetyMargin);
    }
  }
  if (!reached) throw TruncationError("h_transform: psi(q(M)) < x, grid too short");
  return res;
}

inline double h_transform(const GridSequence& q, const GeneratingFunction& psi, double x) {
  return h_transform_detail(q, psi, x).value;
}

/// exp(-h[q,psi](x / norm)) on x >= e * norm.
class TailEnvelope {
 public:
  TailEnvelope(GridSequence q, GeneratingFunction psi, double norm_value)
      : q_(std::move(q)), psi_(std::move(psi)), norm_(norm_value) {
    if (!(norm_value > 0.0) || !std::isfinite(norm_value)) throw DomainError("envelope needs 0 < norm < inf");
  }

  double norm_value() const noexcept { return norm_; }
  double domain_threshold() const noexcept { return std::numbers::e * norm_; }
  bool in_domain(double x) const noexcept { return x >= domain_threshold(); }

  double operator()(double x) const {
    if (!in_domain(x)) throw DomainError("tail envelope is only stated for x >= e * norm");
    return std::exp(-h_transform(q_, psi_, x / norm_));
  }

  const GridSequence& grid() const noexcept { return q_; }
  const GeneratingFunction& psi() const noexcept { return psi_; }

 private:
  GridSequence q_;
  GeneratingFunction psi_;
  double norm_;
};

inline double tail_envelope(const TailEnvelope& env, double x) { return env(x); }

struct TailRow {
  double x = 0.0;
  bool in_domain = false;
  double empirical = 0.0;
  double envelope = 1.0;
  double slack = 0.0;
  bool pass = true;
};

struct TailReport {
  double norm_value = 0.0;
  double domain_threshold = 0.0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::vector<TailRow> rows;

  std::size_t violations() const {
    return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const TailRow& r) { return !r.pass; }));
  }
  bool all_pass() const { return violations() == 0; }
};

/// Monte Carlo slack: three binomial standard errors at the envelope value.
inline double envelope_slack(double envelope, std::size_t n) {
  return 3.0 * std::sqrt(envelope * (1.0 - envelope) / static_cast<double>(n));
}

/// Empirical survival vs envelope at each x; rows below e * norm are reported out of domain.
inline TailReport tail_check(const RandomVariableModel& model, const GeneratingFunction& psi, const GridSequence& q,
                             std::size_t n, std::uint64_t seed, const std::vector<double>& x_grid) {
  TailReport rep;
  rep.n = n;
  rep.seed = seed;
  const auto norm = discrete_norm(model, psi, q);
  if (!std::isfinite(norm.value)) throw DomainError("tail_check needs a finite discrete norm");
  rep.norm_value = norm.value;
  const auto batch = sample(model, n, seed);
  const SurvivalTable survival(batch);
  if (norm.value == 0.0) {
    // xi = 0 a.s.: nothing to bound.
    for (double x : x_grid) rep.rows.push_back({x, false, survival(x), 1.0, 0.0, true});
    return rep;
  }
  const TailEnvelope env(q, psi, norm.value);
  rep.domain_threshold = env.domain_threshold();
  for (double x : x_grid) {
    TailRow row;
    row.x = x;
    row.empirical = survival(x);
    row.in_domain = env.in_domain(x);
    if (row.in_domain) {
      row.envelope = env(x);
      row.slack = envelope_slack(row.envelope, n);
      row.pass = row.empirical <= row.envelope + row.slack;
    }
    rep.rows.push_back(row);
  }
  return rep;
}

struct MembershipEstimate {
  double K_hat = 0.0;
  double x_lower = 0.0;  // K_hat * e
  double x_upper = 0.0;  // largest |value| in the batch
  std::size_t violations = 0;
  std::size_t points_checked = 0;
};

/// 32 geometric points on [norm/4, 8 norm].
inline std::vector<double> default_K_grid(double norm_value, std::size_t count = 32) {
  std::vector<double> g(count);
  const double lo = norm_value / 4.0;
  const double ratio = std::pow(32.0, 1.0 / static_cast<double>(count - 1));
  double k = lo;
  for (auto& v : g) {
    v = k;
    k *= ratio;
  }
  return g;
}

/// Geometric points on [min|x|, max|x|] of the batch (positive values only).
inline std::vector<double> default_K_grid(const SampleBatch& batch, std::size_t count = 32) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (double v : batch.values) {
    const double a = std::abs(v);
    if (a > 0.0) lo = std::min(lo, a);
    hi = std::max(hi, a);
  }
  if (hi == 0.0) return {1.0};
  std::vector<double> g(count);
  const double ratio = count > 1 ? std::pow(hi / lo, 1.0 / static_cast<double>(count - 1)) : 1.0;
  double k = lo;
  for (auto& v : g) {
    v = k;
    k *= ratio;
  }
  g.back() = hi;
  return g;
}

namespace detail {

// q(m) and ln psi(q(m)) for m = 1..M, so repeated h evaluations skip psi.
struct HTable {
  std::vector<double> q;
  std::vector<double> psi;
  std::vector<double> log_psi;

  HTable(const GridSequence& grid, const GeneratingFunction& f) {
    for (std::size_t m = 1; m <= grid.M(); ++m) {
      q.push_back(grid.q(m));
      psi.push_back(f(q.back()));
      log_psi.push_back(std::log(psi.back()));
    }
  }

  // Same terms, enumeration and stopping rule as h_transform_detail.
  double h(double x) const {
    const double log_x = std::log(x);
    double best = -std::numeric_limits<double>::infinity();
    std::size_t stop = q.size();
    bool reached = false;
    for (std::size_t i = 0; i < stop; ++i) {
      best = std::max(best, q[i] * (log_x - log_psi[i]));
      if (!reached && psi[i] >= x) {
        reached = true;
        stop = std::min(q.size(), i + 1 + kHSafetyMargin);
      }
    }
    if (!reached) throw TruncationError("h_transform: psi(q(M)) < x, grid too short");
    return best;
  }
};

// Survival is a left-continuous step function and the envelope is
// nonincreasing, so checking at the sample magnitudes >= K e suffices.
// Points where the grid is too short to evaluate h count as violations.
// With stop_at_first, counting ends at the first violation.
inline std::size_t count_violations(const SurvivalTable& survival, const HTable& table, double K,
                                    std::size_t* checked, bool stop_at_first = false) {
  const auto& xs = survival.sorted_abs();
  const double n = static_cast<double>(xs.size());
  const double start = K * std::numbers::e;
  auto it = std::lower_bound(xs.begin(), xs.end(), start);
  std::size_t bad = 0;
  std::size_t count = 0;
  while (it != xs.end()) {
    const double x = *it;
    const auto next = std::upper_bound(it, xs.end(), x);
    const double surv = static_cast<double>(xs.end() - it) / n;
    ++count;
    try {
      if (surv > std::exp(-table.h(x / K))) ++bad;
    } catch (const TruncationError&) {
      ++bad;
    }
    if (bad && stop_at_first) break;
    it = next;
  }
  if (checked) *checked = count;
  return bad;
}

}  // namespace detail

/// Smallest K in K_grid (ascending) whose envelope dominates the empirical survival.
inline MembershipEstimate membership_K_estimate(const SampleBatch& batch, const GridSequence& q,
                                                const GeneratingFunction& psi, const std::vector<double>& K_grid) {
  if (K_grid.empty()) throw DomainError("K grid is empty");
  for (std::size_t i = 0; i < K_grid.size(); ++i) {
    if (!(K_grid[i] > 0.0) || (i > 0 && !(K_grid[i] > K_grid[i - 1]))) {
      throw DomainError("K grid must be positive and strictly ascending");
    }
  }
  const SurvivalTable survival(batch);
  const detail::HTable table(q, psi);
  for (double K : K_grid) {
    std::size_t checked = 0;
    const auto bad = detail::count_violations(survival, table, K, &checked, true);
    if (bad == 0) return {K, K * std::numbers::e, survival.max_abs(), 0, checked};
  }
  throw NoFeasibleKError("no K in the grid makes the envelope dominate the empirical tail");
}

}  // namespace gls
