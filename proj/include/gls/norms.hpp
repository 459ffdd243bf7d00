#pragma once

// Full, restricted and discrete GLS norms
//   ||f||       = sup_{p >= 1}   |f|_p / psi(p)
//   ||f||^(S)   = sup_{p in S}   |f|_p / psi(p)
//   ||f||^q     = sup_m          |f|_{q(m)} / psi(q(m))
// and the two-sided estimates that tie them together.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gls/errors.hpp"
#include "gls/pgrid.hpp"
#include "gls/psi.hpp"
#include "gls/rv_models.hpp"
#include "gls/search.hpp"

namespace gls {

inline constexpr double kDefaultNormPMax = 200.0;
inline constexpr double kDefaultRefineTol = 1e-10;
inline constexpr std::size_t kCoarseGeometricPoints = 512;
/// Upper bound on coarse-grid spacing, so period-one oscillations of psi are bracketed.
inline constexpr double kCoarseMaxStep = 0.25;

struct NormResult {
  double value = 0.0;  // may be +inf
  double arg_p = 1.0;
  double truncation_p_max = 1.0;
  bool divergent = false;
  std::string diagnostics;
};

/// 200 for exact backends, min(200, 5 ln n) for statistical samples.
inline double default_p_max(const RandomVariableModel& model) {
  if (model.is_sampled_empirical()) {
    return std::max(1.0 + 1e-9, std::min(kDefaultNormPMax, empirical_reliable_p(model.sample_size())));
  }
  return kDefaultNormPMax;
}

namespace detail {

struct RatioEval {
  const RandomVariableModel& model;
  const GeneratingFunction& psi;
  double operator()(double p) const { return lp_norm(model, p) / psi(p); }
};

inline std::vector<double> coarse_grid(double a, double b) {
  std::vector<double> g;
  if (!(b > a)) return {a};
  const double ratio = std::pow(b / a, 1.0 / static_cast<double>(kCoarseGeometricPoints - 1));
  double p = a;
  for (std::size_t i = 0; i < kCoarseGeometricPoints; ++i) {
    g.push_back(p);
    p *= ratio;
  }
  for (double t = a + kCoarseMaxStep; t < b; t += kCoarseMaxStep) g.push_back(t);
  g.push_back(b);
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  for (double& x : g) x = std::clamp(x, a, b);
  g.front() = a;
  g.back() = b;
  return g;
}

struct SupSearch {
  double value = -std::numeric_limits<double>::infinity();
  double arg = 1.0;
  bool divergent = false;
  bool tail_decreasing = true;
};

inline void consider(SupSearch& s, double p, double v) {
  if (v > s.value || (v == s.value && p < s.arg)) {
    s.value = v;
    s.arg = p;
  }
}

// sup of ratio(p) on [a, b]: coarse grid, then golden-section refinement
// around every local maximum of the sampled sequence.
inline SupSearch interval_sup(const RatioEval& ratio, double a, double b, double refine_tol) {
  SupSearch s;
  const auto grid = coarse_grid(a, b);
  std::vector<double> vals;
  vals.reserve(grid.size());
  for (double p : grid) {
    try {
      vals.push_back(ratio(p));
    } catch (const DivergenceError& e) {
      s.divergent = true;
      s.value = std::numeric_limits<double>::infinity();
      s.arg = e.p();
      return s;
    }
  }
  const std::size_t n = vals.size();
  for (std::size_t i = 0; i < n; ++i) consider(s, grid[i], vals[i]);
  for (std::size_t i = 0; i < n; ++i) {
    const bool left_ok = i == 0 || vals[i] >= vals[i - 1];
    const bool right_ok = i + 1 == n || vals[i] >= vals[i + 1];
    if (!(left_ok && right_ok) || n == 1) continue;
    const double lo = grid[i == 0 ? 0 : i - 1];
    const double hi = grid[i + 1 == n ? i : i + 1];
    if (!(hi > lo)) continue;
    const auto [x, v] = golden_section_max(ratio, lo, hi, refine_tol * std::max(1.0, lo));
    consider(s, x, v);
  }
  s.tail_decreasing = n < 2 || vals[n - 1] <= vals[n - 2];
  return s;
}

inline NormResult to_result(const SupSearch& s, double p_max, const std::string& extra = {}) {
  NormResult r;
  r.truncation_p_max = p_max;
  r.value = s.value;
  r.arg_p = s.arg;
  r.divergent = s.divergent;
  std::ostringstream os;
  if (s.divergent) {
    os << "divergent moment at p=" << s.arg;
  } else {
    os << "ratio " << (s.tail_decreasing ? "non-increasing" : "increasing") << " at p_max";
  }
  if (!extra.empty()) os << "; " << extra;
  r.diagnostics = os.str();
  return r;
}

inline std::string empirical_note(const RandomVariableModel& model, double p_max) {
  if (model.is_sampled_empirical() && p_max > empirical_reliable_p(model.sample_size())) {
    return "warning: p_max exceeds 5 ln n, plug-in moments dominated by the sample maximum";
  }
  return {};
}

}  // namespace detail

/// sup over p in [1, p_max] of |f|_p / psi(p).
inline NormResult gls_norm(const RandomVariableModel& model, const GeneratingFunction& psi,
                           double p_max = kDefaultNormPMax, double refine_tol = kDefaultRefineTol) {
  if (!(p_max > 1.0)) throw DomainError("gls_norm requires p_max > 1");
  const detail::RatioEval ratio{model, psi};
  return detail::to_result(detail::interval_sup(ratio, 1.0, p_max, refine_tol), p_max,
                           detail::empirical_note(model, p_max));
}

/// sup over p in S, p <= p_max. Intervals are searched, isolated points enumerated.
inline NormResult restricted_norm(const RandomVariableModel& model, const GeneratingFunction& psi,
                                  const RestrictedSet& S, double p_max = kDefaultNormPMax,
                                  double refine_tol = kDefaultRefineTol) {
  if (!(p_max >= 1.0)) throw DomainError("restricted_norm requires p_max >= 1");
  const detail::RatioEval ratio{model, psi};
  detail::SupSearch total;
  bool tail_decreasing = true;
  for (const auto& c : S.components_up_to(p_max)) {
    detail::SupSearch part;
    if (c.lower == c.upper) {
      try {
        detail::consider(part, c.lower, ratio(c.lower));
      } catch (const DivergenceError& e) {
        part.divergent = true;
        part.value = std::numeric_limits<double>::infinity();
        part.arg = e.p();
      }
    } else {
      part = detail::interval_sup(ratio, c.lower, c.upper, refine_tol);
      tail_decreasing = part.tail_decreasing;
    }
    if (part.divergent) {
      part.tail_decreasing = false;
      return detail::to_result(part, p_max);
    }
    detail::consider(total, part.arg, part.value);
  }
  total.tail_decreasing = tail_decreasing;
  return detail::to_result(total, p_max, detail::empirical_note(model, p_max));
}

/// max over m = 1..M with q(m) <= p_cap of |f|_{q(m)} / psi(q(m)); exact enumeration.
inline NormResult discrete_norm(const RandomVariableModel& model, const GeneratingFunction& psi,
                                const GridSequence& q,
                                double p_cap = std::numeric_limits<double>::infinity()) {
  const detail::RatioEval ratio{model, psi};
  detail::SupSearch s;
  double prev = 0.0;
  double last = 0.0;
  std::size_t used = 0;
  for (std::size_t m = 1; m <= q.M() && q.q(m) <= p_cap; ++m) {
    double v = 0.0;
    try {
      v = ratio(q.q(m));
    } catch (const DivergenceError& e) {
      s.divergent = true;
      s.value = std::numeric_limits<double>::infinity();
      s.arg = e.p();
      return detail::to_result(s, q.q(m));
    }
    detail::consider(s, q.q(m), v);
    prev = last;
    last = v;
    ++used;
  }
  s.tail_decreasing = used < 2 || last <= prev;
  return detail::to_result(s, q.q(std::max<std::size_t>(used, 1)), detail::empirical_note(model, q.q(std::max<std::size_t>(used, 1))));
}

/// One row of a two-sided estimate  lower <= full <= constant * lower.
struct SandwichReport {
  std::string case_id;
  std::string model;
  std::string psi;
  std::string set_or_grid;
  std::string kind;  // "restricted" or "discrete"
  double lower = 0.0;
  double full = 0.0;
  double constant = 1.0;
  double bound = 0.0;
  double tolerance = 0.0;
  double p_max = 0.0;
  bool applicable = true;
  bool lower_ok = true;
  bool upper_ok = true;
  std::string note;

  bool pass() const noexcept { return !applicable || (lower_ok && upper_ok); }
};

namespace detail {

inline double backend_tolerance(const RandomVariableModel& model) {
  if (const auto* d = std::get_if<DensityBackend>(&model.backend())) return 10.0 * d->quadrature.rel_tol;
  return 0.0;
}

inline void finish_sandwich(SandwichReport& rep, double refine_tol, const RandomVariableModel& model) {
  rep.tolerance = 1e-9 + refine_tol + backend_tolerance(model);
  if (!std::isfinite(rep.constant)) {
    rep.applicable = false;
    rep.note = "not applicable: equivalence constant is infinite";
    rep.bound = std::numeric_limits<double>::infinity();
    return;
  }
  if (!std::isfinite(rep.full) || !std::isfinite(rep.lower)) {
    rep.applicable = false;
    rep.note = "not applicable: a norm is infinite";
    rep.bound = rep.constant * rep.lower;
    return;
  }
  rep.bound = rep.constant * rep.lower;
  rep.lower_ok = rep.lower <= rep.full * (1.0 + rep.tolerance);
  rep.upper_ok = rep.full <= rep.bound * (1.0 + rep.tolerance);
}

}  // namespace detail

/// restricted <= full <= Z * restricted. Both sups run up to P = p_plus(p_max),
/// the first point of S at or beyond p_max, so every p <= P has p_plus(p) <= P.
inline SandwichReport sandwich_check_restricted(const RandomVariableModel& model, const GeneratingFunction& psi,
                                                const RestrictedSet& S, double p_max = kDefaultNormPMax,
                                                double refine_tol = kDefaultRefineTol) {
  SandwichReport rep;
  rep.model = model.label();
  rep.psi = psi.description();
  rep.set_or_grid = S.description();
  rep.kind = "restricted";
  const auto z = z_constant(S, psi);
  rep.constant = z.value;
  if (z.unbounded_gap) {
    detail::finish_sandwich(rep, refine_tol, model);
    return rep;
  }
  const double P = S.p_plus(p_max);
  rep.p_max = P;
  rep.full = gls_norm(model, psi, P, refine_tol).value;
  rep.lower = restricted_norm(model, psi, S, P, refine_tol).value;
  detail::finish_sandwich(rep, refine_tol, model);
  if (rep.note.empty()) rep.note = z.diagnostic;
  return rep;
}

/// discrete <= full <= W * discrete (W_hat when use_w_hat, no monotonicity needed).
/// Both sides run up to P, the first grid point at or beyond p_max (capped at q(M)).
inline SandwichReport sandwich_check_discrete(const RandomVariableModel& model, const GeneratingFunction& psi,
                                              const GridSequence& q, double p_max = kDefaultNormPMax,
                                              bool use_w_hat = false, double refine_tol = kDefaultRefineTol) {
  if (!use_w_hat && !psi.monotone()) throw DomainError("W[q,psi] needs a monotone psi; use W_hat");
  SandwichReport rep;
  rep.model = model.label();
  rep.psi = psi.description();
  rep.set_or_grid = "grid:" + q.description();
  rep.kind = use_w_hat ? "discrete_w_hat" : "discrete";
  const auto idx = std::min(q.first_index_at_least(p_max), q.M());
  const double P = q.q(idx);
  rep.p_max = P;
  // The constant only needs the cells below P.
  const auto qP = q.truncated(std::max<std::size_t>(idx, 2));
  const auto w = use_w_hat ? w_hat_constant(qP, psi) : w_constant(qP, psi);
  rep.constant = w.value;
  rep.full = gls_norm(model, psi, P, refine_tol).value;
  rep.lower = discrete_norm(model, psi, q, P).value;
  detail::finish_sandwich(rep, refine_tol, model);
  if (rep.note.empty()) rep.note = w.diagnostic;
  return rep;
}

}  // namespace gls
