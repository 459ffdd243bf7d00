#pragma once

// Restricted sets S of [1, inf), grid sequences q, the partition they
// induce, and the constants Z[psi,S], W[q,psi], W_hat[q,psi] that bound the
// full GLS norm by the restricted or discrete one.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gls/errors.hpp"
#include "gls/psi.hpp"
#include "gls/search.hpp"

namespace gls {

inline constexpr std::size_t kDefaultGridM = 60;

/// Strictly increasing q(1) = 1 < q(2) < ... with q(m) -> inf; indices are 1-based.
class GridSequence {
 public:
  using Generator = std::function<double(std::size_t)>;

  GridSequence(Generator gen, std::size_t M, std::string description)
      : gen_(std::make_shared<Generator>(std::move(gen))), description_(std::move(description)) {
    if (M < 1) throw DomainError("grid truncation M must be >= 1");
    points_.reserve(M);
    for (std::size_t m = 1; m <= M; ++m) points_.push_back((*gen_)(m));
    if (points_.front() != 1.0) throw DomainError("grid must start at q(1) = 1");
    for (std::size_t i = 1; i < points_.size(); ++i) {
      if (!(points_[i] > points_[i - 1])) throw DomainError("grid must be strictly increasing");
    }
  }

  std::size_t M() const noexcept { return points_.size(); }
  /// q(m), 1-based; indices past M are evaluated through the generator.
  double q(std::size_t m) const { return m <= points_.size() ? points_[m - 1] : (*gen_)(m); }
  const std::vector<double>& points() const noexcept { return points_; }
  const std::string& description() const noexcept { return description_; }

  GridSequence truncated(std::size_t M) const { return {*gen_, M, description_with_M(M)}; }

  /// Smallest index m with q(m) >= p (extends past M if needed).
  std::size_t first_index_at_least(double p, std::size_t max_extend = 10'000'000) const {
    const auto it = std::lower_bound(points_.begin(), points_.end(), p);
    if (it != points_.end()) return static_cast<std::size_t>(it - points_.begin()) + 1;
    for (std::size_t m = points_.size() + 1; m <= points_.size() + max_extend; ++m) {
      if ((*gen_)(m) >= p) return m;
    }
    throw TruncationError("grid does not reach p within the extension limit");
  }

 private:
  std::string description_with_M(std::size_t M) const {
    const auto pos = description_.rfind(":M=");
    std::ostringstream os;
    os << (pos == std::string::npos ? description_ : description_.substr(0, pos)) << ":M=" << M;
    return os.str();
  }

  std::shared_ptr<Generator> gen_;
  std::vector<double> points_;
  std::string description_;
};

/// q(m) = D^m - D + 1, D >= 2.
inline GridSequence geometric_grid(std::uint64_t D, std::size_t M = kDefaultGridM) {
  if (D < 2) throw DomainError("geometric grid requires D >= 2");
  auto gen = [D](std::size_t m) {
    // exact while D^m fits in 64 bits
    unsigned __int128 pw = 1;
    for (std::size_t i = 0; i < m; ++i) {
      pw *= D;
      if (pw > (static_cast<unsigned __int128>(1) << 100)) {
        return std::pow(static_cast<double>(D), static_cast<double>(m)) - static_cast<double>(D) + 1.0;
      }
    }
    return static_cast<double>(pw - D + 1);
  };
  std::ostringstream os;
  os << "geometric:D=" << D << ":M=" << M;
  return {gen, M, os.str()};
}

/// q(m) = m.
inline GridSequence integer_grid(std::size_t M = 100) {
  std::ostringstream os;
  os << "integers:M=" << M;
  return {[](std::size_t m) { return static_cast<double>(m); }, M, os.str()};
}

/// sup_m q(m+1)/q(m) over the materialized grid.
inline double grid_ratio_sup(const GridSequence& q) {
  double best = 0.0;
  for (std::size_t m = 1; m < q.M(); ++m) best = std::max(best, q.q(m + 1) / q.q(m));
  return best;
}

/// A(m) = [q(m), q(m+1)).
struct PartitionCell {
  std::size_t m;
  double lower;
  double upper;
  bool contains(double p) const noexcept { return lower <= p && p < upper; }
};

inline std::vector<PartitionCell> partition_cells(const GridSequence& q) {
  if (q.M() < 2) throw DomainError("partition needs M >= 2");
  std::vector<PartitionCell> cells;
  cells.reserve(q.M() - 1);
  for (std::size_t m = 1; m < q.M(); ++m) cells.push_back({m, q.q(m), q.q(m + 1)});
  return cells;
}

/// A closed piece of S; isolated points have lower == upper.
struct SetComponent {
  double lower;
  double upper;
};

/// S: finite union of closed intervals and isolated points, optionally a
/// final ray [a, inf) and/or the (infinite) point set of a grid. Always contains 1.
class RestrictedSet {
 public:
  static RestrictedSet full() {
    RestrictedSet s;
    s.ray_start_ = 1.0;
    s.description_ = "full";
    return s;
  }

  /// Intervals [a, b]; b = +inf makes the final ray.
  static RestrictedSet from_intervals(std::vector<std::pair<double, double>> intervals,
                                      std::vector<double> points = {}) {
    RestrictedSet s;
    std::sort(intervals.begin(), intervals.end());
    for (const auto& [a, b] : intervals) {
      if (!(a >= 1.0) || !(a <= b)) throw DomainError("interval components need 1 <= a <= b");
      if (std::isinf(b)) {
        if (s.ray_start_) throw DomainError("at most one unbounded ray");
        s.ray_start_ = a;
      } else {
        s.intervals_.push_back({a, b});
      }
    }
    for (std::size_t i = 1; i < s.intervals_.size(); ++i) {
      if (!(s.intervals_[i].lower > s.intervals_[i - 1].upper)) throw DomainError("intervals must be disjoint");
    }
    if (s.ray_start_ && !s.intervals_.empty() && !(*s.ray_start_ > s.intervals_.back().upper)) {
      throw DomainError("ray must lie to the right of every interval");
    }
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    for (double t : points) {
      if (!(t >= 1.0)) throw DomainError("points of S must be >= 1");
    }
    s.points_ = std::move(points);
    s.check_contains_one();
    s.description_ = s.describe();
    return s;
  }

  static RestrictedSet from_points(std::vector<double> points) { return from_intervals({}, std::move(points)); }

  /// The point set {q(m)} of a grid, continued past M.
  static RestrictedSet from_grid(GridSequence q) {
    RestrictedSet s;
    s.description_ = "grid:" + q.description();
    s.grid_ = std::move(q);
    return s;
  }

  const std::vector<SetComponent>& intervals() const noexcept { return intervals_; }
  const std::vector<double>& points() const noexcept { return points_; }
  const std::optional<double>& ray_start() const noexcept { return ray_start_; }
  const std::optional<GridSequence>& grid() const noexcept { return grid_; }
  const std::string& description() const noexcept { return description_; }
  bool unbounded() const noexcept { return ray_start_.has_value() || grid_.has_value(); }
  bool is_full() const noexcept { return ray_start_ && *ray_start_ == 1.0; }

  bool contains(double p) const { return p_plus(p) == p; }

  /// inf { t in S : t >= p }; +inf when empty.
  double p_plus(double p) const {
    if (!(p >= 1.0)) throw DomainError("p_plus requires p >= 1");
    double best = std::numeric_limits<double>::infinity();
    if (ray_start_) best = std::max(p, *ray_start_);
    const auto it = std::lower_bound(intervals_.begin(), intervals_.end(), p,
                                     [](const SetComponent& c, double v) { return c.upper < v; });
    if (it != intervals_.end()) best = std::min(best, std::max(p, it->lower));
    const auto pt = std::lower_bound(points_.begin(), points_.end(), p);
    if (pt != points_.end()) best = std::min(best, *pt);
    if (grid_ && best > p) {
      const auto& pts = grid_->points();
      const auto g = std::lower_bound(pts.begin(), pts.end(), p);
      if (g != pts.end()) {
        best = std::min(best, *g);
      } else if (best > pts.back()) {
        best = std::min(best, grid_->q(grid_->first_index_at_least(p)));
      }
    }
    return best;
  }

  /// Sorted, merged pieces of S within [1, limit].
  std::vector<SetComponent> components_up_to(double limit) const {
    std::vector<SetComponent> raw;
    for (const auto& c : intervals_) {
      if (c.lower <= limit) raw.push_back({c.lower, std::min(c.upper, limit)});
    }
    for (double t : points_) {
      if (t <= limit) raw.push_back({t, t});
    }
    if (ray_start_ && *ray_start_ <= limit) raw.push_back({*ray_start_, limit});
    if (grid_) {
      for (std::size_t m = 1;; ++m) {
        const double t = grid_->q(m);
        if (t > limit) break;
        raw.push_back({t, t});
      }
    }
    std::sort(raw.begin(), raw.end(), [](const SetComponent& a, const SetComponent& b) {
      return a.lower < b.lower || (a.lower == b.lower && a.upper < b.upper);
    });
    std::vector<SetComponent> merged;
    for (const auto& c : raw) {
      if (!merged.empty() && c.lower <= merged.back().upper) {
        merged.back().upper = std::max(merged.back().upper, c.upper);
      } else {
        merged.push_back(c);
      }
    }
    return merged;
  }

  /// Right end of the structure that is known explicitly (no extrapolation).
  double structural_extent() const {
    double e = 1.0;
    if (!intervals_.empty()) e = std::max(e, intervals_.back().upper);
    if (!points_.empty()) e = std::max(e, points_.back());
    if (ray_start_) e = std::max(e, *ray_start_);
    if (grid_) e = std::max(e, grid_->points().back());
    return e;
  }

 private:
  RestrictedSet() = default;

  void check_contains_one() const {
    if (p_plus(1.0) != 1.0) throw DomainError("S must contain the initial point 1");
  }

  std::string describe() const {
    std::ostringstream os;
    os << "intervals:";
    bool first = true;
    for (const auto& c : intervals_) {
      os << (first ? "" : ",") << c.lower << "-" << c.upper;
      first = false;
    }
    if (ray_start_) {
      os << (first ? "" : ",") << *ray_start_ << "-inf";
      first = false;
    }
    for (double t : points_) {
      os << (first ? "" : ",") << t;
      first = false;
    }
    return os.str();
  }

  std::vector<SetComponent> intervals_;
  std::vector<double> points_;
  std::optional<double> ray_start_;
  std::optional<GridSequence> grid_;
  std::string description_;
};

struct ZResult {
  double value = 1.0;
  /// S is bounded above: p_plus = +inf past its last point, so Z = +inf.
  bool unbounded_gap = false;
  /// Gap (a, b) of S attaining the sup; equal when Z = 1.
  double gap_lower = 1.0;
  double gap_upper = 1.0;
  /// Ratio across the last materialized gap of a grid component (truncation evidence).
  bool tail_decreasing = true;
  std::string diagnostic;
};

/// Z[psi,S] = sup_p psi(p_plus(p)) / psi(p) for monotone psi, as the largest
/// endpoint ratio psi(b)/psi(a) over the gaps (a, b) of S.
inline ZResult z_constant(const RestrictedSet& S, const GeneratingFunction& psi) {
  if (!psi.monotone()) throw DomainError("z_constant needs a monotone psi");
  ZResult res;
  if (!S.unbounded()) {
    res.value = std::numeric_limits<double>::infinity();
    res.unbounded_gap = true;
    res.gap_lower = S.structural_extent();
    res.gap_upper = res.value;
    res.diagnostic = "unbounded-gap: S is bounded above";
    return res;
  }
  const auto comps = S.components_up_to(S.structural_extent());
  double prev_ratio = std::numeric_limits<double>::infinity();
  double last_ratio = 1.0;
  for (std::size_t i = 1; i < comps.size(); ++i) {
    const double a = comps[i - 1].upper;
    const double b = comps[i].lower;
    const double ratio = psi(b) / psi(a);
    if (ratio > res.value) {
      res.value = ratio;
      res.gap_lower = a;
      res.gap_upper = b;
    }
    prev_ratio = last_ratio;
    last_ratio = ratio;
  }
  if (S.ray_start()) {
    res.diagnostic = "exact: S ends in a ray";
  } else {
    res.tail_decreasing = comps.size() < 3 || last_ratio <= prev_ratio;
    res.diagnostic = std::string("truncated at q(M); last gap ratio ") +
                     (res.tail_decreasing ? "non-increasing" : "increasing");
  }
  return res;
}

struct WResult {
  double value = 1.0;
  std::size_t arg_m = 1;
  /// Ratio sequence non-increasing over the last materialized steps.
  bool tail_decreasing = true;
  std::string diagnostic;
};

/// W[q,psi] = sup_m psi(q(m+1)) / psi(q(m)), m = 1..M-1.
inline WResult w_constant(const GridSequence& q, const GeneratingFunction& psi) {
  if (q.M() < 2) throw DomainError("w_constant needs M >= 2");
  WResult res;
  res.value = 0.0;
  std::vector<double> ratios;
  ratios.reserve(q.M() - 1);
  for (std::size_t m = 1; m < q.M(); ++m) {
    const double r = psi(q.q(m + 1)) / psi(q.q(m));
    ratios.push_back(r);
    if (r > res.value) {
      res.value = r;
      res.arg_m = m;
    }
  }
  const std::size_t k = ratios.size();
  res.tail_decreasing = k < 2 || ratios[k - 1] <= ratios[k - 2];
  std::ostringstream os;
  os << "sup at m=" << res.arg_m << "; ratio at m=M-1 is " << ratios.back()
     << (res.tail_decreasing ? " (non-increasing at truncation)" : " (increasing at truncation)");
  res.diagnostic = os.str();
  return res;
}

inline constexpr std::size_t kDefaultCellSamples = 256;

/// min of psi over [lower, upper]: dense sampling then golden-section refinement
/// between the neighbours of the best sample.
inline double cell_minimum(const GeneratingFunction& psi, double lower, double upper, std::size_t samples) {
  if (samples < 2) throw DomainError("cell minimization needs >= 2 samples");
  const double h = (upper - lower) / static_cast<double>(samples - 1);
  double best = psi(lower);
  std::size_t best_i = 0;
  for (std::size_t i = 1; i < samples; ++i) {
    const double v = psi(i + 1 == samples ? upper : lower + h * static_cast<double>(i));
    if (v < best) {
      best = v;
      best_i = i;
    }
  }
  const double a = lower + h * static_cast<double>(best_i == 0 ? 0 : best_i - 1);
  const double b = std::min(upper, lower + h * static_cast<double>(best_i + 1));
  const auto [x, v] = detail::golden_section_min([&](double p) { return psi(p); }, a, b, 1e-12 * std::max(1.0, b));
  (void)x;
  return std::min(best, v);
}

/// W_hat[q,psi] = sup_m psi(q(m+1)) / min_{A(m)} psi; no monotonicity needed.
inline WResult w_hat_constant(const GridSequence& q, const GeneratingFunction& psi,
                              std::size_t cell_samples = kDefaultCellSamples) {
  const auto cells = partition_cells(q);
  WResult res;
  res.value = 0.0;
  std::vector<double> ratios;
  ratios.reserve(cells.size());
  for (const auto& cell : cells) {
    const double r = psi(cell.upper) / cell_minimum(psi, cell.lower, cell.upper, cell_samples);
    ratios.push_back(r);
    if (r > res.value) {
      res.value = r;
      res.arg_m = cell.m;
    }
  }
  const std::size_t k = ratios.size();
  res.tail_decreasing = k < 2 || ratios[k - 1] <= ratios[k - 2];
  std::ostringstream os;
  os << "sup at m=" << res.arg_m << "; cell ratio at m=M-1 is " << ratios.back();
  res.diagnostic = os.str();
  return res;
}

}  // namespace gls
