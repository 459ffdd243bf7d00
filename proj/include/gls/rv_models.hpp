#pragma once

// Random variables on a probability space, seen only through their L^p moments
// |f|_p = (E|f|^p)^{1/p}. Three backends: closed-form families, a density
// integrated numerically, and a finite sample (plug-in moments).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <variant>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "gls/errors.hpp"

namespace gls {

enum class Family { gaussian, uniform01, exponential, constant, rademacher };

struct QuadratureSettings {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  unsigned max_depth = 18;
};

/// Deterministic sample: regenerating with the same (seed, size) yields the same array.
struct SampleBatch {
  std::vector<double> values;
  std::uint64_t seed = 0;
  std::size_t size() const noexcept { return values.size(); }
};

namespace detail {

inline constexpr std::size_t kSampleChunk = std::size_t{1} << 16;

// One engine per chunk, keyed by (seed, chunk index), so any chunking or
// thread count reproduces the sequential array.
inline std::mt19937_64 chunk_engine(std::uint64_t seed, std::uint64_t chunk) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(chunk), static_cast<std::uint32_t>(chunk >> 32),
                    0x9e3779b9u};
  return std::mt19937_64(seq);
}

// Uniform on [0,1) with 53 random bits.
inline double unit_uniform(std::mt19937_64& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

// Uniform on (0,1].
inline double unit_uniform_open0(std::mt19937_64& eng) {
  return static_cast<double>((eng() >> 11) + 1) * 0x1.0p-53;
}

inline std::uint64_t bounded_index(std::mt19937_64& eng, std::uint64_t n) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(eng()) * n) >> 64);
}

using ChunkFiller = std::function<void(std::mt19937_64&, double* out, std::size_t count)>;

inline std::vector<double> generate_chunked(std::size_t n, std::uint64_t seed, const ChunkFiller& fill,
                                            unsigned threads) {
  std::vector<double> out(n);
  const std::size_t chunks = (n + kSampleChunk - 1) / kSampleChunk;
  auto run = [&](std::size_t first, std::size_t stride) {
    for (std::size_t c = first; c < chunks; c += stride) {
      auto eng = chunk_engine(seed, c);
      const std::size_t begin = c * kSampleChunk;
      fill(eng, out.data() + begin, std::min(kSampleChunk, n - begin));
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(chunks, 1))));
  if (threads == 1) {
    run(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(run, t, threads);
    for (auto& th : pool) th.join();
  }
  return out;
}

inline void fill_family(Family family, double c, std::mt19937_64& eng, double* out, std::size_t count) {
  switch (family) {
    case Family::gaussian: {
      // Box-Muller, both variates used.
      std::size_t i = 0;
      while (i < count) {
        const double u1 = unit_uniform_open0(eng);
        const double u2 = unit_uniform(eng);
        const double rad = std::sqrt(-2.0 * std::log(u1));
        const double ang = 2.0 * std::numbers::pi * u2;
        out[i++] = rad * std::cos(ang);
        if (i < count) out[i++] = rad * std::sin(ang);
      }
      break;
    }
    case Family::uniform01:
      for (std::size_t i = 0; i < count; ++i) out[i] = unit_uniform(eng);
      break;
    case Family::exponential:
      for (std::size_t i = 0; i < count; ++i) out[i] = -std::log(unit_uniform_open0(eng));
      break;
    case Family::constant:
      for (std::size_t i = 0; i < count; ++i) out[i] = c;
      break;
    case Family::rademacher:
      for (std::size_t i = 0; i < count; ++i) out[i] = (eng() >> 63) ? 1.0 : -1.0;
      break;
  }
}

// log |f|_p for the closed-form families (c is the constant's value).
inline double closed_form_log_norm(Family family, double c, double p) {
  switch (family) {
    case Family::gaussian:
      return (0.5 * p * std::log(2.0) + std::lgamma(0.5 * (p + 1.0)) - 0.5 * std::log(std::numbers::pi)) / p;
    case Family::uniform01:
      return -std::log1p(p) / p;
    case Family::exponential:
      return std::lgamma(p + 1.0) / p;
    case Family::constant:
      return std::log(std::abs(c));
    case Family::rademacher:
      return 0.0;
  }
  return 0.0;
}

inline const char* family_name(Family f) {
  switch (f) {
    case Family::gaussian: return "gaussian";
    case Family::uniform01: return "uniform01";
    case Family::exponential: return "exponential";
    case Family::constant: return "constant";
    case Family::rademacher: return "rademacher";
  }
  return "?";
}

}  // namespace detail

struct ClosedFormBackend {
  Family family;
  double constant = 1.0;
};

struct DensityBackend {
  std::function<double(double)> pdf;
  double lower;  // may be -inf
  double upper;  // may be +inf
  QuadratureSettings quadrature;
  // Set for densities of known families; custom densities fall back to
  // rejection sampling (finite support only).
  std::optional<Family> family;
};

struct EmpiricalBackend {
  std::shared_ptr<const std::vector<double>> values;
  // true: the values carry an exact uniform probability measure (e.g. a
  // function on a finite group), so moments are exact at every p.
  bool exact_measure = false;
};

class RandomVariableModel {
 public:
  using Backend = std::variant<ClosedFormBackend, DensityBackend, EmpiricalBackend>;

  RandomVariableModel(Backend backend, std::string label, double scale = 1.0)
      : backend_(std::move(backend)), label_(std::move(label)), scale_(scale) {}

  static RandomVariableModel gaussian() { return {ClosedFormBackend{Family::gaussian}, "gaussian"}; }
  static RandomVariableModel uniform01() { return {ClosedFormBackend{Family::uniform01}, "uniform01"}; }
  static RandomVariableModel exponential() { return {ClosedFormBackend{Family::exponential}, "exponential"}; }
  static RandomVariableModel rademacher() { return {ClosedFormBackend{Family::rademacher}, "rademacher"}; }
  static RandomVariableModel constant(double c) {
    std::ostringstream os;
    os << "constant:" << c;
    return {ClosedFormBackend{Family::constant, c}, os.str()};
  }

  static RandomVariableModel density(std::function<double(double)> pdf, double lower, double upper,
                                     std::string label, QuadratureSettings q = {},
                                     std::optional<Family> family = std::nullopt) {
    if (!(lower < upper)) throw DomainError("density support must satisfy lower < upper");
    return {DensityBackend{std::move(pdf), lower, upper, q, family}, std::move(label)};
  }

  /// Density-backed twins of the closed-form families (for backend cross-checks).
  static RandomVariableModel gaussian_density(QuadratureSettings q = {}) {
    const double inf = std::numeric_limits<double>::infinity();
    return density([](double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }, -inf,
                   inf, "gaussian_density", q, Family::gaussian);
  }
  static RandomVariableModel uniform01_density(QuadratureSettings q = {}) {
    return density([](double) { return 1.0; }, 0.0, 1.0, "uniform01_density", q, Family::uniform01);
  }
  static RandomVariableModel exponential_density(QuadratureSettings q = {}) {
    return density([](double x) { return std::exp(-x); }, 0.0, std::numeric_limits<double>::infinity(),
                   "exponential_density", q, Family::exponential);
  }

  /// Plug-in model over a finite sample.
  static RandomVariableModel empirical(std::vector<double> values, std::string label) {
    return {EmpiricalBackend{std::make_shared<const std::vector<double>>(std::move(values)), false},
            std::move(label)};
  }

  /// Uniform probability measure on finitely many atoms; moments are exact.
  static RandomVariableModel finite_measure(std::vector<double> values, std::string label) {
    return {EmpiricalBackend{std::make_shared<const std::vector<double>>(std::move(values)), true},
            std::move(label)};
  }

  /// One value per line; blank lines and lines starting with '#' are skipped.
  static RandomVariableModel empirical_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open sample file: " + path);
    std::vector<double> values;
    std::string line;
    while (std::getline(in, line)) {
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(line.substr(first), &used);
      } catch (const std::exception&) {
        throw ParseError("bad sample value in " + path + ": " + line);
      }
      values.push_back(v);
    }
    if (values.empty()) throw ParseError("sample file is empty: " + path);
    return empirical(std::move(values), "empirical:" + path);
  }

  RandomVariableModel scaled(double alpha) const {
    std::ostringstream os;
    os << alpha << "*" << label_;
    return {backend_, os.str(), scale_ * alpha};
  }

  const Backend& backend() const noexcept { return backend_; }
  const std::string& label() const noexcept { return label_; }
  double scale() const noexcept { return scale_; }

  bool is_closed_form() const noexcept { return std::holds_alternative<ClosedFormBackend>(backend_); }
  bool is_density() const noexcept { return std::holds_alternative<DensityBackend>(backend_); }
  bool is_empirical() const noexcept { return std::holds_alternative<EmpiricalBackend>(backend_); }

  /// A statistical sample (as opposed to an exact finite measure).
  bool is_sampled_empirical() const noexcept {
    const auto* e = std::get_if<EmpiricalBackend>(&backend_);
    return e != nullptr && !e->exact_measure;
  }
  std::size_t sample_size() const noexcept {
    const auto* e = std::get_if<EmpiricalBackend>(&backend_);
    return e ? e->values->size() : 0;
  }

 private:
  Backend backend_;
  std::string label_;
  double scale_ = 1.0;
};

namespace detail {

inline double density_lp_norm(const DensityBackend& d, double p) {
  const double inf = std::numeric_limits<double>::infinity();
  const bool lo_inf = std::isinf(d.lower);
  const bool hi_inf = std::isinf(d.upper);
  auto log_integrand = [&](double x) {
    const double dens = d.pdf(x);
    if (!(dens > 0.0)) return -inf;
    return p * std::log(std::abs(x)) + std::log(dens);
  };
  // Map (0,1) onto the support for the mode scan.
  auto from_unit = [&](double t) {
    if (!lo_inf && !hi_inf) return d.lower + t * (d.upper - d.lower);
    if (!lo_inf) return d.lower + t / (1.0 - t);
    if (!hi_inf) return d.upper - (1.0 - t) / t;
    const double s = 2.0 * t - 1.0;
    return s / (1.0 - s * s);
  };

  constexpr int kScan = 4096;
  double best = -inf;
  double mode = 0.5 * (std::isfinite(d.lower) && std::isfinite(d.upper) ? d.lower + d.upper : 0.0);
  int best_i = -1;
  // Edges of the support seen by the scan, located by bisection; quadrature
  // nodes can otherwise step over a sliver of mass next to a hole.
  std::vector<double> edges;
  double prev_x = 0.0;
  bool prev_zero = false;
  bool have_prev = false;
  for (int i = 0; i <= kScan; ++i) {
    if ((i == 0 && lo_inf) || (i == kScan && hi_inf)) continue;
    const double x = from_unit(static_cast<double>(i) / kScan);
    const double g = log_integrand(x);
    if (g > best) {
      best = g;
      mode = x;
      best_i = i;
    }
    const bool zero = g == -inf;
    if (have_prev && zero != prev_zero) {
      double a = prev_x, b = x;
      for (int k = 0; k < 80 && a < b; ++k) {
        const double mid = 0.5 * (a + b);
        if (mid <= a || mid >= b) break;
        ((log_integrand(mid) == -inf) == prev_zero ? a : b) = mid;
      }
      edges.push_back(0.5 * (a + b));
    }
    prev_x = x;
    prev_zero = zero;
    have_prev = true;
  }
  if (best == -inf) return 0.0;
  // Still climbing at the last finite scan point next to an infinite end.
  if ((hi_inf && best_i >= kScan - 2) || (lo_inf && best_i <= 2)) {
    throw DivergenceError("moment integral diverges (integrand increasing toward infinity)", p);
  }

  auto integrand = [&](double x) {
    const double g = log_integrand(x);
    return g == -inf ? 0.0 : std::exp(g - best);
  };
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  double total = 0.0;
  double err_total = 0.0;
  auto piece = [&](double a, double b) {
    if (!(a < b)) return;
    double err = 0.0;
    const double val = GK::integrate(integrand, a, b, d.quadrature.max_depth, d.quadrature.rel_tol, &err);
    total += val;
    err_total += err;
  };
  // Infinite ends are integrated in u = ln|x|, which turns algebraic tails
  // x^{-a} into exponential ones; the pieces meet at |x| = max(|mode|, 1).
  auto log_piece = [&](double c, double sign) {
    auto g = [&](double u) {
      const double x = sign * std::exp(u);
      const double v = log_integrand(x);
      return v == -inf ? 0.0 : std::exp(v + u - best);
    };
    double err = 0.0;
    const double val = GK::integrate(g, std::log(c), inf, d.quadrature.max_depth, d.quadrature.rel_tol, &err);
    total += val;
    err_total += err;
  };
  double lo = d.lower, hi = d.upper;
  double inner_hi = std::max(mode, 1.0), inner_lo = std::min(mode, -1.0);
  for (double e : edges) {
    inner_hi = std::max(inner_hi, e);
    inner_lo = std::min(inner_lo, e);
  }
  if (hi_inf) {
    hi = std::max(inner_hi, lo);
    log_piece(hi, 1.0);
  }
  if (lo_inf) {
    lo = std::min(inner_lo, hi);
    log_piece(-lo, -1.0);
  }
  // |x|^p has a kink at 0; split there, at the mode and at support edges.
  std::vector<double> cuts{lo, std::clamp(mode, lo, hi), hi};
  if (lo < 0.0 && 0.0 < hi) cuts.push_back(0.0);
  for (double e : edges) {
    if (lo < e && e < hi) cuts.push_back(e);
  }
  std::sort(cuts.begin(), cuts.end());
  // Slivers below 1e-12 carry no resolvable mass and stall the adaptive rule.
  std::vector<double> kept{cuts.front()};
  for (std::size_t i = 1; i < cuts.size(); ++i) {
    if (cuts[i] - kept.back() > 1e-12 * std::max(1.0, std::abs(cuts[i]))) kept.push_back(cuts[i]);
  }
  if (kept.size() == 1) kept.push_back(cuts.back());
  kept.back() = cuts.back();
  for (std::size_t i = 1; i < kept.size(); ++i) piece(kept[i - 1], kept[i]);
  if (!std::isfinite(total) || !std::isfinite(err_total) ||
      err_total > 100.0 * std::max(d.quadrature.abs_tol, d.quadrature.rel_tol * std::abs(total))) {
    throw DivergenceError("moment quadrature failed to converge", p);
  }
  if (total <= 0.0) return 0.0;
  return std::exp((best + std::log(total)) / p);
}

inline double empirical_lp_norm(const std::vector<double>& values, double p) {
  if (values.empty()) throw DegenerateError("empirical model has no values");
  double peak = 0.0;
  for (double v : values) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return 0.0;
  double acc = 0.0;
  for (double v : values) acc += std::pow(std::abs(v) / peak, p);
  return peak * std::pow(acc / static_cast<double>(values.size()), 1.0 / p);
}

}  // namespace detail

/// (E|f|^p)^{1/p}. Closed-form families are exact; densities are integrated
/// adaptively; empirical models use the plug-in mean of |x_i|^p.
inline double lp_norm(const RandomVariableModel& model, double p) {
  if (!(p >= 1.0)) throw DomainError("lp_norm requires p >= 1");
  const double s = std::abs(model.scale());
  if (s == 0.0) return 0.0;
  return std::visit(
      [&](const auto& b) -> double {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, ClosedFormBackend>) {
          if (b.family == Family::constant) return s * std::abs(b.constant);
          if (b.family == Family::rademacher) return s;
          return s * std::exp(detail::closed_form_log_norm(b.family, b.constant, p));
        } else if constexpr (std::is_same_v<T, DensityBackend>) {
          return s * detail::density_lp_norm(b, p);
        } else {
          return s * detail::empirical_lp_norm(*b.values, p);
        }
      },
      model.backend());
}

/// Above this order the plug-in moment of an n-point sample is dominated by its maximum.
inline double empirical_reliable_p(std::size_t n) { return 5.0 * std::log(static_cast<double>(std::max<std::size_t>(n, 2))); }

/// Deterministic in (n, seed); `threads` only changes how chunks are scheduled.
inline SampleBatch sample(const RandomVariableModel& model, std::size_t n, std::uint64_t seed,
                          unsigned threads = 1) {
  SampleBatch batch;
  batch.seed = seed;
  if (n == 0) return batch;
  const double s = model.scale();
  detail::ChunkFiller fill = std::visit(
      [&](const auto& b) -> detail::ChunkFiller {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, ClosedFormBackend>) {
          const Family fam = b.family;
          const double c = b.constant;
          return [fam, c](std::mt19937_64& eng, double* out, std::size_t count) {
            detail::fill_family(fam, c, eng, out, count);
          };
        } else if constexpr (std::is_same_v<T, DensityBackend>) {
          if (b.family) {
            const Family fam = *b.family;
            return [fam](std::mt19937_64& eng, double* out, std::size_t count) {
              detail::fill_family(fam, 1.0, eng, out, count);
            };
          }
          if (!std::isfinite(b.lower) || !std::isfinite(b.upper)) {
            throw UnsupportedBackendError("rejection sampling needs a density with finite support");
          }
          constexpr int kScan = 4096;
          double peak = 0.0;
          for (int i = 0; i <= kScan; ++i) peak = std::max(peak, b.pdf(b.lower + (b.upper - b.lower) * i / kScan));
          if (!(peak > 0.0)) throw UnsupportedBackendError("density vanishes on its support");
          const double bound = 1.25 * peak;
          const double lo = b.lower;
          const double width = b.upper - b.lower;
          auto pdf = b.pdf;
          return [=](std::mt19937_64& eng, double* out, std::size_t count) {
            for (std::size_t i = 0; i < count;) {
              const double x = lo + width * detail::unit_uniform(eng);
              if (detail::unit_uniform(eng) * bound <= pdf(x)) out[i++] = x;
            }
          };
        } else {
          auto values = b.values;
          return [values](std::mt19937_64& eng, double* out, std::size_t count) {
            for (std::size_t i = 0; i < count; ++i) out[i] = (*values)[detail::bounded_index(eng, values->size())];
          };
        }
      },
      model.backend());
  batch.values = detail::generate_chunked(n, seed, fill, threads);
  if (s != 1.0) {
    for (double& v : batch.values) v *= s;
  }
  return batch;
}

/// #{i : |x_i| >= x} / n.
inline double empirical_survival(const SampleBatch& batch, double x) {
  if (batch.values.empty()) throw DegenerateError("empirical_survival on an empty batch");
  std::size_t hits = 0;
  for (double v : batch.values) hits += std::abs(v) >= x ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(batch.values.size());
}

/// Survival at many thresholds from one sort of |x_i|.
class SurvivalTable {
 public:
  explicit SurvivalTable(const SampleBatch& batch) : abs_(batch.values.size()) {
    if (batch.values.empty()) throw DegenerateError("SurvivalTable on an empty batch");
    std::transform(batch.values.begin(), batch.values.end(), abs_.begin(), [](double v) { return std::abs(v); });
    std::sort(abs_.begin(), abs_.end());
  }
  double operator()(double x) const {
    const auto it = std::lower_bound(abs_.begin(), abs_.end(), x);
    return static_cast<double>(abs_.end() - it) / static_cast<double>(abs_.size());
  }
  double max_abs() const { return abs_.back(); }
  double min_abs() const { return abs_.front(); }
  const std::vector<double>& sorted_abs() const { return abs_; }

 private:
  std::vector<double> abs_;
};

}  // namespace gls
