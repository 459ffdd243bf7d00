#pragma once

// Generating functions psi: [1, inf) -> (0, inf) of Grand Lebesgue Spaces.

#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gls/errors.hpp"
#include "gls/rv_models.hpp"

namespace gls {

enum class Monotonicity { unknown, nondecreasing, strictly_increasing };

/// Default cap for evaluating psi; beyond it results are the caller's extrapolation.
inline constexpr double kDefaultPsiPMax = 1e4;

class GeneratingFunction {
 public:
  GeneratingFunction(std::function<double(double)> eval, Monotonicity mono, std::string description)
      : eval_(std::move(eval)), mono_(mono), description_(std::move(description)) {
    value_at_one_ = eval_(1.0);
  }

  double operator()(double p) const {
    if (!(p >= 1.0)) throw DomainError("psi is defined on [1, inf); got p < 1");
    return eval_(p);
  }

  double value_at_one() const noexcept { return value_at_one_; }
  bool normalized() const noexcept { return value_at_one_ == 1.0; }
  Monotonicity monotonicity() const noexcept { return mono_; }
  bool monotone() const noexcept { return mono_ != Monotonicity::unknown; }
  bool strictly_increasing() const noexcept { return mono_ == Monotonicity::strictly_increasing; }
  const std::string& description() const noexcept { return description_; }

 private:
  std::function<double(double)> eval_;
  Monotonicity mono_;
  double value_at_one_ = 1.0;
  std::string description_;
};

inline double psi_eval(const GeneratingFunction& psi, double p) { return psi(p); }

struct PowerSlowVaryParams {
  double r = 2.0;
  double delta = 0.0;
};

inline std::string power_slowvary_text(const PowerSlowVaryParams& prm, bool normalized = true) {
  std::ostringstream os;
  os << "power_slowvary(r=" << prm.r << ", delta=" << prm.delta;
  if (!normalized) os << ", normalized=false";
  os << ")";
  return os.str();
}

/// psi(p) = p^{1/r} ln^delta(2+p), divided by its value at 1 unless `normalize` is false.
inline GeneratingFunction make_power_slowvary(PowerSlowVaryParams prm, bool normalize = true) {
  if (!(prm.r > 0.0)) throw DomainError("power_slowvary requires r > 0");
  const double r = prm.r;
  const double delta = prm.delta;
  const double log_norm = normalize ? std::pow(std::log(3.0), delta) : 1.0;
  auto power = [r](double p) {
    if (r == 1.0) return p;
    if (r == 2.0) return std::sqrt(p);
    return std::pow(p, 1.0 / r);
  };
  std::function<double(double)> eval;
  if (delta == 0.0) {
    eval = power;
  } else {
    eval = [=](double p) { return power(p) * std::pow(std::log(2.0 + p), delta) / log_norm; };
  }
  return {std::move(eval), delta >= 0.0 ? Monotonicity::strictly_increasing : Monotonicity::unknown,
          power_slowvary_text(prm, normalize)};
}

inline GeneratingFunction sqrt_psi() { return make_power_slowvary({2.0, 0.0}); }

/// sqrt(p) (1 + cos^2(pi p)/2) / 1.5: normalized, continuous, not monotone.
inline GeneratingFunction oscillating_sqrt_psi() {
  return {[](double p) {
            const double c = std::cos(std::numbers::pi * p);
            return std::sqrt(p) * (1.0 + 0.5 * c * c) / 1.5;
          },
          Monotonicity::unknown, "oscillating_sqrt"};
}

/// psi_f(p) = |f|_p / |f|_1, the smallest normalized psi with ||f|| finite.
inline GeneratingFunction natural_psi(const RandomVariableModel& model) {
  const double l1 = lp_norm(model, 1.0);
  if (!(l1 > 0.0)) throw DegenerateError("natural_psi: |f|_1 = 0");
  return {[model, l1](double p) { return p == 1.0 ? 1.0 : lp_norm(model, p) / l1; }, Monotonicity::nondecreasing,
          "natural(" + model.label() + ")"};
}

struct PsiValidationReport {
  bool positive = true;
  bool monotone = true;
  bool strictly_monotone = true;
  double value_at_one = 1.0;
  double normalization_error = 0.0;
  bool normalized = true;
  double first_violation_p = 0.0;

  bool all_pass() const noexcept { return positive && monotone && normalized; }
};

/// Dense-grid check of positivity, monotonicity and psi(1) = 1 on [1, p_max].
inline PsiValidationReport psi_validate(const GeneratingFunction& psi, double p_max = kDefaultPsiPMax,
                                        std::size_t grid_points = 1000) {
  if (!(p_max > 1.0)) throw DomainError("psi_validate requires p_max > 1");
  if (grid_points < 2) throw DomainError("psi_validate requires at least two grid points");
  PsiValidationReport rep;
  rep.value_at_one = psi(1.0);
  rep.normalization_error = std::abs(rep.value_at_one - 1.0);
  rep.normalized = rep.value_at_one == 1.0;
  double prev = 0.0;
  for (std::size_t i = 0; i < grid_points; ++i) {
    const double p = 1.0 + (p_max - 1.0) * static_cast<double>(i) / static_cast<double>(grid_points - 1);
    const double v = psi(p);
    if (!(v > 0.0) || !std::isfinite(v)) {
      if (rep.positive && rep.monotone) rep.first_violation_p = p;
      rep.positive = false;
    }
    if (i > 0) {
      if (v < prev) {
        if (rep.positive && rep.monotone) rep.first_violation_p = p;
        rep.monotone = false;
      }
      if (!(v > prev)) rep.strictly_monotone = false;
    }
    prev = v;
  }
  return rep;
}

}  // namespace gls
