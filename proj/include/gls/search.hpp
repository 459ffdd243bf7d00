#pragma once

#include <cmath>
#include <utility>

namespace gls::detail {

inline constexpr double kInvPhi = 0.6180339887498949;  // (sqrt(5) - 1) / 2

/// Golden-section search for a maximum of f on [a, b]; returns (argmax, max).
/// Assumes f is unimodal on the bracket; the caller brackets each local max.
template <class F>
std::pair<double, double> golden_section_max(F&& f, double a, double b, double tol, int max_iter = 200) {
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int i = 0; i < max_iter && (b - a) > tol; ++i) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  return fc >= fd ? std::pair{c, fc} : std::pair{d, fd};
}

template <class F>
std::pair<double, double> golden_section_min(F&& f, double a, double b, double tol, int max_iter = 200) {
  auto [x, v] = golden_section_max([&](double t) { return -f(t); }, a, b, tol, max_iter);
  return {x, -v};
}

}  // namespace gls::detail
