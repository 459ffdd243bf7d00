#pragma once

// Textual specifiers used by the command line and config files:
//   models  gaussian | uniform01 | exponential | rademacher | constant:<c> | empirical:<path>
//   psi     power_slowvary(r=<float>, delta=<float>[, normalized=false]) | natural | oscillating_sqrt
//   grids   [grid:]geometric:D=<int>[:M=<int>] | [grid:]integers[:M=<int>]
//   sets    full | intervals:1-2,3-inf[,5] | grid:<grid spec>
//   groups  cyclic:<n> | dihedral:<n> | symmetric:<n> | product:<spec>x<spec>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gls/errors.hpp"
#include "gls/groupconv.hpp"
#include "gls/pgrid.hpp"
#include "gls/psi.hpp"
#include "gls/rv_models.hpp"

namespace gls::specs {

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline bool starts_with(std::string_view s, std::string_view prefix) { return s.substr(0, prefix.size()) == prefix; }

inline double to_double(const std::string& s, std::string_view what) {
  if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ParseError(std::string("bad number in ") + std::string(what) + ": '" + s + "'");
  }
  if (used != s.size()) throw ParseError(std::string("bad number in ") + std::string(what) + ": '" + s + "'");
  return v;
}

inline std::size_t to_count(const std::string& s, std::string_view what) {
  const double v = to_double(s, what);
  if (!(v >= 0.0) || v != std::floor(v) || v > 1e15) throw ParseError(std::string("expected a count in ") + std::string(what));
  return static_cast<std::size_t>(v);
}

// "a=1:b=2" style options after a prefix.
inline std::map<std::string, std::string> key_values(const std::vector<std::string>& parts, std::string_view what) {
  std::map<std::string, std::string> kv;
  for (const auto& p : parts) {
    if (p.empty()) continue;
    const auto eq = p.find('=');
    if (eq == std::string::npos) throw ParseError(std::string("expected key=value in ") + std::string(what) + ": " + p);
    kv[trim(p.substr(0, eq))] = trim(p.substr(eq + 1));
  }
  return kv;
}

}  // namespace detail

inline RandomVariableModel parse_model(const std::string& spec_in) {
  const auto spec = detail::trim(spec_in);
  if (spec == "gaussian") return RandomVariableModel::gaussian();
  if (spec == "uniform01") return RandomVariableModel::uniform01();
  if (spec == "exponential") return RandomVariableModel::exponential();
  if (spec == "rademacher") return RandomVariableModel::rademacher();
  if (detail::starts_with(spec, "constant:")) {
    return RandomVariableModel::constant(detail::to_double(spec.substr(9), "constant model"));
  }
  if (detail::starts_with(spec, "pareto:")) {
    // density a x^{-a-1} on [1, inf): moments of order p >= a diverge
    const double a = detail::to_double(spec.substr(7), "pareto index");
    if (!(a > 0.0)) throw ParseError("pareto index must be positive");
    return RandomVariableModel::density([a](double x) { return a * std::pow(x, -a - 1.0); }, 1.0,
                                        std::numeric_limits<double>::infinity(), spec);
  }
  if (detail::starts_with(spec, "empirical:")) return RandomVariableModel::empirical_from_file(spec.substr(10));
  throw ParseError("unknown model: " + spec);
}

/// `natural` needs the model it is derived from.
inline GeneratingFunction parse_psi(const std::string& spec_in, const RandomVariableModel* model = nullptr) {
  const auto spec = detail::trim(spec_in);
  if (spec == "natural") {
    if (!model) throw ParseError("psi 'natural' needs a model");
    return natural_psi(*model);
  }
  if (spec == "oscillating_sqrt") return oscillating_sqrt_psi();
  if (spec == "sqrt") return sqrt_psi();
  const std::string head = "power_slowvary(";
  if (detail::starts_with(spec, head) && spec.back() == ')') {
    const auto body = spec.substr(head.size(), spec.size() - head.size() - 1);
    const auto kv = detail::key_values(detail::split(body, ','), "power_slowvary");
    PowerSlowVaryParams prm;
    bool normalize = true;
    for (const auto& [k, v] : kv) {
      if (k == "r") {
        prm.r = detail::to_double(v, "power_slowvary r");
      } else if (k == "delta") {
        prm.delta = detail::to_double(v, "power_slowvary delta");
      } else if (k == "normalized") {
        if (v != "true" && v != "false") throw ParseError("normalized must be true or false");
        normalize = v == "true";
      } else {
        throw ParseError("unknown power_slowvary key: " + k);
      }
    }
    if (!kv.count("r")) throw ParseError("power_slowvary needs r");
    try {
      return make_power_slowvary(prm, normalize);
    } catch (const DomainError& e) {
      throw ParseError(e.what());
    }
  }
  throw ParseError("unknown psi: " + spec);
}

inline GridSequence parse_grid(const std::string& spec_in) {
  auto spec = detail::trim(spec_in);
  if (detail::starts_with(spec, "grid:")) spec = spec.substr(5);
  auto parts = detail::split(spec, ':');
  const auto kind = parts.front();
  parts.erase(parts.begin());
  const auto kv = detail::key_values(parts, "grid");
  try {
    if (kind == "geometric") {
      if (!kv.count("D")) throw ParseError("geometric grid needs D");
      const auto M = kv.count("M") ? detail::to_count(kv.at("M"), "grid M") : kDefaultGridM;
      return geometric_grid(detail::to_count(kv.at("D"), "grid D"), M);
    }
    if (kind == "integers") {
      return integer_grid(kv.count("M") ? detail::to_count(kv.at("M"), "grid M") : 100);
    }
  } catch (const DomainError& e) {
    throw ParseError(e.what());
  }
  throw ParseError("unknown grid: " + spec_in);
}

inline RestrictedSet parse_set(const std::string& spec_in) {
  const auto spec = detail::trim(spec_in);
  if (spec == "full") return RestrictedSet::full();
  if (detail::starts_with(spec, "grid:")) return RestrictedSet::from_grid(parse_grid(spec));
  if (detail::starts_with(spec, "intervals:")) {
    std::vector<std::pair<double, double>> intervals;
    std::vector<double> points;
    for (const auto& piece : detail::split(spec.substr(10), ',')) {
      const auto dash = piece.find('-', 1);
      if (dash == std::string::npos) {
        points.push_back(detail::to_double(piece, "set point"));
      } else {
        intervals.emplace_back(detail::to_double(piece.substr(0, dash), "interval"),
                               detail::to_double(piece.substr(dash + 1), "interval"));
      }
    }
    try {
      return RestrictedSet::from_intervals(std::move(intervals), std::move(points));
    } catch (const DomainError& e) {
      throw ParseError(e.what());
    }
  }
  throw ParseError("unknown set: " + spec);
}

inline FiniteGroup parse_group(const std::string& spec_in) {
  const auto spec = detail::trim(spec_in);
  try {
    if (detail::starts_with(spec, "product:")) {
      const auto body = spec.substr(8);
      const auto x = body.find('x');
      if (x == std::string::npos) throw ParseError("product group needs <spec>x<spec>");
      return FiniteGroup::product(parse_group(body.substr(0, x)), parse_group(body.substr(x + 1)));
    }
    const auto colon = spec.find(':');
    if (colon == std::string::npos) throw ParseError("unknown group: " + spec);
    const auto kind = spec.substr(0, colon);
    const auto n = detail::to_count(spec.substr(colon + 1), "group order");
    if (kind == "cyclic") return FiniteGroup::cyclic(n);
    if (kind == "dihedral") return FiniteGroup::dihedral(n);
    if (kind == "symmetric") return FiniteGroup::symmetric(n);
  } catch (const DomainError& e) {
    throw ParseError(e.what());
  }
  throw ParseError("unknown group: " + spec);
}

}  // namespace gls::specs
