#pragma once

// Randomized verification suites. Every suite is a pure function of its seed
// and emits CSV rows in a fixed order.

#include <cmath>
#include <cstdint>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gls/csv.hpp"
#include "gls/groupconv.hpp"
#include "gls/norms.hpp"
#include "gls/pgrid.hpp"
#include "gls/psi.hpp"
#include "gls/rv_models.hpp"
#include "gls/specs.hpp"
#include "gls/tails.hpp"

namespace gls::suites {

struct SuiteResult {
  std::string name;
  csv::Row header;
  std::vector<csv::Row> rows;
  std::size_t violations = 0;
  std::size_t cases = 0;
};

inline void write_suite(std::ostream& os, const SuiteResult& s, bool with_suite_column) {
  auto emit = [&](csv::Row row) {
    if (with_suite_column) row.insert(row.begin(), s.name);
    csv::write_row(os, row);
  };
  csv::Row head = s.header;
  if (with_suite_column) head.insert(head.begin(), "suite");
  csv::write_row(os, head);
  for (const auto& r : s.rows) emit(r);
}

/// Deterministic draws for case generation.
class CaseRng {
 public:
  explicit CaseRng(std::uint64_t seed) : eng_(gls::detail::chunk_engine(seed, 0xCA5E)) {}
  double uniform(double a, double b) { return a + (b - a) * gls::detail::unit_uniform(eng_); }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(gls::detail::bounded_index(eng_, n)); }
  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[index(v.size())];
  }

 private:
  std::mt19937_64 eng_;
};

inline std::string case_id(const std::string& prefix, std::size_t i) {
  std::ostringstream os;
  os << prefix << "-" << i;
  return os.str();
}

/// Closed-form models, optionally rescaled.
inline RandomVariableModel random_closed_form_model(CaseRng& rng) {
  RandomVariableModel base = RandomVariableModel::gaussian();
  switch (rng.index(5)) {
    case 0: base = RandomVariableModel::gaussian(); break;
    case 1: base = RandomVariableModel::uniform01(); break;
    case 2: base = RandomVariableModel::exponential(); break;
    case 3: base = RandomVariableModel::rademacher(); break;
    default: base = RandomVariableModel::constant(rng.uniform(0.5, 3.0)); break;
  }
  if (rng.index(3) == 0) return base.scaled(rng.uniform(0.2, 5.0));
  return base;
}

/// Normalized, strictly increasing power/log family.
inline GeneratingFunction random_normalized_psi(CaseRng& rng) {
  return make_power_slowvary({rng.uniform(0.5, 4.0), rng.uniform(0.0, 2.0)});
}

/// Restricted sets with finite Z (every fixture is unbounded above).
inline std::vector<std::string> restricted_set_fixtures() {
  return {"full",
          "intervals:1-2,3-inf",
          "intervals:1-1.5,2-4,6-inf",
          "intervals:1,2,5,8-inf",
          "intervals:1,1.25-1.75,2.5-inf",
          "intervals:1-3,10-12,40-inf",
          "grid:geometric:D=2:M=60",
          "grid:geometric:D=3:M=40",
          "grid:integers:M=300"};
}

inline std::vector<std::string> discrete_grid_fixtures() {
  return {"integers:M=100", "integers:M=250", "geometric:D=2:M=60", "geometric:D=3:M=40", "geometric:D=4:M=30"};
}

inline csv::Row sandwich_row(const std::string& id, const SandwichReport& r) {
  return {id, r.model, r.psi, r.set_or_grid, csv::real(r.lower), csv::real(r.full), csv::real(r.constant),
          csv::real(r.bound), r.applicable ? csv::boolean(r.pass()) : "not-applicable"};
}

inline const csv::Row& sandwich_header() {
  static const csv::Row h{"case_id", "model", "psi", "set_or_grid", "restricted_or_discrete",
                          "full",    "constant", "bound", "pass"};
  return h;
}

struct SandwichCases {
  std::vector<SandwichReport> restricted;
  std::vector<SandwichReport> discrete;
};

/// Restricted cases (finite Z) and discrete cases (W, or W_hat for the oscillating psi).
inline SandwichCases sandwich_cases(std::uint64_t seed, std::size_t n_restricted = 50, std::size_t n_discrete = 50) {
  CaseRng rng(seed);
  SandwichCases out;
  const auto sets = restricted_set_fixtures();
  for (std::size_t i = 0; i < n_restricted; ++i) {
    const auto model = random_closed_form_model(rng);
    const auto psi = random_normalized_psi(rng);
    const auto S = specs::parse_set(rng.pick(sets));
    const double p_max = rng.uniform(20.0, 200.0);
    auto rep = sandwich_check_restricted(model, psi, S, p_max);
    rep.case_id = case_id("restricted", i);
    out.restricted.push_back(std::move(rep));
  }
  const auto grids = discrete_grid_fixtures();
  for (std::size_t i = 0; i < n_discrete; ++i) {
    const auto model = random_closed_form_model(rng);
    const bool oscillating = i % 5 == 4;
    const auto psi = oscillating ? oscillating_sqrt_psi() : random_normalized_psi(rng);
    const auto q = oscillating ? integer_grid(100) : specs::parse_grid(rng.pick(grids));
    const double p_max = rng.uniform(20.0, 200.0);
    auto rep = sandwich_check_discrete(model, psi, q, p_max, oscillating);
    rep.case_id = case_id(oscillating ? "discrete_w_hat" : "discrete", i);
    out.discrete.push_back(std::move(rep));
  }
  return out;
}

inline SuiteResult sandwich_suite(std::uint64_t seed) {
  SuiteResult s{"sandwich", sandwich_header(), {}, 0, 0};
  const auto cases = sandwich_cases(seed);
  for (const auto* list : {&cases.restricted, &cases.discrete}) {
    for (const auto& r : *list) {
      s.rows.push_back(sandwich_row(r.case_id, r));
      s.violations += r.pass() ? 0 : 1;
      ++s.cases;
    }
  }
  return s;
}

struct TailCase {
  std::string id;
  RandomVariableModel model;
  GeneratingFunction psi;
  GridSequence grid;
  std::vector<double> x;
};

inline std::vector<TailCase> tail_cases() {
  const auto g = RandomVariableModel::gaussian();
  return {
      {"gaussian-natural", g, natural_psi(g), integer_grid(50), {2.5, 3.0, 3.5, 4.0}},
      {"gaussian-sqrt", g, sqrt_psi(), integer_grid(50), {2.0, 2.5, 3.0, 3.5, 4.0}},
      {"uniform01-sqrt", RandomVariableModel::uniform01(), sqrt_psi(), integer_grid(50), {1.0, 1.5, 2.0, 3.0}},
      {"constant2-sqrt", RandomVariableModel::constant(2.0), sqrt_psi(), integer_grid(50), {2.0, 6.0, 8.0}},
      {"exponential-linear", RandomVariableModel::exponential(), make_power_slowvary({1.0, 0.0}), integer_grid(50),
       {2.0, 3.0, 4.0, 6.0, 8.0}},
  };
}

inline const csv::Row& tail_header() {
  static const csv::Row h{"x", "empirical_survival", "envelope", "slack", "pass"};
  return h;
}

inline csv::Row tail_row(const TailRow& r) {
  if (!r.in_domain) return {csv::real(r.x), csv::real(r.empirical), "", "", "out-of-domain"};
  return {csv::real(r.x), csv::real(r.empirical), csv::real(r.envelope), csv::real(r.slack), csv::boolean(r.pass)};
}

inline SuiteResult tails_suite(std::uint64_t seed, std::size_t n) {
  SuiteResult s{"tails", {}, {}, 0, 0};
  s.header = tail_header();
  s.header.insert(s.header.begin(), "case_id");
  std::uint64_t k = 0;
  for (const auto& c : tail_cases()) {
    const auto rep = tail_check(c.model, c.psi, c.grid, n, seed + k++, c.x);
    for (const auto& r : rep.rows) {
      auto row = tail_row(r);
      row.insert(row.begin(), c.id);
      s.rows.push_back(std::move(row));
    }
    s.violations += rep.violations();
    ++s.cases;
  }
  return s;
}

inline GroupFunction random_group_function(CaseRng& rng, std::size_t n) {
  GroupFunction f{std::vector<double>(n)};
  for (auto& v : f.values) v = rng.uniform(-1.0, 1.0);
  return f;
}

/// Groups of order <= 24: cyclic(2..16), dihedral(3..6), symmetric(3..4).
inline FiniteGroup random_small_group(CaseRng& rng) {
  switch (rng.index(3)) {
    case 0: return FiniteGroup::cyclic(2 + rng.index(15));
    case 1: return FiniteGroup::dihedral(3 + rng.index(4));
    default: return FiniteGroup::symmetric(3 + rng.index(2));
  }
}

/// Admissible triple; about a quarter of the draws sit on the r = inf boundary.
inline YoungTriple random_young_triple(CaseRng& rng) {
  const double a = rng.index(8) == 0 ? (rng.index(2) ? 0.0 : 1.0) : rng.uniform(0.0, 1.0);  // 1/p
  double b = 0.0;                                                                        // 1/q
  if (rng.index(4) == 0) {
    b = 1.0 - a;
  } else {
    b = rng.uniform(1.0 - a, 1.0);
  }
  auto inv = [](double t) { return t == 0.0 ? kInfinityExponent : 1.0 / t; };
  YoungTriple t{inv(a), inv(b), 1.0};
  const double s = a + b - 1.0;
  t.r = s <= 0.0 ? kInfinityExponent : 1.0 / s;
  return t;
}

inline SuiteResult young_suite(std::uint64_t seed, std::size_t cases = 200) {
  SuiteResult s{"young", {"case_id", "group", "p", "q", "r", "lhs", "rhs", "pass"}, {}, 0, 0};
  CaseRng rng(seed);
  for (std::size_t i = 0; i < cases; ++i) {
    const auto G = random_small_group(rng);
    const auto f = random_group_function(rng, G.order());
    const auto g = random_group_function(rng, G.order());
    const auto t = random_young_triple(rng);
    const auto rep = young_check(G, f, g, t);
    s.rows.push_back({case_id("young", i), G.label(), csv::real(t.p), csv::real(t.q), csv::real(t.r),
                      csv::real(rep.lhs), csv::real(rep.rhs), csv::boolean(rep.pass)});
    s.violations += rep.pass ? 0 : 1;
    ++s.cases;
  }
  return s;
}

inline std::vector<std::string> algebra_set_fixtures() {
  return {"full", "grid:integers:M=100", "intervals:1-2,3-inf", "grid:geometric:D=2:M=60", "intervals:1,4-inf"};
}

struct AlgebraCase {
  std::string id;
  std::string group;
  std::string psi;
  std::string set;
  AlgebraReport report;
};

/// n_normalized cases with psi(1) = 1 (every other one rescaled to unit norms),
/// then n_unnormalized cases with psi(1) != 1.
inline std::vector<AlgebraCase> algebra_cases(std::uint64_t seed, std::size_t n_normalized = 100,
                                              std::size_t n_unnormalized = 50) {
  CaseRng rng(seed);
  std::vector<AlgebraCase> out;
  const auto sets = algebra_set_fixtures();
  for (std::size_t i = 0; i < n_normalized + n_unnormalized; ++i) {
    const bool normalized = i < n_normalized;
    const auto G = random_small_group(rng);
    auto f = random_group_function(rng, G.order());
    auto g = random_group_function(rng, G.order());
    const auto psi = normalized ? random_normalized_psi(rng)
                                : make_power_slowvary({rng.uniform(0.5, 4.0), rng.uniform(0.5, 2.0)}, false);
    const auto& set_spec = rng.pick(sets);
    const auto S = specs::parse_set(set_spec);
    if (normalized && i % 2 == 1) {
      const double nf = restricted_norm(as_model(G, f, "f"), psi, S).value;
      const double ng = restricted_norm(as_model(G, g, "g"), psi, S).value;
      for (auto& v : f.values) v /= nf;
      for (auto& v : g.values) v /= ng;
    }
    out.push_back({case_id(normalized ? "algebra" : "algebra_unnormalized", i), G.label(), psi.description(),
                   set_spec, algebra_check(G, f, g, psi, S)});
  }
  return out;
}

inline SuiteResult algebra_suite(std::uint64_t seed) {
  SuiteResult s{"algebra",
                {"case_id", "group", "psi", "set", "norm_fg", "norm_f", "norm_g", "constant", "bound", "pass"},
                {},
                0,
                0};
  for (const auto& c : algebra_cases(seed)) {
    const auto& r = c.report;
    s.rows.push_back({c.id, c.group, c.psi, c.set, csv::real(r.norm_fg), csv::real(r.norm_f), csv::real(r.norm_g),
                      csv::real(r.constant), csv::real(r.bound), csv::boolean(r.pass)});
    s.violations += r.pass ? 0 : 1;
    ++s.cases;
  }
  return s;
}

}  // namespace gls::suites
