#pragma once

// Command implementations behind the `gls` executable. Each command writes CSV
// to `out`, diagnostics to `err`, and returns the process exit code:
//   0 success, 1 violation (or divergence under --strict), 2 usage error.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "gls/csv.hpp"
#include "gls/errors.hpp"
#include "gls/groupconv.hpp"
#include "gls/norms.hpp"
#include "gls/specs.hpp"
#include "gls/suites.hpp"
#include "gls/tails.hpp"

namespace gls::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitUsage = 2;
inline constexpr std::uint64_t kFallbackSeed = 42;

struct ExperimentConfig {
  std::optional<std::string> model;
  std::optional<std::string> psi;
  std::optional<std::string> set;
  std::optional<std::string> grid;
  std::optional<std::string> group;
  std::optional<double> p_max;
  std::optional<std::size_t> M;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> n;
  std::optional<std::string> out;
  std::optional<std::string> suite;
  std::optional<std::string> x;  // comma separated thresholds for `tail`
  bool strict = false;
  std::vector<std::string> files;  // positional inputs for `convolve`
};

/// key=value lines; '#' starts a comment. Keys match the long flag names.
inline ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file: " + path);
  ExperimentConfig c;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto t = specs::detail::trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ParseError("config line without '=': " + t);
    const auto key = specs::detail::trim(t.substr(0, eq));
    const auto val = specs::detail::trim(t.substr(eq + 1));
    if (key == "model") c.model = val;
    else if (key == "psi") c.psi = val;
    else if (key == "set") c.set = val;
    else if (key == "grid") c.grid = val;
    else if (key == "group") c.group = val;
    else if (key == "p-max" || key == "p_max") c.p_max = specs::detail::to_double(val, "config p-max");
    else if (key == "M") c.M = specs::detail::to_count(val, "config M");
    else if (key == "seed") c.seed = static_cast<std::uint64_t>(specs::detail::to_count(val, "config seed"));
    else if (key == "n") c.n = specs::detail::to_count(val, "config n");
    else if (key == "out") c.out = val;
    else if (key == "suite") c.suite = val;
    else if (key == "x") c.x = val;
    else if (key == "strict") c.strict = val == "true" || val == "1";
    else throw ParseError("unknown config key: " + key);
  }
  return c;
}

/// Fields set in `flags` win over `file`.
inline ExperimentConfig merge(const ExperimentConfig& file, const ExperimentConfig& flags) {
  ExperimentConfig c = file;
  auto take = [](auto& dst, const auto& src) {
    if (src) dst = src;
  };
  take(c.model, flags.model);
  take(c.psi, flags.psi);
  take(c.set, flags.set);
  take(c.grid, flags.grid);
  take(c.group, flags.group);
  take(c.p_max, flags.p_max);
  take(c.M, flags.M);
  take(c.seed, flags.seed);
  take(c.n, flags.n);
  take(c.out, flags.out);
  take(c.suite, flags.suite);
  take(c.x, flags.x);
  c.strict = file.strict || flags.strict;
  if (!flags.files.empty()) c.files = flags.files;
  return c;
}

/// --seed, else GLS_DEFAULT_SEED, else 42.
inline std::uint64_t resolve_seed(const ExperimentConfig& c) {
  if (c.seed) return *c.seed;
  if (const char* env = std::getenv("GLS_DEFAULT_SEED")) {
    return static_cast<std::uint64_t>(specs::detail::to_count(env, "GLS_DEFAULT_SEED"));
  }
  return kFallbackSeed;
}

namespace detail {

inline GridSequence config_grid(const ExperimentConfig& c, const std::string& fallback) {
  auto q = specs::parse_grid(c.grid.value_or(fallback));
  if (c.M) q = q.truncated(*c.M);
  return q;
}

inline std::vector<double> parse_x_list(const std::string& s) {
  std::vector<double> xs;
  for (const auto& piece : specs::detail::split(s, ',')) xs.push_back(specs::detail::to_double(piece, "--x"));
  return xs;
}

// Runs `body` with the configured output stream; parse and domain problems become exit 2.
template <class Body>
int with_output(const ExperimentConfig& c, std::ostream& out, std::ostream& err, Body&& body) {
  try {
    if (c.out) {
      std::ostringstream buffer;
      const int code = body(buffer);
      std::ofstream file(*c.out, std::ios::binary);
      if (!file) {
        err << "error: cannot write " << *c.out << "\n";
        return kExitUsage;
      }
      file << buffer.str();
      return code;
    }
    return body(out);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const TruncationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const SizeMismatchError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DegenerateError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UnsupportedBackendError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

inline csv::Row norm_row(const std::string& kind, const RandomVariableModel& model, const GeneratingFunction& psi,
                         const std::string& where, const NormResult& r) {
  return {kind, model.label(), psi.description(), where, csv::real(r.value), csv::real(r.arg_p),
          csv::real(r.truncation_p_max), r.diagnostics};
}

}  // namespace detail

/// Full norm (default or --set full), restricted norm (--set), discrete norm (--grid).
inline int cmd_norm(const ExperimentConfig& c, std::ostream& out, std::ostream& err) {
  return detail::with_output(c, out, err, [&](std::ostream& os) {
    if (!c.model) throw ParseError("norm needs --model");
    if (!c.psi) throw ParseError("norm needs --psi");
    const auto model = specs::parse_model(*c.model);
    const auto psi = specs::parse_psi(*c.psi, &model);
    std::optional<RestrictedSet> S;
    std::optional<GridSequence> q;
    if (c.set) S = specs::parse_set(*c.set);
    if (c.grid) q = detail::config_grid(c, *c.grid);
    const double p_max = c.p_max.value_or(default_p_max(model));

    csv::write_row(os, {"kind", "model", "psi", "set_or_grid", "value", "arg_p", "p_max", "diagnostics"});
    bool divergent = false;
    if (!q || S) {
      if (!S || S->is_full()) {
        const auto r = gls_norm(model, psi, p_max);
        divergent |= r.divergent;
        csv::write_row(os, detail::norm_row("full", model, psi, "full", r));
      } else {
        const auto r = restricted_norm(model, psi, *S, p_max);
        divergent |= r.divergent;
        csv::write_row(os, detail::norm_row("restricted", model, psi, S->description(), r));
      }
    }
    if (q) {
      const auto r = discrete_norm(model, psi, *q, c.p_max.value_or(std::numeric_limits<double>::infinity()));
      divergent |= r.divergent;
      csv::write_row(os, detail::norm_row("discrete", model, psi, "grid:" + q->description(), r));
    }
    return divergent && c.strict ? kExitViolation : kExitOk;
  });
}

inline constexpr std::size_t kDefaultTailSamples = 1'000'000;

inline int cmd_verify(const ExperimentConfig& c, std::ostream& out, std::ostream& err) {
  return detail::with_output(c, out, err, [&](std::ostream& os) {
    const std::string suite = c.suite.value_or("all");
    const auto seed = resolve_seed(c);
    const auto n = c.n.value_or(kDefaultTailSamples);
    std::vector<suites::SuiteResult> results;
    auto run = [&](const std::string& name) {
      if (name == "sandwich") results.push_back(suites::sandwich_suite(seed));
      else if (name == "tails") results.push_back(suites::tails_suite(seed, n));
      else if (name == "young") results.push_back(suites::young_suite(seed));
      else if (name == "algebra") results.push_back(suites::algebra_suite(seed));
      else throw ParseError("unknown suite: " + name);
    };
    if (suite == "all") {
      for (const char* name : {"sandwich", "tails", "young", "algebra"}) run(name);
    } else {
      run(suite);
    }
    std::size_t violations = 0;
    for (const auto& r : results) {
      suites::write_suite(os, r, suite == "all");
      violations += r.violations;
    }
    if (violations) err << violations << " violation(s)\n";
    return violations ? kExitViolation : kExitOk;
  });
}

/// Per-x envelope rows, then a K_hat row: K_hat,<K>,<K/norm>,<points checked>,<violations>.
inline int cmd_tail(const ExperimentConfig& c, std::ostream& out, std::ostream& err) {
  return detail::with_output(c, out, err, [&](std::ostream& os) {
    const auto model = specs::parse_model(c.model.value_or("gaussian"));
    const auto psi = specs::parse_psi(c.psi.value_or("natural"), &model);
    const auto q = detail::config_grid(c, "integers:M=50");
    const auto n = c.n.value_or(kDefaultTailSamples);
    const auto seed = resolve_seed(c);
    const auto xs = detail::parse_x_list(c.x.value_or("2.5,3,3.5,4"));
    const auto rep = tail_check(model, psi, q, n, seed, xs);

    csv::write_row(os, suites::tail_header());
    for (const auto& r : rep.rows) csv::write_row(os, suites::tail_row(r));

    const auto batch = sample(model, n, seed);
    const auto grid = rep.norm_value > 0.0 ? default_K_grid(rep.norm_value) : default_K_grid(batch);
    try {
      const auto est = membership_K_estimate(batch, q, psi, grid);
      csv::write_row(os, {"K_hat", csv::real(est.K_hat),
                          csv::real(rep.norm_value > 0.0 ? est.K_hat / rep.norm_value : 0.0),
                          std::to_string(est.points_checked), std::to_string(est.violations)});
    } catch (const NoFeasibleKError& e) {
      csv::write_row(os, {"K_hat", "inf", "inf", "0", "infeasible"});
      err << "warning: " << e.what() << "\n";
    }
    if (!rep.all_pass()) err << rep.violations() << " envelope violation(s)\n";
    return rep.all_pass() ? kExitOk : kExitViolation;
  });
}

/// Element rows (index, f, g, f*g), then L^1/L^2/L^inf rows and, with --psi, GLS norm rows.
inline int cmd_convolve(const ExperimentConfig& c, std::ostream& out, std::ostream& err) {
  return detail::with_output(c, out, err, [&](std::ostream& os) {
    if (!c.group) throw ParseError("convolve needs --group");
    if (c.files.size() != 2) throw ParseError("convolve needs two function files");
    const auto G = specs::parse_group(*c.group);
    const auto f = load_group_function(c.files[0]);
    const auto g = load_group_function(c.files[1]);
    const auto fg = convolve(G, f, g);
    csv::write_row(os, {"element", "f", "g", "f*g"});
    for (std::size_t i = 0; i < G.order(); ++i) {
      csv::write_row(os, {std::to_string(i), csv::real(f.values[i]), csv::real(g.values[i]), csv::real(fg.values[i])});
    }
    for (double p : {1.0, 2.0, kInfinityExponent}) {
      const std::string name = std::isinf(p) ? "Linf" : (p == 1.0 ? "L1" : "L2");
      csv::write_row(os, {name, csv::real(group_lp_norm(G, f, p)), csv::real(group_lp_norm(G, g, p)),
                          csv::real(group_lp_norm(G, fg, p))});
    }
    if (c.psi) {
      const auto psi = specs::parse_psi(*c.psi);
      const auto S = specs::parse_set(c.set.value_or("full"));
      const auto rep = algebra_check(G, f, g, psi, S, c.p_max.value_or(kDefaultNormPMax));
      csv::write_row(os, {"gls", csv::real(rep.norm_f), csv::real(rep.norm_g), csv::real(rep.norm_fg)});
      csv::write_row(os, {"bound", csv::real(rep.constant), "", csv::real(rep.bound)});
      return rep.pass ? kExitOk : kExitViolation;
    }
    return kExitOk;
  });
}

}  // namespace gls::cli
