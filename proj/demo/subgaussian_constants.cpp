// Subgaussian walkthrough: norms of a standard Gaussian under psi(p) = sqrt(p),
// the constants that relate the full, restricted and discrete norms, and the
// resulting tail envelope next to the exact Gaussian tail.

#include <cmath>
#include <cstdio>
#include <limits>

#include "gls/norms.hpp"
#include "gls/pgrid.hpp"
#include "gls/tails.hpp"

int main() {
  using namespace gls;
  const auto g = RandomVariableModel::gaussian();
  const auto psi = sqrt_psi();
  const double inf = std::numeric_limits<double>::infinity();

  const auto full = gls_norm(g, psi);
  std::printf("full norm           %.12f  (sup at p = %.4f)\n", full.value, full.arg_p);

  const auto S = RestrictedSet::from_intervals({{1, 2}, {3, inf}});
  const auto rest = restricted_norm(g, psi, S);
  const auto Z = z_constant(S, psi);
  std::printf("restricted to %s  %.12f, Z = %.6f, so full <= %.12f\n", S.description().c_str(), rest.value,
              Z.value, Z.value * rest.value);

  for (unsigned D : {2u, 3u}) {
    const auto q = geometric_grid(D, 60);
    const auto disc = discrete_norm(g, psi, q);
    const auto W = w_constant(q, psi);
    std::printf("grid D=%u            %.12f, W = %.6f, so full <= %.12f\n", D, disc.value, W.value,
                W.value * disc.value);
  }

  const auto q0 = integer_grid(400);
  const TailEnvelope env(q0, psi, discrete_norm(g, psi, q0).value);
  std::printf("\n%8s %16s %16s\n", "x", "P(|X| > x)", "envelope");
  for (double x = 2.5; x <= 6.01; x += 0.5) {
    if (!env.in_domain(x)) continue;
    std::printf("%8.2f %16.6e %16.6e\n", x, std::erfc(x / std::sqrt(2.0)), env(x));
  }
  return 0;
}
