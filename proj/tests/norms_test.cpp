#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "gls/norms.hpp"

namespace gls {
namespace {

const double kInf = std::numeric_limits<double>::infinity();

// Dense scan of |f|_p / psi(p) on [a, b]; lp_norm itself is checked elsewhere.
double scan_sup(const RandomVariableModel& m, const GeneratingFunction& psi, double a, double b, double step) {
  double best = 0.0;
  for (double p = a; p <= b; p += step) best = std::max(best, lp_norm(m, p) / psi(p));
  return std::max(best, lp_norm(m, b) / psi(b));
}

TEST(GlsNorm, MaximumAtOneExamples) {
  const auto sq = sqrt_psi();
  const auto u = gls_norm(RandomVariableModel::uniform01(), sq);
  EXPECT_NEAR(u.value, 0.5, 1e-15);
  EXPECT_EQ(u.arg_p, 1.0);
  const auto e = gls_norm(RandomVariableModel::exponential(), make_power_slowvary({1.0, 0.0}));
  EXPECT_NEAR(e.value, 1.0, 1e-15);
  EXPECT_EQ(e.arg_p, 1.0);
  const auto g = gls_norm(RandomVariableModel::gaussian(), sq);
  EXPECT_NEAR(g.value, 0.79788456080286535588, 1e-15);
  EXPECT_FALSE(g.divergent);
}

TEST(GlsNorm, InteriorMaximum) {
  // sup_p (p+1)^{-1/p} / p^{0.1}; mpmath: 0.63659681033450137209 at p = 21.638059257521381346
  const auto r = gls_norm(RandomVariableModel::uniform01(), make_power_slowvary({10.0, 0.0}));
  EXPECT_NEAR(r.value, 0.63659681033450137209, 1e-12);
  EXPECT_NEAR(r.arg_p, 21.638059257521381346, 1e-3);
}

TEST(GlsNorm, NaturalPsiGivesL1Norm) {
  for (const auto& m : {RandomVariableModel::gaussian(), RandomVariableModel::exponential(),
                        RandomVariableModel::uniform01()}) {
    EXPECT_NEAR(gls_norm(m, natural_psi(m)).value, lp_norm(m, 1.0), 1e-12) << m.label();
  }
}

TEST(GlsNorm, AgreesWithDenseScan) {
  const std::vector<GeneratingFunction> psis = {sqrt_psi(), make_power_slowvary({3.0, 1.0}),
                                                make_power_slowvary({1.5, 0.5}), oscillating_sqrt_psi()};
  for (const auto& m : {RandomVariableModel::gaussian(), RandomVariableModel::exponential().scaled(0.3),
                        RandomVariableModel::uniform01()}) {
    for (const auto& psi : psis) {
      const double got = gls_norm(m, psi, 40.0).value;
      const double ref = scan_sup(m, psi, 1.0, 40.0, 1e-3);
      EXPECT_GE(got, ref * (1.0 - 1e-12)) << m.label() << " " << psi.description();
      EXPECT_NEAR(got, ref, 1e-6 * ref) << m.label() << " " << psi.description();
    }
  }
}

TEST(GlsNorm, AbsoluteHomogeneity) {
  const auto psi = make_power_slowvary({2.0, 1.0});
  for (const auto& m : {RandomVariableModel::gaussian(), RandomVariableModel::exponential()}) {
    const double base = gls_norm(m, psi).value;
    for (double a : {-3.0, 0.25, 7.0}) EXPECT_NEAR(gls_norm(m.scaled(a), psi).value, std::abs(a) * base, 1e-12 * base);
  }
}

TEST(GlsNorm, DivergenceReturnsInfinity) {
  const auto pareto = RandomVariableModel::density([](double x) { return 3.0 / std::pow(x, 4.0); }, 1.0, kInf, "p3");
  const auto r = gls_norm(pareto, sqrt_psi(), 10.0);
  EXPECT_TRUE(r.divergent);
  EXPECT_TRUE(std::isinf(r.value));
  EXPECT_LE(r.arg_p, 3.5);
  EXPECT_FALSE(r.diagnostics.empty());
}

TEST(GlsNorm, BadPMax) { EXPECT_THROW(gls_norm(RandomVariableModel::gaussian(), sqrt_psi(), 1.0), DomainError); }

TEST(GlsNorm, EmpiricalDefaultPMax) {
  const auto emp = RandomVariableModel::empirical(sample(RandomVariableModel::gaussian(), 1000, 1).values, "mc");
  EXPECT_NEAR(default_p_max(emp), 5.0 * std::log(1000.0), 1e-12);
  EXPECT_EQ(default_p_max(RandomVariableModel::gaussian()), kDefaultNormPMax);
  const auto r = gls_norm(emp, sqrt_psi(), 100.0);
  EXPECT_NE(r.diagnostics.find("5 ln n"), std::string::npos) << r.diagnostics;
}

TEST(RestrictedNorm, SingletonIsL1) {
  const auto S = RestrictedSet::from_points({1.0});
  for (const auto& m : {RandomVariableModel::gaussian(), RandomVariableModel::uniform01()}) {
    EXPECT_EQ(restricted_norm(m, sqrt_psi(), S).value, lp_norm(m, 1.0));
  }
}

TEST(RestrictedNorm, FullSetMatchesGlsNorm) {
  const auto psi = make_power_slowvary({10.0, 0.0});
  const auto m = RandomVariableModel::uniform01();
  EXPECT_NEAR(restricted_norm(m, psi, RestrictedSet::full()).value, gls_norm(m, psi).value, 1e-14);
}

TEST(RestrictedNorm, SkipsInteriorMaximumOutsideSet) {
  // the unrestricted argmax ~21.6 lies in the gap (10, 40)
  const auto psi = make_power_slowvary({10.0, 0.0});
  const auto m = RandomVariableModel::uniform01();
  const auto S = RestrictedSet::from_intervals({{1, 10}, {40, kInf}});
  const auto r = restricted_norm(m, psi, S);
  const double ref = std::max(scan_sup(m, psi, 1.0, 10.0, 1e-3), scan_sup(m, psi, 40.0, 200.0, 1e-2));
  EXPECT_NEAR(r.value, ref, 1e-9);
  EXPECT_TRUE(r.arg_p <= 10.0 || r.arg_p >= 40.0);
  EXPECT_LT(r.value, gls_norm(m, psi).value);
}

TEST(DiscreteNorm, GaussianIntegerGrid) {
  // mpmath: max at m = 1 equals |f|_1; ratio at m = 50 is 0.61072905800178369285
  const auto q = integer_grid(50);
  const auto g = RandomVariableModel::gaussian();
  const auto r = discrete_norm(g, sqrt_psi(), q);
  EXPECT_NEAR(r.value, 0.79788456080286535588, 1e-15);
  EXPECT_EQ(r.arg_p, 1.0);
  EXPECT_NEAR(lp_norm(g, 50.0) / std::sqrt(50.0), 0.61072905800178369285, 1e-13);
}

TEST(DiscreteNorm, EnumeratesExactly) {
  const auto q = geometric_grid(2, 8);
  const auto m = RandomVariableModel::exponential();
  const auto psi = make_power_slowvary({1.0, 0.5});
  double ref = 0.0;
  for (double p : q.points()) ref = std::max(ref, lp_norm(m, p) / psi(p));
  EXPECT_EQ(discrete_norm(m, psi, q).value, ref);
}

TEST(DiscreteNorm, DivergentMoment) {
  const auto pareto = RandomVariableModel::density([](double x) { return 3.0 / std::pow(x, 4.0); }, 1.0, kInf, "p3");
  const auto r = discrete_norm(pareto, sqrt_psi(), integer_grid(10));
  EXPECT_TRUE(r.divergent);
  EXPECT_TRUE(std::isinf(r.value));
}

TEST(Sandwich, ExponentialTwoIntervals) {
  const auto rep = sandwich_check_restricted(RandomVariableModel::exponential(), make_power_slowvary({1.0, 0.0}),
                                             RestrictedSet::from_intervals({{1, 2}, {3, kInf}}));
  EXPECT_EQ(rep.constant, 1.5);
  EXPECT_TRUE(rep.applicable);
  EXPECT_TRUE(rep.pass());
  EXPECT_LE(rep.lower, rep.full);
  EXPECT_LE(rep.full, rep.bound);
}

TEST(Sandwich, BoundedSetNotApplicable) {
  const auto rep = sandwich_check_restricted(RandomVariableModel::gaussian(), sqrt_psi(),
                                             RestrictedSet::from_intervals({{1, 3}}));
  EXPECT_FALSE(rep.applicable);
  EXPECT_TRUE(std::isinf(rep.constant));
  EXPECT_TRUE(rep.pass());
}

TEST(Sandwich, DiscreteGridsHold) {
  for (const auto& q : {integer_grid(100), geometric_grid(2, 60), geometric_grid(3, 40)}) {
    for (const auto& m : {RandomVariableModel::gaussian(), RandomVariableModel::exponential().scaled(2.0),
                          RandomVariableModel::uniform01_density()}) {
      const auto rep = sandwich_check_discrete(m, make_power_slowvary({2.0, 1.0}), q, 150.0);
      EXPECT_TRUE(rep.pass()) << m.label() << " " << q.description() << " " << rep.full << " " << rep.bound;
      EXPECT_GE(rep.constant, 1.0);
    }
  }
}

TEST(Sandwich, DiscreteWHatForOscillatingPsi) {
  const auto psi = oscillating_sqrt_psi();
  EXPECT_THROW(sandwich_check_discrete(RandomVariableModel::gaussian(), psi, integer_grid(60)), DomainError);
  const auto rep = sandwich_check_discrete(RandomVariableModel::gaussian(), psi, integer_grid(60), 50.0, true);
  EXPECT_EQ(rep.kind, "discrete_w_hat");
  EXPECT_TRUE(rep.pass()) << rep.full << " " << rep.bound;
}

TEST(SandwichProperty, RandomRestrictedCases) {
  std::mt19937_64 eng(77);
  std::uniform_real_distribution<double> r(0.5, 4.0), d(0.0, 2.0), s(0.2, 5.0), pm(20.0, 200.0);
  const std::vector<RestrictedSet> sets = {RestrictedSet::from_intervals({{1, 1.5}, {2, 4}, {6, kInf}}),
                                           RestrictedSet::from_intervals({{1.25, 1.75}, {2.5, kInf}}, {1.0}),
                                           RestrictedSet::from_grid(geometric_grid(3, 40))};
  const std::vector<RandomVariableModel> models = {RandomVariableModel::gaussian(), RandomVariableModel::uniform01(),
                                                   RandomVariableModel::exponential(),
                                                   RandomVariableModel::rademacher()};
  for (int i = 0; i < 12; ++i) {
    const auto psi = make_power_slowvary({r(eng), d(eng)});
    const auto m = models[i % models.size()].scaled(s(eng));
    const auto rep = sandwich_check_restricted(m, psi, sets[i % sets.size()], pm(eng));
    EXPECT_TRUE(rep.pass()) << m.label() << " " << psi.description() << " " << rep.lower << " " << rep.full << " "
                            << rep.bound;
  }
}

}  // namespace
}  // namespace gls
