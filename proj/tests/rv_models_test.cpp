#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "gls/rv_models.hpp"

namespace gls {
namespace {

std::vector<RandomVariableModel> closed_form_models() {
  return {RandomVariableModel::gaussian(), RandomVariableModel::uniform01(), RandomVariableModel::exponential(),
          RandomVariableModel::constant(2.5), RandomVariableModel::rademacher()};
}

TEST(LpNorm, ClosedFormExamples) {
  EXPECT_NEAR(lp_norm(RandomVariableModel::gaussian(), 2.0), 1.0, 1e-15);
  EXPECT_NEAR(lp_norm(RandomVariableModel::gaussian(), 1.0), 0.79788456080286535588, 1e-15);
  EXPECT_NEAR(lp_norm(RandomVariableModel::uniform01(), 3.0), 0.62996052494743658238, 1e-15);
  EXPECT_NEAR(lp_norm(RandomVariableModel::exponential(), 3.0), std::cbrt(6.0), 1e-14);
  for (double p : {1.0, 2.0, 7.5, 200.0}) EXPECT_NEAR(lp_norm(RandomVariableModel::constant(5.0), p), 5.0, 1e-14);
  EXPECT_EQ(lp_norm(RandomVariableModel::rademacher(), 13.0), 1.0);
}

TEST(LpNorm, DomainError) {
  EXPECT_THROW(lp_norm(RandomVariableModel::gaussian(), 0.5), DomainError);
}

TEST(LpNorm, LargePStaysFinite) {
  EXPECT_TRUE(std::isfinite(lp_norm(RandomVariableModel::exponential(), 1e6)));
  EXPECT_TRUE(std::isfinite(lp_norm(RandomVariableModel::gaussian(), 1e18)));
}

TEST(LpNorm, UniformDensityQuadratureMatchesClosedForm) {
  const auto d = RandomVariableModel::uniform01_density();
  EXPECT_NEAR(lp_norm(d, 3.0), 0.62996052494743658238, 1e-10);
}

TEST(LpNorm, DensityBackendsAgreeWithClosedForm) {
  const std::vector<std::pair<RandomVariableModel, RandomVariableModel>> pairs = {
      {RandomVariableModel::gaussian(), RandomVariableModel::gaussian_density()},
      {RandomVariableModel::uniform01(), RandomVariableModel::uniform01_density()},
      {RandomVariableModel::exponential(), RandomVariableModel::exponential_density()}};
  for (const auto& [exact, dens] : pairs) {
    for (double p : {1.0, 1.5, 2.0, 3.7, 10.0, 50.0, 200.0}) {
      const double a = lp_norm(exact, p);
      const double b = lp_norm(dens, p);
      EXPECT_NEAR(b, a, 1e-8 * a + 1e-10) << dens.label() << " p=" << p;
    }
  }
}

TEST(LpNorm, HeavyTailDiverges) {
  // density 1/x^2 on [1, inf): E X^p = inf for every p >= 1
  const auto pareto = RandomVariableModel::density([](double x) { return 1.0 / (x * x); }, 1.0,
                                                   std::numeric_limits<double>::infinity(), "pareto1");
  EXPECT_THROW(lp_norm(pareto, 3.0), DivergenceError);
  EXPECT_THROW(lp_norm(pareto, 1.0), DivergenceError);
}

TEST(LpNorm, HeavyTailConvergesBelowIndex) {
  // density 3/x^4 on [1, inf): E X^p = 3/(3-p) for p < 3
  const auto pareto = RandomVariableModel::density([](double x) { return 3.0 / std::pow(x, 4.0); }, 1.0,
                                                   std::numeric_limits<double>::infinity(), "pareto3");
  EXPECT_NEAR(lp_norm(pareto, 2.0), std::sqrt(3.0), 1e-7);
  for (double p : {1.0, 1.57, 2.5, 2.9}) {
    const double exact = std::pow(3.0 / (3.0 - p), 1.0 / p);
    EXPECT_NEAR(lp_norm(pareto, p), exact, 1e-7 * exact) << p;
  }
  EXPECT_THROW(lp_norm(pareto, 3.0), DivergenceError);
  EXPECT_THROW(lp_norm(pareto, 4.0), DivergenceError);
}

TEST(LpNorm, TwoSidedHeavyTail) {
  // symmetric density (3/2)|x|^{-4} on |x| >= 1: E|X|^p = 3/(3-p)
  const double inf = std::numeric_limits<double>::infinity();
  const auto sym = RandomVariableModel::density(
      [](double x) { return std::abs(x) >= 1.0 ? 1.5 * std::pow(std::abs(x), -4.0) : 0.0; }, -inf, inf, "sym");
  EXPECT_NEAR(lp_norm(sym, 2.0), std::sqrt(3.0), 1e-7);
  EXPECT_THROW(lp_norm(sym, 3.5), DivergenceError);
}

TEST(LpNorm, ConstantIsExact) {
  for (double p : {1.0, 3.3, 150.0}) {
    EXPECT_EQ(lp_norm(RandomVariableModel::constant(5.0), p), 5.0);
    EXPECT_EQ(lp_norm(RandomVariableModel::constant(-0.3), p), 0.3);
  }
}

TEST(LpNorm, EmpiricalPlugIn) {
  const auto m = RandomVariableModel::empirical({1.0, -2.0, 3.0}, "e");
  EXPECT_NEAR(lp_norm(m, 1.0), 2.0, 1e-15);
  EXPECT_NEAR(lp_norm(m, 2.0), std::sqrt(14.0 / 3.0), 1e-14);
  EXPECT_EQ(lp_norm(RandomVariableModel::empirical({0.0, 0.0}, "z"), 3.0), 0.0);
}

TEST(LpNorm, ScalingIsAbsolutelyHomogeneous) {
  for (const auto& m : closed_form_models()) {
    for (double a : {-2.0, 0.5, 3.0}) {
      for (double p : {1.0, 2.0, 9.0}) EXPECT_NEAR(lp_norm(m.scaled(a), p), std::abs(a) * lp_norm(m, p), 1e-13);
    }
  }
}

TEST(LpNormProperty, LyapunovMonotonicity) {
  std::mt19937_64 eng(2024);
  std::uniform_real_distribution<double> u(1.0, 50.0);
  auto models = closed_form_models();
  models.push_back(RandomVariableModel::gaussian_density());
  models.push_back(RandomVariableModel::empirical(sample(RandomVariableModel::exponential(), 5000, 1).values, "emp"));
  for (const auto& m : models) {
    for (int i = 0; i < 100; ++i) {
      double p1 = u(eng), p2 = u(eng);
      if (p1 > p2) std::swap(p1, p2);
      ASSERT_LE(lp_norm(m, p1), lp_norm(m, p2) * (1.0 + 1e-12)) << m.label() << " " << p1 << " " << p2;
    }
  }
}

TEST(Sample, EmptyBatch) {
  EXPECT_TRUE(sample(RandomVariableModel::gaussian(), 0, 1).values.empty());
}

TEST(Sample, DeterministicForFixedSeed) {
  const auto a = sample(RandomVariableModel::gaussian(), 1'000'000, 42);
  const auto b = sample(RandomVariableModel::gaussian(), 1'000'000, 42);
  ASSERT_EQ(a.values.size(), 1'000'000u);
  EXPECT_EQ(a.values, b.values);
  const auto c = sample(RandomVariableModel::gaussian(), 1000, 43);
  EXPECT_NE(std::vector<double>(a.values.begin(), a.values.begin() + 1000), c.values);
}

TEST(Sample, ThreadedMatchesSequential) {
  for (const auto& m : closed_form_models()) {
    const auto seq = sample(m, 300'001, 9, 1);
    const auto par = sample(m, 300'001, 9, 4);
    EXPECT_EQ(seq.values, par.values) << m.label();
  }
}

TEST(Sample, PrefixStableAcrossSizes) {
  // chunk c depends on (seed, c) only
  const auto small = sample(RandomVariableModel::exponential(), 70'000, 3);
  const auto big = sample(RandomVariableModel::exponential(), 200'000, 3);
  EXPECT_TRUE(std::equal(small.values.begin(), small.values.end(), big.values.begin()));
}

TEST(Sample, UniformMeanWithinThreeSigma) {
  const auto b = sample(RandomVariableModel::uniform01(), 1'000'000, 7);
  double mean = 0.0;
  for (double v : b.values) mean += v;
  mean /= static_cast<double>(b.size());
  EXPECT_NEAR(mean, 0.5, 0.002);
}

TEST(Sample, EmpiricalMomentsMatchClosedForm) {
  const auto g = RandomVariableModel::gaussian();
  const auto emp = RandomVariableModel::empirical(sample(g, 1'000'000, 42).values, "mc");
  for (double p : {1.0, 2.0, 4.0, 6.0}) EXPECT_NEAR(lp_norm(emp, p), lp_norm(g, p), 0.01 * lp_norm(g, p)) << p;
}

TEST(Sample, DensityAndBootstrapBackends) {
  const auto tri = RandomVariableModel::density([](double x) { return 2.0 * x; }, 0.0, 1.0, "triangle");
  const auto b = sample(tri, 200'000, 1);
  double mean = 0.0;
  for (double v : b.values) {
    ASSERT_GE(v, 0.0);
    ASSERT_LE(v, 1.0);
    mean += v;
  }
  EXPECT_NEAR(mean / 200'000.0, 2.0 / 3.0, 0.005);

  const auto emp = RandomVariableModel::empirical({1.0, 2.0, 3.0}, "e");
  for (double v : sample(emp, 1000, 5).values) EXPECT_TRUE(v == 1.0 || v == 2.0 || v == 3.0);

  const auto half_line = RandomVariableModel::density([](double x) { return std::exp(-x); }, 0.0,
                                                      std::numeric_limits<double>::infinity(), "custom");
  EXPECT_THROW(sample(half_line, 10, 1), UnsupportedBackendError);
}

TEST(EmpiricalSurvival, Examples) {
  const SampleBatch b{{1.0, -2.0, 3.0}, 0};
  EXPECT_DOUBLE_EQ(empirical_survival(b, 2.0), 2.0 / 3.0);
  EXPECT_EQ(empirical_survival(b, 0.0), 1.0);
  EXPECT_THROW(empirical_survival(SampleBatch{}, 1.0), DegenerateError);
}

TEST(EmpiricalSurvival, GaussianTailAtThree) {
  const auto b = sample(RandomVariableModel::gaussian(), 1'000'000, 42);
  // 2 * Phi_bar(3) = erfc(3 / sqrt 2) = 0.0026997960632601890533 (mpmath)
  EXPECT_NEAR(empirical_survival(b, 3.0), 0.0026997960632601890533, 2e-4);
  EXPECT_NEAR(std::erfc(3.0 / std::sqrt(2.0)), 0.0026997960632601890533, 1e-16);
  const SurvivalTable t(b);
  for (double x : {0.5, 1.0, 3.0, 4.2}) EXPECT_EQ(t(x), empirical_survival(b, x));
}

TEST(EmpiricalFile, LoadsValuesAndRejectsMissing) {
  const std::string path = ::testing::TempDir() + "gls_sample.txt";
  {
    std::ofstream out(path);
    out << "# comment\n1.5\n\n-2\n3e0\n";
  }
  const auto m = RandomVariableModel::empirical_from_file(path);
  EXPECT_EQ(m.sample_size(), 3u);
  EXPECT_NEAR(lp_norm(m, 1.0), (1.5 + 2.0 + 3.0) / 3.0, 1e-15);
  EXPECT_THROW(RandomVariableModel::empirical_from_file(path + ".missing"), ParseError);
  std::remove(path.c_str());
}

TEST(EmpiricalReliableP, FiveLogN) { EXPECT_NEAR(empirical_reliable_p(1'000'000), 5.0 * std::log(1e6), 1e-12); }

}  // namespace
}  // namespace gls
