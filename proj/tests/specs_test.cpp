#include <cmath>
#include <cstdio>
#include <fstream>

#include <gtest/gtest.h>

#include "gls/specs.hpp"

namespace gls::specs {
namespace {

TEST(ParseModel, Families) {
  EXPECT_NEAR(lp_norm(parse_model("gaussian"), 2.0), 1.0, 1e-15);
  EXPECT_NEAR(lp_norm(parse_model(" uniform01 "), 1.0), 0.5, 1e-15);
  EXPECT_NEAR(lp_norm(parse_model("exponential"), 1.0), 1.0, 1e-15);
  EXPECT_EQ(lp_norm(parse_model("rademacher"), 5.0), 1.0);
  EXPECT_NEAR(lp_norm(parse_model("constant:2.5"), 3.0), 2.5, 1e-15);
  EXPECT_THROW(parse_model("cauchy"), ParseError);
  EXPECT_THROW(parse_model("constant:abc"), ParseError);
  EXPECT_THROW(parse_model("empirical:/nonexistent/file"), ParseError);
}

TEST(ParseModel, EmpiricalFile) {
  const std::string path = ::testing::TempDir() + "gls_spec_sample.txt";
  {
    std::ofstream out(path);
    out << "1\n-3\n";
  }
  const auto m = parse_model("empirical:" + path);
  EXPECT_EQ(m.sample_size(), 2u);
  EXPECT_EQ(lp_norm(m, 1.0), 2.0);
  std::remove(path.c_str());
}

TEST(ParsePsi, Variants) {
  EXPECT_EQ(parse_psi("sqrt")(9.0), 3.0);
  EXPECT_EQ(parse_psi("power_slowvary(r=1, delta=0)")(4.5), 4.5);
  EXPECT_NEAR(parse_psi("power_slowvary(r=2,delta=1)")(7.0), 2.0 * std::sqrt(7.0), 1e-14);
  const auto un = parse_psi("power_slowvary(r=2, delta=1, normalized=false)");
  EXPECT_DOUBLE_EQ(un(1.0), std::log(3.0));
  EXPECT_FALSE(parse_psi("oscillating_sqrt").monotone());
  const auto g = parse_model("gaussian");
  EXPECT_NEAR(parse_psi("natural", &g)(2.0), 1.2533141373155002512, 1e-13);
}

TEST(ParsePsi, Errors) {
  EXPECT_THROW(parse_psi("natural"), ParseError);
  EXPECT_THROW(parse_psi("power_slowvary(delta=1)"), ParseError);
  EXPECT_THROW(parse_psi("power_slowvary(r=0)"), ParseError);
  EXPECT_THROW(parse_psi("power_slowvary(r=2, gamma=1)"), ParseError);
  EXPECT_THROW(parse_psi("power_slowvary(r=2, normalized=maybe)"), ParseError);
  EXPECT_THROW(parse_psi("power_slowvary(r=2"), ParseError);
  EXPECT_THROW(parse_psi("cube"), ParseError);
}

TEST(ParseGrid, Variants) {
  EXPECT_EQ(parse_grid("geometric:D=2:M=4").points(), (std::vector<double>{1, 3, 7, 15}));
  EXPECT_EQ(parse_grid("grid:geometric:D=3").M(), kDefaultGridM);
  EXPECT_EQ(parse_grid("integers:M=5").points(), (std::vector<double>{1, 2, 3, 4, 5}));
  EXPECT_EQ(parse_grid("integers").M(), 100u);
  EXPECT_EQ(parse_grid("geometric:D=2:M=60").description(), "geometric:D=2:M=60");
  EXPECT_THROW(parse_grid("geometric:M=4"), ParseError);
  EXPECT_THROW(parse_grid("geometric:D=1"), ParseError);
  EXPECT_THROW(parse_grid("primes:M=4"), ParseError);
  EXPECT_THROW(parse_grid("integers:M=x"), ParseError);
}

TEST(ParseSet, Variants) {
  EXPECT_TRUE(parse_set("full").is_full());
  const auto S = parse_set("intervals:1-2,3-inf");
  EXPECT_EQ(S.p_plus(2.5), 3.0);
  EXPECT_TRUE(S.unbounded());
  const auto P = parse_set("intervals:1,2,5,8-inf");
  EXPECT_EQ(P.p_plus(1.5), 2.0);
  EXPECT_EQ(P.p_plus(6.0), 8.0);
  EXPECT_EQ(parse_set("grid:geometric:D=2:M=10").p_plus(4.0), 7.0);
  EXPECT_TRUE(std::isinf(parse_set("intervals:1-4").p_plus(5.0)));
}

TEST(ParseSet, Errors) {
  EXPECT_THROW(parse_set("intervals:2-3"), ParseError);
  EXPECT_THROW(parse_set("intervals:1-3,2-5"), ParseError);
  EXPECT_THROW(parse_set("intervals:1-x"), ParseError);
  EXPECT_THROW(parse_set("ball"), ParseError);
}

TEST(ParseGroup, Variants) {
  EXPECT_EQ(parse_group("cyclic:5").order(), 5u);
  EXPECT_EQ(parse_group("dihedral:4").order(), 8u);
  EXPECT_EQ(parse_group("symmetric:4").order(), 24u);
  const auto P = parse_group("product:cyclic:2xsymmetric:3");
  EXPECT_EQ(P.order(), 12u);
  EXPECT_FALSE(P.is_abelian());
  EXPECT_THROW(parse_group("symmetric:9"), ParseError);
  EXPECT_THROW(parse_group("cyclic:0"), ParseError);
  EXPECT_THROW(parse_group("klein"), ParseError);
  EXPECT_THROW(parse_group("quaternion:8"), ParseError);
}

}  // namespace
}  // namespace gls::specs
