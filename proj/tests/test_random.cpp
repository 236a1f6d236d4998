#include <gtest/gtest.h>

#include <boost/math/distributions/beta.hpp>
#include <boost/math/distributions/gamma.hpp>
#include <boost/math/distributions/normal.hpp>

#include <cmath>
#include <set>
#include <vector>

#include "gemgaps/random.hpp"
#include "gemgaps/stat_tests.hpp"

using namespace gemgaps;

TEST(Xoshiro, SameSeedSameStream) {
  Xoshiro256ss a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 1000; ++i) {
    const auto x = a();
    EXPECT_EQ(x, b());
    differs = differs || x != c();
  }
  EXPECT_TRUE(differs);
}

TEST(Xoshiro, ZeroSeedIsUsable) {
  Xoshiro256ss g(0);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 100; ++i) seen.insert(g());
  EXPECT_EQ(seen.size(), 100u);
}

TEST(Substream, DistinctAcrossReplicatesAndMasters) {
  std::set<std::uint64_t> firsts;
  for (std::uint64_t m = 0; m < 20; ++m)
    for (std::uint64_t r = 0; r < 200; ++r) firsts.insert(substream(m, r)());
  EXPECT_EQ(firsts.size(), 4000u);
}

TEST(Substream, Deterministic) {
  auto a = substream(7, 12345);
  auto b = substream(7, 12345);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a(), b());
}

TEST(Substream, NeighbouringStreamsUncorrelated) {
  // correlation of uniforms from streams r and r+1
  const int n = 20000;
  double sxy = 0.0;
  for (int r = 0; r < n; ++r) {
    auto a = substream(1, static_cast<std::uint64_t>(r));
    auto b = substream(1, static_cast<std::uint64_t>(r + 1));
    sxy += (rng::uniform01(a) - 0.5) * (rng::uniform01(b) - 0.5);
  }
  const double corr = sxy / n * 12.0;
  EXPECT_LT(std::fabs(corr), 4.0 / std::sqrt(n));
}

TEST(Uniform, RangeAndKs) {
  Xoshiro256ss g(1);
  std::vector<double> u(20000);
  for (auto& x : u) {
    x = rng::uniform_open(g);
    ASSERT_GT(x, 0.0);
    ASSERT_LT(x, 1.0);
  }
  EXPECT_GE(stats::ks_test(u, [](double x) { return x; }).p_value, 1e-3);
}

TEST(Exponential, Ks) {
  Xoshiro256ss g(2);
  std::vector<double> e(20000);
  for (auto& x : e) x = rng::exponential(g);
  EXPECT_GE(stats::ks_test(e, [](double x) { return -std::expm1(-x); }).p_value, 1e-3);
}

TEST(Normal, Ks) {
  Xoshiro256ss g(3);
  std::vector<double> z(20000);
  for (auto& x : z) x = rng::normal(g);
  boost::math::normal_distribution<> nd;
  EXPECT_GE(stats::ks_test(z, [&](double x) { return boost::math::cdf(nd, x); }).p_value, 1e-3);
}

TEST(Geometric, PmfChiSquare) {
  Xoshiro256ss g(4);
  for (double p : {0.2, 0.5, 0.9}) {
    std::map<std::int64_t, std::int64_t> obs;
    for (int i = 0; i < 50000; ++i) ++obs[static_cast<std::int64_t>(rng::geometric(g, p))];
    const auto pmf = geometric_pmf(GeometricLaw{p});
    EXPECT_GE(stats::chi_square_gof(obs, pmf).p_value, 1e-3) << "p=" << p;
  }
}

TEST(Geometric, Edges) {
  Xoshiro256ss g(5);
  EXPECT_EQ(rng::geometric(g, 1.0), 0.0);
  EXPECT_TRUE(std::isinf(rng::geometric(g, 0.0)));
}

class GammaKs : public ::testing::TestWithParam<double> {};

TEST_P(GammaKs, MatchesBoostCdf) {
  const double shape = GetParam();
  Xoshiro256ss g(static_cast<std::uint64_t>(shape * 1000) + 11);
  std::vector<double> v(20000);
  for (auto& x : v) x = rng::gamma(g, shape);
  boost::math::gamma_distribution<> gd(shape);
  EXPECT_GE(stats::ks_test(v, [&](double x) { return boost::math::cdf(gd, x); }).p_value, 1e-3);
}

INSTANTIATE_TEST_SUITE_P(Shapes, GammaKs, ::testing::Values(0.05, 0.5, 1.0, 2.5, 30.0));

TEST(LogGamma, TinyShapeStaysFinite) {
  Xoshiro256ss g(6);
  for (int i = 0; i < 1000; ++i) {
    const double lg = rng::log_gamma_variate(g, 1e-3);
    ASSERT_TRUE(std::isfinite(lg));
  }
}

TEST(Beta, MatchesBoostCdf) {
  Xoshiro256ss g(7);
  for (auto [a, b] : std::vector<std::pair<double, double>>{{0.5, 0.5}, {1.0, 3.0}, {0.3, 7.0}, {5.0, 2.0}}) {
    std::vector<double> v(20000);
    for (auto& x : v) x = rng::beta(g, a, b);
    boost::math::beta_distribution<> bd(a, b);
    EXPECT_GE(stats::ks_test(v, [&](double x) { return boost::math::cdf(bd, x); }).p_value, 1e-3)
        << a << "," << b;
  }
}

TEST(Beta, LogPairConsistent) {
  Xoshiro256ss g(8);
  for (int i = 0; i < 1000; ++i) {
    const auto [lb, l1mb] = rng::log_beta_pair(g, 0.7, 1e-3);
    EXPECT_LE(lb, 0.0);
    EXPECT_LE(l1mb, 0.0);
    EXPECT_NEAR(std::exp(lb) + std::exp(l1mb), 1.0, 1e-12);
  }
}
