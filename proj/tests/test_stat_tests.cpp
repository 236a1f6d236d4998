#include <gtest/gtest.h>

#include <boost/math/distributions/chi_squared.hpp>

#include <cmath>
#include <map>
#include <vector>

#include "gemgaps/random.hpp"
#include "gemgaps/stat_tests.hpp"

using namespace gemgaps;
using namespace gemgaps::stats;

TEST(ChiSquareSurvival, MatchesBoost) {
  for (double dof : {1.0, 2.0, 5.0, 17.0, 120.0})
    for (double x : {0.01, 0.5, 1.0, 4.0, 10.0, 50.0, 200.0}) {
      boost::math::chi_squared_distribution<> d(dof);
      EXPECT_NEAR(chi_square_survival(x, dof), boost::math::cdf(boost::math::complement(d, x)), 1e-12)
          << dof << " " << x;
    }
  EXPECT_EQ(chi_square_survival(0.0, 3.0), 1.0);
}

TEST(KolmogorovSurvival, ReferenceValues) {
  const std::vector<std::pair<double, double>> ref{{0.3, 0.999990694198665433},   {0.5, 0.963945243664875094},
                                                   {0.8, 0.544142411574198077},   {1.0, 0.269999671677354521},
                                                   {1.18, 0.123453809429765714},  {1.5, 0.0222179626165251287},
                                                   {2.0, 0.000670925255779695347}, {3.0, 3.04599594894252569e-8}};
  for (auto [l, q] : ref) EXPECT_NEAR(kolmogorov_survival(l), q, 1e-12) << l;
  EXPECT_EQ(kolmogorov_survival(0.0), 1.0);
}

TEST(KolmogorovSurvival, ContinuousAcrossSeriesSwitch) {
  EXPECT_NEAR(kolmogorov_survival(1.18 - 1e-12), kolmogorov_survival(1.18 + 1e-12), 1e-11);
}

TEST(ChiSquareCategorical, ProportionalObservations) {
  const auto r = chi_square_categorical({100, 200, 300, 400}, {0.1, 0.2, 0.3, 0.4});
  EXPECT_NEAR(r.statistic, 0.0, 1e-12);
  EXPECT_NEAR(r.p_value, 1.0, 1e-12);
  EXPECT_EQ(r.dof_or_n, 3);
}

TEST(ChiSquareCategorical, GrossMismatch) {
  std::vector<double> obs(10, 0.0), exp(10, 0.1);
  obs[0] = 1000;
  EXPECT_LT(chi_square_categorical(obs, exp).p_value, 1e-10);
}

TEST(ChiSquareCategorical, PoolsSmallCategories) {
  // expected counts 1, 1, 1 pool into one bin of 3 < 5 which still counts
  const auto r = chi_square_categorical({50, 47, 1, 1, 1}, {50, 47, 1, 1, 1});
  EXPECT_EQ(r.dof_or_n, 2);
  EXPECT_THROW(chi_square_categorical({1, 2}, {1, 2, 3}), DomainError);
  EXPECT_THROW(chi_square_categorical({0, 0}, {1, 1}), DegenerateInputError);
}

TEST(ChiSquareGof, TailGroupAbsorbsUnstoredSupport) {
  const auto pmf = geometric_pmf(GeometricLaw{0.5}, 1e-3);
  std::map<std::int64_t, std::int64_t> obs{{0, 500}, {1, 250}, {2, 125}, {3, 62}, {4, 31}, {5, 16}, {6, 8}, {1000, 8}};
  const auto r = chi_square_gof(obs, pmf);
  EXPECT_GT(r.p_value, 0.5);
  EXPECT_GE(r.dof_or_n, 5);
}

TEST(ChiSquareGof, CalibratedUnderNull) {
  const auto pmf = geometric_pmf(GeometricLaw{0.5});
  int ok = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto g = substream(777, seed);
    std::map<std::int64_t, std::int64_t> obs;
    for (int i = 0; i < 100000; ++i) ++obs[static_cast<std::int64_t>(rng::geometric(g, 0.5))];
    ok += chi_square_gof(obs, pmf).p_value >= 0.05;
  }
  EXPECT_GE(ok, 80);
  EXPECT_LE(ok, 100);
}

TEST(ChiSquareGof, DetectsWrongLaw) {
  auto g = substream(3, 3);
  std::map<std::int64_t, std::int64_t> obs;
  for (int i = 0; i < 20000; ++i) ++obs[static_cast<std::int64_t>(rng::geometric(g, 0.48))];
  EXPECT_LT(chi_square_gof(obs, geometric_pmf(GeometricLaw{0.5})).p_value, 1e-3);
}

TEST(ChiSquareTwoSample, SameAndDifferent) {
  const auto same = chi_square_two_sample({100, 200, 300}, {100, 200, 300});
  EXPECT_NEAR(same.statistic, 0.0, 1e-12);
  EXPECT_NEAR(same.p_value, 1.0, 1e-12);
  EXPECT_LT(chi_square_two_sample({300, 200, 100}, {100, 200, 300}).p_value, 1e-10);
  EXPECT_THROW(chi_square_two_sample({1, 2}, {1}), DomainError);
}

TEST(Ks, ExactQuantiles) {
  const int n = 1000;
  std::vector<double> q(n);
  for (int i = 0; i < n; ++i) q[i] = -std::log1p(-(i + 0.5) / n);
  const auto r = ks_test(q, [](double x) { return -std::expm1(-x); });
  EXPECT_LE(r.statistic, 0.5 / n + 1e-12);
  EXPECT_EQ(r.dof_or_n, n);
}

TEST(Ks, NullAndGrossMismatch) {
  auto g = substream(9, 0);
  std::vector<double> u(10000), e(10000);
  for (auto& x : u) x = rng::uniform01(g);
  for (auto& x : e) x = rng::exponential(g);
  auto unif = [](double x) { return std::clamp(x, 0.0, 1.0); };
  EXPECT_GE(ks_test(u, unif).p_value, 1e-3);
  EXPECT_LT(ks_test(e, unif).p_value, 1e-10);
}

TEST(Ks, Degenerate) {
  auto unif = [](double x) { return x; };
  EXPECT_THROW(ks_test(std::vector<double>(20, 0.3), unif), DegenerateInputError);
  EXPECT_THROW(ks_test({0.1, 0.2, 0.3}, unif), DegenerateInputError);
}

TEST(KsTwoSample, Behaviour) {
  auto g = substream(10, 0);
  std::vector<double> a(5000), b(5000), c(5000);
  for (auto& x : a) x = rng::normal(g);
  for (auto& x : b) x = rng::normal(g);
  for (auto& x : c) x = rng::normal(g) + 0.2;
  EXPECT_GE(ks_two_sample(a, b).p_value, 1e-3);
  EXPECT_LT(ks_two_sample(a, c).p_value, 1e-6);
  EXPECT_EQ(ks_two_sample(a, a).statistic, 0.0);
}

TEST(KsTwoSample, TiesHandled) {
  std::vector<double> a, b;
  for (int i = 0; i < 100; ++i) {
    a.push_back(i % 5);
    b.push_back(i % 5);
  }
  EXPECT_EQ(ks_two_sample(a, b).statistic, 0.0);
}

TEST(MomentZ, Values) {
  const auto r = moment_z(1.0, 4.0, 100, 1.0);
  EXPECT_EQ(r.statistic, 0.0);
  EXPECT_NEAR(r.p_value, 1.0, 1e-15);
  EXPECT_NEAR(moment_z(1.0 + 1.959963984540054 * 0.2, 4.0, 100, 1.0).p_value, 0.05, 1e-12);
  EXPECT_THROW(moment_z(1.0, 0.0, 100, 1.0), DegenerateInputError);
  EXPECT_THROW(moment_z(1.0, 1.0, 1, 1.0), DomainError);
}
