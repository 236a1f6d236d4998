#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <numbers>

#include "gemgaps/limits.hpp"
#include "gemgaps/specfun.hpp"

using namespace gemgaps;
using namespace gemgaps::limits;

namespace {

LimitCdfResult cdf(double alpha, double theta, double x, double tol = 1e-8) {
  return limit_cdf_mn({alpha, theta, x, tol});
}

// sum_k (-y)^k / k! E D^{k/alpha}, y = alpha x^{-(1-alpha)/alpha}; converges for alpha > 1/2
double moment_series_cdf(double alpha, double theta, double x) {
  const long double y = alpha * std::pow(x, -(1.0 - alpha) / alpha);
  long double s = 0.0L;
  for (int k = 0; k < 400; ++k) {
    const double p = k / alpha;
    const long double log_term = k * std::log(y) - std::lgamma(k + 1.0) + std::log(diversity_moment(alpha, theta, p));
    const long double t = std::exp(log_term);
    s += k % 2 ? -t : t;
    if (k > 10 && t < 1e-18L) break;
  }
  return static_cast<double>(s);
}

}  // namespace

TEST(DiversityMoment, Examples) {
  EXPECT_NEAR(diversity_moment(0.3, 1.2, 0.0), 1.0, 1e-14);
  EXPECT_NEAR(diversity_moment(0.5, 0.0, 1.0), 2.0 / std::sqrt(std::numbers::pi), 1e-12);
  EXPECT_NEAR(diversity_moment(0.5, 0.5, 1.0), std::sqrt(std::numbers::pi), 1e-12);
  EXPECT_THROW(diversity_moment(1.0, 1.0, 1.0), DomainError);
  EXPECT_THROW(diversity_moment(0.5, -0.6, 1.0), DomainError);
}

TEST(DiversityMoment, LogConvexInOrder) {
  for (double a : {0.2, 0.5, 0.8})
    for (double t : {-0.1, 0.0, 1.0, 4.0}) {
      for (int p = 1; p < 12; ++p) {
        const double l0 = std::log(diversity_moment(a, t, p - 1));
        const double l1 = std::log(diversity_moment(a, t, p));
        const double l2 = std::log(diversity_moment(a, t, p + 1));
        EXPECT_GE(l0 + l2 - 2 * l1, -1e-12) << a << " " << t << " " << p;
      }
    }
}

TEST(LimitCdfHalf, Examples) {
  EXPECT_NEAR(limit_cdf_half(0.0, 2.0), std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(limit_cdf_half(0.5, 2.0), 0.5, 1e-15);
  EXPECT_EQ(limit_cdf_half(1.0, 0.0), 0.0);
  EXPECT_LT(limit_cdf_half(1.0, 1e-9), 1e-12);
}

TEST(LimitCdf, Examples) {
  EXPECT_NEAR(cdf(0.5, 0.0, 2.0).value, 0.7071068, 1e-7);
  EXPECT_NEAR(cdf(0.5, 1.0, 1.0).value, std::pow(1.0 / 3.0, 1.5), 1e-7);
  EXPECT_NEAR(cdf(0.5, 1.0, 1e6).value, 1.0, 1e-3);
}

TEST(LimitCdf, MatchesClosedFormAtHalf) {
  for (double theta : {0.0, 0.5, 1.0, 2.0})
    for (double x : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0}) {
      const auto r = cdf(0.5, theta, x);
      EXPECT_NEAR(r.value, limit_cdf_half(theta, x), 1e-6) << theta << " " << x;
      EXPECT_GE(r.abs_error_estimate, 0.0);
      EXPECT_GE(r.evaluations, 1);
    }
}

TEST(LimitCdf, HighPrecisionReferenceValues) {
  // 30-digit reference values at theta = 1, x = 1
  EXPECT_NEAR(cdf(0.7, 1.0, 1.0, 1e-12).value, 0.307003998080354288875897968107, 1e-10);
  EXPECT_NEAR(cdf(0.9, 1.0, 1.0, 1e-12).value, 0.358666518697162173466902565722, 1e-10);
  EXPECT_NEAR(cdf(0.3, 1.0, 1.0).value, 0.0402686949374479556065599848626, 1e-8);
  EXPECT_NEAR(cdf(0.1, 1.0, 1.0).value, 1.00739313340927024262165e-7, 1e-8);
}

TEST(LimitCdf, AgreesWithMomentSeries) {
  for (double a : {0.6, 0.75, 0.85})
    for (double theta : {0.0, 1.0, 2.5})
      for (double x : {0.5, 1.0, 2.0, 4.0}) {
        const double series = moment_series_cdf(a, theta, x);
        EXPECT_NEAR(cdf(a, theta, x, 1e-10).value, series, 1e-8) << a << " " << theta << " " << x;
      }
}

TEST(LimitCdf, MonotoneAndBounded) {
  for (double a : {0.1, 0.3, 0.5, 0.7, 0.95})
    for (double theta : {0.0, 1.0, 3.0}) {
      double prev = 0.0;
      for (double lx = -3.0; lx <= 6.0; lx += 0.5) {
        const auto r = cdf(a, theta, std::exp(lx));
        EXPECT_GE(r.value, prev - 1e-8) << a << " " << theta << " " << lx;
        EXPECT_GE(r.raw_value, -1e-8 - r.abs_error_estimate);
        EXPECT_LE(r.raw_value, 1.0 + 1e-8 + r.abs_error_estimate);
        prev = r.value;
      }
    }
}

TEST(LimitCdf, UnderOneSecondPerPoint) {
  for (double a : {0.1, 0.5, 0.95}) {
    const auto t0 = std::chrono::steady_clock::now();
    cdf(a, 2.0, 3.0);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    EXPECT_LT(secs, 1.0) << a;
  }
}

TEST(LimitCdf, RejectsOutOfRange) {
  EXPECT_THROW(cdf(0.05, 1.0, 1.0), UnsupportedParameterError);
  EXPECT_THROW(cdf(0.97, 1.0, 1.0), UnsupportedParameterError);
  EXPECT_THROW(cdf(0.5, -0.2, 1.0), UnsupportedParameterError);
  EXPECT_THROW(cdf(0.5, 1.0, 0.0), DomainError);
  EXPECT_THROW(cdf(1.0, 1.0, 1.0), DomainError);
  EXPECT_THROW(cdf(0.5, -0.6, 1.0), DomainError);
  EXPECT_THROW(cdf(0.5, 1.0, 1.0, 0.0), DomainError);
}

TEST(CltReference, Examples) {
  const double mu = 2.0 * std::log(1000.0);
  EXPECT_NEAR(clt_reference_cdf(2.0, 1000, mu), 0.5, 1e-15);
  EXPECT_NEAR(clt_reference_cdf(2.0, 1000, mu + std::sqrt(mu)), 0.8413447460685429, 1e-12);
  EXPECT_LT(clt_reference_cdf(2.0, 1000, -1e3), 1e-100);
}

TEST(CltDistance, DecreasesAlongN) {
  double prev = 1.0;
  for (std::int64_t n : {100, 1000, 10000}) {
    const auto d = clt_sup_distance(1.0, n);
    EXPECT_GT(d.sup_distance, 0.0);
    EXPECT_LT(d.sup_distance, prev);
    EXPECT_GE(d.argmax, 1);
    prev = d.sup_distance;
  }
}

TEST(CltDistance, AtLeastLargestJump) {
  // a CDF with an atom of size s cannot be closer than s/2 to a continuous one
  const auto pmf = exact::mn_pmf_product(1.0, 1000, 1e-12);
  double jump = 0.0;
  for (double p : pmf.probs) jump = std::max(jump, p);
  EXPECT_GE(clt_sup_distance(1.0, 1000).sup_distance, 0.5 * jump);
}
