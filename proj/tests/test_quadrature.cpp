#include "gemgaps/specfun.hpp"

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

namespace sf = gemgaps::specfun;
using Kernel = sf::TailQuadratureOptions::Kernel;

TEST(GaussKronrod, ExactForPolynomialsOfDegree31) {
  // The Kronrod rule integrates degree 31 exactly; a wrong weight or node shows up here.
  for (int d = 0; d <= 31; ++d) {
    auto f = [d](double x) { return std::pow(x, d); };
    const auto r = sf::gauss_kronrod(f, 0.0, 1.0, 1e-300, 0.0, 1);
    EXPECT_NEAR(r.value, 1.0 / (d + 1), 1e-15) << "degree " << d;
  }
}

TEST(GaussKronrod, GaussPartExactForDegree19) {
  // With K exact and G exact up to degree 19, the error estimate vanishes there.
  for (int d = 0; d <= 19; ++d) {
    auto f = [d](double x) { return std::pow(x, d); };
    const auto r = sf::gauss_kronrod(f, -1.0, 1.0, 1e-300, 0.0, 1);
    EXPECT_LT(r.abs_error_estimate, 1e-14) << "degree " << d;
  }
}

TEST(GaussKronrod, AdaptsToPeakedIntegrand) {
  auto f = [](double x) { return 1.0 / (1e-4 + x * x); };
  const auto r = sf::gauss_kronrod(f, -1.0, 1.0, 1e-10);
  EXPECT_NEAR(r.value, 2.0 * std::atan(100.0) * 100.0, 1e-8);
  EXPECT_GT(r.evaluations, 21);
}

TEST(BesselTail, UnitKernelExponential) {
  sf::TailQuadratureOptions opt;
  opt.kernel = Kernel::unit;
  opt.tol = 1e-10;
  const auto r = sf::integrate_bessel_tail([](double v) { return std::exp(-v); }, 0.0, 1.0, opt);
  EXPECT_NEAR(r.value, 1.0, 1e-9);
}

TEST(BesselTail, UnitKernelGaussian) {
  sf::TailQuadratureOptions opt;
  opt.kernel = Kernel::unit;
  opt.tol = 1e-10;
  const auto r =
      sf::integrate_bessel_tail([](double v) { return v * std::exp(-v * v); }, 0.0, 1.0, opt);
  EXPECT_NEAR(r.value, 0.5, 1e-9);
}

TEST(BesselTail, LaplaceTransformOfJ0) {
  // int_0^inf e^{-a v} J_0(b v) dv = 1 / sqrt(a^2 + b^2)
  const double a = std::numbers::sqrt2;
  sf::TailQuadratureOptions opt;
  opt.tol = 1e-10;
  const auto r = sf::integrate_bessel_tail([a](double v) { return std::exp(-a * v); }, 0.0, 2.0, opt);
  EXPECT_NEAR(r.value, 1.0 / std::sqrt(6.0), 1e-9);
}

TEST(BesselTail, SlowlyDecayingOscillation) {
  // int_0^inf J_nu(v) dv = 1 for nu > -1; only the alternating acceleration makes this converge.
  for (double nu : {0.0, 0.5, 1.0, 3.0}) {
    sf::TailQuadratureOptions opt;
    opt.tol = 1e-9;
    const auto r = sf::integrate_bessel_tail([](double) { return 1.0; }, nu, 1.0, opt);
    EXPECT_NEAR(r.value, 1.0, 1e-8) << "nu=" << nu;
  }
}

TEST(BesselTail, WeberIntegral) {
  // int_0^inf J_nu(b v) v^{nu+1} e^{-p^2 v^2} dv = b^nu / (2p^2)^{nu+1} e^{-b^2/(4p^2)}
  const double nu = 1.5;
  const double b = 3.0;
  const double p = 0.7;
  sf::TailQuadratureOptions opt;
  opt.tol = 1e-11;
  auto f = [&](double v) { return std::pow(v, nu + 1.0) * std::exp(-p * p * v * v); };
  const auto r = sf::integrate_bessel_tail(f, nu, b, opt);
  const double want =
      std::pow(b, nu) / std::pow(2.0 * p * p, nu + 1.0) * std::exp(-b * b / (4.0 * p * p));
  EXPECT_NEAR(r.value, want, 1e-10);
}

TEST(BesselTail, IntegrableSingularityAtOrigin) {
  // int_0^inf v^{-1/2} J_0(v) dv = Gamma(1/4) / (sqrt(2) Gamma(3/4))
  sf::TailQuadratureOptions opt;
  opt.tol = 1e-9;
  const auto r = sf::integrate_bessel_tail([](double v) { return 1.0 / std::sqrt(v); }, 0.0, 1.0, opt);
  EXPECT_NEAR(r.value, std::tgamma(0.25) / (std::numbers::sqrt2 * std::tgamma(0.75)), 1e-8);
}

TEST(BesselTail, BudgetExhaustionThrows) {
  sf::TailQuadratureOptions opt;
  opt.kernel = Kernel::unit;
  opt.panel_budget = 5;
  EXPECT_THROW(sf::integrate_bessel_tail([](double v) { return 1.0 / (1.0 + v); }, 0.0, 1.0, opt),
               gemgaps::ConvergenceError);
}

TEST(BesselTail, RejectsBadArguments) {
  EXPECT_THROW(sf::integrate_bessel_tail([](double) { return 1.0; }, -1.0, 1.0), gemgaps::DomainError);
  EXPECT_THROW(sf::integrate_bessel_tail([](double) { return 1.0; }, 0.0, 0.0), gemgaps::DomainError);
}
