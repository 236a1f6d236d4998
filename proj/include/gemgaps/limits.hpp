#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "gemgaps/errors.hpp"
#include "gemgaps/exact.hpp"
#include "gemgaps/specfun.hpp"

namespace gemgaps::limits {

/// E D^p = Gamma(theta+1) / Gamma(theta/alpha+1) * Gamma(p+theta/alpha+1) / Gamma(p alpha+theta+1)
/// for the alpha-diversity D, the limit of K_n / n^alpha.
inline double diversity_moment(double alpha, double theta, double p) {
  detail::require(alpha > 0.0 && alpha < 1.0, "diversity_moment: alpha must lie in (0, 1)");
  detail::require(theta > -alpha, "diversity_moment: theta must exceed -alpha");
  detail::require(p >= 0.0, "diversity_moment: p must be non-negative");
  const double ta = theta / alpha;
  return std::exp(specfun::log_gamma(theta + 1.0) - specfun::log_gamma(ta + 1.0) +
                  specfun::log_gamma(p + ta + 1.0) - specfun::log_gamma(p * alpha + theta + 1.0));
}

struct LimitCdfRequest {
  double alpha = 0.5;
  double theta = 0.0;
  double x = 1.0;
  double tol = 1e-8;
};

struct LimitCdfResult {
  /// Clamped to [0, 1].
  double value = 0.0;
  /// Before clamping.
  double raw_value = 0.0;
  double abs_error_estimate = 0.0;
  long evaluations = 0;
};

inline constexpr double kLimitAlphaMin = 0.1;
inline constexpr double kLimitAlphaMax = 0.95;

/// lim P(M_n / n^{alpha/(1-alpha)} <= x) for GEM(alpha, theta) as
/// 2 alpha^{1-theta-alpha} Gamma(theta+1)/Gamma(theta/alpha+1) x^{(1-alpha)(theta/alpha+1)}
///   * int_0^inf v^{theta+2alpha-1} exp(-(v^2/alpha)^alpha x^{1-alpha}) J_theta(2v) dv.
inline LimitCdfResult limit_cdf_mn(const LimitCdfRequest& req) {
  const double a = req.alpha;
  const double th = req.theta;
  detail::require(a > 0.0 && a < 1.0, "limit_cdf_mn: alpha must lie in (0, 1)");
  detail::require(th > -a, "limit_cdf_mn: theta must exceed -alpha");
  detail::require(req.x > 0.0, "limit_cdf_mn: x must be positive");
  detail::require(req.tol > 0.0, "limit_cdf_mn: tol must be positive");
  if (a < kLimitAlphaMin || a > kLimitAlphaMax)
    throw UnsupportedParameterError("limit_cdf_mn: quadrature supports alpha in [0.1, 0.95]");
  if (th < 0.0) throw UnsupportedParameterError("limit_cdf_mn: quadrature supports theta >= 0");

  const double log_pref = std::log(2.0) + (1.0 - th - a) * std::log(a) + specfun::log_gamma(th + 1.0) -
                          specfun::log_gamma(th / a + 1.0) + (1.0 - a) * (th / a + 1.0) * std::log(req.x);
  const double pref = std::exp(log_pref);
  const double c = std::pow(a, -a) * std::pow(req.x, 1.0 - a);
  auto f = [&](double v) { return std::pow(v, th + 2.0 * a - 1.0) * std::exp(-c * std::pow(v, 2.0 * a)); };

  specfun::TailQuadratureOptions opt;
  opt.tol = req.tol / pref;
  const auto q = specfun::integrate_bessel_tail(f, th, 2.0, opt);

  LimitCdfResult out;
  out.raw_value = pref * q.value;
  out.abs_error_estimate = pref * q.abs_error_estimate;
  out.evaluations = q.evaluations;
  out.value = std::clamp(out.raw_value, 0.0, 1.0);
  return out;
}

/// (x / (x + 2))^{theta + 1/2}, the alpha = 1/2 case in closed form.
inline double limit_cdf_half(double theta, double x) {
  detail::require(theta > -0.5, "limit_cdf_half: theta must exceed -1/2");
  detail::require(x >= 0.0, "limit_cdf_half: x must be non-negative");
  return std::pow(x / (x + 2.0), theta + 0.5);
}

/// Phi((x - theta ln n) / sqrt(theta ln n)).
inline double clt_reference_cdf(double theta, std::int64_t n, double x) {
  detail::require(theta > 0.0, "clt_reference_cdf: theta must be positive");
  detail::require(n >= 2, "clt_reference_cdf: n must be at least 2");
  const double mu = theta * std::log(static_cast<double>(n));
  return specfun::normal_cdf((x - mu) / std::sqrt(mu));
}

struct CltDistance {
  double sup_distance = 0.0;
  /// Value of M_n where the supremum is attained.
  std::int64_t argmax = 0;
};

/// sup_x |P(M_n <= x) - clt_reference_cdf(theta, n, x)| from the exact law of
/// M_n. Both one-sided limits at each jump are compared.
inline CltDistance clt_sup_distance(double theta, std::int64_t n, double tol = 1e-12) {
  const auto pmf = exact::mn_pmf_product(theta, n, tol);
  CltDistance out;
  double below = 0.0;
  for (std::int64_t k = pmf.support_offset; k <= pmf.last(); ++k) {
    const double ref = clt_reference_cdf(theta, n, static_cast<double>(k));
    const double above = below + pmf.prob(k);
    const double d = std::max(std::fabs(below - ref), std::fabs(above - ref));
    if (d > out.sup_distance) {
      out.sup_distance = d;
      out.argmax = k;
    }
    below = above;
  }
  // left of the support the exact CDF is 0
  out.sup_distance = std::max(out.sup_distance, clt_reference_cdf(theta, n, static_cast<double>(pmf.support_offset) - 1.0));
  return out;
}

}  // namespace gemgaps::limits
