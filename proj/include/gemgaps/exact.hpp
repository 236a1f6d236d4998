#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "gemgaps/errors.hpp"
#include "gemgaps/pmf.hpp"
#include "gemgaps/specfun.hpp"

namespace gemgaps::exact {

/// j -> m_j, the number of blocks of size j.
using Multiplicities = std::map<std::int64_t, std::int64_t>;

namespace detail {

using gemgaps::detail::require;

inline void require_gem(double alpha, double theta) {
  require(alpha >= 0.0 && alpha < 1.0, "alpha must lie in [0, 1)");
  require(theta > -alpha, "theta must exceed -alpha");
}

inline double log_factorial(std::int64_t n) {
  if (n < 64) {
    double s = 0.0;
    for (std::int64_t i = 2; i <= n; ++i) s += std::log(static_cast<double>(i));
    return s;
  }
  return specfun::log_gamma(static_cast<double>(n) + 1.0);
}

// Neumaier compensated sum.
struct CompensatedSum {
  double sum = 0.0;
  double c = 0.0;
  void add(double x) {
    const double t = sum + x;
    if (std::fabs(sum) >= std::fabs(x)) c += (sum - t) + x;
    else c += (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + c; }
};

}  // namespace detail

/// Gap G_{i:n} ~ geometric(i / (i + theta)), i = 1..n.
inline std::vector<GeometricLaw> gap_law(double theta, std::int64_t n) {
  detail::require(theta > 0.0, "gap_law: theta must be positive");
  detail::require(n >= 1, "gap_law: n must be at least 1");
  std::vector<GeometricLaw> out;
  out.reserve(static_cast<std::size_t>(n));
  for (std::int64_t i = 1; i <= n; ++i) out.push_back({static_cast<double>(i) / (static_cast<double>(i) + theta)});
  return out;
}

/// Law of M_n = 1 + sum of the gaps, for GEM(0, theta).
inline DiscretePmf mn_pmf_product(double theta, std::int64_t n, double tol = 1e-10) {
  auto pmf = geometric_sum_pmf(gap_law(theta, n), tol);
  pmf.support_offset = 1;
  return pmf;
}

struct AlternatingSumResult {
  double value = 0.0;
  /// Absolute rounding error estimate, eps * sum of |terms|.
  double cancellation_loss = 0.0;
  bool precision_warning = false;
};

inline constexpr std::int64_t kTailMomentMaxN = 30;

/// E R_k^j for R_k = prod_{i<=k} (1 - H_i), in log space.
inline double log_tail_moment(double alpha, double theta, std::int64_t k, std::int64_t j) {
  double s = 0.0;
  for (std::int64_t i = 1; i <= k; ++i) {
    const double di = static_cast<double>(i);
    s += specfun::log_pochhammer(theta + di * alpha, j) - specfun::log_pochhammer(theta + (di - 1.0) * alpha + 1.0, j);
  }
  return s;
}

/// P(M_n <= k) for GEM(alpha, theta) as sum_j C(n, j) (-1)^j E R_k^j.
inline AlternatingSumResult mn_cdf_tail_moments(double alpha, double theta, std::int64_t n, std::int64_t k) {
  detail::require_gem(alpha, theta);
  detail::require(n >= 1, "mn_cdf_tail_moments: n must be at least 1");
  detail::require(k >= 0, "mn_cdf_tail_moments: k must be non-negative");
  if (n > kTailMomentMaxN)
    throw UnsupportedParameterError("mn_cdf_tail_moments: alternating sum limited to n <= 30");
  AlternatingSumResult r;
  if (k == 0) return r;
  detail::CompensatedSum acc;
  double abs_sum = 0.0;
  for (std::int64_t j = 0; j <= n; ++j) {
    const double log_c = detail::log_factorial(n) - detail::log_factorial(j) - detail::log_factorial(n - j);
    const double t = std::exp(log_c + log_tail_moment(alpha, theta, k, j));
    abs_sum += t;
    acc.add(j % 2 ? -t : t);
  }
  r.value = acc.value();
  r.cancellation_loss = abs_sum * std::numeric_limits<double>::epsilon();
  r.precision_warning = r.cancellation_loss > 1e-6;
  return r;
}

/// P(X_1 > k) = prod_{i=1}^k (theta + i alpha) / (1 + theta + (i-1) alpha).
inline double tail_prob_x1(double alpha, double theta, std::int64_t k) {
  detail::require_gem(alpha, theta);
  detail::require(k >= 0, "tail_prob_x1: k must be non-negative");
  double p = 1.0;
  for (std::int64_t i = 1; i <= k; ++i) {
    const double di = static_cast<double>(i);
    p *= (theta + di * alpha) / (1.0 + theta + (di - 1.0) * alpha);
  }
  return p;
}

/// E C(X_1 - 1, k); infinite unless (k + 1) alpha < 1.
inline double binom_moment_x1(double alpha, double theta, std::int64_t k) {
  detail::require_gem(alpha, theta);
  detail::require(k >= 0, "binom_moment_x1: k must be non-negative");
  if (static_cast<double>(k + 1) * alpha >= 1.0) return std::numeric_limits<double>::infinity();
  double p = 1.0;
  for (std::int64_t i = 1; i <= k; ++i) {
    const double di = static_cast<double>(i);
    p *= (theta + di * alpha) / (1.0 - (di + 1.0) * alpha);
  }
  return p;
}

/// Ewens sampling formula n! theta^k / (theta)_n prod_j 1 / (m_j! j^{m_j}).
inline double ewens_pmf(double theta, const Multiplicities& m) {
  detail::require(theta > 0.0, "ewens_pmf: theta must be positive");
  std::int64_t n = 0;
  std::int64_t k = 0;
  double log_den = 0.0;
  for (const auto& [j, mj] : m) {
    detail::require(j >= 1 && mj >= 0, "ewens_pmf: multiplicities must be non-negative with sizes >= 1");
    n += j * mj;
    k += mj;
    log_den += detail::log_factorial(mj) + static_cast<double>(mj) * std::log(static_cast<double>(j));
  }
  detail::require(n >= 1, "ewens_pmf: partition must have positive size");
  return std::exp(detail::log_factorial(n) + static_cast<double>(k) * std::log(theta) -
                  specfun::log_pochhammer(theta, n) - log_den);
}

/// Ewens probability of the partition with the given parts.
inline double ewens_pmf_parts(double theta, const std::vector<std::int64_t>& parts) {
  Multiplicities m;
  for (auto p : parts) ++m[p];
  return ewens_pmf(theta, m);
}

/// Donnelly-Tavare formula n! theta^k / (theta)_n prod_i 1 / (n_i + ... + n_k).
inline double dt_pmf(double theta, const std::vector<std::int64_t>& parts) {
  detail::require(theta > 0.0, "dt_pmf: theta must be positive");
  detail::require(!parts.empty(), "dt_pmf: composition must be non-empty");
  std::int64_t n = 0;
  double log_den = 0.0;
  for (auto it = parts.rbegin(); it != parts.rend(); ++it) {
    detail::require(*it >= 1, "dt_pmf: parts must be positive");
    n += *it;
    log_den += std::log(static_cast<double>(n));
  }
  const auto k = static_cast<double>(parts.size());
  return std::exp(detail::log_factorial(n) + k * std::log(theta) - specfun::log_pochhammer(theta, n) - log_den);
}

inline constexpr std::int64_t kMaxPartitionN = 25;
inline constexpr std::int64_t kMaxCompositionN = 14;

/// Visits every partition of n, largest first part first, as multiplicities.
template <class Fn>
void enumerate_partitions(std::int64_t n, Fn&& fn) {
  if (n < 1 || n > kMaxPartitionN)
    throw SizeError("enumerate_partitions: n must lie in [1, 25], got " + std::to_string(n));
  Multiplicities m;
  auto rec = [&](auto& self, std::int64_t rest, std::int64_t cap) -> void {
    if (rest == 0) {
      fn(static_cast<const Multiplicities&>(m));
      return;
    }
    for (std::int64_t p = std::min(rest, cap); p >= 1; --p) {
      ++m[p];
      self(self, rest - p, p);
      if (--m[p] == 0) m.erase(p);
    }
  };
  rec(rec, n, n);
}

/// Visits every composition of n, first part 1 first.
template <class Fn>
void enumerate_compositions(std::int64_t n, Fn&& fn) {
  if (n < 1 || n > kMaxCompositionN)
    throw SizeError("enumerate_compositions: n must lie in [1, 14], got " + std::to_string(n));
  std::vector<std::int64_t> parts;
  auto rec = [&](auto& self, std::int64_t rest) -> void {
    if (rest == 0) {
      fn(static_cast<const std::vector<std::int64_t>&>(parts));
      return;
    }
    for (std::int64_t f = 1; f <= rest; ++f) {
      parts.push_back(f);
      self(self, rest - f);
      parts.pop_back();
    }
  };
  rec(rec, n);
}

/// Bit j-1 set iff a partial sum equals j, for j < n. A bijection from
/// compositions of n onto [0, 2^{n-1}).
inline std::uint64_t composition_index(const std::vector<std::int64_t>& parts) {
  std::uint64_t idx = 0;
  std::int64_t s = 0;
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    s += parts[i];
    idx |= std::uint64_t{1} << (s - 1);
  }
  return idx;
}

inline std::vector<std::int64_t> composition_from_index(std::uint64_t idx, std::int64_t n) {
  std::vector<std::int64_t> parts;
  std::int64_t last = 0;
  for (std::int64_t j = 1; j < n; ++j)
    if (idx >> (j - 1) & 1U) {
      parts.push_back(j - last);
      last = j;
    }
  parts.push_back(n - last);
  return parts;
}

/// P(G_{i:n} > 0) = theta / (i + theta) for every n >= i.
inline double indicator_prob(double theta, std::int64_t i) {
  detail::require(theta > 0.0, "indicator_prob: theta must be positive");
  detail::require(i >= 1, "indicator_prob: i must be at least 1");
  return theta / (static_cast<double>(i) + theta);
}

/// X_{1:n} - 1 ~ geometric(n / (n + theta)).
inline GeometricLaw min_law(double theta, std::int64_t n) {
  detail::require(theta > 0.0, "min_law: theta must be positive");
  detail::require(n >= 1, "min_law: n must be at least 1");
  return {static_cast<double>(n) / (static_cast<double>(n) + theta)};
}

/// tau_i(b, theta) = (b + i - 1) / (b + i - 1 + theta), i = 1..n.
inline std::vector<GeometricLaw> beta_stopped_geom_params(double theta, double b, std::int64_t n) {
  detail::require(theta > 0.0, "beta_stopped_geom_params: theta must be positive");
  detail::require(b > 0.0, "beta_stopped_geom_params: b must be positive");
  detail::require(n >= 1, "beta_stopped_geom_params: n must be at least 1");
  std::vector<GeometricLaw> out;
  for (std::int64_t i = 1; i <= n; ++i) {
    const double c = b + static_cast<double>(i) - 1.0;
    out.push_back({c / (c + theta)});
  }
  return out;
}

/// g(z) = Gamma(1+theta) Gamma(1+(1-z) theta) / Gamma(1+(2-z) theta), the pgf
/// of the limiting number of missing values. Finite for z < 1 + 1/theta.
inline double k0inf_pgf(double theta, double z) {
  detail::require(theta > 0.0, "k0inf_pgf: theta must be positive");
  detail::require(z < 1.0 + 1.0 / theta, "k0inf_pgf: z must be below 1 + 1/theta");
  return std::exp(specfun::log_gamma(1.0 + theta) + specfun::log_gamma(1.0 + (1.0 - z) * theta) -
                  specfun::log_gamma(1.0 + (2.0 - z) * theta));
}

inline double complete_sample_prob(double theta) { return k0inf_pgf(theta, 0.0); }

/// Coefficients of log g(z) - log g(0):
/// lambda_1 = theta (psi(1+2 theta) - psi(1+theta)),
/// lambda_k = theta^k / k (zeta(k, 1+theta) - zeta(k, 1+2 theta)).
inline std::vector<double> k0inf_levy_atoms(double theta, std::int64_t kmax) {
  detail::require(theta > 0.0, "k0inf_levy_atoms: theta must be positive");
  detail::require(kmax >= 1, "k0inf_levy_atoms: kmax must be at least 1");
  std::vector<double> lam(static_cast<std::size_t>(kmax));
  lam[0] = theta * (specfun::digamma(1.0 + 2.0 * theta) - specfun::digamma(1.0 + theta));
  for (std::int64_t k = 2; k <= kmax; ++k) {
    const double dk = static_cast<double>(k);
    const double log_pref = dk * std::log(theta) - std::log(dk);
    const double diff = specfun::hurwitz_zeta(dk, 1.0 + theta) - specfun::hurwitz_zeta(dk, 1.0 + 2.0 * theta);
    lam[static_cast<std::size_t>(k - 1)] = diff > 0.0 ? std::exp(log_pref + std::log(diff)) : 0.0;
  }
  return lam;
}

/// Limit law of K_{0:n}, by the compound-Poisson recursion
/// m p_m = sum_j j lambda_j p_{m-j}; truncated by a Chernoff bound on the pgf.
inline DiscretePmf k0inf_pmf(double theta, double tol = 1e-10) {
  detail::require(theta > 0.0, "k0inf_pmf: theta must be positive");
  detail::require(tol > 0.0, "k0inf_pmf: tol must be positive");
  const double t_max = std::log1p(1.0 / theta);
  auto log_mgf = [&](double t) { return std::log(k0inf_pgf(theta, std::exp(t))); };
  auto tail_beyond = [&](std::int64_t k) {
    return gemgaps::detail::chernoff_bound(log_mgf, static_cast<double>(k + 1), t_max);
  };
  std::int64_t K = 8;
  while (tail_beyond(K) > tol) K *= 2;
  std::int64_t lo = K / 2;
  while (lo < K) {
    const std::int64_t mid = lo + (K - lo) / 2;
    if (tail_beyond(mid) <= tol) K = mid;
    else lo = mid + 1;
  }
  const auto lam = k0inf_levy_atoms(theta, std::max<std::int64_t>(K, 1));
  DiscretePmf out;
  out.probs.assign(static_cast<std::size_t>(K + 1), 0.0);
  out.probs[0] = complete_sample_prob(theta);
  for (std::int64_t m = 1; m <= K; ++m) {
    double s = 0.0;
    for (std::int64_t j = 1; j <= m; ++j)
      s += static_cast<double>(j) * lam[static_cast<std::size_t>(j - 1)] * out.probs[static_cast<std::size_t>(m - j)];
    out.probs[static_cast<std::size_t>(m)] = s / static_cast<double>(m);
  }
  out.tail_bound = tail_beyond(K);
  return out;
}

/// Law of sum_{i=1}^{factors} (G_i - 1)_+ with G_i ~ geometric(i / (i + theta)),
/// on {0..kmax}, by direct convolution.
inline std::vector<double> k0_factor_convolution(double theta, std::int64_t factors, std::int64_t kmax) {
  detail::require(theta > 0.0, "k0_factor_convolution: theta must be positive");
  std::vector<double> f(static_cast<std::size_t>(kmax + 1), 0.0);
  f[0] = 1.0;
  for (std::int64_t i = 1; i <= factors; ++i) {
    const double p = static_cast<double>(i) / (static_cast<double>(i) + theta);
    const double q = 1.0 - p;
    // (G - 1)_+ has P(0) = 1 - q^2 and P(k) = p q^{k+1}
    std::vector<double> h(f.size());
    h[0] = 1.0 - q * q;
    for (std::size_t k = 1; k < h.size(); ++k) h[k] = p * std::pow(q, static_cast<double>(k + 1));
    std::vector<double> g(f.size(), 0.0);
    for (std::size_t a = 0; a < f.size(); ++a)
      for (std::size_t b = 0; a + b < f.size(); ++b) g[a + b] += f[a] * h[b];
    f = std::move(g);
  }
  return f;
}

/// P(L_inf > k) = k! / (1 + theta)_k.
inline double linf_tail(double theta, std::int64_t k) {
  detail::require(theta > 0.0, "linf_tail: theta must be positive");
  detail::require(k >= 0, "linf_tail: k must be non-negative");
  if (k < 64) {
    double p = 1.0;
    for (std::int64_t i = 1; i <= k; ++i) p *= static_cast<double>(i) / (static_cast<double>(i) + theta);
    return p;
  }
  return std::exp(specfun::log_gamma(static_cast<double>(k) + 1.0) + specfun::log_gamma(1.0 + theta) -
                  specfun::log_gamma(1.0 + theta + static_cast<double>(k)));
}

inline double linf_mean(double theta) {
  detail::require(theta > 0.0, "linf_mean: theta must be positive");
  return theta > 1.0 ? theta / (theta - 1.0) : std::numeric_limits<double>::infinity();
}

/// E C(L_inf, 2).
inline double linf_second_binom(double theta) {
  detail::require(theta > 0.0, "linf_second_binom: theta must be positive");
  return theta > 2.0 ? theta / ((theta - 1.0) * (theta - 2.0)) : std::numeric_limits<double>::infinity();
}

struct SeriesResult {
  double value = 0.0;
  double remainder_estimate = 0.0;
  std::int64_t terms = 0;
};

/// E C(L_inf, r) = sum_{k >= 0} C(k, r-1) P(L_inf > k), summed numerically.
/// Terms decay like k^{r-1-theta}; the remainder is estimated from that power law.
inline SeriesResult linf_binom_moment_series(double theta, std::int64_t r, double tol = 1e-12) {
  detail::require(r >= 1, "linf_binom_moment_series: r must be at least 1");
  detail::require(theta > static_cast<double>(r), "linf_binom_moment_series: requires theta > r");
  SeriesResult out;
  double tail = 1.0;
  detail::CompensatedSum acc;
  for (std::int64_t k = 0;; ++k) {
    if (k > 0) tail *= static_cast<double>(k) / (static_cast<double>(k) + theta);
    double c = 1.0;
    for (std::int64_t i = 0; i < r - 1; ++i) c *= static_cast<double>(k - i) / static_cast<double>(i + 1);
    const double t = c * tail;
    acc.add(t);
    const double dk = static_cast<double>(k);
    const double rem = t * (dk + theta) / (theta - static_cast<double>(r));
    if (k > 10 * static_cast<std::int64_t>(theta) + 10 * r && rem < tol) {
      out.value = acc.value();
      out.remainder_estimate = rem;
      out.terms = k + 1;
      return out;
    }
    if (k > 100'000'000) throw ConvergenceError("linf_binom_moment_series: series converges too slowly");
  }
}

struct BetaLogSeries {
  /// (Bernoulli parameter b / (a + b + j), exponential rate a + j), j = 0..jmax.
  std::vector<std::pair<double, double>> terms;
  /// sum_{j > jmax} b / ((a + b + j)(a + j)) = psi(a + b + jmax + 1) - psi(a + jmax + 1).
  double tail_mean = 0.0;
};

inline double beta_log_series_tail_mean(double a, double b, std::int64_t jmax) {
  const double j1 = static_cast<double>(jmax) + 1.0;
  return specfun::digamma(a + b + j1) - specfun::digamma(a + j1);
}

inline BetaLogSeries beta_log_series_params(double a, double b, std::int64_t jmax) {
  detail::require(a > 0.0 && b > 0.0, "beta_log_series_params: a and b must be positive");
  detail::require(jmax >= 0, "beta_log_series_params: jmax must be non-negative");
  BetaLogSeries out;
  out.terms.reserve(static_cast<std::size_t>(jmax + 1));
  for (std::int64_t j = 0; j <= jmax; ++j) {
    const double dj = static_cast<double>(j);
    out.terms.emplace_back(b / (a + b + dj), a + dj);
  }
  out.tail_mean = beta_log_series_tail_mean(a, b, jmax);
  return out;
}

/// Smallest jmax whose truncation tail mean is below tail_tol.
inline std::int64_t beta_log_series_jmax(double a, double b, double tail_tol) {
  detail::require(a > 0.0 && b > 0.0, "beta_log_series_jmax: a and b must be positive");
  detail::require(tail_tol > 0.0, "beta_log_series_jmax: tolerance must be positive");
  std::int64_t hi = 1;
  while (beta_log_series_tail_mean(a, b, hi) >= tail_tol) hi *= 2;
  std::int64_t lo = 0;
  while (lo < hi) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (beta_log_series_tail_mean(a, b, mid) < tail_tol) hi = mid;
    else lo = mid + 1;
  }
  return hi;
}

}  // namespace gemgaps::exact
