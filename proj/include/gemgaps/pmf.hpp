#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "gemgaps/errors.hpp"

namespace gemgaps {

/// Truncated pmf on {offset, offset + 1, ...}; tail_bound bounds the mass
/// beyond the last stored point.
struct DiscretePmf {
  std::vector<double> probs;
  double tail_bound = 0.0;
  std::int64_t support_offset = 0;

  std::int64_t last() const { return support_offset + static_cast<std::int64_t>(probs.size()) - 1; }

  double prob(std::int64_t k) const {
    const std::int64_t i = k - support_offset;
    if (i < 0 || i >= static_cast<std::int64_t>(probs.size())) return 0.0;
    return probs[static_cast<std::size_t>(i)];
  }

  /// P(X <= k) over the stored points.
  double cdf(std::int64_t k) const {
    double s = 0.0;
    for (std::int64_t j = support_offset; j <= std::min(k, last()); ++j) s += prob(j);
    return s;
  }

  double stored_mass() const {
    double s = 0.0;
    for (double p : probs) s += p;
    return s;
  }

  double mean() const {
    double s = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i)
      s += probs[i] * static_cast<double>(support_offset + static_cast<std::int64_t>(i));
    return s;
  }
};

/// P(G = k) = p (1-p)^k on k >= 0.
struct GeometricLaw {
  double p = 1.0;

  double pmf(std::int64_t k) const { return k < 0 ? 0.0 : p * std::pow(1.0 - p, static_cast<double>(k)); }
  /// P(G >= k).
  double tail(std::int64_t k) const { return k <= 0 ? 1.0 : std::pow(1.0 - p, static_cast<double>(k)); }
  double mean() const { return (1.0 - p) / p; }
  bool operator==(const GeometricLaw&) const = default;
};

namespace detail {

/// min over t in (0, t_max) of log_mgf(t) - level * t, by golden section on
/// a convex objective. Returns the bound exp(min) on P(S >= level), capped at 1.
inline double chernoff_bound(const std::function<double(double)>& log_mgf, double level, double t_max) {
  auto obj = [&](double t) { return log_mgf(t) - level * t; };
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double lo = 0.0;
  double hi = t_max;
  double x1 = hi - phi * (hi - lo);
  double x2 = lo + phi * (hi - lo);
  double f1 = obj(x1);
  double f2 = obj(x2);
  for (int it = 0; it < 200 && hi - lo > 1e-12 * t_max; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = obj(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = obj(x2);
    }
  }
  const double best = std::min(f1, f2);
  return std::isfinite(best) ? std::min(1.0, std::exp(best)) : 1.0;
}

}  // namespace detail

/// Single geometric law truncated so that P(G > last) <= tol.
inline DiscretePmf geometric_pmf(const GeometricLaw& law, double tol = 1e-10) {
  detail::require(law.p > 0.0 && law.p <= 1.0, "geometric_pmf: p must lie in (0, 1]");
  detail::require(tol > 0.0, "geometric_pmf: tol must be positive");
  DiscretePmf out;
  for (std::int64_t k = 0;; ++k) {
    out.probs.push_back(law.pmf(k));
    if (law.tail(k + 1) <= tol) {
      out.tail_bound = law.tail(k + 1);
      return out;
    }
  }
}

/// Law of a sum of independent geometrics, q_k = p f_k + (1-p) q_{k-1} per
/// factor. Truncation point chosen from a Chernoff bound on the sum.
inline DiscretePmf geometric_sum_pmf(const std::vector<GeometricLaw>& laws, double tol = 1e-10) {
  detail::require(tol > 0.0, "geometric_sum_pmf: tol must be positive");
  double q_min = 1.0;
  double mean = 0.0;
  double var = 0.0;
  for (const auto& l : laws) {
    detail::require(l.p > 0.0 && l.p <= 1.0, "geometric_sum_pmf: every p must lie in (0, 1]");
    mean += l.mean();
    var += (1.0 - l.p) / (l.p * l.p);
    q_min = std::min(q_min, l.p);
  }
  DiscretePmf out;
  if (q_min >= 1.0) {
    out.probs = {1.0};
    return out;
  }
  // log E e^{tS} is finite for t < -log(1 - p_min)
  const double t_max = -std::log1p(-q_min);
  auto log_mgf = [&](double t) {
    double s = 0.0;
    for (const auto& l : laws) {
      const double den = 1.0 - (1.0 - l.p) * std::exp(t);
      if (den <= 0.0) return std::numeric_limits<double>::infinity();
      s += std::log(l.p) - std::log(den);
    }
    return s;
  };
  auto tail_beyond = [&](std::int64_t k) {
    return detail::chernoff_bound(log_mgf, static_cast<double>(k + 1), t_max);
  };
  std::int64_t K = static_cast<std::int64_t>(mean + 10.0 * std::sqrt(var)) + 8;
  while (tail_beyond(K) > tol) K = K + K / 2 + 1;
  // shrink back while the bound still holds
  std::int64_t lo = 0;
  std::int64_t hi = K;
  while (lo < hi) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (tail_beyond(mid) <= tol) hi = mid;
    else lo = mid + 1;
  }
  K = hi;

  std::vector<double> f(static_cast<std::size_t>(K + 1), 0.0);
  f[0] = 1.0;
  for (const auto& l : laws) {
    const double p = l.p;
    double prev = 0.0;
    for (auto& fk : f) {
      prev = p * fk + (1.0 - p) * prev;
      fk = prev;
    }
  }
  out.probs = std::move(f);
  out.tail_bound = tail_beyond(K);
  return out;
}

}  // namespace gemgaps
