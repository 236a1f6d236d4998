#pragma once

// Real special functions and semi-infinite oscillatory quadrature.
//
// Everything here is a pure function of its arguments. Tables that are
// computed on first use live in function-local statics, which C++ guarantees
// to initialize exactly once.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "gemgaps/errors.hpp"

namespace gemgaps::specfun {

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

struct QuadratureResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  long evaluations = 0;
};

// ---------------------------------------------------------------------------
// Hurwitz zeta and digamma

/// Hurwitz zeta function zeta(s, q) = sum_{k>=0} (k+q)^{-s} for s > 1, q > 0.
/// Direct summation followed by an Euler-Maclaurin tail.
inline double hurwitz_zeta(double s, double q) {
  gemgaps::detail::require(s > 1.0, "hurwitz_zeta: requires s > 1");
  gemgaps::detail::require(q > 0.0, "hurwitz_zeta: requires q > 0");
  // (2j)! / B_{2j} for j = 1..12
  static constexpr std::array<double, 12> kA = {
      12.0,
      -720.0,
      30240.0,
      -1209600.0,
      47900160.0,
      -1.8924375803183791606e9,
      7.47242496e10,
      -2.950130727918164224e12,
      1.1646782814350067249e14,
      -4.5979787224074726105e15,
      1.8152105401943546773e17,
      -7.1661652561756670113e18};
  constexpr double eps = std::numeric_limits<double>::epsilon();

  double sum = std::pow(q, -s);
  double a = q;
  double b = 0.0;
  int i = 0;
  while (i < 9 || a <= 9.0) {
    ++i;
    a += 1.0;
    b = std::pow(a, -s);
    sum += b;
    if (std::fabs(b / sum) < eps) return sum;
  }
  const double w = a;
  sum += b * w / (s - 1.0);
  sum -= 0.5 * b;
  double fac = 1.0;
  double k = 0.0;
  for (double coef : kA) {
    fac *= s + k;
    b /= w;
    const double t = fac * b / coef;
    sum += t;
    if (std::fabs(t / sum) < eps) break;
    k += 1.0;
    fac *= s + k;
    b /= w;
    k += 1.0;
  }
  return sum;
}

/// Digamma function psi(x) for x > 0.
inline double digamma(double x) {
  gemgaps::detail::require(x > 0.0, "digamma: requires x > 0");
  double shift = 0.0;
  while (x < 10.0) {
    shift -= 1.0 / x;
    x += 1.0;
  }
  const double inv2 = 1.0 / (x * x);
  // B_{2k} / (2k) for k = 1..7
  static constexpr std::array<double, 7> kB = {
      1.0 / 12.0, -1.0 / 120.0,          1.0 / 252.0, -1.0 / 240.0,
      1.0 / 132.0, -691.0 / 32760.0, 1.0 / 12.0};
  double series = 0.0;
  double p = inv2;
  for (double c : kB) {
    series += c * p;
    p *= inv2;
  }
  return shift + std::log(x) - 0.5 / x - series;
}

// ---------------------------------------------------------------------------
// Log-gamma

namespace detail {

// zeta(k) - 1 for k = 0..kLogGammaTerms-1 (entries 0 and 1 unused).
inline constexpr int kLogGammaTerms = 40;

inline const std::array<double, kLogGammaTerms>& zeta_minus_one_table() {
  static const std::array<double, kLogGammaTerms> table = [] {
    std::array<double, kLogGammaTerms> t{};
    for (int k = 2; k < kLogGammaTerms; ++k) t[k] = hurwitz_zeta(k, 2.0);
    return t;
  }();
  return table;
}

// ln Gamma(1 + e) for |e| <= 0.5, from the Taylor series of ln Gamma at 1
// with the zeta(k) - 1 tail split off.
inline double log_gamma_1p(double e) {
  const auto& z = zeta_minus_one_table();
  double sum = 0.0;
  double p = e * e;
  for (int k = 2; k < kLogGammaTerms; ++k) {
    const double term = z[k] * p / k;
    sum += (k % 2 == 0) ? term : -term;
    if (std::fabs(term) < 1e-18 * std::fabs(sum)) break;
    p *= e;
  }
  return (1.0 - kEulerGamma) * e - std::log1p(e) + sum;
}

inline double log_gamma_lanczos(double x) {
  static constexpr double g = 7.0;
  static constexpr std::array<double, 9> c = {
      0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
      771.32342877765313,      -176.61502916214059,   12.507343278686905,
      -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
  const double z = x - 1.0;
  double a = c[0];
  for (int i = 1; i < 9; ++i) a += c[i] / (z + i);
  const double t = z + g + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) -
         t + std::log(a);
}

}  // namespace detail

/// Natural log of the gamma function for x > 0.
///
/// A Lanczos sum handles x > 2.5. Below that the Taylor series of
/// ln Gamma(1 + e) keeps full relative accuracy around the zeros at 1 and 2.
inline double log_gamma(double x) {
  if (!(x > 0.0)) throw DomainError("log_gamma: requires x > 0");
  if (x > 2.5) return detail::log_gamma_lanczos(x);
  if (x > 1.5) return std::log1p(x - 2.0) + detail::log_gamma_1p(x - 2.0);
  if (x >= 0.5) return detail::log_gamma_1p(x - 1.0);
  return detail::log_gamma_1p(x) - std::log(x);
}

/// Rising factorial (x)_n as a direct product of n factors.
inline double pochhammer(double x, std::int64_t n) {
  gemgaps::detail::require(n >= 0, "pochhammer: requires n >= 0");
  double p = 1.0;
  for (std::int64_t i = 0; i < n; ++i) p *= x + static_cast<double>(i);
  return p;
}

/// ln (x)_n for x > 0.
inline double log_pochhammer(double x, std::int64_t n) {
  gemgaps::detail::require(x > 0.0 && n >= 0, "log_pochhammer: requires x > 0, n >= 0");
  if (n < 64) {
    double s = 0.0;
    for (std::int64_t i = 0; i < n; ++i) s += std::log(x + static_cast<double>(i));
    return s;
  }
  return log_gamma(x + static_cast<double>(n)) - log_gamma(x);
}

// ---------------------------------------------------------------------------
// Gauss hypergeometric function

namespace detail {

inline bool is_nonpositive_integer(double c) {
  return c <= 0.0 && c == std::floor(c);
}

inline double hyp2f1_series(double a, double b, double c, double z) {
  double term = 1.0;
  double sum = 1.0;
  int small = 0;
  for (long k = 0; k < 1'000'000; ++k) {
    const double kd = static_cast<double>(k);
    term *= (a + kd) * (b + kd) / ((c + kd) * (kd + 1.0)) * z;
    sum += term;
    if (term == 0.0) return sum;
    if (std::fabs(term) < 1e-16 * std::fabs(sum)) {
      if (++small >= 3) return sum;
    } else {
      small = 0;
    }
  }
  throw ConvergenceError("hyp2f1: series did not converge");
}

}  // namespace detail

/// Gauss hypergeometric function 2F1(a, b; c; z) for real z < 1.
///
/// Arguments below -1/2 are mapped into (1/3, 1) by the Pfaff transformation
/// 2F1(a,b;c;z) = (1-z)^{-a} 2F1(a, c-b; c; z/(z-1)).
inline double hyp2f1(double a, double b, double c, double z) {
  if (detail::is_nonpositive_integer(c))
    throw DomainError("hyp2f1: c must not be a non-positive integer");
  if (!(z < 1.0)) throw DomainError("hyp2f1: requires z < 1");
  if (z == 0.0) return 1.0;
  if (z < -0.5) {
    const double w = z / (z - 1.0);
    return std::pow(1.0 - z, -a) * detail::hyp2f1_series(a, c - b, c, w);
  }
  return detail::hyp2f1_series(a, b, c, z);
}

// ---------------------------------------------------------------------------
// Bessel function of the first kind

namespace detail {

inline double bessel_j_series(double nu, double x) {
  if (x == 0.0) return nu == 0.0 ? 1.0 : 0.0;
  using ld = long double;
  const ld half = static_cast<ld>(x) / 2;
  const ld q = half * half;
  ld term = std::exp(static_cast<ld>(nu) * std::log(half) -
                     static_cast<ld>(log_gamma(nu + 1.0)));
  ld sum = term;
  ld peak = std::fabs(term);
  for (int k = 1; k < 500; ++k) {
    term *= -q / (static_cast<ld>(k) * (static_cast<ld>(k) + nu));
    sum += term;
    peak = std::max(peak, std::fabs(term));
    if (std::fabs(term) < 1e-21L * peak && std::fabs(term) < 1e-21L) break;
  }
  return static_cast<double>(sum);
}

// Hankel large-argument expansion, summed until the terms stop decreasing.
inline double bessel_j_asymptotic(double nu, double x) {
  const double mu = 4.0 * nu * nu;
  const double inv8x = 1.0 / (8.0 * x);
  double p = 1.0;
  double q = 0.0;
  double t = 1.0;
  double prev = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double next = t * (mu - odd * odd) * inv8x / k;
    if (next == 0.0) break;
    if (std::fabs(next) >= prev) break;
    prev = std::fabs(next);
    t = next;
    switch (k % 4) {
      case 1: q += t; break;
      case 2: p -= t; break;
      case 3: q -= t; break;
      default: p += t; break;
    }
    if (std::fabs(t) < 1e-17) break;
  }
  const double chi = x - (0.5 * nu + 0.25) * std::numbers::pi;
  return std::sqrt(2.0 / (std::numbers::pi * x)) *
         (p * std::cos(chi) - q * std::sin(chi));
}

inline constexpr double kBesselSeriesLimit = 20.0;

}  // namespace detail

/// Bessel function J_nu(x) for nu >= 0, x >= 0.
///
/// The power series (in extended precision) covers x <= 20 and x <= nu.
/// Beyond that the Hankel expansion gives J at the fractional orders
/// mu and mu + 1, and forward recurrence, stable because the order stays
/// below x, climbs to nu.
inline double bessel_j(double nu, double x) {
  if (nu < 0.0 || x < 0.0) throw DomainError("bessel_j: requires nu >= 0 and x >= 0");
  if (x <= detail::kBesselSeriesLimit || x <= nu) return detail::bessel_j_series(nu, x);
  const double whole = std::floor(nu);
  const double mu = nu - whole;
  double jm = detail::bessel_j_asymptotic(mu, x);
  if (whole == 0.0) return jm;
  double j = detail::bessel_j_asymptotic(mu + 1.0, x);
  for (double order = mu + 1.0; order < nu - 0.5; order += 1.0) {
    const double next = 2.0 * order / x * j - jm;
    jm = j;
    j = next;
  }
  return j;
}

/// Successive positive zeros of J_nu.
///
/// Each zero starts from the McMahon expansion; the guess is accepted only if
/// it brackets a sign change close enough to the previous zero that no zero
/// can be skipped (consecutive zeros of J_nu, nu >= 0, are more than 2.8
/// apart). Otherwise the bracket is found by scanning. Bisection refines it.
class BesselZeros {
 public:
  explicit BesselZeros(double nu) : nu_(nu), prev_(nu) {
    gemgaps::detail::require(nu >= 0.0, "BesselZeros: requires nu >= 0");
  }

  double next() {
    ++k_;
    const double start = k_ == 1 ? prev_ : prev_ + 0.3;
    double lo = 0.0;
    double hi = 0.0;
    const double guess = mcmahon(k_);
    if (guess - 0.5 > start && guess - 0.5 - prev_ < 2.8 &&
        sign_change(guess - 0.5, guess + 0.5)) {
      lo = guess - 0.5;
      hi = guess + 0.5;
    } else {
      lo = start;
      hi = lo + 0.5;
      while (!sign_change(lo, hi)) {
        lo = hi;
        hi += 0.5;
      }
    }
    prev_ = bisect(lo, hi);
    return prev_;
  }

  int count() const { return k_; }

 private:
  double mcmahon(int k) const {
    const double mu = 4.0 * nu_ * nu_;
    const double beta = (k + 0.5 * nu_ - 0.25) * std::numbers::pi;
    const double e = 8.0 * beta;
    return beta - (mu - 1.0) / e - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * e * e * e);
  }

  bool sign_change(double a, double b) const {
    return std::signbit(bessel_j(nu_, a)) != std::signbit(bessel_j(nu_, b));
  }

  double bisect(double lo, double hi) const {
    double flo = bessel_j(nu_, lo);
    for (int i = 0; i < 200 && hi - lo > 4e-16 * hi; ++i) {
      const double mid = 0.5 * (lo + hi);
      const double fm = bessel_j(nu_, mid);
      if (fm == 0.0) return mid;
      if (std::signbit(fm) == std::signbit(flo)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  }

  double nu_;
  double prev_;
  int k_ = 0;
};

// ---------------------------------------------------------------------------
// Normal and incomplete gamma

/// Standard normal CDF.
inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

/// Regularized upper incomplete gamma Q(a, x).
inline double regularized_gamma_q(double a, double x) {
  gemgaps::detail::require(a > 0.0 && x >= 0.0, "regularized_gamma_q: requires a > 0, x >= 0");
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  const double log_prefix = -x + a * std::log(x) - log_gamma(a);
  constexpr double eps = 1e-16;
  if (x < a + 1.0) {
    double ap = a;
    double del = 1.0 / a;
    double sum = del;
    for (int n = 0; n < 100000; ++n) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::fabs(del) < std::fabs(sum) * eps) break;
    }
    return std::max(0.0, 1.0 - sum * std::exp(log_prefix));
  }
  // Lentz continued fraction
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 100000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < eps) break;
  }
  return std::exp(log_prefix) * h;
}

// ---------------------------------------------------------------------------
// Gauss-Kronrod quadrature

namespace detail {

inline constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
inline constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
// Gauss weights for the odd-indexed Kronrod nodes 1, 3, 5, 7, 9.
inline constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel {
  double a;
  double b;
  double value;
  double error;
};

template <class F>
Panel gk21(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kron = fc * kWgk[10];
  double gauss = 0.0;
  for (int j = 0; j < 10; ++j) {
    const double dx = half * kXgk[j];
    const double s = f(center - dx) + f(center + dx);
    kron += kWgk[j] * s;
    if (j % 2 == 1) gauss += kWg[j / 2] * s;
  }
  return {a, b, kron * half, std::fabs((kron - gauss) * half)};
}

}  // namespace detail

/// Globally adaptive 21-point Gauss-Kronrod on [a, b]. The error estimate
/// is the Kronrod-minus-Gauss difference, which is conservative for smooth
/// integrands.
template <class F>
QuadratureResult gauss_kronrod(F&& f, double a, double b, double abs_tol,
                               double rel_tol = 1e-13, int max_panels = 400) {
  std::vector<detail::Panel> panels;
  panels.push_back(detail::gk21(f, a, b));
  long evals = 21;
  auto totals = [&] {
    double v = 0.0;
    double e = 0.0;
    for (const auto& p : panels) {
      v += p.value;
      e += p.error;
    }
    return std::pair{v, e};
  };
  auto [value, error] = totals();
  while (error > std::max(abs_tol, rel_tol * std::fabs(value)) &&
         static_cast<int>(panels.size()) < max_panels) {
    auto worst = std::max_element(panels.begin(), panels.end(),
                                  [](const auto& l, const auto& r) { return l.error < r.error; });
    const double mid = 0.5 * (worst->a + worst->b);
    if (!(mid > worst->a && mid < worst->b)) break;
    const double lo = worst->a;
    const double hi = worst->b;
    *worst = detail::gk21(f, lo, mid);
    panels.push_back(detail::gk21(f, mid, hi));
    evals += 42;
    std::tie(value, error) = totals();
  }
  return {value, error, evals};
}

// ---------------------------------------------------------------------------
// Semi-infinite Bessel-weighted integrals

struct TailQuadratureOptions {
  enum class Kernel { bessel, unit };

  /// Absolute tolerance on the integral.
  double tol = 1e-8;
  int panel_budget = 10000;
  /// `unit` replaces J_nu by 1; panels then have fixed width.
  Kernel kernel = Kernel::bessel;
  double unit_panel_width = 1.0;
  /// The first panel is integrated in t with v = v1 * t^p, which removes
  /// integrable power singularities v^{-1+1/p} at the origin.
  double first_panel_power = 5.0;
  int min_panels = 8;
};

/// Integral over (0, inf) of f(v) * J_nu(scale * v).
///
/// Panels run between consecutive zeros of J_nu(scale * v), so their
/// integrals alternate in sign; partial sums are accelerated by repeated
/// averaging (Euler transform) until successive estimates agree within tol.
template <class F>
QuadratureResult integrate_bessel_tail(F&& f_smooth, double nu, double scale,
                                       const TailQuadratureOptions& opt = {}) {
  using Kernel = TailQuadratureOptions::Kernel;
  gemgaps::detail::require(opt.tol > 0.0, "integrate_bessel_tail: tol must be positive");
  gemgaps::detail::require(opt.panel_budget >= 2, "integrate_bessel_tail: panel budget too small");
  const bool bessel = opt.kernel == Kernel::bessel;
  if (bessel) {
    gemgaps::detail::require(nu >= 0.0, "integrate_bessel_tail: requires nu >= 0");
    gemgaps::detail::require(scale > 0.0, "integrate_bessel_tail: requires scale > 0");
  } else {
    gemgaps::detail::require(opt.unit_panel_width > 0.0, "integrate_bessel_tail: panel width must be positive");
  }

  auto integrand = [&](double v) {
    const double fv = f_smooth(v);
    if (fv == 0.0) return 0.0;
    return bessel ? fv * bessel_j(nu, scale * v) : fv;
  };

  std::optional<BesselZeros> zeros;
  if (bessel) zeros.emplace(nu);
  auto next_edge = [&](int k) {
    return bessel ? zeros->next() / scale : (k + 1) * opt.unit_panel_width;
  };

  const double panel_tol = 0.01 * opt.tol;
  QuadratureResult out;

  // first panel, substituted
  double left = 0.0;
  double right = next_edge(0);
  {
    const double p = opt.first_panel_power;
    auto g = [&](double t) {
      if (t <= 0.0) return 0.0;
      const double tp1 = std::pow(t, p - 1.0);
      return integrand(right * tp1 * t) * right * p * tp1;
    };
    const auto r = gauss_kronrod(g, 0.0, 1.0, panel_tol);
    out.value = r.value;
    out.abs_error_estimate = r.abs_error_estimate;
    out.evaluations = r.evaluations;
  }

  std::vector<double> partial{out.value};
  std::vector<double> terms{out.value};
  double quad_error = out.abs_error_estimate;

  auto euler_estimate = [&]() {
    const std::size_t depth = std::min<std::size_t>(partial.size(), 20);
    std::vector<double> s(partial.end() - static_cast<std::ptrdiff_t>(depth), partial.end());
    for (std::size_t level = 1; level < depth; ++level)
      for (std::size_t i = 0; i + level < depth; ++i) s[i] = 0.5 * (s[i] + s[i + 1]);
    return s[0];
  };

  std::vector<double> estimates;
  for (int k = 1; k < opt.panel_budget; ++k) {
    left = right;
    right = next_edge(k);
    const auto r = gauss_kronrod(integrand, left, right, panel_tol);
    out.evaluations += r.evaluations;
    quad_error += r.abs_error_estimate;
    terms.push_back(r.value);
    partial.push_back(partial.back() + r.value);

    if (bessel) {
      estimates.push_back(euler_estimate());
      const std::size_t m = estimates.size();
      if (k >= opt.min_panels && m >= 3) {
        const double d1 = std::fabs(estimates[m - 1] - estimates[m - 2]);
        const double d2 = std::fabs(estimates[m - 2] - estimates[m - 3]);
        if (d1 < 0.5 * opt.tol && d2 < 0.5 * opt.tol) {
          out.value = estimates.back();
          out.abs_error_estimate = 2.0 * std::max(d1, d2) + quad_error;
          return out;
        }
      }
    } else if (k >= opt.min_panels) {
      const double a1 = std::fabs(terms[k]);
      const double a0 = std::fabs(terms[k - 1]);
      if (a0 > 0.0 && a1 < a0) {
        const double ratio = a1 / a0;
        const double tail = a1 * ratio / (1.0 - ratio);
        if (tail < 0.5 * opt.tol && a1 < opt.tol) {
          out.value = partial.back();
          out.abs_error_estimate = tail + a1 + quad_error;
          return out;
        }
      } else if (a1 == 0.0 && a0 == 0.0) {
        out.value = partial.back();
        out.abs_error_estimate = quad_error;
        return out;
      }
    }
  }
  throw ConvergenceError("integrate_bessel_tail: tail did not converge within " +
                         std::to_string(opt.panel_budget) + " panels");
}

}  // namespace gemgaps::specfun
