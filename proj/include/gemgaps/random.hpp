#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <utility>

namespace gemgaps {

inline constexpr std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// xoshiro256** generator. Satisfies UniformRandomBitGenerator.
class Xoshiro256ss {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256ss(std::uint64_t seed = 0) {
    std::uint64_t sm = seed;
    for (auto& w : s_) w = splitmix64(sm);
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::array<std::uint64_t, 4> s_{};
};

/// Generator for replicate r under a master seed. Streams for distinct
/// (master, r) pairs are seeded from distinct splitmix64 outputs.
inline Xoshiro256ss substream(std::uint64_t master, std::uint64_t r) {
  std::uint64_t a = master;
  const std::uint64_t hm = splitmix64(a);
  std::uint64_t b = r ^ 0x6A09E667F3BCC909ULL;
  const std::uint64_t hr = splitmix64(b);
  return Xoshiro256ss(hm ^ (hr * 0xD1342543DE82EF95ULL));
}

namespace rng {

/// Uniform on [0, 1) with 53 random bits.
template <class G>
double uniform01(G& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

/// Uniform on the open interval (0, 1).
template <class G>
double uniform_open(G& g) {
  return (static_cast<double>(g() >> 11) + 0.5) * 0x1.0p-53;
}

template <class G>
double exponential(G& g) {
  return -std::log(uniform_open(g));
}

template <class G>
double normal(G& g) {
  const double r = std::sqrt(-2.0 * std::log(uniform_open(g)));
  return r * std::cos(2.0 * std::numbers::pi * uniform01(g));
}

template <class G>
bool bernoulli(G& g, double p) {
  return uniform01(g) < p;
}

/// Failures before the first success, P(k) = p (1-p)^k.
template <class G>
double geometric(G& g, double p) {
  if (p >= 1.0) return 0.0;
  if (p <= 0.0) return std::numeric_limits<double>::infinity();
  return std::floor(std::log(uniform_open(g)) / std::log1p(-p));
}

/// log of a gamma(shape, 1) variate. Marsaglia-Tsang; shapes below one use
/// G(a) = G(a+1) U^{1/a}, kept in log space so tiny shapes do not underflow.
template <class G>
double log_gamma_variate(G& g, double shape) {
  if (shape < 1.0) return log_gamma_variate(g, shape + 1.0) + std::log(uniform_open(g)) / shape;
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x;
    double v;
    do {
      x = normal(g);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform_open(g);
    if (u < 1.0 - 0.0331 * x * x * x * x) return std::log(d * v);
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return std::log(d * v);
  }
}

template <class G>
double gamma(G& g, double shape) {
  return std::exp(log_gamma_variate(g, shape));
}

/// (log B, log(1-B)) for B ~ beta(a, b), both accurate near 0 and 1.
template <class G>
std::pair<double, double> log_beta_pair(G& g, double a, double b) {
  const double la = log_gamma_variate(g, a);
  const double lb = log_gamma_variate(g, b);
  const double hi = std::max(la, lb);
  const double lse = hi + std::log1p(std::exp(std::min(la, lb) - hi));
  return {la - lse, lb - lse};
}

template <class G>
double beta(G& g, double a, double b) {
  return std::exp(log_beta_pair(g, a, b).first);
}

}  // namespace rng
}  // namespace gemgaps
