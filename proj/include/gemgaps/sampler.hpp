#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "gemgaps/errors.hpp"
#include "gemgaps/ram.hpp"
#include "gemgaps/random.hpp"

namespace gemgaps {

struct SamplerOptions {
  /// Bars a sequential walker may generate for one sample.
  std::int64_t max_bars = 10'000'000;
  /// Secondary-stream draws allowed in the two-stage sampler.
  double max_tau = 1e12;
  /// `sequential` forces one-bar-at-a-time generation even for GEM(1/2, theta).
  enum class BarMethod { automatic, sequential } bar_method = BarMethod::automatic;
  /// Two-stage route. `automatic` uses the urn for GEM with alpha > 0 and the
  /// explicit realization otherwise.
  enum class TwoStageRoute { automatic, realization, urn } two_stage_route = TwoStageRoute::automatic;
};

/// Box labels X_1..X_n in draw order.
struct Sample {
  std::vector<std::int64_t> values;

  std::size_t n() const { return values.size(); }
  std::vector<std::int64_t> order_statistics() const {
    auto v = values;
    std::sort(v.begin(), v.end());
    return v;
  }
};

/// G_{1:n}, ..., G_{n:n}, top gap first; the last entry is X_{1:n} - 1.
struct GapVector {
  std::vector<std::int64_t> gaps;
};

struct CountsProfile {
  std::int64_t m_n = 0;
  std::int64_t k_n = 0;
  std::map<std::int64_t, std::int64_t> k_j;
  std::int64_t k_0 = 0;
  std::int64_t l_n = 0;
  std::map<std::int64_t, std::int64_t> box_counts;
};

enum class CompositionOrder { value_ordered, appearance_ordered, ranked };

struct Composition {
  std::vector<std::int64_t> parts;
  CompositionOrder order = CompositionOrder::value_ordered;
};

struct Compositions {
  Composition value_ordered;
  Composition appearance_ordered;
  Composition ranked;
};

namespace detail {

// Bars S_j = -sum_{i<=j} log(1 - H_i), one at a time.
template <class G>
class SequentialBars {
 public:
  SequentialBars(const RamSpec& spec, G& g, std::int64_t cap) : spec_(spec), g_(g), cap_(cap) {}

  /// #{j : S_j < level}; levels must be queried in non-decreasing order.
  std::int64_t count_below(double level) {
    for (;;) {
      if (!have_next_) {
        if (j_ >= cap_)
          throw ResourceError("bar generation exceeded the cap of " + std::to_string(cap_) +
                              " bars for " + spec_.describe());
        next_ = s_ - spec_.draw_log_hazard(g_, j_ + 1).second;
        have_next_ = true;
      }
      if (!(next_ < level)) return j_;
      s_ = next_;
      ++j_;
      have_next_ = false;
    }
  }

 private:
  const RamSpec& spec_;
  G& g_;
  std::int64_t cap_;
  std::int64_t j_ = 0;
  double s_ = 0.0;
  double next_ = 0.0;
  bool have_next_ = false;
};

// GEM(1/2, theta): prod_{i<=j} (1 - H_i) = T_0 / T_j with T_0 ~ gamma(theta + 1/2)
// and T_j - T_{j-1} i.i.d. gamma(1/2), so S_j < L iff T_j < T_0 e^L. The walk is
// advanced in doubling blocks whose sums are gamma(m/2); a block that overshoots
// is split with a beta(m1/2, m2/2) bridge until a single step is isolated.
template <class G>
class GammaWalkBars {
 public:
  GammaWalkBars(double theta, G& g) : g_(g) { log_t0_ = rng::log_gamma_variate(g_, theta + 0.5); }

  std::int64_t count_below(double level) {
    const double c = std::exp(log_t0_ + level);
    const double t0 = std::exp(log_t0_);
    if (t_ < 0.0) t_ = t0;
    for (;;) {
      Block blk;
      bool fresh = pending_.empty();
      if (fresh) {
        blk = {gallop_, rng::gamma(g_, 0.5 * static_cast<double>(gallop_))};
      } else {
        blk = pending_.back();
        pending_.pop_back();
      }
      if (t_ + blk.sum < c) {
        t_ += blk.sum;
        count_ += blk.steps;
        if (fresh) gallop_ *= 2;
        continue;
      }
      if (blk.steps == 1) {
        pending_.push_back(blk);
        return count_;
      }
      const std::int64_t m1 = blk.steps / 2;
      const std::int64_t m2 = blk.steps - m1;
      const double s1 = blk.sum * rng::beta(g_, 0.5 * static_cast<double>(m1), 0.5 * static_cast<double>(m2));
      pending_.push_back({m2, blk.sum - s1});
      pending_.push_back({m1, s1});
    }
  }

 private:
  struct Block {
    std::int64_t steps;
    double sum;
  };

  G& g_;
  double log_t0_ = 0.0;
  double t_ = -1.0;
  std::int64_t count_ = 0;
  std::int64_t gallop_ = 1;
  std::vector<Block> pending_;
};

inline bool use_gamma_walk(const RamSpec& spec, const SamplerOptions& opt) {
  const Gem* gem = spec.as_gem();
  return opt.bar_method == SamplerOptions::BarMethod::automatic && gem && gem->alpha == 0.5;
}

// Calls fn(walker) with the walker suited to spec.
template <class G, class Fn>
auto with_walker(const RamSpec& spec, G& g, const SamplerOptions& opt, Fn&& fn) {
  if (use_gamma_walk(spec, opt)) {
    GammaWalkBars<G> w(spec.as_gem()->theta, g);
    return fn(w);
  }
  SequentialBars<G> w(spec, g, opt.max_bars);
  return fn(w);
}

template <class Walker>
Sample assign_by_levels(Walker& w, const std::vector<double>& eps) {
  std::vector<std::size_t> idx(eps.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return eps[a] < eps[b]; });
  Sample s;
  s.values.resize(eps.size());
  for (std::size_t i : idx) s.values[i] = 1 + w.count_below(eps[i]);
  return s;
}

// Leaf masses with subtree sums recomputed from children, so zeroing a leaf
// does not accumulate cancellation error.
class MassTree {
 public:
  std::size_t size() const { return size_; }
  double total() const { return cap_ ? t_[1] : 0.0; }
  double mass(std::size_t i) const { return t_[cap_ + i]; }

  void push(double m) {
    if (size_ == cap_) grow();
    set(size_++, m);
  }

  void set(std::size_t i, double m) {
    std::size_t p = cap_ + i;
    t_[p] = m;
    for (p >>= 1; p; p >>= 1) t_[p] = t_[2 * p] + t_[2 * p + 1];
  }

  std::size_t find(double u) const {
    std::size_t p = 1;
    while (p < cap_) {
      if (u < t_[2 * p]) {
        p = 2 * p;
      } else {
        u -= t_[2 * p];
        p = 2 * p + 1;
      }
    }
    std::size_t i = p - cap_;
    if (i < size_ && mass(i) > 0.0) return i;
    // rounding landed on an empty leaf: take the nearest occupied one
    for (std::size_t k = std::min(i, size_ - 1) + 1; k-- > 0;)
      if (mass(k) > 0.0) return k;
    for (std::size_t k = i; k < size_; ++k)
      if (mass(k) > 0.0) return k;
    return std::min(i, size_ - 1);
  }

 private:
  void grow() {
    const std::size_t ncap = cap_ ? 2 * cap_ : 16;
    std::vector<double> nt(2 * ncap, 0.0);
    for (std::size_t i = 0; i < size_; ++i) nt[ncap + i] = t_[cap_ + i];
    for (std::size_t p = ncap - 1; p >= 1; --p) nt[p] = nt[2 * p] + nt[2 * p + 1];
    t_ = std::move(nt);
    cap_ = ncap;
  }

  std::vector<double> t_;
  std::size_t cap_ = 0;
  std::size_t size_ = 0;
};

}  // namespace detail

/// n draws from one realization of the RAM, by counting bars below exponential stars.
template <class G>
Sample sample_direct(const RamSpec& spec, std::int64_t n, G& g, const SamplerOptions& opt = {}) {
  detail::require(n >= 1, "sample_direct: n must be at least 1");
  std::vector<double> eps(static_cast<std::size_t>(n));
  for (auto& e : eps) e = rng::exponential(g);
  if (detail::use_gamma_walk(spec, opt)) {
    detail::GammaWalkBars<G> w(spec.as_gem()->theta, g);
    return detail::assign_by_levels(w, eps);
  }
  // bars below the top star, then one binary search per star
  const double top = *std::max_element(eps.begin(), eps.end());
  std::vector<double> bars;
  double s = 0.0;
  for (std::int64_t j = 1;; ++j) {
    if (j > opt.max_bars)
      throw ResourceError("bar generation exceeded the cap of " + std::to_string(opt.max_bars) + " bars for " +
                          spec.describe());
    s -= spec.draw_log_hazard(g, j).second;
    if (!(s < top)) break;
    bars.push_back(s);
  }
  Sample out;
  out.values.reserve(eps.size());
  for (double e : eps)
    out.values.push_back(1 + static_cast<std::int64_t>(std::lower_bound(bars.begin(), bars.end(), e) - bars.begin()));
  return out;
}

/// GEM(0, theta) sample with caller-supplied stars; bars are a rate-theta
/// Poisson process.
template <class G>
Sample sample_via_poisson_from(double theta, const std::vector<double>& eps, G& g) {
  detail::require(theta > 0.0, "sample_via_poisson: theta must be positive");
  detail::require(!eps.empty(), "sample_via_poisson: n must be at least 1");
  std::vector<std::size_t> idx(eps.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return eps[a] < eps[b]; });
  Sample s;
  s.values.resize(eps.size());
  std::int64_t count = 0;
  double next = rng::exponential(g) / theta;
  for (std::size_t i : idx) {
    while (next <= eps[i]) {
      ++count;
      next += rng::exponential(g) / theta;
    }
    s.values[i] = 1 + count;
  }
  return s;
}

template <class G>
Sample sample_via_poisson(double theta, std::int64_t n, G& g) {
  detail::require(theta > 0.0, "sample_via_poisson: theta must be positive");
  detail::require(n >= 1, "sample_via_poisson: n must be at least 1");
  std::vector<double> eps(static_cast<std::size_t>(n));
  for (auto& e : eps) e = rng::exponential(g);
  return sample_via_poisson_from(theta, eps, g);
}

/// #{j >= 1 : S_j < level} for a fresh realization of the bars.
template <class G>
std::int64_t count_bars_below(const RamSpec& spec, double level, G& g, const SamplerOptions& opt = {}) {
  return detail::with_walker(spec, g, opt, [&](auto& w) { return w.count_below(level); });
}

/// M_n alone. The largest of n standard exponentials is drawn directly.
template <class G>
std::int64_t sample_max(const RamSpec& spec, std::int64_t n, G& g, const SamplerOptions& opt = {}) {
  detail::require(n >= 1, "sample_max: n must be at least 1");
  const double log_u = std::log(rng::uniform_open(g));
  const double top = -std::log(-std::expm1(log_u / static_cast<double>(n)));
  return 1 + count_bars_below(spec, top, g, opt);
}

namespace detail {

template <class G>
Sample two_stage_realization(const RamSpec& spec, std::int64_t n, G& g, const SamplerOptions& opt, double* tau_out) {
  MassTree tree;
  double log_rest = 0.0;
  auto extend = [&] {
    if (static_cast<std::int64_t>(tree.size()) >= opt.max_bars)
      throw ResourceError("sample_two_stage: box generation exceeded the cap of " +
                          std::to_string(opt.max_bars));
    const auto [lh, l1h] = spec.draw_log_hazard(g, static_cast<std::int64_t>(tree.size()) + 1);
    tree.push(std::exp(log_rest + lh));
    log_rest += l1h;
  };
  auto draw_box = [&]() -> std::size_t {
    const double rest = std::exp(log_rest);
    double u = rng::uniform01(g) * (tree.total() + rest);
    while (u >= tree.total()) {
      if (std::exp(log_rest) == 0.0) {
        u = std::nextafter(tree.total(), 0.0);
        break;
      }
      extend();
    }
    return tree.find(u);
  };

  std::vector<std::size_t> first(static_cast<std::size_t>(n));
  for (auto& b : first) b = draw_box();

  std::map<std::size_t, std::int64_t> rank;
  for (auto b : first) rank.emplace(b, 0);
  std::size_t remaining = rank.size();
  std::int64_t discovered = 0;
  double tau = 0.0;
  while (remaining > 0) {
    const double comp = tree.total() + std::exp(log_rest);
    tau += rng::geometric(g, comp) + 1.0;
    if (!(tau <= opt.max_tau))
      throw ResourceError("sample_two_stage: secondary stream exceeded " + std::to_string(opt.max_tau) +
                          " draws");
    const std::size_t b = draw_box();
    tree.set(b, 0.0);
    ++discovered;
    auto it = rank.find(b);
    if (it != rank.end() && it->second == 0) {
      it->second = discovered;
      --remaining;
    }
  }
  if (tau_out) *tau_out = tau;

  Sample s;
  s.values.reserve(first.size());
  for (auto b : first) s.values.push_back(rank[b]);
  return s;
}

// The same stream for GEM(alpha, theta) with the realization integrated out:
// draws follow the Chinese restaurant rule. Runs of draws that land on tables
// already seen in the secondary stream are skipped in one step; their length is
// geometric with a beta(r, w) success probability, as in a Polya urn.
template <class G>
Sample two_stage_urn(double alpha, double theta, std::int64_t n, G& g, const SamplerOptions& opt, double* tau_out) {
  std::vector<std::int64_t> count;
  std::vector<std::size_t> table(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    const double k = static_cast<double>(count.size());
    const double u = rng::uniform01(g) * (static_cast<double>(i) + theta);
    if (i == 0 || u < theta + alpha * k) {
      table[static_cast<std::size_t>(i)] = count.size();
      count.push_back(1);
      continue;
    }
    // weight c - alpha: pick a previous draw uniformly, accept with (c - alpha) / c
    for (;;) {
      const auto j = static_cast<std::size_t>(rng::uniform01(g) * static_cast<double>(i));
      const std::size_t t = table[std::min(j, static_cast<std::size_t>(i - 1))];
      const double c = static_cast<double>(count[t]);
      if (rng::uniform01(g) * c < c - alpha) {
        table[static_cast<std::size_t>(i)] = t;
        ++count[t];
        break;
      }
    }
  }

  const std::size_t primary = count.size();
  std::vector<std::int64_t> rank(primary, 0);
  std::vector<std::size_t> open(primary);
  std::iota(open.begin(), open.end(), std::size_t{0});
  double w_open = 0.0;
  for (auto c : count) w_open += static_cast<double>(c) - alpha;
  double w_seen = 0.0;
  double tables = static_cast<double>(primary);
  std::int64_t discovered = 0;
  double tau = 0.0;
  while (!open.empty()) {
    const double r = w_open + theta + alpha * tables;
    if (w_seen > 0.0) {
      const auto [log_p, log_q] = rng::log_beta_pair(g, r, w_seen);
      const double skip = log_p == 0.0 ? 0.0 : std::floor(std::log(rng::uniform_open(g)) / log_q);
      tau += skip;
      w_seen += skip;
    }
    tau += 1.0;
    if (!(tau <= opt.max_tau))
      throw ResourceError("sample_two_stage: secondary stream exceeded " + std::to_string(opt.max_tau) + " draws");
    if (discovered >= opt.max_bars)
      throw ResourceError("sample_two_stage: species discovery exceeded the cap of " + std::to_string(opt.max_bars));
    ++discovered;
    double u = rng::uniform01(g) * r;
    if (u < w_open) {
      std::size_t pick = open.size() - 1;
      for (std::size_t q = 0; q < open.size(); ++q) {
        u -= static_cast<double>(count[open[q]]) - alpha;
        if (u < 0.0) {
          pick = q;
          break;
        }
      }
      const std::size_t t = open[pick];
      rank[t] = discovered;
      w_open -= static_cast<double>(count[t]) - alpha;
      w_seen += static_cast<double>(count[t]) + 1.0 - alpha;
      open.erase(open.begin() + static_cast<std::ptrdiff_t>(pick));
      if (open.empty()) break;
      // refresh to shed rounding drift
      w_open = 0.0;
      for (auto q : open) w_open += static_cast<double>(count[q]) - alpha;
    } else {
      tables += 1.0;
      w_seen += 1.0 - alpha;
    }
  }
  if (tau_out) *tau_out = tau;

  Sample s;
  s.values.reserve(table.size());
  for (auto t : table) s.values.push_back(rank[t]);
  return s;
}

}  // namespace detail

/// Species discovery ranks from a secondary stream following an initial block
/// of n draws from one realization. For GEM specs the result is distributed as
/// a size-n sample. `tau_out`, when given, receives the number of secondary draws.
template <class G>
Sample sample_two_stage(const RamSpec& spec, std::int64_t n, G& g, const SamplerOptions& opt = {},
                        double* tau_out = nullptr) {
  detail::require(n >= 1, "sample_two_stage: n must be at least 1");
  using Route = SamplerOptions::TwoStageRoute;
  const Gem* gem = spec.as_gem();
  Route route = opt.two_stage_route;
  if (route == Route::automatic) route = gem && gem->alpha > 0.0 ? Route::urn : Route::realization;
  if (route == Route::urn) {
    detail::require(gem != nullptr, "sample_two_stage: the urn route needs a GEM spec");
    return detail::two_stage_urn(gem->alpha, gem->theta, n, g, opt, tau_out);
  }
  return detail::two_stage_realization(spec, n, g, opt, tau_out);
}

inline GapVector gaps(const Sample& sample) {
  const auto x = sample.order_statistics();
  const std::size_t n = x.size();
  GapVector out;
  out.gaps.resize(n);
  for (std::size_t i = 1; i < n; ++i) out.gaps[i - 1] = x[n - i] - x[n - i - 1];
  if (n) out.gaps[n - 1] = x[0] - 1;
  return out;
}

inline CountsProfile counts_profile(const Sample& sample) {
  CountsProfile c;
  for (auto v : sample.values) ++c.box_counts[v];
  if (c.box_counts.empty()) return c;
  c.m_n = c.box_counts.rbegin()->first;
  c.k_n = static_cast<std::int64_t>(c.box_counts.size());
  for (const auto& [box, cnt] : c.box_counts) ++c.k_j[cnt];
  c.k_0 = c.m_n - c.k_n;
  c.l_n = c.box_counts.rbegin()->second;
  return c;
}

inline Compositions compositions(const Sample& sample) {
  Compositions out;
  out.value_ordered.order = CompositionOrder::value_ordered;
  out.appearance_ordered.order = CompositionOrder::appearance_ordered;
  out.ranked.order = CompositionOrder::ranked;

  std::map<std::int64_t, std::int64_t> counts;
  for (auto v : sample.values) ++counts[v];
  for (const auto& [box, cnt] : counts) out.value_ordered.parts.push_back(cnt);

  std::map<std::int64_t, bool> seen;
  for (auto v : sample.values)
    if (!seen[v]) {
      seen[v] = true;
      out.appearance_ordered.parts.push_back(counts[v]);
    }

  out.ranked.parts = out.value_ordered.parts;
  std::sort(out.ranked.parts.begin(), out.ranked.parts.end(), std::greater<>());
  return out;
}

/// Successive picks with probability proportional to (part - alpha).
template <class G>
std::vector<std::int64_t> size_alpha_biased_permutation(std::vector<std::int64_t> parts, double alpha, G& g) {
  detail::require(alpha >= 0.0 && alpha < 1.0, "size_alpha_biased_permutation: alpha must lie in [0, 1)");
  for (auto p : parts) detail::require(p >= 1, "size_alpha_biased_permutation: parts must be positive");
  std::vector<std::int64_t> out;
  out.reserve(parts.size());
  while (!parts.empty()) {
    double total = 0.0;
    for (auto p : parts) total += static_cast<double>(p) - alpha;
    double u = rng::uniform01(g) * total;
    std::size_t pick = parts.size() - 1;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      u -= static_cast<double>(parts[i]) - alpha;
      if (u < 0.0) {
        pick = i;
        break;
      }
    }
    out.push_back(parts[pick]);
    parts.erase(parts.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  return out;
}

/// sum_{j=0}^{jmax} B_j e_j / (a + j) with B_j ~ bernoulli(b / (a + b + j)) and
/// e_j standard exponential. Successes are located by geometric skips inside
/// dyadic blocks of j and thinned to the exact Bernoulli probabilities.
template <class G>
double sample_beta_log_series(double a, double b, std::int64_t jmax, G& g) {
  detail::require(a > 0.0 && b > 0.0, "sample_beta_log_series: a and b must be positive");
  detail::require(jmax >= 0, "sample_beta_log_series: jmax must be non-negative");
  double sum = 0.0;
  for (std::int64_t lo = 0; lo <= jmax; lo = lo ? 2 * lo : 1) {
    const std::int64_t hi = std::min(lo ? 2 * lo : 1, jmax + 1);
    const double pmax = b / (a + b + static_cast<double>(lo));
    std::int64_t j = lo;
    for (;;) {
      const double skip = rng::geometric(g, std::min(pmax, 1.0));
      if (skip >= static_cast<double>(hi - j)) break;
      j += static_cast<std::int64_t>(skip);
      const double pj = b / (a + b + static_cast<double>(j));
      if (rng::uniform01(g) * pmax < pj) sum += rng::exponential(g) / (a + static_cast<double>(j));
      ++j;
      if (j >= hi) break;
    }
  }
  return sum;
}

}  // namespace gemgaps
