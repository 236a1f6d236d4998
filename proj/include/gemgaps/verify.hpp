#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "gemgaps/errors.hpp"
#include "gemgaps/exact.hpp"
#include "gemgaps/io.hpp"
#include "gemgaps/limits.hpp"
#include "gemgaps/ram.hpp"
#include "gemgaps/random.hpp"
#include "gemgaps/sampler.hpp"
#include "gemgaps/stat_tests.hpp"

namespace gemgaps::verify {

struct TestReport {
  std::string experiment_name;
  RamSpec spec = RamSpec::gem(0.0, 1.0);
  std::int64_t n = 0;
  std::int64_t replicates = 0;
  std::uint64_t seed = 0;
  std::string statistic_name;
  /// chi_square, ks, moment_z or exact_check.
  std::string test_kind;
  double statistic_value = 0.0;
  std::int64_t dof_or_n = 0;
  double p_value = 1.0;
  bool pass = true;
  std::string notes;

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["experiment_name"] = experiment_name;
    j["spec"] = spec.to_json();
    j["n"] = n;
    j["replicates"] = replicates;
    j["seed"] = seed;
    j["statistic_name"] = statistic_name;
    j["test_kind"] = test_kind;
    j["statistic_value"] = std::isfinite(statistic_value) ? nlohmann::ordered_json(statistic_value)
                                                          : nlohmann::ordered_json("inf");
    j["dof_or_n"] = dof_or_n;
    j["p_value"] = p_value;
    j["decision"] = pass ? "pass" : "fail";
    j["notes"] = notes;
    return j;
  }
};

/// Unset fields take the experiment's default.
struct ExperimentConfig {
  std::optional<double> alpha;
  std::optional<double> theta;
  std::optional<std::int64_t> n;
  std::optional<std::int64_t> replicates;
  std::optional<double> b;
  double significance = 0.001;
  /// 0 means one worker per hardware thread.
  unsigned threads = 0;
};

struct ExperimentInfo {
  std::string name;
  std::string description;
  bool limit_law = false;
};

inline const std::vector<ExperimentInfo>& catalog() {
  static const std::vector<ExperimentInfo> c = {
      {"gap_marginals", "each gap G_{i:n} against geometric(i/(i+theta))", false},
      {"gap_independence", "joint law of two gaps, truncated to {0,1,2,>=3}, against the product law", false},
      {"max_identity", "M_n against the sum-of-geometrics law", false},
      {"indicators", "frequency of G_{i:n} > 0 against theta/(i+theta)", false},
      {"esf_frequencies", "partition frequencies against the Ewens formula", false},
      {"dt_frequencies", "value-ordered composition frequencies against the Donnelly-Tavare formula", false},
      {"dt_star_equality", "appearance-ordered composition frequencies against the Donnelly-Tavare formula", false},
      {"size_alpha_hypothesis", "value-ordered compositions against (size-alpha)-biased permutations", false},
      {"min_independence", "joint law of X_{1:n} and the ranked partition against the product law", false},
      {"beta_stopped", "bars below an independent beta(n,b) level against a sum of geometrics", false},
      {"k0_limit", "missing values K_{0:n} at large n against the limit law", true},
      {"beta_log_identity", "truncated Bernoulli-exponential series against -log beta(a,b)", false},
      {"frechet_limit", "M_n / n^{alpha/(1-alpha)} against the limit CDF", true},
      {"clt_check", "sup distance of the exact law of M_n from its normal approximation", true},
      {"linf_moments", "moments of the tie count L_n against the limit law", true},
  };
  return c;
}

inline bool is_limit_law(const std::string& name) {
  for (const auto& e : catalog())
    if (e.name == name) return e.limit_law;
  return false;
}

inline unsigned resolve_threads(unsigned requested) {
  if (requested) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

/// fn(r, rng) for r in [0, R), results in replicate order. Every replicate
/// uses substream(master, r + offset), so the output does not depend on the
/// number of threads. On failure the exception of the lowest failing
/// replicate is rethrown.
template <class T, class Fn>
std::vector<T> run_replicates(std::int64_t replicates, std::uint64_t master, unsigned threads, Fn&& fn,
                              std::uint64_t offset = 0) {
  std::vector<T> out(static_cast<std::size_t>(replicates));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(replicates));
  constexpr std::int64_t chunk = 256;
  std::atomic<std::int64_t> next{0};
  std::atomic<std::int64_t> first_fail{replicates};
  auto worker = [&] {
    for (;;) {
      const std::int64_t start = next.fetch_add(chunk);
      if (start >= replicates || start > first_fail.load()) return;
      const std::int64_t stop = std::min(start + chunk, replicates);
      for (std::int64_t r = start; r < stop; ++r) {
        try {
          auto g = substream(master, static_cast<std::uint64_t>(r) + offset);
          out[static_cast<std::size_t>(r)] = fn(r, g);
        } catch (...) {
          errors[static_cast<std::size_t>(r)] = std::current_exception();
          std::int64_t cur = first_fail.load();
          while (r < cur && !first_fail.compare_exchange_weak(cur, r)) {
          }
          break;
        }
      }
    }
  };
  const unsigned nt = std::min<unsigned>(resolve_threads(threads),
                                         static_cast<unsigned>(std::max<std::int64_t>(1, replicates / chunk + 1)));
  if (nt <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < nt; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

namespace detail {

using gemgaps::detail::require;

struct Context {
  std::string name;
  ExperimentConfig cfg;
  std::uint64_t seed = 0;

  double theta(double def) const { return cfg.theta.value_or(def); }
  double alpha(double def) const { return cfg.alpha.value_or(def); }
  std::int64_t n(std::int64_t def) const { return cfg.n.value_or(def); }
  std::int64_t replicates(std::int64_t def) const { return cfg.replicates.value_or(def); }

  TestReport report(const RamSpec& spec, std::int64_t n, std::int64_t reps, std::string statistic,
                    std::string kind, const stats::TestResult& r, std::string notes = "") const {
    TestReport t;
    t.experiment_name = name;
    t.spec = spec;
    t.n = n;
    t.replicates = reps;
    t.seed = seed;
    t.statistic_name = std::move(statistic);
    t.test_kind = std::move(kind);
    t.statistic_value = r.statistic;
    t.dof_or_n = r.dof_or_n;
    t.p_value = std::clamp(r.p_value, 0.0, 1.0);
    t.pass = t.p_value >= cfg.significance;
    t.notes = std::move(notes);
    if (is_limit_law(name) && t.test_kind != "exact_check" && t.p_value >= cfg.significance && t.p_value < 0.01)
      t.notes += std::string(t.notes.empty() ? "" : "; ") +
                 "marginal p-value against an asymptotic law; finite-n bias is expected";
    return t;
  }
};

inline void require_common(std::int64_t n, std::int64_t reps) {
  require(n >= 1, "--n must be at least 1");
  require(reps >= 10, "--replicates must be at least 10");
}

inline double require_theta_positive(double theta) {
  require(theta > 0.0, "--theta must be positive for this experiment");
  return theta;
}

inline void require_alpha_zero(const Context& c) {
  require(!c.cfg.alpha || *c.cfg.alpha == 0.0, "experiment " + c.name + " supports --alpha 0 only");
}

inline std::map<std::int64_t, std::int64_t> tally(const std::vector<std::int64_t>& xs) {
  std::map<std::int64_t, std::int64_t> m;
  for (auto x : xs) ++m[x];
  return m;
}

// index of each partition of n in enumeration order, keyed by decreasing parts
inline std::map<std::vector<std::int64_t>, std::size_t> partition_index(std::int64_t n,
                                                                        std::vector<double>* probs,
                                                                        double theta) {
  std::map<std::vector<std::int64_t>, std::size_t> idx;
  exact::enumerate_partitions(n, [&](const exact::Multiplicities& m) {
    std::vector<std::int64_t> parts;
    for (auto it = m.rbegin(); it != m.rend(); ++it)
      for (std::int64_t c = 0; c < it->second; ++c) parts.push_back(it->first);
    idx.emplace(parts, idx.size());
    if (probs) probs->push_back(exact::ewens_pmf(theta, m));
  });
  return idx;
}

inline std::vector<TestReport> gap_marginals(const Context& c) {
  require_alpha_zero(c);
  const double theta = require_theta_positive(c.theta(1.0));
  const auto n = c.n(10);
  const auto reps = c.replicates(100'000);
  require_common(n, reps);
  const auto spec = RamSpec::gem(0.0, theta);
  auto gaps_per = run_replicates<std::vector<std::int64_t>>(reps, c.seed, c.cfg.threads, [&](std::int64_t, auto& g) {
    return gaps(sample_direct(spec, n, g)).gaps;
  });
  std::vector<TestReport> out;
  const auto laws = exact::gap_law(theta, n);
  for (std::int64_t i = 0; i < n; ++i) {
    std::map<std::int64_t, std::int64_t> obs;
    for (const auto& gv : gaps_per) ++obs[gv[static_cast<std::size_t>(i)]];
    const auto r = stats::chi_square_gof(obs, geometric_pmf(laws[static_cast<std::size_t>(i)]));
    out.push_back(c.report(spec, n, reps, "G_" + std::to_string(i + 1), "chi_square", r));
  }
  return out;
}

inline std::vector<TestReport> gap_independence(const Context& c) {
  require_alpha_zero(c);
  const double theta = require_theta_positive(c.theta(1.0));
  const auto n = c.n(10);
  const auto reps = c.replicates(100'000);
  require_common(n, reps);
  require(n >= 2, "gap_independence needs --n of at least 2");
  std::vector<std::pair<std::int64_t, std::int64_t>> pairs;
  if (n >= 9) pairs = {{1, 5}, {2, 9}};
  else pairs = {{1, n}};
  const auto spec = RamSpec::gem(0.0, theta);
  auto gaps_per = run_replicates<std::vector<std::int64_t>>(reps, c.seed, c.cfg.threads, [&](std::int64_t, auto& g) {
    return gaps(sample_direct(spec, n, g)).gaps;
  });
  const auto laws = exact::gap_law(theta, n);
  auto trunc_probs = [&](std::int64_t i) {
    const auto& l = laws[static_cast<std::size_t>(i - 1)];
    return std::vector<double>{l.pmf(0), l.pmf(1), l.pmf(2), l.tail(3)};
  };
  std::vector<TestReport> out;
  for (auto [i, j] : pairs) {
    std::vector<double> obs(16, 0.0);
    for (const auto& gv : gaps_per) {
      const auto a = std::min<std::int64_t>(gv[static_cast<std::size_t>(i - 1)], 3);
      const auto b = std::min<std::int64_t>(gv[static_cast<std::size_t>(j - 1)], 3);
      obs[static_cast<std::size_t>(4 * a + b)] += 1.0;
    }
    const auto pi = trunc_probs(i);
    const auto pj = trunc_probs(j);
    std::vector<double> exp(16);
    for (std::size_t a = 0; a < 4; ++a)
      for (std::size_t b = 0; b < 4; ++b) exp[4 * a + b] = pi[a] * pj[b] * static_cast<double>(reps);
    const auto r = stats::chi_square_categorical(obs, exp);
    out.push_back(c.report(spec, n, reps, "G_" + std::to_string(i) + " x G_" + std::to_string(j), "chi_square", r));
  }
  return out;
}

inline std::vector<TestReport> max_identity(const Context& c) {
  require_alpha_zero(c);
  const double theta = require_theta_positive(c.theta(1.0));
  const auto n = c.n(10);
  const auto reps = c.replicates(100'000);
  require_common(n, reps);
  const auto spec = RamSpec::gem(0.0, theta);
  auto m = run_replicates<std::int64_t>(reps, c.seed, c.cfg.threads, [&](std::int64_t, auto& g) {
    return counts_profile(sample_direct(spec, n, g)).m_n;
  });
  const auto r = stats::chi_square_gof(tally(m), exact::mn_pmf_product(theta, n));
  return {c.report(spec, n, reps, "M_n", "chi_square", r)};
}

inline std::vector<TestReport> indicators(const Context& c) {
  require_alpha_zero(c);
  const double theta = require_theta_positive(c.theta(1.0));
  const auto n = c.n(10);
  const auto reps = c.replicates(100'000);
  require_common(n, reps);
  const auto spec = RamSpec::gem(0.0, theta);
  auto gaps_per = run_replicates<std::vector<std::int64_t>>(reps, c.seed, c.cfg.threads, [&](std::int64_t, auto& g) {
    return gaps(sample_direct(spec, n, g)).gaps;
  });
  std::vector<TestReport> out;
  for (std::int64_t i = 1; i <= n; ++i) {
    double pos = 0.0;
    for (const auto& gv : gaps_per) pos += gv[static_cast<std::size_t>(i - 1)] > 0 ? 1.0 : 0.0;
    const double p = exact::indicator_prob(theta, i);
    const double N = static_cast<double>(reps);
    const auto r = stats::chi_square_categorical({pos, N - pos}, {p * N, (1.0 - p) * N});
    out.push_back(c.report(spec, n, reps, "1(G_" + std::to_string(i) + ">0)", "chi_square", r));
  }
  return out;
}

inline std::vector<TestReport> esf_frequencies(const Context& c) {
  require_alpha_zero(c);
  const double theta = require_theta_positive(c.theta(1.0));
  const auto n = c.n(6);
  const auto reps = c.replicates(100'000);
  require_common(n, reps);
  require(n <= 12, "esf_frequencies supports --n up to 12");
  const auto spec = RamSpec::gem(0.0, theta);
  std::vector<double> probs;
  const auto idx = partition_index(n, &probs, theta);
  auto cat = run_replicates<std::size_t>(reps, c.seed, c.cfg.threads, [&](std::int64_t, auto& g) {
    return idx.at(compositions(sample_direct(spec, n, g)).ranked.parts);
  });
  std::vector<double> obs(probs.size(), 0.0);
  for (auto k : cat) obs[k] += 1.0;
  for (auto& p : probs) p *= static_cast<double>(reps);
  return {c.report(spec, n, reps, "ranked partition", "chi_square", stats::chi_square_categorical(obs, probs))};
}

inline std::vector<TestReport> composition_vs_dt(const Context& c, bool appearance) {
  require_alpha_zero(c);
  const double theta = require_theta_positive(c.theta(1.0));
  const auto n = c.n(6);
  const auto reps = c.replicates(100'000);
  require_common(n, reps);
  require(n <= 12, "composition experiments support --n up to 12");
  const auto spec = RamSpec::gem(0.0, theta);
  const std::size_t cats = std::size_t{1} << (n - 1);
  std::vector<double> exp(cats, 0.0);
  exact::enumerate_compositions(n, [&](const std::vector<std::int64_t>& parts) {
    exp[exact::composition_index(parts)] = exact::dt_pmf(theta, parts) * static_cast<double>(reps);
  });
  auto cat = run_replicates<std::uint64_t>(reps, c.seed, c.cfg.threads, [&](std::int64_t, auto& g) {
    const auto comp = compositions(sample_direct(spec, n, g));
    return exact::composition_index(appearance ? comp.appearance_ordered.parts : comp.value_ordered.parts);
  });
  std::vector<double> obs(cats, 0.0);
  for (auto k : cat) obs[k] += 1.0;
  return {c.report(spec, n, reps, appearance ? "appearance-ordered composition" : "value-ordered composition",
                   "chi_square", stats::chi_square_categorical(obs, exp))};
}

inline std::vector<TestReport> size_alpha_hypothesis(const Context& c) {
  const double theta = c.theta(0.5);
  const auto n = c.n(6);
  const auto reps = c.replicates(100'000);
  require_common(n, reps);
  require(n <= 12, "size_alpha_hypothesis supports --n up to 12");
  std::vector<double> alphas = c.cfg.alpha ? std::vector<double>{*c.cfg.alpha} : std::vector<double>{0.0, 0.3, 0.5};
  std::vector<TestReport> out;
  const std::size_t cats = std::size_t{1} << (n - 1);
  for (double alpha : alphas) {
    const auto spec = RamSpec::gem(alpha, theta);
    // even replicates give value-ordered compositions, odd ones permuted appearance-ordered ones
    auto cat = run_replicates<std::uint64_t>(reps, c.seed, c.cfg.threads, [&](std::int64_t r, auto& g) {
      const auto comp = compositions(sample_direct(spec, n, g));
      if (r % 2 == 0) return exact::composition_index(comp.value_ordered.parts);
      return exact::composition_index(size_alpha_biased_permutation(comp.appearance_ordered.parts, alpha, g));
    });
    std::vector<double> a(cats, 0.0);
    std::vector<double> b(cats, 0.0);
    for (std::size_t r = 0; r < cat.size(); ++r) (r % 2 == 0 ? a : b)[cat[r]] += 1.0;
    const auto res = stats::chi_square_two_sample(a, b);
    out.push_back(c.report(spec, n, reps, "value-ordered vs permuted appearance-ordered", "chi_square", res,
                           "two-sample test; replicates split by parity"));
  }
  return out;
}

inline std::vector<TestReport> min_independence(const Context& c) {
  require_alpha_zero(c);
  const double theta = require_theta_positive(c.theta(1.0));
  const auto n = c.n(5);
  const auto reps = c.replicates(100'000);
  require_common(n, reps);
  require(n <= 12, "min_independence supports --n up to 12");
  const auto spec = RamSpec::gem(0.0, theta);
  std::vector<double> part_probs;
  const auto idx = partition_index(n, &part_probs, theta);
  const auto law = exact::min_law(theta, n);
  const std::vector<double> min_probs = {law.pmf(0), law.pmf(1), law.pmf(2), law.tail(3)};
  auto cells = run_replicates<std::size_t>(reps, c.seed, c.cfg.threads, [&](std::int64_t, auto& g) {
    const auto s = sample_direct(spec, n, g);
    const auto m = std::min<std::int64_t>(*std::min_element(s.values.begin(), s.values.end()), 4) - 1;
    return static_cast<std::size_t>(m) * idx.size() + idx.at(compositions(s).ranked.parts);
  });
  std::vector<double> obs(4 * idx.size(), 0.0);
  std::vector<double> exp(4 * idx.size(), 0.0);
  for (auto k : cells) obs[k] += 1.0;
  for (std::size_t m = 0; m < 4; ++m)
    for (std::size_t p = 0; p < idx.size(); ++p)
      exp[m * idx.size() + p] = min_probs[m] * part_probs[p] * static_cast<double>(reps);
  return {c.report(spec, n, reps, "X_{1:n} x ranked partition", "chi_square", stats::chi_square_categorical(obs, exp))};
}

inline std::vector<TestReport> beta_stopped(const Context& c) {
  require_alpha_zero(c);
  const double theta = require_theta_positive(c.theta(1.0));
  const auto n = c.n(5);
  const auto reps = c.replicates(100'000);
  require_common(n, reps);
  const std::vector<double> bs = c.cfg.b ? std::vector<double>{*c.cfg.b} : std::vector<double>{0.5, 2.0};
  const auto spec = RamSpec::gem(0.0, theta);
  std::vector<TestReport> out;
  for (double b : bs) {
    require(b > 0.0, "--b must be positive");
    auto counts = run_replicates<std::int64_t>(reps, c.seed, c.cfg.threads, [&](std::int64_t, auto& g) {
      const double level = -rng::log_beta_pair(g, static_cast<double>(n), b).second;
      return count_bars_below(spec, level, g);
    });
    const auto pmf = geometric_sum_pmf(exact::beta_stopped_geom_params(theta, b, n));
    out.push_back(c.report(spec, n, reps, "N_F(0,beta_{n,b}] with b=" + io::format_number(b),
                           "chi_square", stats::chi_square_gof(tally(counts), pmf)));
  }
  return out;
}

inline std::vector<TestReport> k0_limit(const Context& c) {
  require_alpha_zero(c);
  const double theta = require_theta_positive(c.theta(1.0));
  const auto n = c.n(10'000);
  const auto reps = c.replicates(20'000);
  require_common(n, reps);
  const auto spec = RamSpec::gem(0.0, theta);
  auto k0 = run_replicates<std::int64_t>(reps, c.seed, c.cfg.threads, [&](std::int64_t, auto& g) {
    return counts_profile(sample_direct(spec, n, g)).k_0;
  });
  return {c.report(spec, n, reps, "K_{0:n}", "chi_square", stats::chi_square_gof(tally(k0), exact::k0inf_pmf(theta)))};
}

inline std::vector<TestReport> beta_log_identity(const Context& c) {
  const double a = c.alpha(1.0);
  const double b = c.cfg.b.value_or(1.0);
  require(a > 0.0 && b > 0.0, "beta_log_identity needs positive a (--alpha) and b (--b)");
  const auto reps = c.replicates(100'000);
  require_common(1, reps);
  const auto jmax = exact::beta_log_series_jmax(a, b, 1e-4);
  const double tail_mean = exact::beta_log_series_tail_mean(a, b, jmax);
  auto series = run_replicates<double>(reps, c.seed, c.cfg.threads, [&](std::int64_t, auto& g) {
    return sample_beta_log_series(a, b, jmax, g);
  });
  auto direct = run_replicates<double>(
      reps, c.seed, c.cfg.threads, [&](std::int64_t, auto& g) { return -rng::log_beta_pair(g, a, b).first; },
      static_cast<std::uint64_t>(reps));
  const auto r = stats::ks_two_sample(series, direct);
  return {c.report(RamSpec(IidBeta{a, b}), jmax + 1, reps, "-log beta(a,b) series vs direct", "ks", r,
                   "series truncated after " + std::to_string(jmax + 1) + " terms, tail mean " +
                       io::format_number(tail_mean))};
}

inline std::vector<TestReport> frechet_limit(const Context& c) {
  const double alpha = c.alpha(0.5);
  const double theta = c.theta(0.5);
  const auto n = c.n(10'000);
  const auto reps = c.replicates(20'000);
  require_common(n, reps);
  require(alpha > 0.0 && alpha < 1.0, "frechet_limit needs --alpha in (0, 1)");
  const auto spec = RamSpec::gem(alpha, theta);
  const double scale = std::pow(static_cast<double>(n), alpha / (1.0 - alpha));
  auto xs = run_replicates<double>(reps, c.seed, c.cfg.threads, [&](std::int64_t, auto& g) {
    return static_cast<double>(sample_max(spec, n, g)) / scale;
  });
  std::function<double(double)> cdf;
  std::string notes;
  if (alpha == 0.5) {
    cdf = [&](double x) { return limits::limit_cdf_half(theta, x); };
    notes = "closed-form limit CDF";
  } else {
    cdf = [&](double x) { return limits::limit_cdf_mn({alpha, theta, x, 1e-8}).value; };
    notes = "quadrature limit CDF";
  }
  return {c.report(spec, n, reps, "M_n / n^{alpha/(1-alpha)}", "ks", stats::ks_test(xs, cdf), notes)};
}

inline std::vector<TestReport> clt_check(const Context& c) {
  require_alpha_zero(c);
  const double theta = require_theta_positive(c.theta(1.0));
  const std::vector<std::int64_t> ns =
      c.cfg.n ? std::vector<std::int64_t>{*c.cfg.n} : std::vector<std::int64_t>{100, 1000, 10'000};
  std::string notes = "sup distance by n:";
  bool monotone = true;
  double prev = 2.0;
  double last = 0.0;
  for (auto n : ns) {
    require(n >= 2, "clt_check needs --n of at least 2");
    last = limits::clt_sup_distance(theta, n).sup_distance;
    monotone = monotone && last < prev;
    prev = last;
    notes += " " + std::to_string(n) + "=" + io::format_number(last);
  }
  const bool ok = monotone && last < 0.05;
  notes += monotone ? "; decreasing" : "; not decreasing";
  notes += "; threshold 0.05 at the largest n";
  stats::TestResult r{last, ns.back(), ok ? 1.0 : 0.0};
  auto rep = c.report(RamSpec::gem(0.0, theta), ns.back(), 0, "sup |F_n - Phi|", "exact_check", r, notes);
  return {rep};
}

inline std::vector<TestReport> linf_moments(const Context& c) {
  require_alpha_zero(c);
  const double theta = require_theta_positive(c.theta(8.0));
  const auto n = c.n(1000);
  const auto reps = c.replicates(20'000);
  require_common(n, reps);
  const auto spec = RamSpec::gem(0.0, theta);
  auto l = run_replicates<std::int64_t>(reps, c.seed, c.cfg.threads, [&](std::int64_t, auto& g) {
    return counts_profile(sample_direct(spec, n, g)).l_n;
  });
  auto binom = [](double x, int r) {
    double v = 1.0;
    for (int i = 0; i < r; ++i) v *= (x - i) / (i + 1);
    return v;
  };
  std::vector<TestReport> out;
  for (int r = 1; r <= 3; ++r) {
    if (theta <= 2.0 * r) continue;  // needs a finite variance of C(L, r)
    double target = 0.0;
    std::string notes;
    if (r == 1) target = exact::linf_mean(theta);
    else if (r == 2) target = exact::linf_second_binom(theta);
    else {
      target = exact::linf_binom_moment_series(theta, 3).value;
      notes = "target from the numerical series sum_k C(k,2) P(L>k)";
    }
    double mean = 0.0;
    for (auto x : l) mean += binom(static_cast<double>(x), r);
    mean /= static_cast<double>(reps);
    double var = 0.0;
    for (auto x : l) {
      const double d = binom(static_cast<double>(x), r) - mean;
      var += d * d;
    }
    var /= static_cast<double>(reps - 1);
    const auto res = stats::moment_z(mean, var, reps, target);
    out.push_back(c.report(spec, n, reps, "E C(L_n," + std::to_string(r) + ")", "moment_z", res, notes));
  }
  return out;
}

}  // namespace detail

/// Runs one catalog experiment; one report per tested statistic. Invalid
/// configuration throws DomainError; numerical failures become failed reports.
inline std::vector<TestReport> run_experiment(const std::string& name, const ExperimentConfig& cfg, std::uint64_t seed) {
  detail::Context c{name, cfg, seed};
  gemgaps::detail::require(cfg.significance > 0.0 && cfg.significance < 1.0, "--significance must lie in (0, 1)");
  using Fn = std::vector<TestReport> (*)(const detail::Context&);
  static const std::map<std::string, Fn> table = {
      {"gap_marginals", detail::gap_marginals},
      {"gap_independence", detail::gap_independence},
      {"max_identity", detail::max_identity},
      {"indicators", detail::indicators},
      {"esf_frequencies", detail::esf_frequencies},
      {"dt_frequencies", [](const detail::Context& x) { return detail::composition_vs_dt(x, false); }},
      {"dt_star_equality", [](const detail::Context& x) { return detail::composition_vs_dt(x, true); }},
      {"size_alpha_hypothesis", detail::size_alpha_hypothesis},
      {"min_independence", detail::min_independence},
      {"beta_stopped", detail::beta_stopped},
      {"k0_limit", detail::k0_limit},
      {"beta_log_identity", detail::beta_log_identity},
      {"frechet_limit", detail::frechet_limit},
      {"clt_check", detail::clt_check},
      {"linf_moments", detail::linf_moments},
  };
  const auto it = table.find(name);
  if (it == table.end()) throw DomainError("unknown experiment '" + name + "'");
  try {
    return it->second(c);
  } catch (const DomainError&) {
    throw;
  } catch (const std::exception& e) {
    TestReport t;
    t.experiment_name = name;
    t.n = cfg.n.value_or(0);
    t.replicates = cfg.replicates.value_or(0);
    t.seed = seed;
    t.statistic_name = "error";
    t.test_kind = "none";
    t.p_value = 0.0;
    t.pass = false;
    t.notes = e.what();
    return {t};
  }
}

}  // namespace gemgaps::verify
