#pragma once

// Command-line front end. Needs CLI11 on the include path; not part of gemgaps.hpp.

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "gemgaps/errors.hpp"
#include "gemgaps/exact.hpp"
#include "gemgaps/io.hpp"
#include "gemgaps/limits.hpp"
#include "gemgaps/sampler.hpp"
#include "gemgaps/verify.hpp"

namespace gemgaps::cli {

enum ExitCode : int { kOk = 0, kValidation = 1, kNumerical = 2, kVerificationFailed = 3 };

/// Every flag with its default. The same object backs --help and validation.
struct CliConfig {
  std::string command;
  std::string model = "gem";
  double alpha = 0.0;
  double theta = 1.0;
  double p = 0.5;
  double a = 1.0;
  double b = 1.0;
  std::int64_t n = 10;
  std::int64_t replicates = 1;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::string format;
  std::string out;
  std::string experiment;
  double tol = 1e-10;
  double significance = 0.001;
  std::string op;
  std::string method = "direct";
  std::string stat = "values";
  std::string partition;
  std::string composition;
  std::int64_t k = 1;
  std::int64_t i = 1;
  std::int64_t kmax = 10;
  std::int64_t jmax = 100;
  double x = 1.0;
  double z = 0.0;
  double moment = 1.0;
  double x_min = 0.25;
  double x_max = 8.0;
  std::int64_t points = 32;
};

namespace detail {

using gemgaps::detail::require;

inline std::vector<std::int64_t> parse_parts(const std::string& s, const std::string& flag) {
  std::vector<std::int64_t> parts;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      const long long v = std::stoll(tok, &used);
      require(used == tok.size() && v >= 1, flag + ": parts must be positive integers");
      parts.push_back(v);
    } catch (const std::logic_error&) {
      throw DomainError(flag + ": cannot parse '" + tok + "' as a positive integer");
    }
  }
  require(!parts.empty(), flag + ": expected a comma-separated list such as 2,1");
  return parts;
}

inline unsigned resolve_threads(unsigned flag) {
  if (flag) return flag;
  if (const char* env = std::getenv("GEMGAPS_THREADS")) {
    try {
      std::size_t used = 0;
      const long v = std::stol(env, &used);
      require(used == std::string(env).size() && v >= 1, "GEMGAPS_THREADS must be a positive integer");
      return static_cast<unsigned>(v);
    } catch (const std::logic_error&) {
      throw DomainError("GEMGAPS_THREADS must be a positive integer");
    }
  }
  return 0;
}

inline RamSpec make_spec(const CliConfig& c) {
  if (c.model == "gem") return RamSpec::gem(c.alpha, c.theta);
  if (c.model == "constant") return RamSpec(ConstantHazard{c.p});
  return RamSpec(IidBeta{c.a, c.b});
}

struct Output {
  std::string text;
  int code = kOk;
};

inline nlohmann::ordered_json scalar_doc(const std::string& op, nlohmann::ordered_json params, double v) {
  nlohmann::ordered_json j;
  j["op"] = op;
  j["params"] = std::move(params);
  j["value"] = io::json_number(v);
  return j;
}

inline Output emit_scalar(const CliConfig& c, const std::string& op, nlohmann::ordered_json params, double v) {
  if (c.format == "json") return {scalar_doc(op, std::move(params), v).dump() + "\n"};
  return {io::format_number(v) + "\n"};
}

inline Output emit_pmf(const CliConfig& c, const std::string& op, nlohmann::ordered_json params,
                       const DiscretePmf& pmf) {
  if (c.format == "json") {
    nlohmann::ordered_json j;
    j["op"] = op;
    j["params"] = std::move(params);
    j["pmf"] = io::pmf_json(pmf);
    return {j.dump() + "\n"};
  }
  return {io::pmf_csv(pmf)};
}

inline Output emit_list(const CliConfig& c, const std::string& op, nlohmann::ordered_json params,
                        const std::string& index_name, std::int64_t first, const std::vector<double>& vals) {
  if (c.format == "json") {
    nlohmann::ordered_json j;
    j["op"] = op;
    j["params"] = std::move(params);
    j["values"] = vals;
    return {j.dump() + "\n"};
  }
  std::string s = index_name + ",value\n";
  for (std::size_t t = 0; t < vals.size(); ++t)
    s += std::to_string(first + static_cast<std::int64_t>(t)) + "," + io::format_number(vals[t]) + "\n";
  return {s};
}

inline Output run_sample(const CliConfig& c) {
  require(c.n >= 1, "--n must be at least 1");
  require(c.replicates >= 1, "--replicates must be at least 1");
  const RamSpec spec = make_spec(c);
  if (c.method == "poisson")
    require(spec.is_gem() && spec.as_gem()->alpha == 0.0 && spec.as_gem()->theta > 0.0,
            "--method poisson needs --model gem with --alpha 0 and --theta > 0");
  const bool json = c.format == "json";
  std::string text;
  if (!json) {
    if (c.stat == "values") text = io::sample_csv_header(static_cast<std::size_t>(c.n), "x_");
    else if (c.stat == "gaps") text = io::sample_csv_header(static_cast<std::size_t>(c.n), "g_");
    else if (c.stat == "max") text = "replicate,m_n\n";
    else text = "replicate,m_n,k_n,k_0,l_n\n";
  }
  for (std::int64_t r = 0; r < c.replicates; ++r) {
    auto g = substream(c.seed, static_cast<std::uint64_t>(r));
    Sample s;
    if (c.method == "poisson") s = sample_via_poisson(c.theta, c.n, g);
    else if (c.method == "two_stage") s = sample_two_stage(spec, c.n, g);
    else if (c.stat == "max") s.values = {sample_max(spec, c.n, g)};
    else s = sample_direct(spec, c.n, g);

    nlohmann::ordered_json j;
    j["replicate"] = r;
    if (c.stat == "values") {
      j["values"] = s.values;
      if (!json) text += io::sample_csv_row(r, s.values);
    } else if (c.stat == "gaps") {
      const auto gv = gaps(s).gaps;
      j["gaps"] = gv;
      if (!json) text += io::sample_csv_row(r, gv);
    } else if (c.stat == "max") {
      const auto m = *std::max_element(s.values.begin(), s.values.end());
      j["m_n"] = m;
      if (!json) text += io::sample_csv_row(r, {m});
    } else {
      const auto p = counts_profile(s);
      j["m_n"] = p.m_n;
      j["k_n"] = p.k_n;
      j["k_0"] = p.k_0;
      j["l_n"] = p.l_n;
      nlohmann::ordered_json kj;
      for (const auto& [size, cnt] : p.k_j) kj[std::to_string(size)] = cnt;
      j["k_j"] = kj;
      if (!json) text += io::sample_csv_row(r, {p.m_n, p.k_n, p.k_0, p.l_n});
    }
    if (json) text += j.dump() + "\n";
  }
  return {text};
}

inline Output run_exact(const CliConfig& c) {
  const auto& op = c.op;
  using J = nlohmann::ordered_json;
  if (op == "ewens") {
    const auto parts = parse_parts(c.partition, "--partition");
    return emit_scalar(c, op, J{{"theta", c.theta}, {"partition", parts}}, exact::ewens_pmf_parts(c.theta, parts));
  }
  if (op == "dt") {
    const auto parts = parse_parts(c.composition, "--composition");
    return emit_scalar(c, op, J{{"theta", c.theta}, {"composition", parts}}, exact::dt_pmf(c.theta, parts));
  }
  if (op == "gap_law" || op == "beta_stopped") {
    const auto laws = op == "gap_law" ? exact::gap_law(c.theta, c.n) : exact::beta_stopped_geom_params(c.theta, c.b, c.n);
    std::vector<double> ps;
    for (const auto& l : laws) ps.push_back(l.p);
    J params{{"theta", c.theta}, {"n", c.n}};
    if (op == "beta_stopped") params["b"] = c.b;
    return emit_list(c, op, params, "i", 1, ps);
  }
  if (op == "mn_pmf") {
    require(c.tol > 0.0, "--tol must be positive");
    return emit_pmf(c, op, J{{"theta", c.theta}, {"n", c.n}, {"tol", c.tol}}, exact::mn_pmf_product(c.theta, c.n, c.tol));
  }
  if (op == "mn_cdf") {
    const auto r = exact::mn_cdf_tail_moments(c.alpha, c.theta, c.n, c.k);
    J params{{"alpha", c.alpha}, {"theta", c.theta}, {"n", c.n}, {"k", c.k}};
    if (r.precision_warning)
      std::cerr << "warning: cancellation loss " << io::format_number(r.cancellation_loss) << " exceeds 1e-6\n";
    if (c.format == "json") {
      auto j = scalar_doc(op, params, r.value);
      j["cancellation_loss"] = r.cancellation_loss;
      j["precision_warning"] = r.precision_warning;
      return {j.dump() + "\n"};
    }
    return {io::format_number(r.value) + "\n"};
  }
  if (op == "tail_prob_x1")
    return emit_scalar(c, op, J{{"alpha", c.alpha}, {"theta", c.theta}, {"k", c.k}},
                       exact::tail_prob_x1(c.alpha, c.theta, c.k));
  if (op == "binom_moment_x1")
    return emit_scalar(c, op, J{{"alpha", c.alpha}, {"theta", c.theta}, {"k", c.k}},
                       exact::binom_moment_x1(c.alpha, c.theta, c.k));
  if (op == "indicator_prob")
    return emit_scalar(c, op, J{{"theta", c.theta}, {"i", c.i}}, exact::indicator_prob(c.theta, c.i));
  if (op == "min_law")
    return emit_scalar(c, op, J{{"theta", c.theta}, {"n", c.n}}, exact::min_law(c.theta, c.n).p);
  if (op == "k0_pgf")
    return emit_scalar(c, op, J{{"theta", c.theta}, {"z", c.z}}, [&] {
      require(c.z >= -1.0 && c.z <= 1.0, "--z must lie in [-1, 1]");
      return exact::k0inf_pgf(c.theta, c.z);
    }());
  if (op == "k0_pmf") {
    require(c.tol > 0.0, "--tol must be positive");
    return emit_pmf(c, op, J{{"theta", c.theta}, {"tol", c.tol}}, exact::k0inf_pmf(c.theta, c.tol));
  }
  if (op == "complete_sample")
    return emit_scalar(c, op, J{{"theta", c.theta}}, exact::complete_sample_prob(c.theta));
  if (op == "levy_atoms")
    return emit_list(c, op, J{{"theta", c.theta}, {"kmax", c.kmax}}, "k", 1, exact::k0inf_levy_atoms(c.theta, c.kmax));
  if (op == "linf_tail")
    return emit_scalar(c, op, J{{"theta", c.theta}, {"k", c.k}}, exact::linf_tail(c.theta, c.k));
  if (op == "linf_mean") return emit_scalar(c, op, J{{"theta", c.theta}}, exact::linf_mean(c.theta));
  if (op == "linf_second_binom") return emit_scalar(c, op, J{{"theta", c.theta}}, exact::linf_second_binom(c.theta));
  if (op == "beta_log_params") {
    const auto r = exact::beta_log_series_params(c.a, c.b, c.jmax);
    J params{{"a", c.a}, {"b", c.b}, {"jmax", c.jmax}};
    if (c.format == "json") {
      J j;
      j["op"] = op;
      j["params"] = params;
      J terms = J::array();
      for (const auto& [pj, rate] : r.terms) terms.push_back(J{{"bernoulli_p", pj}, {"rate", rate}});
      j["terms"] = terms;
      j["tail_mean"] = r.tail_mean;
      return {j.dump() + "\n"};
    }
    std::string s = "j,bernoulli_p,rate\n";
    for (std::size_t t = 0; t < r.terms.size(); ++t)
      s += std::to_string(t) + "," + io::format_number(r.terms[t].first) + "," + io::format_number(r.terms[t].second) + "\n";
    s += "tail_mean," + io::format_number(r.tail_mean) + ",\n";
    return {s};
  }
  throw DomainError("--op: unknown exact operation '" + op + "'");
}

inline Output run_limit(const CliConfig& c) {
  using J = nlohmann::ordered_json;
  const std::string op = c.op.empty() ? "cdf" : c.op;
  if (op == "cdf") {
    const auto r = limits::limit_cdf_mn({c.alpha, c.theta, c.x, c.tol});
    if (c.format == "json") {
      auto j = scalar_doc(op, J{{"alpha", c.alpha}, {"theta", c.theta}, {"x", c.x}, {"tol", c.tol}}, r.value);
      j["raw_value"] = r.raw_value;
      j["abs_error_estimate"] = r.abs_error_estimate;
      return {j.dump() + "\n"};
    }
    return {io::format_number(r.value) + "\n"};
  }
  if (op == "cdf_grid") {
    require(c.points >= 2, "--points must be at least 2");
    require(c.x_min > 0.0 && c.x_max > c.x_min, "--x-min and --x-max must satisfy 0 < x-min < x-max");
    std::string s = c.format == "json" ? "" : "x,value,error_estimate\n";
    for (std::int64_t t = 0; t < c.points; ++t) {
      const double x = c.x_min * std::pow(c.x_max / c.x_min, static_cast<double>(t) / static_cast<double>(c.points - 1));
      const auto r = limits::limit_cdf_mn({c.alpha, c.theta, x, c.tol});
      if (c.format == "json")
        s += J{{"x", x}, {"value", r.value}, {"error_estimate", r.abs_error_estimate}}.dump() + "\n";
      else
        s += io::format_number(x) + "," + io::format_number(r.value) + "," + io::format_number(r.abs_error_estimate) + "\n";
    }
    return {s};
  }
  if (op == "half")
    return emit_scalar(c, op, J{{"theta", c.theta}, {"x", c.x}}, limits::limit_cdf_half(c.theta, c.x));
  if (op == "clt")
    return emit_scalar(c, op, J{{"theta", c.theta}, {"n", c.n}, {"x", c.x}}, limits::clt_reference_cdf(c.theta, c.n, c.x));
  if (op == "diversity")
    return emit_scalar(c, op, J{{"alpha", c.alpha}, {"theta", c.theta}, {"moment", c.moment}},
                       limits::diversity_moment(c.alpha, c.theta, c.moment));
  throw DomainError("--op: unknown limit operation '" + op + "'");
}

inline std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline std::string report_table(const std::vector<verify::TestReport>& reps) {
  std::ostringstream s;
  s << std::left;
  s << "experiment             statistic                                      kind         value        dof/n    p_value      decision\n";
  for (const auto& r : reps) {
    s.width(23);
    s << r.experiment_name;
    s.width(47);
    s << r.statistic_name;
    s.width(13);
    s << r.test_kind;
    s.width(13);
    s << short_number(r.statistic_value);
    s.width(9);
    s << r.dof_or_n;
    s.width(13);
    s << short_number(r.p_value);
    s << (r.pass ? "pass" : "FAIL");
    if (!r.notes.empty()) s << "  (" << r.notes << ")";
    s << "\n";
  }
  return s.str();
}

inline std::string csv_field(const std::string& v) {
  if (v.find_first_of(",\"\n") == std::string::npos) return v;
  std::string q = "\"";
  for (char ch : v) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

inline Output run_verify(const CliConfig& c, const std::vector<std::string>& set_flags) {
  auto has = [&](const std::string& f) { return std::find(set_flags.begin(), set_flags.end(), f) != set_flags.end(); };
  verify::ExperimentConfig cfg;
  if (has("--alpha")) cfg.alpha = c.alpha;
  if (has("--theta")) cfg.theta = c.theta;
  if (has("--n")) cfg.n = c.n;
  if (has("--replicates")) cfg.replicates = c.replicates;
  if (has("--b")) cfg.b = c.b;
  cfg.significance = c.significance;
  cfg.threads = resolve_threads(c.threads);

  std::vector<std::string> names;
  if (c.experiment == "all")
    for (const auto& e : verify::catalog()) names.push_back(e.name);
  else
    names.push_back(c.experiment);

  std::vector<verify::TestReport> reps;
  for (const auto& name : names) {
    bool known = false;
    for (const auto& e : verify::catalog()) known = known || e.name == name;
    require(known, "--experiment: unknown experiment '" + name + "'");
    auto r = verify::run_experiment(name, cfg, c.seed);
    reps.insert(reps.end(), r.begin(), r.end());
  }
  Output out;
  for (const auto& r : reps)
    if (!r.pass) out.code = kVerificationFailed;
  if (c.format == "table") {
    out.text = report_table(reps);
  } else if (c.format == "csv") {
    out.text = "experiment_name,spec,n,replicates,seed,statistic_name,test_kind,statistic_value,dof_or_n,p_value,decision,notes\n";
    for (const auto& r : reps)
      out.text += csv_field(r.experiment_name) + "," + csv_field(r.spec.describe()) + "," + std::to_string(r.n) + "," +
                  std::to_string(r.replicates) + "," + std::to_string(r.seed) + "," + csv_field(r.statistic_name) + "," +
                  r.test_kind + "," + io::format_number(r.statistic_value) + "," + std::to_string(r.dof_or_n) + "," +
                  io::format_number(r.p_value) + "," + (r.pass ? "pass" : "fail") + "," + csv_field(r.notes) + "\n";
  } else {
    for (const auto& r : reps) out.text += r.to_json().dump() + "\n";
  }
  return out;
}

inline std::string experiment_list() {
  std::string s = "experiments (or 'all'):\n";
  for (const auto& e : verify::catalog()) s += "  " + e.name + ": " + e.description + "\n";
  return s;
}

}  // namespace detail

/// Runs the CLI on argv (program name first). Results go to --out or `out`;
/// diagnostics to `err`. Returns the process exit code.
inline int execute(const std::vector<std::string>& argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CliConfig c;
  CLI::App app{"Samplers, exact laws, limit laws and verification for residual allocation models", "gemgaps"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Expand all help");

  auto common = [&](CLI::App* s) {
    s->add_option("--seed", c.seed, "Master seed")->capture_default_str();
    s->add_option("--out", c.out, "Output file, written atomically (default standard output)");
  };
  auto model_flags = [&](CLI::App* s) {
    s->add_option("--alpha", c.alpha, "GEM alpha in [0, 1)")->capture_default_str();
    s->add_option("--theta", c.theta, "GEM theta > -alpha")->capture_default_str();
  };

  auto* sample = app.add_subcommand("sample", "Draw samples from a residual allocation model");
  common(sample);
  model_flags(sample);
  sample->add_option("--model", c.model, "Hazard model")->check(CLI::IsMember({"gem", "constant", "beta"}))->capture_default_str();
  sample->add_option("--p", c.p, "Constant hazard p in (0, 1)")->capture_default_str();
  sample->add_option("--a", c.a, "Beta hazard parameter a > 0")->capture_default_str();
  sample->add_option("--b", c.b, "Beta hazard parameter b > 0")->capture_default_str();
  sample->add_option("--n", c.n, "Sample size")->capture_default_str();
  sample->add_option("--replicates", c.replicates, "Independent samples, one row each")->capture_default_str();
  sample->add_option("--method", c.method, "Sampler")->check(CLI::IsMember({"direct", "poisson", "two_stage"}))->capture_default_str();
  sample->add_option("--stat", c.stat, "Output per replicate")->check(CLI::IsMember({"values", "gaps", "profile", "max"}))->capture_default_str();
  sample->add_option("--format", c.format, "csv or json (default csv)")->check(CLI::IsMember({"csv", "json"}));

  auto* ex = app.add_subcommand("exact", "Evaluate an exact finite-n law");
  common(ex);
  model_flags(ex);
  ex->add_option("--op", c.op, "Operation")
      ->required()
      ->check(CLI::IsMember({"ewens", "dt", "gap_law", "mn_pmf", "mn_cdf", "tail_prob_x1", "binom_moment_x1",
                             "indicator_prob", "min_law", "beta_stopped", "k0_pgf", "k0_pmf", "complete_sample",
                             "levy_atoms", "linf_tail", "linf_mean", "linf_second_binom", "beta_log_params"}));
  ex->add_option("--n", c.n, "Sample size")->capture_default_str();
  ex->add_option("--k", c.k, "Level or moment order")->capture_default_str();
  ex->add_option("--i", c.i, "Gap index")->capture_default_str();
  ex->add_option("--b", c.b, "Beta parameter b > 0")->capture_default_str();
  ex->add_option("--a", c.a, "Beta parameter a > 0")->capture_default_str();
  ex->add_option("--z", c.z, "pgf argument in [-1, 1]")->capture_default_str();
  ex->add_option("--kmax", c.kmax, "Number of Levy atoms")->capture_default_str();
  ex->add_option("--jmax", c.jmax, "Last series index")->capture_default_str();
  ex->add_option("--tol", c.tol, "Truncation tolerance for pmfs")->capture_default_str();
  ex->add_option("--partition", c.partition, "Partition parts, e.g. 2,1");
  ex->add_option("--composition", c.composition, "Composition parts, e.g. 1,2");
  ex->add_option("--format", c.format, "csv or json (default csv)")->check(CLI::IsMember({"csv", "json"}));

  auto* lim = app.add_subcommand("limit", "Evaluate a large-n limit law");
  common(lim);
  model_flags(lim);
  lim->add_option("--op", c.op, "cdf (default), cdf_grid, half, clt or diversity")
      ->check(CLI::IsMember({"cdf", "cdf_grid", "half", "clt", "diversity"}));
  lim->add_option("--x", c.x, "Argument of the CDF")->capture_default_str();
  lim->add_option("--n", c.n, "Sample size for clt")->capture_default_str();
  lim->add_option("--moment", c.moment, "Moment order for diversity")->capture_default_str();
  lim->add_option("--tol", c.tol, "Absolute quadrature tolerance")->capture_default_str();
  lim->add_option("--x-min", c.x_min, "Grid start")->capture_default_str();
  lim->add_option("--x-max", c.x_max, "Grid end")->capture_default_str();
  lim->add_option("--points", c.points, "Grid size (log-spaced)")->capture_default_str();
  lim->add_option("--format", c.format, "csv or json (default csv)")->check(CLI::IsMember({"csv", "json"}));

  auto* ver = app.add_subcommand("verify", "Run Monte Carlo verification experiments");
  common(ver);
  ver->add_option("--experiment", c.experiment, "Experiment name or 'all'")->required();
  ver->add_option("--alpha", c.alpha, "alpha (experiment default if unset)");
  ver->add_option("--theta", c.theta, "theta (experiment default if unset)");
  ver->add_option("--n", c.n, "Sample size (experiment default if unset)");
  ver->add_option("--replicates", c.replicates, "Replicates (experiment default if unset)");
  ver->add_option("--b", c.b, "Beta parameter b (experiment default if unset)");
  ver->add_option("--threads", c.threads, "Worker threads; 0 uses GEMGAPS_THREADS, else all cores")->capture_default_str();
  ver->add_option("--significance", c.significance, "Test level")->capture_default_str();
  ver->add_option("--format", c.format, "json lines (default), table or csv")->check(CLI::IsMember({"json", "table", "csv"}));
  ver->footer(detail::experiment_list());

  for (auto* s : {sample, ex, lim})
    s->add_option("--threads", c.threads, "Worker threads (unused by this command)")->capture_default_str();

  std::vector<const char*> cargv;
  for (const auto& a : argv) cargv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(cargv.size()), cargv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  }

  CLI::App* chosen = app.get_subcommands().front();
  c.command = chosen->get_name();
  if (c.format.empty()) c.format = c.command == "verify" ? "json" : "csv";
  std::vector<std::string> set_flags;
  for (const auto* opt : chosen->get_options())
    if (opt->count() > 0) set_flags.push_back(opt->get_name());

  try {
    detail::Output o;
    if (c.command == "sample") o = detail::run_sample(c);
    else if (c.command == "exact") o = detail::run_exact(c);
    else if (c.command == "limit") o = detail::run_limit(c);
    else o = detail::run_verify(c, set_flags);
    if (c.out.empty()) out << o.text << std::flush;
    else io::write_atomic(c.out, o.text);
    return o.code;
  } catch (const SizeError& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    err << "numerical error: " << e.what() << "\n";
    return kNumerical;
  }
}

}  // namespace gemgaps::cli
