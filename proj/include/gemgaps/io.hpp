#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gemgaps/errors.hpp"
#include "gemgaps/pmf.hpp"
#include "gemgaps/sampler.hpp"

namespace gemgaps::io {

/// Shortest decimal string that parses back to the same double.
inline std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

/// JSON value for a double; non-finite values become strings.
inline nlohmann::ordered_json json_number(double x) {
  if (std::isfinite(x)) return x;
  return format_number(x);
}

/// Writes content to a sibling temporary file, then renames it over path.
inline void write_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw DomainError("--out: cannot open '" + tmp.string() + "' for writing");
    f << content;
    f.flush();
    if (!f) throw DomainError("--out: write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw DomainError("--out: cannot rename onto '" + path.string() + "'");
  }
}

/// Two columns (k, probability) and a final tail_bound record.
inline std::string pmf_csv(const DiscretePmf& pmf) {
  std::string s = "k,probability\n";
  for (std::int64_t k = pmf.support_offset; k <= pmf.last(); ++k)
    s += std::to_string(k) + "," + format_number(pmf.prob(k)) + "\n";
  s += "tail_bound," + format_number(pmf.tail_bound) + "\n";
  return s;
}

inline nlohmann::ordered_json pmf_json(const DiscretePmf& pmf) {
  nlohmann::ordered_json j;
  j["support_offset"] = pmf.support_offset;
  j["probs"] = pmf.probs;
  j["tail_bound"] = pmf.tail_bound;
  return j;
}

inline std::string sample_csv_row(std::int64_t replicate, const std::vector<std::int64_t>& values) {
  std::string s = std::to_string(replicate);
  for (auto v : values) s += "," + std::to_string(v);
  return s + "\n";
}

inline std::string sample_csv_header(std::size_t n, const std::string& prefix) {
  std::string s = "replicate";
  for (std::size_t i = 1; i <= n; ++i) s += "," + prefix + std::to_string(i);
  return s + "\n";
}

}  // namespace gemgaps::io
