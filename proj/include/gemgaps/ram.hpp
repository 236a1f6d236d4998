#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <variant>

#include <nlohmann/json.hpp>

#include "gemgaps/errors.hpp"
#include "gemgaps/random.hpp"

namespace gemgaps {

/// Hazards H_i ~ beta(1 - alpha, theta + i alpha).
struct Gem {
  double alpha = 0.0;
  double theta = 1.0;
};

/// H_i = p for every i.
struct ConstantHazard {
  double p = 0.5;
};

/// H_i ~ beta(a, b) i.i.d.
struct IidBeta {
  double a = 1.0;
  double b = 1.0;
};

/// Residual allocation model P_j = H_j prod_{i<j} (1 - H_i).
class RamSpec {
 public:
  using Variant = std::variant<Gem, ConstantHazard, IidBeta>;

  RamSpec(Gem g) : v_(g) { validate(); }
  RamSpec(ConstantHazard c) : v_(c) { validate(); }
  RamSpec(IidBeta b) : v_(b) { validate(); }

  static RamSpec gem(double alpha, double theta) { return RamSpec(Gem{alpha, theta}); }

  const Variant& variant() const { return v_; }
  bool is_gem() const { return std::holds_alternative<Gem>(v_); }
  const Gem* as_gem() const { return std::get_if<Gem>(&v_); }

  /// log(H_i) and log(1 - H_i) for the i-th factor, i >= 1.
  template <class G>
  std::pair<double, double> draw_log_hazard(G& g, std::int64_t i) const {
    return std::visit(
        [&](const auto& s) -> std::pair<double, double> {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, Gem>) {
            return rng::log_beta_pair(g, 1.0 - s.alpha, s.theta + static_cast<double>(i) * s.alpha);
          } else if constexpr (std::is_same_v<T, ConstantHazard>) {
            return {std::log(s.p), std::log1p(-s.p)};
          } else {
            return rng::log_beta_pair(g, s.a, s.b);
          }
        },
        v_);
  }

  std::string describe() const {
    return std::visit(
        [](const auto& s) -> std::string {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, Gem>)
            return "GEM(" + fmt(s.alpha) + "," + fmt(s.theta) + ")";
          else if constexpr (std::is_same_v<T, ConstantHazard>)
            return "ConstantHazard(" + fmt(s.p) + ")";
          else
            return "IidBeta(" + fmt(s.a) + "," + fmt(s.b) + ")";
        },
        v_);
  }

  nlohmann::json to_json() const {
    return std::visit(
        [](const auto& s) -> nlohmann::json {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, Gem>)
            return {{"model", "GEM"}, {"alpha", s.alpha}, {"theta", s.theta}};
          else if constexpr (std::is_same_v<T, ConstantHazard>)
            return {{"model", "ConstantHazard"}, {"p", s.p}};
          else
            return {{"model", "IidBeta"}, {"a", s.a}, {"b", s.b}};
        },
        v_);
  }

 private:
  static std::string fmt(double x) {
    std::string s = std::to_string(x);
    s.erase(s.find_last_not_of('0') + 1);
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
  }

  void validate() const {
    std::visit(
        [](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, Gem>) {
            detail::require(s.alpha >= 0.0 && s.alpha < 1.0, "GEM: alpha must lie in [0, 1)");
            detail::require(s.theta > -s.alpha, "GEM: theta must exceed -alpha");
          } else if constexpr (std::is_same_v<T, ConstantHazard>) {
            detail::require(s.p > 0.0 && s.p < 1.0, "ConstantHazard: p must lie in (0, 1)");
          } else {
            detail::require(s.a > 0.0 && s.b > 0.0, "IidBeta: a and b must be positive");
          }
        },
        v_);
  }

  Variant v_;
};

}  // namespace gemgaps
