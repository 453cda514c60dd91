#pragma once

// Text and JSON forms of value distributions.
//
//   uniform:LO:HI          uniform on [LO, HI]
//   texp:RATE:CAP          exponential(RATE) truncated to [0, CAP]
//   discrete:V@P,V@P,...   finite support
//   point:C                point mass at C
//
// A distribution string is one marginal (used for every bidder and item) or
// n*k marginals separated by ';' in row-major (bidder, item) order.

#include <cstdlib>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ssg/errors.hpp"
#include "ssg/model.hpp"

namespace ssg {

namespace detail {

inline std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = text.find(sep, start);
    out.emplace_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline double parse_number(const std::string& text) {
  char* end = nullptr;
  const double x = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size()) throw InvalidArgument("not a number: '" + text + "'");
  return x;
}

}  // namespace detail

inline Marginal parse_marginal(std::string_view text) {
  const auto parts = detail::split(text, ':');
  const auto& kind = parts[0];
  const auto need = [&](std::size_t count) {
    if (parts.size() != count) throw InvalidArgument("malformed distribution '" + std::string(text) + "'");
  };
  if (kind == "uniform") {
    need(3);
    return Uniform{detail::parse_number(parts[1]), detail::parse_number(parts[2])};
  }
  if (kind == "texp") {
    need(3);
    return TruncatedExponential{detail::parse_number(parts[1]), detail::parse_number(parts[2])};
  }
  if (kind == "point") {
    need(2);
    return point_mass(detail::parse_number(parts[1]));
  }
  if (kind == "discrete") {
    need(2);
    Discrete d;
    for (const auto& atom : detail::split(parts[1], ',')) {
      const auto vp = detail::split(atom, '@');
      if (vp.size() != 2) throw InvalidArgument("discrete atoms are written VALUE@PROBABILITY");
      d.support.push_back(detail::parse_number(vp[0]));
      d.probabilities.push_back(detail::parse_number(vp[1]));
    }
    return d;
  }
  throw InvalidArgument("unknown distribution '" + std::string(text) + "'");
}

inline DistributionSpec parse_distribution(std::string_view text, std::size_t bidders, std::size_t items,
                                           Range range = {}) {
  const auto parts = detail::split(text, ';');
  if (parts.size() == 1) return DistributionSpec::iid(bidders, items, parse_marginal(parts[0]), range);
  if (parts.size() != bidders * items) {
    throw DimensionMismatch("distribution lists " + std::to_string(parts.size()) + " marginals, expected 1 or n*k = " +
                            std::to_string(bidders * items));
  }
  std::vector<Marginal> marginals;
  for (const auto& p : parts) marginals.push_back(parse_marginal(p));
  return DistributionSpec(bidders, items, std::move(marginals), range);
}

inline nlohmann::json to_json(const Marginal& marginal) {
  return std::visit(
      [](const auto& d) -> nlohmann::json {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Uniform>) {
          return {{"kind", "uniform"}, {"lo", d.lo}, {"hi", d.hi}};
        } else if constexpr (std::is_same_v<T, TruncatedExponential>) {
          return {{"kind", "texp"}, {"rate", d.rate}, {"cap", d.cap}};
        } else {
          return {{"kind", "discrete"}, {"support", d.support}, {"probabilities", d.probabilities}};
        }
      },
      marginal);
}

inline nlohmann::json to_json(const DistributionSpec& spec) {
  nlohmann::json marginals = nlohmann::json::array();
  for (const auto& m : spec.marginals()) marginals.push_back(to_json(m));
  return {{"n", spec.bidders()},
          {"k", spec.items()},
          {"alpha", spec.range().lo},
          {"beta", spec.range().hi},
          {"marginals", marginals}};
}

}  // namespace ssg
