#pragma once

#include <optional>
#include <vector>

#include "ssg/errors.hpp"
#include "ssg/hypothesis.hpp"
#include "ssg/mechanisms.hpp"
#include "ssg/model.hpp"
#include "ssg/rng.hpp"

namespace ssg {

struct RevenueEstimate {
  double value = 0.0;
  double std_error = 0.0;  // zero for closed forms
  bool analytic = false;
};

struct RevenueMethod {
  enum class Kind { Analytic, MonteCarlo };
  Kind kind = Kind::Analytic;
  std::size_t draws = 100000;
  Seed seed{};

  static RevenueMethod analytic() { return {}; }
  static RevenueMethod monte_carlo(std::size_t draws, Seed seed) { return {Kind::MonteCarlo, draws, seed}; }
};

namespace detail {

inline bool closed_form_marginal(const Marginal& m) {
  return std::holds_alternative<Uniform>(m) || std::holds_alternative<Discrete>(m);
}

// Per-item posted prices when `h` acts as a posted-price mechanism for one
// bidder; nullopt otherwise.
inline std::optional<std::vector<double>> posted_prices(const Hypothesis& h, std::size_t bidders, std::size_t items) {
  if (bidders != 1) return std::nullopt;
  return std::visit(
      [&](const auto& x) -> std::optional<std::vector<double>> {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, SingleReserve> || std::is_same_v<T, AnonymousReserve>) {
          return std::vector<double>{x.reserve};
        } else if constexpr (std::is_same_v<T, PlayerReserves>) {
          return x.reserves;
        } else if constexpr (std::is_same_v<T, TLevel>) {
          return std::vector<double>{x.thresholds.front()};
        } else if constexpr (std::is_same_v<T, BundlePrice>) {
          if (items != 1) return std::nullopt;
          return x.prices;
        } else if constexpr (std::is_same_v<T, ItemPrices>) {
          return x.prices;
        } else {
          if (x.chosen == Branch::Items) return x.items.prices;
          if (items != 1) return std::nullopt;
          return x.bundle.prices;
        }
      },
      h);
}

}  // namespace detail

// Whether R_D(h) has a closed form here: a single bidder facing posted
// prices, with uniform or discrete marginals.
inline bool has_analytic_revenue(const Hypothesis& h, const DistributionSpec& spec) {
  if (!detail::posted_prices(h, spec.bidders(), spec.items())) return false;
  for (const auto& m : spec.marginals()) {
    if (!detail::closed_form_marginal(m)) return false;
  }
  return true;
}

// R_D(h) = E_{v~D}[r(h, v)].
inline RevenueEstimate true_revenue(const Hypothesis& h, const DistributionSpec& spec,
                                    const RevenueMethod& method = RevenueMethod::analytic()) {
  if (method.kind == RevenueMethod::Kind::Analytic) {
    if (!has_analytic_revenue(h, spec)) {
      throw InvalidArgument("no closed-form revenue for " + std::string(class_name(kind_of(h))) +
                            " under this distribution; use monte-carlo");
    }
    detail::check_shape(h, spec.bidders(), spec.items());
    const auto prices = *detail::posted_prices(h, spec.bidders(), spec.items());
    double total = 0.0;
    for (std::size_t j = 0; j < prices.size(); ++j) {
      total += prices[j] * probability_at_least(spec.marginal(0, j), prices[j]);
    }
    return {total, 0.0, true};
  }
  if (method.draws == 0) throw InvalidArgument("monte-carlo revenue needs at least one draw");
  Rng rng(method.seed.derive("true_revenue"));
  MeanAccumulator acc;
  for (std::size_t d = 0; d < method.draws; ++d) acc.add(revenue(h, spec.draw(rng)));
  return {acc.mean(), acc.std_error(), false};
}

// Analytic when available, Monte Carlo with `draws` otherwise.
inline RevenueEstimate true_revenue_auto(const Hypothesis& h, const DistributionSpec& spec, std::size_t draws,
                                         Seed seed) {
  if (has_analytic_revenue(h, spec)) return true_revenue(h, spec, RevenueMethod::analytic());
  return true_revenue(h, spec, RevenueMethod::monte_carlo(draws, seed));
}

}  // namespace ssg
