#pragma once

// sup_{h in H} R_D(h): closed form for a single bidder facing posted prices,
// otherwise a dense parameter grid scored on one shared Monte Carlo sample
// (common random numbers across grid points).

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "ssg/erm.hpp"
#include "ssg/errors.hpp"
#include "ssg/hypothesis.hpp"
#include "ssg/mechanisms.hpp"
#include "ssg/model.hpp"
#include "ssg/rng.hpp"
#include "ssg/true_revenue.hpp"

namespace ssg {

struct OptimumMethod {
  enum class Kind { Analytic, DenseGrid };
  Kind kind = Kind::Analytic;
  double step = 1e-3;
  std::size_t draws = 100000;
  Seed seed{};
  std::uint64_t grid_ceiling = 10'000'000;

  static OptimumMethod analytic() { return {}; }
  static OptimumMethod dense_grid(double step, std::size_t draws, Seed seed) {
    return {Kind::DenseGrid, step, draws, seed};
  }
};

struct OptimumResult {
  double value = 0.0;
  Hypothesis argmax;
  double std_error = 0.0;  // Monte Carlo error of `value`; 0 when analytic
  bool analytic = false;
};

struct PostedPriceOptimum {
  double price = 0.0;
  double revenue = 0.0;
};

// max_r r * P(V >= r) for one marginal.
inline PostedPriceOptimum best_posted_price(const Marginal& marginal) {
  if (const auto* u = std::get_if<Uniform>(&marginal)) {
    if (u->hi <= u->lo) return {u->lo, u->lo};
    if (u->hi >= 2.0 * u->lo) return {u->hi / 2.0, u->hi * u->hi / (4.0 * (u->hi - u->lo))};
    return {u->lo, u->lo};
  }
  if (const auto* d = std::get_if<Discrete>(&marginal)) {
    PostedPriceOptimum best{0.0, 0.0};
    for (double s : d->support) {
      const double rev = s * probability_at_least(marginal, s);
      if (rev > best.revenue || (rev == best.revenue && s > best.price)) best = {s, rev};
    }
    return best;
  }
  throw InvalidArgument("no closed-form posted-price optimum for this marginal");
}

inline bool has_analytic_optimum(const AuctionClass& cls, const DistributionSpec& spec) {
  if (cls.bidders != 1 || spec.bidders() != 1) return false;
  if (cls.kind == ClassKind::BestOf) return false;
  if (cls.items != 1 && cls.kind != ClassKind::ItemPrices) return false;
  for (const auto& m : spec.marginals()) {
    if (!detail::closed_form_marginal(m)) return false;
  }
  return true;
}

inline OptimumResult in_class_optimum(const AuctionClass& cls, const DistributionSpec& spec,
                                      const OptimumMethod& method = OptimumMethod::analytic()) {
  detail::check_class_fits(cls, spec.bidders(), spec.items());
  const Range range = spec.range();
  if (method.kind == OptimumMethod::Kind::Analytic) {
    if (!has_analytic_optimum(cls, spec)) {
      throw InvalidArgument("no closed-form optimum for " + std::string(class_name(cls.kind)) +
                            " under this distribution; use dense-grid");
    }
    std::vector<double> prices;
    double total = 0.0;
    for (std::size_t j = 0; j < cls.items; ++j) {
      const auto best = best_posted_price(spec.marginal(0, j));
      prices.push_back(best.price);
      total += best.revenue;
    }
    Hypothesis h = make_hypothesis(cls, prices[0], prices[0]);
    if (auto* t = std::get_if<TLevel>(&h)) {
      // Only the first level prices a lone bidder; park the rest at the top.
      for (std::size_t l = 1; l < t->levels; ++l) t->thresholds[l] = std::max(prices[0], range.hi);
    } else if (auto* p = std::get_if<ItemPrices>(&h)) {
      p->prices = prices;
    }
    return {total, std::move(h), 0.0, true};
  }

  if (!(method.step > 0.0)) throw InvalidArgument("grid step must be positive");
  if (method.draws == 0) throw InvalidArgument("dense-grid optimum needs at least one draw");
  const auto grid_over = [&](double lo, double hi) {
    std::vector<double> g;
    const auto steps = static_cast<std::size_t>(std::floor((hi - lo) / method.step + 1e-9));
    for (std::size_t i = 0; i <= steps; ++i) g.push_back(lo + static_cast<double>(i) * method.step);
    if (g.back() < hi) g.push_back(hi);
    return g;
  };
  const double k = static_cast<double>(cls.items);
  const CandidateSet grid(cls, uniform_pools(cls, grid_over(range.lo, range.hi), grid_over(k * range.lo, k * range.hi)),
                          range);
  if (grid.size() > method.grid_ceiling) {
    throw CeilingExceeded("dense grid has " + std::to_string(grid.size()) + " points, above the ceiling of " +
                          std::to_string(method.grid_ceiling));
  }
  Rng rng(method.seed.derive("in_class_optimum"));
  std::vector<ValuationProfile> draws;
  draws.reserve(method.draws);
  for (std::size_t d = 0; d < method.draws; ++d) draws.push_back(spec.draw(rng));

  double best = -std::numeric_limits<double>::infinity();
  std::optional<Hypothesis> argmax;
  grid.for_each([&](const Hypothesis& h) {
    double total = 0.0;
    for (const auto& v : draws) total += revenue(h, v);
    if (total >= best) {
      best = total;
      argmax = h;
    }
  });
  MeanAccumulator acc;
  for (const auto& v : draws) acc.add(revenue(*argmax, v));
  return {acc.mean(), std::move(*argmax), acc.std_error(), false};
}

}  // namespace ssg
