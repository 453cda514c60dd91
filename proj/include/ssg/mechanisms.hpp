#pragma once

// Executable truthful mechanisms for every hypothesis class.
//
// Single-item markets use second price with lazy reserves: the highest
// report (ties to the lowest bidder index) is the tentative winner, who buys
// iff their report clears their own reserve and pays max(reserve, highest
// competing report). With one bidder this is a posted price. Bundle pricing
// runs the same rule on additive bundle values; item pricing runs it item by
// item.

#include <algorithm>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "ssg/errors.hpp"
#include "ssg/hypothesis.hpp"
#include "ssg/model.hpp"

namespace ssg {

struct Outcome {
  std::vector<std::optional<std::size_t>> allocation;  // per item
  std::vector<double> payments;                        // per bidder

  [[nodiscard]] double revenue() const {
    double total = 0.0;
    for (double p : payments) total += p;
    return total;
  }
};

namespace detail {

struct Sale {
  std::size_t winner;
  double price;
};

// value(i) and reserve(i) are callables; reports equal to the reserve sell.
template <class ValueAt, class ReserveAt>
std::optional<Sale> lazy_second_price(std::size_t bidders, ValueAt value, ReserveAt reserve) {
  std::size_t winner = 0;
  double top = value(0);
  for (std::size_t i = 1; i < bidders; ++i) {
    const double v = value(i);
    if (v > top) {
      top = v;
      winner = i;
    }
  }
  const double r = reserve(winner);
  if (top < r) return std::nullopt;
  double competing = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < bidders; ++i) {
    if (i != winner) competing = std::max(competing, value(i));
  }
  return Sale{winner, std::max(r, competing)};
}

// Index = number of thresholds the value clears (rows are sorted).
inline std::size_t tlevel_index(std::span<const double> row, double value) {
  return static_cast<std::size_t>(std::upper_bound(row.begin(), row.end(), value) - row.begin());
}

inline std::optional<Sale> tlevel_sale(const TLevel& h, const ValuationProfile& v) {
  const std::size_t n = v.bidders();
  std::size_t winner = 0;
  std::size_t best = tlevel_index(h.row(0), v(0, 0));
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t idx = tlevel_index(h.row(i), v(i, 0));
    if (idx > best) {
      best = idx;
      winner = i;
    }
  }
  if (best == 0) return std::nullopt;
  // Smallest index at which the winner still beats everyone; lower-numbered
  // bidders win ties, so beating them needs one level more.
  std::size_t needed = 1;
  for (std::size_t o = 0; o < n; ++o) {
    if (o == winner) continue;
    const std::size_t idx = tlevel_index(h.row(o), v(o, 0));
    needed = std::max(needed, idx + (o < winner ? 1 : 0));
  }
  return Sale{winner, h.row(winner)[needed - 1]};
}

inline void check_shape(const Hypothesis& h, std::size_t n, std::size_t k) {
  const auto fail = [&] {
    throw DimensionMismatch(std::string(class_name(kind_of(h))) + " hypothesis does not fit a profile with n = " +
                            std::to_string(n) + ", k = " + std::to_string(k));
  };
  const auto bundle_ok = [&](const BundlePrice& b) { return b.prices.size() == (b.anonymous ? 1 : n); };
  const auto items_ok = [&](const ItemPrices& p) {
    return p.items == k && p.prices.size() == (p.anonymous ? k : n * k);
  };
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, SingleReserve>) {
          if (n != 1 || k != 1) fail();
        } else if constexpr (std::is_same_v<T, AnonymousReserve>) {
          if (k != 1) fail();
        } else if constexpr (std::is_same_v<T, PlayerReserves>) {
          if (k != 1 || x.reserves.size() != n) fail();
        } else if constexpr (std::is_same_v<T, TLevel>) {
          if (k != 1 || x.levels == 0 || x.thresholds.size() != n * x.levels) fail();
        } else if constexpr (std::is_same_v<T, BundlePrice>) {
          if (!bundle_ok(x)) fail();
        } else if constexpr (std::is_same_v<T, ItemPrices>) {
          if (!items_ok(x)) fail();
        } else {
          if (!bundle_ok(x.bundle) || !items_ok(x.items)) fail();
        }
      },
      h);
}

template <class Sink>
void run_bundle(const BundlePrice& b, const ValuationProfile& v, Sink& sink) {
  const auto sale = lazy_second_price(
      v.bidders(), [&](std::size_t i) { return v.bundle_value(i); },
      [&](std::size_t i) { return b.anonymous ? b.prices[0] : b.prices[i]; });
  if (sale) sink(0, v.items(), sale->winner, sale->price);
}

template <class Sink>
void run_items(const ItemPrices& p, const ValuationProfile& v, Sink& sink) {
  const std::size_t k = v.items();
  for (std::size_t j = 0; j < k; ++j) {
    const auto sale = lazy_second_price(
        v.bidders(), [&](std::size_t i) { return v(i, j); },
        [&](std::size_t i) { return p.anonymous ? p.prices[j] : p.prices[i * k + j]; });
    if (sale) sink(j, j + 1, sale->winner, sale->price);
  }
}

// Calls sink(item_begin, item_end, winner, price) for every sale.
template <class Sink>
void execute(const Hypothesis& h, const ValuationProfile& v, Sink& sink) {
  const auto single_item = [&](std::optional<Sale> sale) {
    if (sale) sink(0, 1, sale->winner, sale->price);
  };
  const auto value0 = [&](std::size_t i) { return v(i, 0); };
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, SingleReserve> || std::is_same_v<T, AnonymousReserve>) {
          single_item(lazy_second_price(v.bidders(), value0, [&](std::size_t) { return x.reserve; }));
        } else if constexpr (std::is_same_v<T, PlayerReserves>) {
          single_item(lazy_second_price(v.bidders(), value0, [&](std::size_t i) { return x.reserves[i]; }));
        } else if constexpr (std::is_same_v<T, TLevel>) {
          single_item(tlevel_sale(x, v));
        } else if constexpr (std::is_same_v<T, BundlePrice>) {
          run_bundle(x, v, sink);
        } else if constexpr (std::is_same_v<T, ItemPrices>) {
          run_items(x, v, sink);
        } else {
          if (x.chosen == Branch::Bundle) {
            run_bundle(x.bundle, v, sink);
          } else {
            run_items(x.items, v, sink);
          }
        }
      },
      h);
}

}  // namespace detail

inline Outcome run_mechanism(const Hypothesis& h, const ValuationProfile& v) {
  detail::check_shape(h, v.bidders(), v.items());
  Outcome out{std::vector<std::optional<std::size_t>>(v.items()), std::vector<double>(v.bidders(), 0.0)};
  auto record = [&](std::size_t first, std::size_t last, std::size_t winner, double price) {
    for (std::size_t j = first; j < last; ++j) out.allocation[j] = winner;
    out.payments[winner] += price;
  };
  detail::execute(h, v, record);
  return out;
}

// r(h, v): total payment collected.
inline double revenue(const Hypothesis& h, const ValuationProfile& v) {
  detail::check_shape(h, v.bidders(), v.items());
  double total = 0.0;
  auto add = [&](std::size_t, std::size_t, std::size_t, double price) { total += price; };
  detail::execute(h, v, add);
  return total;
}

// Quasi-linear utility of `bidder` with true values `truth` when the
// mechanism runs on `reported`.
inline double utility(const Hypothesis& h, const ValuationProfile& truth, const ValuationProfile& reported,
                      std::size_t bidder) {
  const Outcome out = run_mechanism(h, reported);
  double value = 0.0;
  for (std::size_t j = 0; j < truth.items(); ++j) {
    if (out.allocation[j] == bidder) value += truth(bidder, j);
  }
  return value - out.payments[bidder];
}

}  // namespace ssg
