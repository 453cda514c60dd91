#pragma once

// Exact empirical revenue maximization.
//
// On a sample, every parameter can be raised to the next sample value of the
// matching coordinate without changing who is served, so an optimum always
// exists among sample-valued parameters. CandidateSet enumerates exactly those
// parameter vectors; ERM scans them in canonical (ascending lexicographic)
// order and keeps the last maximizer, i.e. ties go to the largest vector.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ssg/errors.hpp"
#include "ssg/hypothesis.hpp"
#include "ssg/mechanisms.hpp"
#include "ssg/model.hpp"

namespace ssg {

struct ErmOptions {
  std::uint64_t candidate_ceiling = 10'000'000;
};

// Candidate values for each parameter slot.
struct ValuePools {
  std::vector<std::vector<double>> by_bidder_item;    // [i * k + j]
  std::vector<std::vector<double>> by_item;           // [j], all bidders
  std::vector<std::vector<double>> bundle_by_bidder;  // [i]
  std::vector<double> bundle_any;
};

using ProfileView = std::span<const ValuationProfile* const>;

namespace detail {

inline void sort_unique(std::vector<double>& xs) {
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
}

inline std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

inline std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
  return b > std::numeric_limits<std::uint64_t>::max() - a ? std::numeric_limits<std::uint64_t>::max() : a + b;
}

inline bool needs_item_pools(ClassKind kind) { return kind != ClassKind::BundlePrice; }
inline bool needs_bundle_pools(ClassKind kind) {
  return kind == ClassKind::BundlePrice || kind == ClassKind::BestOf;
}

}  // namespace detail

// Realized values per slot; only the pools the class uses are filled.
inline ValuePools sample_pools(const AuctionClass& cls, ProfileView profiles) {
  const std::size_t n = cls.bidders;
  const std::size_t k = cls.items;
  ValuePools pools;
  if (detail::needs_item_pools(cls.kind)) {
    pools.by_bidder_item.assign(n * k, {});
    pools.by_item.assign(k, {});
    for (const auto* p : profiles) {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
          pools.by_bidder_item[i * k + j].push_back((*p)(i, j));
          pools.by_item[j].push_back((*p)(i, j));
        }
      }
    }
    for (auto& xs : pools.by_bidder_item) detail::sort_unique(xs);
    for (auto& xs : pools.by_item) detail::sort_unique(xs);
  }
  if (detail::needs_bundle_pools(cls.kind)) {
    pools.bundle_by_bidder.assign(n, {});
    for (const auto* p : profiles) {
      for (std::size_t i = 0; i < n; ++i) {
        const double b = p->bundle_value(i);
        pools.bundle_by_bidder[i].push_back(b);
        pools.bundle_any.push_back(b);
      }
    }
    for (auto& xs : pools.bundle_by_bidder) detail::sort_unique(xs);
    detail::sort_unique(pools.bundle_any);
  }
  return pools;
}

// Every slot gets the same grid; bundle slots get `bundle_grid`.
inline ValuePools uniform_pools(const AuctionClass& cls, std::vector<double> grid, std::vector<double> bundle_grid) {
  detail::sort_unique(grid);
  detail::sort_unique(bundle_grid);
  ValuePools pools;
  pools.by_bidder_item.assign(cls.bidders * cls.items, grid);
  pools.by_item.assign(cls.items, grid);
  pools.bundle_by_bidder.assign(cls.bidders, bundle_grid);
  pools.bundle_any = std::move(bundle_grid);
  return pools;
}

class CandidateSet {
 public:
  // One coordinate group of the mixed-radix enumeration: `entries` holds
  // count() tuples of `width` doubles in ascending lexicographic order.
  struct Axis {
    std::size_t width = 1;
    std::vector<double> entries;
    [[nodiscard]] std::size_t count() const { return entries.size() / width; }
  };

  // Product of axes written into parameters starting at `offset`; the other
  // parameters keep the values in `base`.
  struct Block {
    Hypothesis prototype;
    std::vector<double> base;
    std::size_t offset = 0;
    std::vector<Axis> axes;

    [[nodiscard]] std::uint64_t size() const {
      std::uint64_t total = 1;
      for (const auto& a : axes) total = detail::saturating_mul(total, a.count());
      return total;
    }
  };

  // T-level pools also get values.hi: a threshold above every sample value of
  // its bidder switches that level off, which sample values alone cannot do.
  CandidateSet(const AuctionClass& cls, const ValuePools& pools, Range values)
      : cls_(cls) {
    cls_.validate();
    const std::size_t n = cls.bidders;
    const std::size_t k = cls.items;
    const auto scalar_axis = [](const std::vector<double>& xs) { return Axis{1, xs}; };
    const auto bundle_axes = [&] {
      std::vector<Axis> axes;
      if (cls.anonymous) {
        axes.push_back(scalar_axis(pools.bundle_any));
      } else {
        for (std::size_t i = 0; i < n; ++i) axes.push_back(scalar_axis(pools.bundle_by_bidder[i]));
      }
      return axes;
    };
    const auto item_axes = [&] {
      std::vector<Axis> axes;
      if (cls.anonymous) {
        for (std::size_t j = 0; j < k; ++j) axes.push_back(scalar_axis(pools.by_item[j]));
      } else {
        for (std::size_t c = 0; c < n * k; ++c) axes.push_back(scalar_axis(pools.by_bidder_item[c]));
      }
      return axes;
    };
    const double inactive_item = values.lo;
    const double inactive_bundle = values.lo * static_cast<double>(k);
    Hypothesis proto = make_hypothesis(cls, inactive_item, inactive_bundle);
    const auto block = [&](Hypothesis h, std::vector<Axis> axes, std::size_t offset = 0) {
      Block b{std::move(h), {}, offset, std::move(axes)};
      b.base = parameters(b.prototype);
      blocks_.push_back(std::move(b));
    };

    switch (cls.kind) {
      case ClassKind::SingleReserve:
        block(proto, {scalar_axis(pools.by_bidder_item.at(0))});
        break;
      case ClassKind::AnonymousReserve:
        block(proto, {scalar_axis(pools.by_item.at(0))});
        break;
      case ClassKind::PlayerReserves: {
        std::vector<Axis> axes;
        for (std::size_t i = 0; i < n; ++i) axes.push_back(scalar_axis(pools.by_bidder_item.at(i)));
        block(proto, std::move(axes));
        break;
      }
      case ClassKind::TLevel: {
        std::vector<Axis> axes;
        for (std::size_t i = 0; i < n; ++i) {
          std::vector<double> pool = pools.by_bidder_item.at(i);
          pool.push_back(values.hi);
          detail::sort_unique(pool);
          axes.push_back(sorted_tuples(pool, cls.levels));
        }
        block(proto, std::move(axes));
        break;
      }
      case ClassKind::BundlePrice:
        block(proto, bundle_axes());
        break;
      case ClassKind::ItemPrices:
        block(proto, item_axes());
        break;
      case ClassKind::BestOf: {
        // Items-chosen vectors start with 0 and sort before bundle-chosen.
        auto items_proto = proto;
        std::get<BestOf>(items_proto).chosen = Branch::Items;
        const std::size_t bundle_slots = cls.anonymous ? 1 : n;
        block(items_proto, item_axes(), 1 + bundle_slots);
        block(proto, bundle_axes(), 1);
        break;
      }
    }
  }

  [[nodiscard]] const AuctionClass& auction_class() const noexcept { return cls_; }
  [[nodiscard]] const std::vector<Block>& blocks() const noexcept { return blocks_; }

  // Saturates at UINT64_MAX.
  [[nodiscard]] std::uint64_t size() const {
    std::uint64_t total = 0;
    for (const auto& b : blocks_) total = detail::saturating_add(total, b.size());
    return total;
  }

  // Calls f(const Hypothesis&) for every candidate in canonical order. The
  // reference is only valid during the call.
  template <class F>
  void for_each(F&& f) const {
    for (const auto& b : blocks_) {
      if (b.size() == 0) continue;
      Hypothesis h = b.prototype;
      std::vector<double> params = b.base;
      std::vector<std::size_t> digit(b.axes.size(), 0);
      for (bool more = true; more;) {
        std::size_t pos = b.offset;
        for (std::size_t a = 0; a < b.axes.size(); ++a) {
          const auto& axis = b.axes[a];
          std::copy_n(axis.entries.begin() + static_cast<std::ptrdiff_t>(digit[a] * axis.width), axis.width,
                      params.begin() + static_cast<std::ptrdiff_t>(pos));
          pos += axis.width;
        }
        assign_parameters(h, params);
        f(static_cast<const Hypothesis&>(h));
        // Odometer, last axis fastest.
        more = false;
        for (std::size_t a = b.axes.size(); a-- > 0;) {
          if (++digit[a] < b.axes[a].count()) {
            more = true;
            break;
          }
          digit[a] = 0;
        }
      }
    }
  }

  [[nodiscard]] std::vector<Hypothesis> materialize() const {
    std::vector<Hypothesis> out;
    for_each([&](const Hypothesis& h) { out.push_back(h); });
    return out;
  }

 private:
  // All nondecreasing `width`-tuples over `pool` (sorted), lexicographic.
  static Axis sorted_tuples(const std::vector<double>& pool, std::size_t width) {
    Axis axis{width, {}};
    std::vector<std::size_t> idx(width, 0);
    if (pool.empty()) return axis;
    for (;;) {
      for (std::size_t w = 0; w < width; ++w) axis.entries.push_back(pool[idx[w]]);
      std::size_t w = width;
      while (w > 0 && idx[w - 1] + 1 == pool.size()) --w;
      if (w == 0) break;
      const std::size_t next = idx[w - 1] + 1;
      for (std::size_t u = w - 1; u < width; ++u) idx[u] = next;
    }
    return axis;
  }

  AuctionClass cls_;
  std::vector<Block> blocks_;
};

namespace detail {

inline void check_class_fits(const AuctionClass& cls, std::size_t bidders, std::size_t items) {
  cls.validate();
  if (cls.bidders != bidders || cls.items != items) {
    throw DimensionMismatch(std::string(class_name(cls.kind)) + " class is for n = " + std::to_string(cls.bidders) +
                            ", k = " + std::to_string(cls.items) + " but the sample has n = " +
                            std::to_string(bidders) + ", k = " + std::to_string(items));
  }
}

// Profiles in canonical (lexicographic) order; sums taken in this order make
// every result independent of how the sample was ordered.
inline std::vector<const ValuationProfile*> canonical_view(const SampleSet& sample) {
  std::vector<const ValuationProfile*> view;
  view.reserve(sample.size());
  for (const auto& p : sample) view.push_back(&p);
  std::stable_sort(view.begin(), view.end(), [](const auto* a, const auto* b) { return *a < *b; });
  return view;
}

inline double revenue_sum(const Hypothesis& h, ProfileView profiles) {
  double total = 0.0;
  for (const auto* p : profiles) total += revenue(h, *p);
  return total;
}

}  // namespace detail

inline CandidateSet candidate_set(const AuctionClass& cls, const SampleSet& sample) {
  detail::check_class_fits(cls, sample.bidders(), sample.items());
  const auto view = detail::canonical_view(sample);
  return CandidateSet(cls, sample_pools(cls, view), sample.range());
}

// R_S(h) = (1/m) sum_t r(h, z_t).
inline double empirical_revenue(const Hypothesis& h, const SampleSet& sample) {
  const auto view = detail::canonical_view(sample);
  return detail::revenue_sum(h, view) / static_cast<double>(sample.size());
}

struct ErmResult {
  Hypothesis hypothesis;
  double empirical_revenue = 0.0;
  std::uint64_t candidates = 0;
};

// ERM over an already canonically ordered view. Exposed so split-sample
// enumeration can run it on subsets without copying profiles.
inline ErmResult erm_on_view(const AuctionClass& cls, ProfileView profiles, Range values,
                             const ErmOptions& options = {}) {
  if (profiles.empty()) throw InvalidArgument("ERM needs a nonempty sample");
  const CandidateSet candidates(cls, sample_pools(cls, profiles), values);
  const std::uint64_t count = candidates.size();
  if (count > options.candidate_ceiling) {
    throw CeilingExceeded(std::string(class_name(cls.kind)) + " has " +
                          (count == std::numeric_limits<std::uint64_t>::max() ? std::string("too many")
                                                                              : std::to_string(count)) +
                          " candidates, above the ceiling of " + std::to_string(options.candidate_ceiling));
  }
  double best = -std::numeric_limits<double>::infinity();
  std::optional<Hypothesis> winner;
  candidates.for_each([&](const Hypothesis& h) {
    const double total = detail::revenue_sum(h, profiles);
    if (total >= best) {
      best = total;
      winner = h;
    }
  });
  return ErmResult{std::move(*winner), best / static_cast<double>(profiles.size()), count};
}

inline ErmResult erm_detailed(const AuctionClass& cls, const SampleSet& sample, const ErmOptions& options = {}) {
  detail::check_class_fits(cls, sample.bidders(), sample.items());
  const auto view = detail::canonical_view(sample);
  return erm_on_view(cls, view, sample.range(), options);
}

// h_S = argmax_h R_S(h), ties to the largest parameter vector.
inline Hypothesis erm(const AuctionClass& cls, const SampleSet& sample, const ErmOptions& options = {}) {
  return erm_detailed(cls, sample, options).hypothesis;
}

}  // namespace ssg
