#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "ssg/errors.hpp"
#include "ssg/model.hpp"

namespace ssg {

enum class ClassKind {
  SingleReserve,     // one bidder, one item, posted price
  AnonymousReserve,  // second price with one anonymous reserve
  PlayerReserves,    // second price with lazy per-bidder reserves
  TLevel,            // per-bidder sorted thresholds
  BundlePrice,       // grand bundle, additive values
  ItemPrices,        // each item sold separately
  BestOf,            // seller picks bundle pricing or item pricing
};

inline constexpr std::string_view class_name(ClassKind kind) {
  switch (kind) {
    case ClassKind::SingleReserve: return "single-reserve";
    case ClassKind::AnonymousReserve: return "anonymous-reserve";
    case ClassKind::PlayerReserves: return "player-reserves";
    case ClassKind::TLevel: return "t-level";
    case ClassKind::BundlePrice: return "bundle";
    case ClassKind::ItemPrices: return "item-prices";
    case ClassKind::BestOf: return "best-of";
  }
  return "?";
}

inline ClassKind parse_class_kind(std::string_view name) {
  for (auto kind : {ClassKind::SingleReserve, ClassKind::AnonymousReserve,
                    ClassKind::PlayerReserves, ClassKind::TLevel, ClassKind::BundlePrice,
                    ClassKind::ItemPrices, ClassKind::BestOf}) {
    if (class_name(kind) == name) return kind;
  }
  throw InvalidArgument("unknown auction class '" + std::string(name) + "'");
}

// A hypothesis class together with the market shape it is used on.
struct AuctionClass {
  ClassKind kind = ClassKind::SingleReserve;
  std::size_t bidders = 1;
  std::size_t items = 1;
  std::size_t levels = 0;  // t-level thresholds per bidder
  bool anonymous = true;   // bundle / item / best-of pricing style

  void validate() const {
    if (bidders == 0 || items == 0) throw InvalidArgument("class needs n >= 1 and k >= 1");
    switch (kind) {
      case ClassKind::SingleReserve:
        if (bidders != 1 || items != 1) throw DimensionMismatch("single-reserve needs n = 1, k = 1");
        break;
      case ClassKind::AnonymousReserve:
      case ClassKind::PlayerReserves:
        if (items != 1) throw DimensionMismatch(std::string(class_name(kind)) + " needs k = 1");
        break;
      case ClassKind::TLevel:
        if (items != 1) throw DimensionMismatch("t-level needs k = 1");
        if (levels == 0) throw InvalidArgument("t-level needs at least one threshold level");
        break;
      default:
        break;
    }
  }

  // Revenue of any hypothesis in the class lies in [0, items * hi].
  [[nodiscard]] Range revenue_range(Range values) const { return Range{0.0, static_cast<double>(items) * values.hi}; }

  friend bool operator==(const AuctionClass&, const AuctionClass&) = default;
};

// ---------------------------------------------------------------------------
// Hypotheses.

struct SingleReserve {
  double reserve = 0.0;
  friend bool operator==(const SingleReserve&, const SingleReserve&) = default;
};

struct AnonymousReserve {
  double reserve = 0.0;
  friend bool operator==(const AnonymousReserve&, const AnonymousReserve&) = default;
};

struct PlayerReserves {
  std::vector<double> reserves;  // one per bidder
  friend bool operator==(const PlayerReserves&, const PlayerReserves&) = default;
};

struct TLevel {
  std::size_t levels = 1;
  std::vector<double> thresholds;  // bidders x levels, each row nondecreasing

  [[nodiscard]] std::size_t bidders() const noexcept { return levels == 0 ? 0 : thresholds.size() / levels; }
  [[nodiscard]] std::span<const double> row(std::size_t bidder) const noexcept {
    return {thresholds.data() + bidder * levels, levels};
  }
  friend bool operator==(const TLevel&, const TLevel&) = default;
};

struct BundlePrice {
  bool anonymous = true;
  std::vector<double> prices;  // one price, or one per bidder
  friend bool operator==(const BundlePrice&, const BundlePrice&) = default;
};

struct ItemPrices {
  bool anonymous = true;
  std::size_t items = 1;
  std::vector<double> prices;  // k prices, or bidders x k row-major
  friend bool operator==(const ItemPrices&, const ItemPrices&) = default;
};

enum class Branch { Items = 0, Bundle = 1 };

// Seller commits to one branch; the other branch's parameters are carried
// but unused.
struct BestOf {
  Branch chosen = Branch::Bundle;
  BundlePrice bundle;
  ItemPrices items;
  friend bool operator==(const BestOf&, const BestOf&) = default;
};

using Hypothesis =
    std::variant<SingleReserve, AnonymousReserve, PlayerReserves, TLevel, BundlePrice, ItemPrices, BestOf>;

inline ClassKind kind_of(const Hypothesis& h) { return static_cast<ClassKind>(h.index()); }

// Flattened parameter vector. Canonical order of hypotheses within a class is
// lexicographic on this vector; best-of leads with the branch code.
inline std::vector<double> parameters(const Hypothesis& h) {
  return std::visit(
      [](const auto& x) -> std::vector<double> {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, SingleReserve> || std::is_same_v<T, AnonymousReserve>) {
          return {x.reserve};
        } else if constexpr (std::is_same_v<T, PlayerReserves>) {
          return x.reserves;
        } else if constexpr (std::is_same_v<T, TLevel>) {
          return x.thresholds;
        } else if constexpr (std::is_same_v<T, BundlePrice> || std::is_same_v<T, ItemPrices>) {
          return x.prices;
        } else {
          std::vector<double> p{static_cast<double>(x.chosen)};
          p.insert(p.end(), x.bundle.prices.begin(), x.bundle.prices.end());
          p.insert(p.end(), x.items.prices.begin(), x.items.prices.end());
          return p;
        }
      },
      h);
}

// Overwrites the parameters in place; `values` must have the length
// parameters(h) would return.
inline void assign_parameters(Hypothesis& h, std::span<const double> values) {
  std::visit(
      [&](auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, SingleReserve> || std::is_same_v<T, AnonymousReserve>) {
          x.reserve = values[0];
        } else if constexpr (std::is_same_v<T, PlayerReserves>) {
          std::copy(values.begin(), values.end(), x.reserves.begin());
        } else if constexpr (std::is_same_v<T, TLevel>) {
          std::copy(values.begin(), values.end(), x.thresholds.begin());
        } else if constexpr (std::is_same_v<T, BundlePrice> || std::is_same_v<T, ItemPrices>) {
          std::copy(values.begin(), values.end(), x.prices.begin());
        } else {
          x.chosen = values[0] != 0.0 ? Branch::Bundle : Branch::Items;
          auto it = values.begin() + 1;
          std::copy(it, it + static_cast<std::ptrdiff_t>(x.bundle.prices.size()), x.bundle.prices.begin());
          it += static_cast<std::ptrdiff_t>(x.bundle.prices.size());
          std::copy(it, it + static_cast<std::ptrdiff_t>(x.items.prices.size()), x.items.prices.begin());
        }
      },
      h);
}

// Strict weak order: class tag, then pricing style, then parameters.
struct HypothesisLess {
  bool operator()(const Hypothesis& a, const Hypothesis& b) const {
    if (a.index() != b.index()) return a.index() < b.index();
    const auto style = [](const Hypothesis& h) -> int {
      if (const auto* p = std::get_if<BundlePrice>(&h)) return p->anonymous ? 0 : 1;
      if (const auto* p = std::get_if<ItemPrices>(&h)) return p->anonymous ? 0 : 1;
      if (const auto* p = std::get_if<BestOf>(&h)) return p->bundle.anonymous ? 0 : 1;
      return 0;
    };
    if (style(a) != style(b)) return style(a) < style(b);
    const auto pa = parameters(a);
    const auto pb = parameters(b);
    return std::lexicographical_compare(pa.begin(), pa.end(), pb.begin(), pb.end());
  }
};

// Hypothesis with every parameter at `fill`, shaped for the class.
inline Hypothesis make_hypothesis(const AuctionClass& cls, double fill = 0.0, double bundle_fill = 0.0) {
  cls.validate();
  const std::size_t n = cls.bidders;
  const std::size_t k = cls.items;
  const auto bundle = [&] {
    return BundlePrice{cls.anonymous, std::vector<double>(cls.anonymous ? 1 : n, bundle_fill)};
  };
  const auto items = [&] {
    return ItemPrices{cls.anonymous, k, std::vector<double>(cls.anonymous ? k : n * k, fill)};
  };
  switch (cls.kind) {
    case ClassKind::SingleReserve: return SingleReserve{fill};
    case ClassKind::AnonymousReserve: return AnonymousReserve{fill};
    case ClassKind::PlayerReserves: return PlayerReserves{std::vector<double>(n, fill)};
    case ClassKind::TLevel: return TLevel{cls.levels, std::vector<double>(n * cls.levels, fill)};
    case ClassKind::BundlePrice: return bundle();
    case ClassKind::ItemPrices: return items();
    case ClassKind::BestOf: return BestOf{Branch::Bundle, bundle(), items()};
  }
  throw InvalidArgument("unknown class");
}

// Checks that `h` belongs to `cls` over the value range: shapes match, item
// prices and reserves in [lo, hi], bundle prices in [k*lo, k*hi], t-level rows
// sorted.
inline void validate(const Hypothesis& h, const AuctionClass& cls, Range values) {
  cls.validate();
  if (kind_of(h) != cls.kind) throw DimensionMismatch("hypothesis does not belong to class " + std::string(class_name(cls.kind)));
  const Range bundle_range{values.lo * static_cast<double>(cls.items), values.hi * static_cast<double>(cls.items)};
  const auto check = [](std::span<const double> ps, Range r, const char* what) {
    for (double p : ps) {
      if (!std::isfinite(p) || !r.contains(p)) throw InvalidArgument(std::string(what) + " outside the allowed range");
    }
  };
  const auto check_bundle = [&](const BundlePrice& b) {
    if (b.anonymous != cls.anonymous || b.prices.size() != (cls.anonymous ? 1 : cls.bidders)) {
      throw DimensionMismatch("bundle price shape does not match the class");
    }
    check(b.prices, bundle_range, "bundle price");
  };
  const auto check_items = [&](const ItemPrices& p) {
    if (p.anonymous != cls.anonymous || p.items != cls.items ||
        p.prices.size() != (cls.anonymous ? cls.items : cls.bidders * cls.items)) {
      throw DimensionMismatch("item price shape does not match the class");
    }
    check(p.prices, values, "item price");
  };
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, SingleReserve> || std::is_same_v<T, AnonymousReserve>) {
          check(std::span<const double>(&x.reserve, 1), values, "reserve");
        } else if constexpr (std::is_same_v<T, PlayerReserves>) {
          if (x.reserves.size() != cls.bidders) throw DimensionMismatch("one reserve per bidder required");
          check(x.reserves, values, "reserve");
        } else if constexpr (std::is_same_v<T, TLevel>) {
          if (x.levels != cls.levels || x.thresholds.size() != cls.bidders * cls.levels) {
            throw DimensionMismatch("t-level thresholds shape does not match the class");
          }
          check(x.thresholds, values, "threshold");
          for (std::size_t i = 0; i < cls.bidders; ++i) {
            const auto row = x.row(i);
            if (!std::is_sorted(row.begin(), row.end())) throw InvalidArgument("t-level thresholds must be nondecreasing");
          }
        } else if constexpr (std::is_same_v<T, BundlePrice>) {
          check_bundle(x);
        } else if constexpr (std::is_same_v<T, ItemPrices>) {
          check_items(x);
        } else {
          check_bundle(x.bundle);
          check_items(x.items);
        }
      },
      h);
}

// ---------------------------------------------------------------------------
// Tagged record serialization: {"class": ..., "params": [...], ...}.

inline nlohmann::json to_record(const Hypothesis& h) {
  nlohmann::json j;
  j["class"] = std::string(class_name(kind_of(h)));
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, SingleReserve> || std::is_same_v<T, AnonymousReserve>) {
          j["params"] = std::vector<double>{x.reserve};
        } else if constexpr (std::is_same_v<T, PlayerReserves>) {
          j["params"] = x.reserves;
        } else if constexpr (std::is_same_v<T, TLevel>) {
          j["levels"] = x.levels;
          j["params"] = x.thresholds;
        } else if constexpr (std::is_same_v<T, BundlePrice>) {
          j["anonymous"] = x.anonymous;
          j["params"] = x.prices;
        } else if constexpr (std::is_same_v<T, ItemPrices>) {
          j["anonymous"] = x.anonymous;
          j["items"] = x.items;
          j["params"] = x.prices;
        } else {
          j["anonymous"] = x.bundle.anonymous;
          j["items"] = x.items.items;
          j["chosen"] = x.chosen == Branch::Bundle ? "bundle" : "items";
          j["bundle_params"] = x.bundle.prices;
          j["item_params"] = x.items.prices;
        }
      },
      h);
  return j;
}

inline Hypothesis from_record(const nlohmann::json& j) {
  try {
    const auto kind = parse_class_kind(j.at("class").get<std::string>());
    switch (kind) {
      case ClassKind::SingleReserve:
        return SingleReserve{j.at("params").at(0).get<double>()};
      case ClassKind::AnonymousReserve:
        return AnonymousReserve{j.at("params").at(0).get<double>()};
      case ClassKind::PlayerReserves:
        return PlayerReserves{j.at("params").get<std::vector<double>>()};
      case ClassKind::TLevel:
        return TLevel{j.at("levels").get<std::size_t>(), j.at("params").get<std::vector<double>>()};
      case ClassKind::BundlePrice:
        return BundlePrice{j.at("anonymous").get<bool>(), j.at("params").get<std::vector<double>>()};
      case ClassKind::ItemPrices:
        return ItemPrices{j.at("anonymous").get<bool>(), j.at("items").get<std::size_t>(),
                          j.at("params").get<std::vector<double>>()};
      case ClassKind::BestOf: {
        const bool anonymous = j.at("anonymous").get<bool>();
        const auto chosen = j.at("chosen").get<std::string>();
        if (chosen != "bundle" && chosen != "items") throw ParseError("best-of 'chosen' must be bundle or items");
        return BestOf{chosen == "bundle" ? Branch::Bundle : Branch::Items,
                      BundlePrice{anonymous, j.at("bundle_params").get<std::vector<double>>()},
                      ItemPrices{anonymous, j.at("items").get<std::size_t>(),
                                 j.at("item_params").get<std::vector<double>>()}};
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad hypothesis record: ") + e.what());
  }
  throw ParseError("bad hypothesis record");
}

// Short human-readable form, e.g. "reserve 0.5".
inline std::string describe(const Hypothesis& h, int precision = 6) {
  const auto fmt = [precision](double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*g", precision, x);
    return std::string(buf);
  };
  const auto list = [&](std::span<const double> xs) {
    std::string s = "(";
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + fmt(xs[i]);
    return s + ")";
  };
  return std::visit(
      [&](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, SingleReserve>) {
          return "reserve " + fmt(x.reserve);
        } else if constexpr (std::is_same_v<T, AnonymousReserve>) {
          return "anonymous reserve " + fmt(x.reserve);
        } else if constexpr (std::is_same_v<T, PlayerReserves>) {
          return "player reserves " + list(x.reserves);
        } else if constexpr (std::is_same_v<T, TLevel>) {
          std::string s = "t-level thresholds";
          for (std::size_t i = 0; i < x.bidders(); ++i) s += " " + list(x.row(i));
          return s;
        } else if constexpr (std::is_same_v<T, BundlePrice>) {
          return std::string(x.anonymous ? "bundle price " : "per-player bundle prices ") + list(x.prices);
        } else if constexpr (std::is_same_v<T, ItemPrices>) {
          return std::string(x.anonymous ? "item prices " : "per-player item prices ") + list(x.prices);
        } else {
          return x.chosen == Branch::Bundle ? "best-of: bundle " + list(x.bundle.prices)
                                            : "best-of: items " + list(x.items.prices);
        }
      },
      h);
}

}  // namespace ssg
