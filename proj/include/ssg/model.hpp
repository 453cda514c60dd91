#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <span>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "ssg/errors.hpp"
#include "ssg/rng.hpp"

namespace ssg {

// Closed value interval [lo, hi].
struct Range {
  double lo = 0.0;
  double hi = 1.0;

  [[nodiscard]] double width() const noexcept { return hi - lo; }
  [[nodiscard]] bool contains(double x) const noexcept { return x >= lo && x <= hi; }

  void validate() const {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo <= hi)) {
      throw InvalidArgument("range must satisfy lo <= hi with finite ends");
    }
  }

  friend bool operator==(const Range&, const Range&) = default;
};

// One joint report: n bidders by k items, row-major.
class ValuationProfile {
 public:
  ValuationProfile(std::size_t bidders, std::size_t items, std::vector<double> values,
                   Range range = {})
      : bidders_(bidders), items_(items), values_(std::move(values)) {
    if (bidders_ == 0 || items_ == 0) throw InvalidArgument("profile needs n >= 1 and k >= 1");
    if (values_.size() != bidders_ * items_) {
      throw DimensionMismatch("profile has " + std::to_string(values_.size()) +
                              " values, expected n*k = " + std::to_string(bidders_ * items_));
    }
    for (double v : values_) {
      if (!std::isfinite(v) || !range.contains(v)) {
        std::ostringstream msg;
        msg << "value " << v << " outside range [" << range.lo << ", " << range.hi << "]";
        throw InvalidArgument(msg.str());
      }
    }
  }

  static ValuationProfile single(double value, Range range = {}) {
    return ValuationProfile(1, 1, {value}, range);
  }

  [[nodiscard]] std::size_t bidders() const noexcept { return bidders_; }
  [[nodiscard]] std::size_t items() const noexcept { return items_; }

  [[nodiscard]] double operator()(std::size_t bidder, std::size_t item) const noexcept {
    return values_[bidder * items_ + item];
  }
  [[nodiscard]] std::span<const double> bidder(std::size_t i) const noexcept {
    return {values_.data() + i * items_, items_};
  }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }

  // Additive value for the grand bundle.
  [[nodiscard]] double bundle_value(std::size_t bidder) const noexcept {
    double total = 0.0;
    for (double v : this->bidder(bidder)) total += v;
    return total;
  }

  // Same report with one bidder's row replaced.
  [[nodiscard]] ValuationProfile with_bidder(std::size_t i, std::span<const double> row) const {
    ValuationProfile copy = *this;
    std::copy(row.begin(), row.end(), copy.values_.begin() + static_cast<std::ptrdiff_t>(i * items_));
    return copy;
  }

  friend bool operator==(const ValuationProfile&, const ValuationProfile&) = default;
  friend auto operator<=>(const ValuationProfile& a, const ValuationProfile& b) {
    if (auto c = a.bidders_ <=> b.bidders_; c != 0) return std::partial_ordering(c);
    if (auto c = a.items_ <=> b.items_; c != 0) return std::partial_ordering(c);
    return std::lexicographical_compare_three_way(a.values_.begin(), a.values_.end(),
                                                  b.values_.begin(), b.values_.end());
  }

 private:
  std::size_t bidders_;
  std::size_t items_;
  std::vector<double> values_;
};

// ---------------------------------------------------------------------------
// Marginal value distributions.

struct Uniform {
  double lo = 0.0;
  double hi = 1.0;
  friend bool operator==(const Uniform&, const Uniform&) = default;
};

// Exponential(rate) conditioned on [0, cap].
struct TruncatedExponential {
  double rate = 1.0;
  double cap = 1.0;
  friend bool operator==(const TruncatedExponential&, const TruncatedExponential&) = default;
};

struct Discrete {
  std::vector<double> support;
  std::vector<double> probabilities;
  friend bool operator==(const Discrete&, const Discrete&) = default;
};

using Marginal = std::variant<Uniform, TruncatedExponential, Discrete>;

inline Discrete point_mass(double at) { return Discrete{{at}, {1.0}}; }

inline void validate(const Marginal& marginal, Range range) {
  std::visit(
      [&](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Uniform>) {
          if (!(d.lo <= d.hi) || !range.contains(d.lo) || !range.contains(d.hi)) {
            throw InvalidArgument("uniform support must lie within the value range");
          }
        } else if constexpr (std::is_same_v<T, TruncatedExponential>) {
          if (!(d.rate > 0.0) || !(d.cap > 0.0)) {
            throw InvalidArgument("truncated exponential needs rate > 0 and cap > 0");
          }
          if (!range.contains(0.0) || !range.contains(d.cap)) {
            throw InvalidArgument("truncated exponential support [0, cap] must lie within the value range");
          }
        } else {
          if (d.support.empty() || d.support.size() != d.probabilities.size()) {
            throw InvalidArgument("discrete marginal needs matching nonempty support and probabilities");
          }
          double total = 0.0;
          for (std::size_t i = 0; i < d.support.size(); ++i) {
            if (!(d.probabilities[i] >= 0.0)) throw InvalidArgument("negative probability");
            if (!range.contains(d.support[i])) {
              throw InvalidArgument("discrete support point outside the value range");
            }
            total += d.probabilities[i];
          }
          if (std::abs(total - 1.0) > 1e-12) {
            throw InvalidArgument("discrete probabilities must sum to 1");
          }
        }
      },
      marginal);
}

// P(V <= x).
inline double cdf(const Marginal& marginal, double x) {
  return std::visit(
      [&](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Uniform>) {
          if (x < d.lo) return 0.0;
          if (x >= d.hi) return 1.0;
          return (x - d.lo) / (d.hi - d.lo);
        } else if constexpr (std::is_same_v<T, TruncatedExponential>) {
          if (x < 0.0) return 0.0;
          if (x >= d.cap) return 1.0;
          return -std::expm1(-d.rate * x) / -std::expm1(-d.rate * d.cap);
        } else {
          double total = 0.0;
          for (std::size_t i = 0; i < d.support.size(); ++i) {
            if (d.support[i] <= x) total += d.probabilities[i];
          }
          return std::min(total, 1.0);
        }
      },
      marginal);
}

// P(V >= x); differs from 1 - cdf only at atoms.
inline double probability_at_least(const Marginal& marginal, double x) {
  return std::visit(
      [&](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Discrete>) {
          double total = 0.0;
          for (std::size_t i = 0; i < d.support.size(); ++i) {
            if (d.support[i] >= x) total += d.probabilities[i];
          }
          return std::min(total, 1.0);
        } else {
          return 1.0 - cdf(marginal, x);
        }
      },
      marginal);
}

// Inverse CDF for u in [0, 1).
inline double quantile(const Marginal& marginal, double u) {
  return std::visit(
      [&](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Uniform>) {
          return d.lo + u * (d.hi - d.lo);
        } else if constexpr (std::is_same_v<T, TruncatedExponential>) {
          const double x = -std::log1p(u * std::expm1(-d.rate * d.cap)) / d.rate;
          return std::clamp(x, 0.0, d.cap);
        } else {
          double cumulative = 0.0;
          for (std::size_t i = 0; i + 1 < d.support.size(); ++i) {
            cumulative += d.probabilities[i];
            if (u < cumulative) return d.support[i];
          }
          return d.support.back();
        }
      },
      marginal);
}

// Independent marginals for every (bidder, item), row-major.
class DistributionSpec {
 public:
  DistributionSpec(std::size_t bidders, std::size_t items, std::vector<Marginal> marginals,
                   Range range = {})
      : bidders_(bidders), items_(items), marginals_(std::move(marginals)), range_(range) {
    range_.validate();
    if (bidders_ == 0 || items_ == 0) throw InvalidArgument("distribution needs n >= 1 and k >= 1");
    if (marginals_.size() != bidders_ * items_) {
      throw DimensionMismatch("distribution needs n*k marginals");
    }
    for (const auto& m : marginals_) ssg::validate(m, range_);
  }

  static DistributionSpec iid(std::size_t bidders, std::size_t items, const Marginal& marginal,
                              Range range = {}) {
    return DistributionSpec(bidders, items, std::vector<Marginal>(bidders * items, marginal), range);
  }

  [[nodiscard]] std::size_t bidders() const noexcept { return bidders_; }
  [[nodiscard]] std::size_t items() const noexcept { return items_; }
  [[nodiscard]] Range range() const noexcept { return range_; }
  [[nodiscard]] const Marginal& marginal(std::size_t bidder, std::size_t item) const {
    return marginals_[bidder * items_ + item];
  }
  [[nodiscard]] const std::vector<Marginal>& marginals() const noexcept { return marginals_; }

  // Draws one profile, consuming n*k uniforms in row-major order.
  [[nodiscard]] ValuationProfile draw(Rng& rng) const {
    std::vector<double> values(marginals_.size());
    for (std::size_t c = 0; c < marginals_.size(); ++c) {
      values[c] = std::clamp(quantile(marginals_[c], rng.uniform()), range_.lo, range_.hi);
    }
    return ValuationProfile(bidders_, items_, std::move(values), range_);
  }

  friend bool operator==(const DistributionSpec&, const DistributionSpec&) = default;

 private:
  std::size_t bidders_;
  std::size_t items_;
  std::vector<Marginal> marginals_;
  Range range_;
};

// ---------------------------------------------------------------------------
// Sample sets.

struct GeneratedFrom {
  DistributionSpec spec;
  Seed seed;
};
struct LoadedFrom {
  std::string path;
};
struct Inline {};
using Provenance = std::variant<Inline, GeneratedFrom, LoadedFrom>;

class SampleSet {
 public:
  SampleSet(std::vector<ValuationProfile> profiles, Range range = {}, Provenance provenance = Inline{})
      : profiles_(std::move(profiles)), range_(range), provenance_(std::move(provenance)) {
    range_.validate();
    if (profiles_.empty()) throw InvalidArgument("empty sample");
    const auto& first = profiles_.front();
    for (const auto& p : profiles_) {
      if (p.bidders() != first.bidders() || p.items() != first.items()) {
        throw DimensionMismatch("all profiles in a sample must share (n, k)");
      }
      for (double v : p.values()) {
        if (!range_.contains(v)) throw InvalidArgument("sample value outside the declared range");
      }
    }
  }

  // Single bidder, single item.
  static SampleSet from_values(std::span<const double> values, Range range = {}) {
    std::vector<ValuationProfile> profiles;
    profiles.reserve(values.size());
    for (double v : values) profiles.push_back(ValuationProfile::single(v, range));
    return SampleSet(std::move(profiles), range);
  }
  static SampleSet from_values(std::initializer_list<double> values, Range range = {}) {
    return from_values(std::span<const double>(values.begin(), values.size()), range);
  }

  [[nodiscard]] std::size_t size() const noexcept { return profiles_.size(); }
  [[nodiscard]] std::size_t bidders() const noexcept { return profiles_.front().bidders(); }
  [[nodiscard]] std::size_t items() const noexcept { return profiles_.front().items(); }
  [[nodiscard]] Range range() const noexcept { return range_; }
  [[nodiscard]] const Provenance& provenance() const noexcept { return provenance_; }
  [[nodiscard]] const std::vector<ValuationProfile>& profiles() const noexcept { return profiles_; }
  [[nodiscard]] const ValuationProfile& operator[](std::size_t t) const { return profiles_[t]; }
  [[nodiscard]] auto begin() const noexcept { return profiles_.begin(); }
  [[nodiscard]] auto end() const noexcept { return profiles_.end(); }

  // Multiset union, this sample first.
  [[nodiscard]] SampleSet concat(const SampleSet& other) const {
    if (other.bidders() != bidders() || other.items() != items() || !(other.range_ == range_)) {
      throw DimensionMismatch("cannot join samples of different shape");
    }
    std::vector<ValuationProfile> joined = profiles_;
    joined.insert(joined.end(), other.profiles_.begin(), other.profiles_.end());
    return SampleSet(std::move(joined), range_);
  }

 private:
  std::vector<ValuationProfile> profiles_;
  Range range_;
  Provenance provenance_;
};

// m i.i.d. profiles. Bit-identical for identical (spec, m, seed).
inline SampleSet sample_values(const DistributionSpec& spec, std::size_t m, Seed seed) {
  if (m == 0) throw InvalidArgument("sample size must be at least 1");
  Rng rng(seed.derive("sample_values"));
  std::vector<ValuationProfile> profiles;
  profiles.reserve(m);
  for (std::size_t t = 0; t < m; ++t) profiles.push_back(spec.draw(rng));
  return SampleSet(std::move(profiles), spec.range(), GeneratedFrom{spec, seed});
}

}  // namespace ssg
