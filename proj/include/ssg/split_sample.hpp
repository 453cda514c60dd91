#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ssg/erm.hpp"
#include "ssg/errors.hpp"
#include "ssg/hypothesis.hpp"
#include "ssg/model.hpp"
#include "ssg/parallel.hpp"
#include "ssg/rng.hpp"

namespace ssg {

struct SplitSampleMode {
  enum class Kind { Exact, MonteCarlo };
  Kind kind = Kind::Exact;
  std::uint64_t trials = 0;
  Seed seed{};

  static SplitSampleMode exact() { return {}; }
  static SplitSampleMode monte_carlo(std::uint64_t trials, Seed seed) { return {Kind::MonteCarlo, trials, seed}; }
};

struct SplitSampleOptions {
  std::uint64_t subset_ceiling = 1'000'000;
  ErmOptions erm{};
  Parallelism parallelism{};
};

// Distinct ERM outputs over half-size subsets of a sample.
struct SplitSampleSpace {
  std::size_t base_size = 0;
  std::size_t subset_size = 0;
  SplitSampleMode mode{};
  std::uint64_t subsets_examined = 0;
  std::vector<Hypothesis> hypotheses;  // canonical order, deduplicated

  [[nodiscard]] std::size_t size() const noexcept { return hypotheses.size(); }
};

// C(n, r), saturating at UINT64_MAX.
inline std::uint64_t binomial(std::uint64_t n, std::uint64_t r) {
  if (r > n) return 0;
  r = std::min(r, n - r);
  std::uint64_t result = 1;
  for (std::uint64_t i = 1; i <= r; ++i) {
    const std::uint64_t num = n - r + i;
    // result * num / i is exact at every step.
    const std::uint64_t g = std::gcd(result, i);
    const std::uint64_t a = result / g;
    const std::uint64_t b = i / g;
    if (num / b > std::numeric_limits<std::uint64_t>::max() / a) return std::numeric_limits<std::uint64_t>::max();
    result = a * (num / b);
  }
  return result;
}

namespace detail {

// The rank-th r-subset of {0..n-1} in lexicographic order.
inline std::vector<std::size_t> unrank_combination(std::size_t n, std::size_t r, std::uint64_t rank) {
  std::vector<std::size_t> out;
  out.reserve(r);
  std::size_t next = 0;
  for (std::size_t slot = 0; slot < r; ++slot) {
    for (std::size_t c = next;; ++c) {
      const std::uint64_t with_c = binomial(n - c - 1, r - slot - 1);
      if (rank < with_c) {
        out.push_back(c);
        next = c + 1;
        break;
      }
      rank -= with_c;
    }
  }
  return out;
}

inline bool next_combination(std::vector<std::size_t>& idx, std::size_t n) {
  const std::size_t r = idx.size();
  std::size_t i = r;
  while (i > 0 && idx[i - 1] == n - r + i - 1) --i;
  if (i == 0) return false;
  ++idx[i - 1];
  for (std::size_t j = i; j < r; ++j) idx[j] = idx[j - 1] + 1;
  return true;
}

using HypothesisSet = std::set<Hypothesis, HypothesisLess>;

}  // namespace detail

// Ĥ_S = { h_T : T ⊂ S, |T| = ceil(|S|/2) }. Exact mode walks every subset
// in lexicographic order of (canonically sorted) sample positions; Monte
// Carlo mode draws `trials` subsets uniformly.
inline SplitSampleSpace split_sample_space(const AuctionClass& cls, const SampleSet& sample,
                                           const SplitSampleMode& mode = SplitSampleMode::exact(),
                                           const SplitSampleOptions& options = {}) {
  detail::check_class_fits(cls, sample.bidders(), sample.items());
  const std::size_t m = sample.size();
  const std::size_t half = (m + 1) / 2;
  const auto view = detail::canonical_view(sample);

  SplitSampleSpace out{m, half, mode, 0, {}};
  const auto erm_of = [&](const std::vector<std::size_t>& idx, std::vector<const ValuationProfile*>& buf) {
    buf.clear();
    for (std::size_t t : idx) buf.push_back(view[t]);
    return erm_on_view(cls, buf, sample.range(), options.erm).hypothesis;
  };

  const std::size_t workers = options.parallelism.resolved();
  std::vector<detail::HypothesisSet> partial;

  if (mode.kind == SplitSampleMode::Kind::Exact) {
    const std::uint64_t total = binomial(m, half);
    if (total > options.subset_ceiling) {
      throw CeilingExceeded("exact split-sample enumeration needs C(" + std::to_string(m) + ", " +
                            std::to_string(half) + ") = " + std::to_string(total) +
                            " subsets, above the ceiling of " + std::to_string(options.subset_ceiling));
    }
    const std::size_t chunks = std::max<std::size_t>(1, std::min<std::uint64_t>(total, workers));
    partial.resize(chunks);
    parallel_for(chunks, options.parallelism, [&](std::size_t c) {
      const std::uint64_t begin = total * c / chunks;
      const std::uint64_t end = total * (c + 1) / chunks;
      if (begin == end) return;
      auto idx = detail::unrank_combination(m, half, begin);
      std::vector<const ValuationProfile*> buf;
      for (std::uint64_t r = begin; r < end; ++r) {
        partial[c].insert(erm_of(idx, buf));
        detail::next_combination(idx, m);
      }
    });
    out.subsets_examined = total;
  } else {
    if (mode.trials == 0) throw InvalidArgument("monte-carlo split-sample needs at least one trial");
    const std::size_t chunks = std::max<std::size_t>(1, std::min<std::uint64_t>(mode.trials, workers));
    partial.resize(chunks);
    parallel_for(chunks, options.parallelism, [&](std::size_t c) {
      const std::uint64_t begin = mode.trials * c / chunks;
      const std::uint64_t end = mode.trials * (c + 1) / chunks;
      std::vector<std::size_t> perm(m);
      std::vector<const ValuationProfile*> buf;
      for (std::uint64_t trial = begin; trial < end; ++trial) {
        Rng rng(mode.seed.derive("split_sample_trial", trial));
        for (std::size_t i = 0; i < m; ++i) perm[i] = i;
        for (std::size_t i = 0; i < half; ++i) {
          std::swap(perm[i], perm[i + rng.below(m - i)]);
        }
        std::vector<std::size_t> idx(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(half));
        std::sort(idx.begin(), idx.end());
        partial[c].insert(erm_of(idx, buf));
      }
    });
    out.subsets_examined = mode.trials;
  }

  detail::HypothesisSet merged;
  for (auto& p : partial) merged.merge(p);
  out.hypotheses.assign(merged.begin(), merged.end());
  return out;
}

// Per-class closed-form bound on the split-sample growth rate.
struct GrowthBound {
  std::optional<std::uint64_t> exact;  // when it fits in 64 bits
  double log_value = 0.0;              // natural log, always set

  [[nodiscard]] double value() const { return exact ? static_cast<double>(*exact) : std::exp(log_value); }
  // Whether `count` is within the bound.
  [[nodiscard]] bool admits(std::uint64_t count) const {
    if (exact) return count <= *exact;
    return std::log(static_cast<double>(count)) <= log_value;
  }
};

namespace detail {

// base^exponent with log fallback.
inline GrowthBound power_bound(std::uint64_t base, std::uint64_t exponent) {
  GrowthBound b;
  b.log_value = static_cast<double>(exponent) * std::log(static_cast<double>(base));
  std::uint64_t acc = 1;
  for (std::uint64_t e = 0; e < exponent; ++e) {
    if (base != 0 && acc > std::numeric_limits<std::uint64_t>::max() / base) return b;
    acc *= base;
  }
  b.exact = acc;
  return b;
}

}  // namespace detail

// single reserve m; anonymous reserve n*m; player reserves m^n;
// t-level m^(n*s); bundle n*m or m^n; item prices (n*m)^k or m^(n*k);
// best-of (n*m)^(k+1) or m^(n*(k+1)). Anonymous / per-player follows
// cls.anonymous.
inline GrowthBound theoretical_growth_bound(const AuctionClass& cls, std::uint64_t m) {
  cls.validate();
  if (m == 0) throw InvalidArgument("growth bound needs m >= 1");
  const std::uint64_t n = cls.bidders;
  const std::uint64_t k = cls.items;
  switch (cls.kind) {
    case ClassKind::SingleReserve: return detail::power_bound(m, 1);
    case ClassKind::AnonymousReserve: return detail::power_bound(n * m, 1);
    case ClassKind::PlayerReserves: return detail::power_bound(m, n);
    case ClassKind::TLevel: return detail::power_bound(m, n * cls.levels);
    case ClassKind::BundlePrice: return cls.anonymous ? detail::power_bound(n * m, 1) : detail::power_bound(m, n);
    case ClassKind::ItemPrices: return cls.anonymous ? detail::power_bound(n * m, k) : detail::power_bound(m, n * k);
    case ClassKind::BestOf:
      return cls.anonymous ? detail::power_bound(n * m, k + 1) : detail::power_bound(m, n * (k + 1));
  }
  throw InvalidArgument("unknown class");
}

struct GrowthEstimate {
  AuctionClass cls;
  std::size_t m = 0;
  std::size_t observed_max = 0;  // max |Ĥ_S| over the sampled S; a lower estimate of the sup
  std::size_t draws = 0;
  GrowthBound bound;
};

// Lower estimate of τ̂(m) by sampling S, reported next to the closed-form bound.
inline GrowthEstimate growth_rate_estimate(const AuctionClass& cls, std::size_t m, const DistributionSpec& spec,
                                           std::size_t draws, Seed seed, const SplitSampleOptions& options = {}) {
  if (draws == 0) throw InvalidArgument("growth estimate needs at least one draw");
  GrowthEstimate est{cls, m, 0, draws, theoretical_growth_bound(cls, m)};
  for (std::size_t d = 0; d < draws; ++d) {
    const SampleSet sample = sample_values(spec, m, seed.derive("growth_draw", d));
    const auto space = split_sample_space(cls, sample, SplitSampleMode::exact(), options);
    est.observed_max = std::max(est.observed_max, space.size());
  }
  return est;
}

}  // namespace ssg
