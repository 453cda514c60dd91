#pragma once

// Generalization bounds driven by the split-sample growth rate, and Monte
// Carlo estimates of the Rademacher quantities they control. All logarithms
// are natural.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ssg/erm.hpp"
#include "ssg/errors.hpp"
#include "ssg/hypothesis.hpp"
#include "ssg/mechanisms.hpp"
#include "ssg/model.hpp"
#include "ssg/optimum.hpp"
#include "ssg/parallel.hpp"
#include "ssg/rng.hpp"
#include "ssg/split_sample.hpp"
#include "ssg/true_revenue.hpp"

namespace ssg {

// (hi - lo) * sqrt(2 ln(cardinality) / m).
inline double massart_bound(std::uint64_t cardinality, std::uint64_t m, Range range = {}) {
  if (cardinality == 0 || m == 0) throw InvalidArgument("massart bound needs cardinality >= 1 and m >= 1");
  return range.width() * std::sqrt(2.0 * std::log(static_cast<double>(cardinality)) / static_cast<double>(m));
}

struct BoundReport {
  AuctionClass cls;
  std::uint64_t m = 0;
  Range range{};
  double log_tau_2m = 0.0;
  double expected_gap = 0.0;
  std::optional<double> delta;
  std::optional<double> high_prob;

  // A bound at or above the reward width says nothing.
  [[nodiscard]] bool vacuous() const {
    return expected_gap >= range.width() || (high_prob && *high_prob >= range.width());
  }
};

// E_S[R_D(h_S)] >= sup_h R_D(h) - (hi - lo) sqrt(2 ln τ̂(2m) / m), with τ̂
// from the per-class closed form.
inline BoundReport main_bound(const AuctionClass& cls, std::uint64_t m, Range range = {}) {
  if (m == 0) throw InvalidArgument("bound needs m >= 1");
  BoundReport r;
  r.cls = cls;
  r.m = m;
  r.range = range;
  r.log_tau_2m = theoretical_growth_bound(cls, 2 * m).log_value;
  r.expected_gap = range.width() * std::sqrt(2.0 * r.log_tau_2m / static_cast<double>(m));
  return r;
}

// Markov step: with probability 1 - delta the gap is at most bound / delta.
inline double high_prob_bound(const BoundReport& report, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("delta must lie in (0, 1)");
  return report.expected_gap / delta;
}

inline BoundReport with_confidence(BoundReport report, double delta) {
  report.high_prob = high_prob_bound(report, delta);
  report.delta = delta;
  return report;
}

// Closed form of main_bound for the [0, 1] reward range, written the way the
// growth-rate algebra simplifies, e.g. "sqrt(2*n*log(2*m)/m)".
inline std::string bound_formula(const AuctionClass& cls) {
  std::string exponent;
  bool times_n = false;
  switch (cls.kind) {
    case ClassKind::SingleReserve: exponent = "1"; break;
    case ClassKind::AnonymousReserve: exponent = "1"; times_n = true; break;
    case ClassKind::PlayerReserves: exponent = "n"; break;
    case ClassKind::TLevel: exponent = "n*s"; break;
    case ClassKind::BundlePrice:
      exponent = cls.anonymous ? "1" : "n";
      times_n = cls.anonymous;
      break;
    case ClassKind::ItemPrices:
      exponent = cls.anonymous ? "k" : "n*k";
      times_n = cls.anonymous;
      break;
    case ClassKind::BestOf:
      exponent = cls.anonymous ? "(k+1)" : "n*(k+1)";
      times_n = cls.anonymous;
      break;
  }
  const std::string coef = exponent == "1" ? "" : exponent + "*";
  return "sqrt(2*" + coef + "log(2*" + (times_n ? "n*" : "") + "m)/m)";
}

struct TLevelTuning {
  double epsilon = 0.0;    // (2 n ln(2m) / m)^(1/3)
  std::size_t levels = 0;  // ceil(1 / epsilon)
  double bound = 0.0;      // 2 * epsilon
};

inline TLevelTuning tlevel_epsilon(std::uint64_t bidders, std::uint64_t m) {
  if (bidders == 0 || m == 0) throw InvalidArgument("t-level tuning needs n >= 1 and m >= 1");
  const double n = static_cast<double>(bidders);
  const double mm = static_cast<double>(m);
  const double eps = std::cbrt(2.0 * n * std::log(2.0 * mm) / mm);
  return {eps, static_cast<std::size_t>(std::ceil(1.0 / eps)), 2.0 * eps};
}

// Smallest m with main_bound(cls, m) <= epsilon. The bound rises only for
// tiny m and decreases after, so doubling then bisection is enough.
inline std::uint64_t sample_complexity_estimate(const AuctionClass& cls, double epsilon, Range range = {}) {
  if (!(epsilon > 0.0)) throw InvalidArgument("epsilon must be positive");
  const auto ok = [&](std::uint64_t m) { return main_bound(cls, m, range).expected_gap <= epsilon; };
  if (ok(1)) return 1;
  std::uint64_t lo = 1;  // fails
  std::uint64_t hi = 2;
  while (!ok(hi)) {
    if (hi > (std::uint64_t{1} << 60)) throw InvalidArgument("epsilon too small for a representable sample size");
    lo = hi;
    hi *= 2;
  }
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    (ok(mid) ? hi : lo) = mid;
  }
  return hi;
}

// ---------------------------------------------------------------------------
// Rademacher complexity R(S, H) = E_sigma[ sup_h (2/m) sum_t sigma_t r(h, z_t) ].

struct RademacherEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  std::uint64_t draws = 0;
  std::size_t hypotheses = 0;
};

namespace detail {

inline std::vector<std::vector<double>> revenue_table(const SampleSet& sample, std::span<const Hypothesis> hs) {
  std::vector<std::vector<double>> table;
  table.reserve(hs.size());
  for (const auto& h : hs) {
    std::vector<double> row;
    row.reserve(sample.size());
    for (const auto& z : sample) row.push_back(revenue(h, z));
    table.push_back(std::move(row));
  }
  return table;
}

inline double signed_sup(const std::vector<std::vector<double>>& table, std::span<const int> sigma) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& row : table) {
    double s = 0.0;
    for (std::size_t t = 0; t < row.size(); ++t) s += sigma[t] * row[t];
    best = std::max(best, s);
  }
  return 2.0 * best / static_cast<double>(sigma.size());
}

inline constexpr std::uint64_t kSigmaBlock = 1024;

}  // namespace detail

// Sign vectors are drawn in fixed blocks with derived seeds, so the estimate
// does not depend on the worker count.
inline RademacherEstimate rademacher_estimate(const SampleSet& sample, std::span<const Hypothesis> hypotheses,
                                              std::uint64_t draws, Seed seed, Parallelism par = {}) {
  if (hypotheses.empty()) throw InvalidArgument("rademacher estimate needs a nonempty hypothesis list");
  if (draws == 0) throw InvalidArgument("rademacher estimate needs at least one draw");
  const auto table = detail::revenue_table(sample, hypotheses);
  const std::size_t m = sample.size();
  std::vector<double> values(draws);
  const std::uint64_t blocks = (draws + detail::kSigmaBlock - 1) / detail::kSigmaBlock;
  parallel_for(blocks, par, [&](std::size_t b) {
    Rng rng(seed.derive("rademacher_block", b));
    std::vector<int> sigma(m);
    const std::uint64_t end = std::min<std::uint64_t>(draws, (b + 1) * detail::kSigmaBlock);
    for (std::uint64_t d = b * detail::kSigmaBlock; d < end; ++d) {
      for (auto& s : sigma) s = rng.sign();
      values[d] = detail::signed_sup(table, sigma);
    }
  });
  MeanAccumulator acc;
  for (double v : values) acc.add(v);
  return {acc.mean(), acc.std_error(), draws, hypotheses.size()};
}

// Exact expectation over all 2^m sign vectors; m <= 24.
inline double rademacher_exact(const SampleSet& sample, std::span<const Hypothesis> hypotheses) {
  if (hypotheses.empty()) throw InvalidArgument("rademacher needs a nonempty hypothesis list");
  const std::size_t m = sample.size();
  if (m > 24) throw CeilingExceeded("exact rademacher enumeration is limited to m <= 24");
  const auto table = detail::revenue_table(sample, hypotheses);
  std::vector<int> sigma(m);
  CompensatedSum sum;
  const std::uint64_t total = std::uint64_t{1} << m;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    for (std::size_t t = 0; t < m; ++t) sigma[t] = ((mask >> t) & 1U) != 0 ? 1 : -1;
    sum.add(detail::signed_sup(table, sigma));
  }
  return sum.value() / static_cast<double>(total);
}

// ---------------------------------------------------------------------------
// Empirical check of the chain
//   sup_h R_D(h) - E_S[R_D(h_S)]  <=  E_{S,S'}[R(S, Ĥ_{S∪S'})]  <=  Massart bound.

struct Lemma1Options {
  std::size_t replicates = 500;
  std::uint64_t sigma_draws = 2000;
  std::size_t eval_draws = 100000;  // only for classes without closed-form R_D
  Seed seed{};
  OptimumMethod optimum = OptimumMethod::analytic();
  SplitSampleOptions split{};
  Parallelism parallelism{};
};

struct Lemma1Report {
  AuctionClass cls;
  std::size_t m = 0;
  std::size_t replicates = 0;
  std::uint64_t sigma_draws = 0;
  double optimum = 0.0;
  bool optimum_analytic = true;
  double optimum_std_error = 0.0;  // bias note: grid proxies sit slightly below the sup
  double gap = 0.0;
  double gap_std_error = 0.0;
  double rademacher = 0.0;
  double rademacher_std_error = 0.0;
  double massart_enumerated = 0.0;  // mean of massart(|Ĥ_{S∪S'}|, m)
  double bound = 0.0;               // massart with the closed-form τ̂(2m)
  std::size_t max_split_size = 0;
  bool gap_within_rademacher = false;
  bool rademacher_within_bound = false;

  [[nodiscard]] bool holds() const { return gap_within_rademacher && rademacher_within_bound; }
};

inline Lemma1Report lemma1_check(const AuctionClass& cls, const DistributionSpec& spec, std::size_t m,
                                 const Lemma1Options& options = {}) {
  if (m == 0 || options.replicates == 0) throw InvalidArgument("lemma check needs m >= 1 and replicates >= 1");
  const Range reward = cls.revenue_range(spec.range());
  const auto opt = in_class_optimum(cls, spec, options.optimum);

  struct Replicate {
    double gap = 0.0;
    double rademacher = 0.0;
    double massart = 0.0;
    std::size_t split_size = 0;
  };
  SplitSampleOptions inner = options.split;
  inner.parallelism = Parallelism{1};
  const Seed eval_seed = options.seed.derive("lemma1_eval");
  const auto reps = parallel_map<Replicate>(options.replicates, options.parallelism, [&](std::size_t r) {
    const SampleSet s = sample_values(spec, m, options.seed.derive("lemma1_S", r));
    const SampleSet s_prime = sample_values(spec, m, options.seed.derive("lemma1_S_prime", r));
    const Hypothesis h = erm(cls, s, inner.erm);
    const double rd = true_revenue_auto(h, spec, options.eval_draws, eval_seed).value;
    const auto space = split_sample_space(cls, s.concat(s_prime), SplitSampleMode::exact(), inner);
    const auto rad = rademacher_estimate(s, space.hypotheses, options.sigma_draws,
                                         options.seed.derive("lemma1_sigma", r));
    return Replicate{opt.value - rd, rad.estimate, massart_bound(space.size(), m, reward), space.size()};
  });

  MeanAccumulator gap;
  MeanAccumulator rad;
  MeanAccumulator massart;
  Lemma1Report out;
  for (const auto& r : reps) {
    gap.add(r.gap);
    rad.add(r.rademacher);
    massart.add(r.massart);
    out.max_split_size = std::max(out.max_split_size, r.split_size);
  }
  out.cls = cls;
  out.m = m;
  out.replicates = options.replicates;
  out.sigma_draws = options.sigma_draws;
  out.optimum = opt.value;
  out.optimum_analytic = opt.analytic;
  out.optimum_std_error = opt.std_error;
  out.gap = gap.mean();
  out.gap_std_error = std::hypot(gap.std_error(), opt.std_error);
  out.rademacher = rad.mean();
  out.rademacher_std_error = rad.std_error();
  out.massart_enumerated = massart.mean();
  out.bound = reward.width() * std::sqrt(2.0 * theoretical_growth_bound(cls, 2 * m).log_value / static_cast<double>(m));
  out.gap_within_rademacher = out.gap <= out.rademacher + 3.0 * std::hypot(out.gap_std_error, out.rademacher_std_error);
  out.rademacher_within_bound = out.rademacher <= out.bound + 3.0 * out.rademacher_std_error;
  return out;
}

}  // namespace ssg
