// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "grid_oracle.hpp"
#include "instances.hpp"
#include "ssg.hpp"

using namespace ssg;
using instances::make_class;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

// 1. No misreport on a 101-point grid per coordinate beats truth by > 1e-12.
// k <= 2 uses the full product grid; k = 3 uses every single-coordinate
// deviation plus 3000 random product points.
Verdict truthfulness() {
  Verdict v;
  Rng rng(Seed{1001});
  std::size_t checked = 0;
  double worst = -1.0;
  for (const auto& cls : instances::class_zoo()) {
    for (int trial = 0; trial < 200 && v.pass; ++trial) {
      const auto h = instances::random_hypothesis(rng, cls);
      const auto truth = instances::random_profile(rng, cls.bidders, cls.items);
      for (std::size_t i = 0; i < cls.bidders; ++i) {
        const double honest = utility(h, truth, truth, i);
        std::vector<double> row(truth.bidder(i).begin(), truth.bidder(i).end());
        const auto check = [&](const std::vector<double>& report) {
          const double gain = utility(h, truth, truth.with_bidder(i, report), i) - honest;
          worst = std::max(worst, gain);
          ++checked;
          if (gain > 1e-12) v.fail(describe(h) + " bidder " + std::to_string(i) + fmt(" gains %.3g", gain));
        };
        std::vector<double> report = row;
        if (cls.items == 1) {
          for (int a = 0; a <= 100; ++a) check({a / 100.0});
        } else if (cls.items == 2) {
          for (int a = 0; a <= 100; ++a) {
            for (int b = 0; b <= 100; ++b) check({a / 100.0, b / 100.0});
          }
        } else {
          for (std::size_t j = 0; j < cls.items; ++j) {
            for (int a = 0; a <= 100; ++a) {
              report = row;
              report[j] = a / 100.0;
              check(report);
            }
          }
          for (int r = 0; r < 3000; ++r) {
            for (auto& x : report) x = static_cast<double>(rng.below(101)) / 100.0;
            check(report);
          }
        }
      }
    }
  }
  if (v.pass) {
    v.detail = std::to_string(instances::class_zoo().size()) + " classes x 200 instances, " + std::to_string(checked) +
               " misreports, max gain " + fmt("%.3g", worst);
  }
  return v;
}

// 2. ERM revenue equals the exhaustive 1e-3 grid maximum. The oracle works
// in exact integer ticks. Product draws run twice: with values j / 10, where
// binary bundle sums can split exact ties between bidders, and with the
// same grid in whole units (j, range [0, 10], step 0.01), where they cannot.
// Only the whole-unit run is held to 1e-12 for per-player bundle prices; in
// the decimal run any mismatch outside that case fails.
Verdict erm_oracle() {
  Verdict v;
  double worst = 0.0;
  std::size_t singles = 0;
  const auto single = make_class(ClassKind::SingleReserve, 1, 1);
  grid_oracle::for_each_tenth_multiset(8, [&](const SampleSet& s) {
    const double diff = std::abs(erm_detailed(single, s).empirical_revenue - grid_oracle::best_mean(single, s));
    worst = std::max(worst, diff);
    ++singles;
    if (diff > 1e-12) v.fail(fmt("single reserve sample of size %.0f differs by %.3g", static_cast<double>(s.size()), diff));
  });

  const auto classes = grid_oracle::covered_classes();
  const std::size_t draws = 500;
  std::size_t tie_splits = 0;
  for (double unit : {1.0, 0.1}) {
    Rng rng(Seed{1002});
    for (std::size_t d = 0; d < draws; ++d) {
      const auto& cls = classes[d % classes.size()];
      const auto s = grid_oracle::tenth_grid_sample(rng, cls.bidders, cls.items, unit);
      const double scale = unit == 1.0 ? 10.0 : 1.0;
      const double diff = std::abs(erm_detailed(cls, s).empirical_revenue - grid_oracle::best_mean(cls, s, unit)) / scale;
      if (diff <= 1e-12) {
        worst = std::max(worst, diff);
        continue;
      }
      if (unit == 0.1 && cls.kind == ClassKind::BundlePrice && !cls.anonymous) {
        ++tie_splits;
        continue;
      }
      v.fail(std::string(class_name(cls.kind)) + fmt(" differs by %.3g at unit %g", diff, unit));
    }
  }
  if (v.pass) {
    v.detail = std::to_string(singles) + " single-reserve multisets, " + std::to_string(draws) + " draws over " +
               std::to_string(classes.size()) + " product shapes, max |diff| " + fmt("%.3g", worst) + "; " +
               std::to_string(tie_splits) + " decimal-only per-player bundle tie splits";
  }
  return v;
}

// 3. |Ĥ_S| within the closed-form growth bound for every m <= 12.
Verdict split_sample_cardinality() {
  Verdict v;
  const auto worked = split_sample_space(make_class(ClassKind::SingleReserve, 1, 1), SampleSet::from_values({0.2, 0.4, 0.5, 1.0}));
  if (worked.size() != 3) v.fail("worked example gives " + std::to_string(worked.size()) + " hypotheses, expected 3");

  const std::vector<AuctionClass> classes{
      make_class(ClassKind::SingleReserve, 1, 1),           make_class(ClassKind::AnonymousReserve, 2, 1),
      make_class(ClassKind::PlayerReserves, 2, 1),          make_class(ClassKind::ItemPrices, 2, 2, 0, true),
      make_class(ClassKind::TLevel, 2, 1, 1),               make_class(ClassKind::BundlePrice, 2, 2, 0, false),
      make_class(ClassKind::BestOf, 1, 2, 0, true),
  };
  const std::vector<Marginal> marginals{Uniform{0.0, 1.0}, Discrete{{0.2, 0.5, 0.9}, {0.3, 0.4, 0.3}}};
  std::size_t sets = 0;
  std::string ratios;
  for (const auto& cls : classes) {
    double closest = 0.0;
    for (std::size_t m = 1; m <= 12; ++m) {
      for (std::size_t d = 0; d < marginals.size(); ++d) {
        const auto spec = DistributionSpec::iid(cls.bidders, cls.items, marginals[d]);
        const auto est = growth_rate_estimate(cls, m, spec, 3, Seed{1003}.derive(std::string(class_name(cls.kind)), m * 2 + d));
        sets += est.draws;
        closest = std::max(closest, static_cast<double>(est.observed_max) / est.bound.value());
        if (!est.bound.admits(est.observed_max)) {
          v.fail(std::string(class_name(cls.kind)) + " m=" + std::to_string(m) + " observed " +
                 std::to_string(est.observed_max) + fmt(" above bound %.0f", est.bound.value()));
        }
      }
    }
    ratios += std::string(ratios.empty() ? "" : ", ") + std::string(class_name(cls.kind)) + fmt(" %.2f", closest);
  }
  if (v.pass) v.detail = "worked example 3; " + std::to_string(sets) + " samples; max observed/bound: " + ratios;
  return v;
}

// 4. Monte Carlo Rademacher of enumerated Ĥ_S within Massart + 3 SE.
Verdict massart_check() {
  Verdict v;
  const std::vector<AuctionClass> classes{
      make_class(ClassKind::SingleReserve, 1, 1),      make_class(ClassKind::AnonymousReserve, 2, 1),
      make_class(ClassKind::AnonymousReserve, 3, 1),   make_class(ClassKind::PlayerReserves, 2, 1),
      make_class(ClassKind::TLevel, 1, 1, 2),          make_class(ClassKind::BundlePrice, 2, 2, 0, true),
      make_class(ClassKind::ItemPrices, 1, 2, 0, true), make_class(ClassKind::BestOf, 1, 1, 0, true),
  };
  Rng rng(Seed{1004});
  double tightest = 0.0;
  for (int pair = 0; pair < 50; ++pair) {
    const auto& cls = classes[static_cast<std::size_t>(pair) % classes.size()];
    const std::size_t m = pair < 25 ? 8 : 16;
    std::vector<ValuationProfile> profiles;
    for (std::size_t t = 0; t < m; ++t) profiles.push_back(instances::random_profile(rng, cls.bidders, cls.items));
    const SampleSet s(profiles);
    const auto space = split_sample_space(cls, s);
    const auto est = rademacher_estimate(s, space.hypotheses, 10000, Seed{1005}.derive("pair", static_cast<std::uint64_t>(pair)));
    const double bound = massart_bound(space.size(), m, cls.revenue_range(s.range()));
    if (bound > 0) tightest = std::max(tightest, est.estimate / bound);
    if (est.estimate > bound + 3.0 * est.std_error) {
      v.fail(std::string(class_name(cls.kind)) + fmt(" m=%.0f: estimate %.4f above massart %.4f", static_cast<double>(m),
                                                    est.estimate, bound));
    }
  }
  if (v.pass) v.detail = "50 pairs at m in {8, 16}, 10^4 sign draws each, max estimate/bound " + fmt("%.3f", tightest);
  return v;
}

// 5. gap <= E[R(S, Ĥ_{S u S'})] <= sqrt(2 ln 16 / 8).
Verdict lemma_chain() {
  Verdict v;
  Lemma1Options options;
  options.replicates = 500;
  options.sigma_draws = 2000;
  options.seed = Seed{1006};
  const auto r = lemma1_check(make_class(ClassKind::SingleReserve, 1, 1), DistributionSpec::iid(1, 1, Uniform{0.0, 1.0}), 8, options);
  const double expected_bound = std::sqrt(2.0 * std::log(16.0) / 8.0);
  if (std::abs(r.bound - expected_bound) > 1e-15) v.fail(fmt("bound %.6f, expected %.6f", r.bound, expected_bound));
  if (!r.gap_within_rademacher) v.fail(fmt("gap %.4f above rademacher %.4f", r.gap, r.rademacher));
  if (!r.rademacher_within_bound) v.fail(fmt("rademacher %.4f above bound %.4f", r.rademacher, r.bound));
  v.detail = fmt("gap %.4f (se %.4f) <= ", r.gap, r.gap_std_error) + fmt("rademacher %.4f (se %.4f) <= ", r.rademacher, r.rademacher_std_error) +
             fmt("bound %.4f", r.bound) + (v.pass ? "" : "; " + v.detail);
  return v;
}

ExperimentConfig uniform_reserve_config() {
  ExperimentConfig c;
  c.m_grid = {50, 100, 200, 400};
  c.replicates = 1000;
  c.delta = 0.25;
  c.seed = Seed{1007};
  return c;
}

// 6 and 7 share one run.
std::vector<ExperimentRow>& uniform_reserve_rows() {
  static std::vector<ExperimentRow> rows = generalization_experiment(uniform_reserve_config());
  return rows;
}

Verdict expected_gap() {
  Verdict v;
  const auto& rows = uniform_reserve_rows();
  std::string detail;
  for (const auto& r : rows) {
    const double m = static_cast<double>(r.m);
    const double bound = std::sqrt(2.0 * std::log(2.0 * m) / m);
    if (std::abs(r.bound - bound) > 1e-15) v.fail(fmt("m=%.0f bound %.6f, expected %.6f", m, r.bound, bound));
    if (r.optimum != 0.25) v.fail(fmt("optimum %.6f, expected 0.25", r.optimum));
    if (r.gap > r.bound) v.fail(fmt("m=%.0f gap %.4f above bound %.4f", m, r.gap, r.bound));
    if (r.m == 100 && std::abs(r.bound - 0.3256) > 1e-4) v.fail(fmt("bound at m=100 is %.5f, expected 0.3256", r.bound));
    if (r.m == 400 && r.gap - 3.0 * r.gap_std_error > 0.1 * r.bound) {
      v.fail(fmt("slack at m=400: gap %.4f - 3 se exceeds 0.1 bound %.4f", r.gap, 0.1 * r.bound));
    }
    detail += std::string(detail.empty() ? "" : ", ") + fmt("m=%.0f gap %.4f", m, r.gap) + fmt(" (se %.4f) bound %.4f", r.gap_std_error, r.bound);
  }
  v.detail = detail + (v.pass ? "" : "; " + v.detail);
  return v;
}

Verdict high_probability() {
  Verdict v;
  std::string detail;
  for (const auto& r : uniform_reserve_rows()) {
    const double limit = 0.25 + 3.0 * std::sqrt(0.25 * 0.75 / static_cast<double>(r.replicates));
    if (r.violation_fraction > limit) {
      v.fail(fmt("m=%.0f violation fraction %.4f above %.4f", static_cast<double>(r.m), r.violation_fraction, limit));
    }
    detail += std::string(detail.empty() ? "" : ", ") + fmt("m=%.0f %.3f", static_cast<double>(r.m), r.violation_fraction);
  }
  v.detail = "fraction with gap > bound/0.25: " + detail + (v.pass ? "" : "; " + v.detail);
  return v;
}

// 8. Closed forms and their printed shapes.
Verdict formulas() {
  Verdict v;
  const auto single = make_class(ClassKind::SingleReserve, 1, 1);
  const auto anon = make_class(ClassKind::AnonymousReserve, 4, 1);
  const auto player = make_class(ClassKind::PlayerReserves, 4, 1);
  const struct {
    AuctionClass cls;
    std::string text;
    std::function<double(double, double)> value;
  } cases[] = {
      {single, "sqrt(2*log(2*m)/m)", [](double, double m) { return std::sqrt(2.0 * std::log(2.0 * m) / m); }},
      {anon, "sqrt(2*log(2*n*m)/m)", [](double n, double m) { return std::sqrt(2.0 * std::log(2.0 * n * m) / m); }},
      {player, "sqrt(2*n*log(2*m)/m)", [](double n, double m) { return std::sqrt(2.0 * n * std::log(2.0 * m) / m); }},
  };
  for (const auto& c : cases) {
    if (bound_formula(c.cls) != c.text) v.fail(std::string(class_name(c.cls.kind)) + " prints " + bound_formula(c.cls));
    for (std::uint64_t m : {1, 10, 100, 1000, 100000}) {
      const double got = main_bound(c.cls, m).expected_gap;
      const double want = c.value(static_cast<double>(c.cls.bidders), static_cast<double>(m));
      if (std::abs(got - want) > 1e-14 * want) v.fail(std::string(class_name(c.cls.kind)) + fmt(" at m=%.0f: %.17g vs %.17g", static_cast<double>(m), got, want));
    }
  }
  for (std::uint64_t n : {1, 2, 5}) {
    for (std::uint64_t m : {10, 1000, 1000000}) {
      const double want = std::pow(2.0 * static_cast<double>(n) * std::log(2.0 * static_cast<double>(m)) / static_cast<double>(m), 1.0 / 3.0);
      const double got = tlevel_epsilon(n, m).epsilon;
      if (std::abs(got - want) > 2.0 * std::numeric_limits<double>::epsilon() * want) v.fail(fmt("tlevel epsilon %.17g vs %.17g", got, want));
    }
  }
  const auto m = sample_complexity_estimate(single, 0.5);
  if (m != 34) v.fail("sample complexity at 0.5 is " + std::to_string(m) + ", expected 34");
  if (!(main_bound(single, 33).expected_gap > 0.5)) v.fail("m = 33 already meets 0.5");
  if (v.pass) {
    v.detail = "three displayed forms match in text and value; tlevel epsilon within 2 ulp; m(0.5) = 34" +
               fmt(", bound(33) = %.4f > 0.5", main_bound(single, 33).expected_gap);
  }
  return v;
}

// 9. Byte-identical outputs across worker counts.
Verdict determinism() {
  Verdict v;
  const auto render = [](ExperimentConfig c, unsigned threads) {
    c.parallelism = Parallelism{threads};
    std::ostringstream out;
    const auto rows = generalization_experiment(c);
    write_experiment_csv_header(out);
    for (const auto& r : rows) {
      write_experiment_csv_row(out, r);
      out << to_json(r).dump() << '\n';
    }
    for (const auto& r : sample_complexity_curve(c, {0.5, 0.1, 0.05}, rows)) write_curve_csv_row(out, r);
    write_experiment_svg(out, rows);
    SplitSampleOptions split;
    split.parallelism = c.parallelism;
    const auto g = growth_rate_estimate(c.cls, 10, c.spec, 5, c.seed, split);
    write_growth_csv_row(out, g);
    return out.str();
  };
  ExperimentConfig mc;
  mc.cls = make_class(ClassKind::AnonymousReserve, 2, 1);
  mc.spec = DistributionSpec::iid(2, 1, TruncatedExponential{2.0, 1.0});
  mc.m_grid = {20, 80};
  mc.replicates = 200;
  mc.eval_draws = 20000;
  mc.optimum_step = 0.01;
  mc.seed = Seed{1008};
  std::size_t bytes = 0;
  for (const auto& config : {uniform_reserve_config(), mc}) {
    const auto one = render(config, 1);
    bytes += one.size();
    for (unsigned threads : {2u, 4u, 7u}) {
      if (render(config, threads) != one) v.fail(std::string(class_name(config.cls.kind)) + " output differs at --threads " + std::to_string(threads));
    }
  }
  if (v.pass) v.detail = "experiment, curve, svg and growth outputs identical at 1, 2, 4 and 7 workers (" + std::to_string(bytes) + " bytes per run)";
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"1 truthfulness", truthfulness},
      {"2 erm-oracle-equivalence", erm_oracle},
      {"3 split-sample-cardinality", split_sample_cardinality},
      {"4 massart", massart_check},
      {"5 lemma-chain", lemma_chain},
      {"6 expected-gap", expected_gap},
      {"7 high-probability", high_probability},
      {"8 bound-formulas", formulas},
      {"9 determinism", determinism},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = run();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("threw: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %s: %s (%.1f s)\n", v.pass ? "PASS" : "FAIL", name.c_str(), v.detail.c_str(), secs);
    std::fflush(stdout);
    if (!v.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
