#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <vector>

#include "oracles.hpp"
#include "ssg/model.hpp"
#include "ssg/parallel.hpp"
#include "ssg/rng.hpp"
#include "ssg/true_revenue.hpp"

using namespace ssg;

TEST(Range, RejectsInvertedOrInfinite) {
  EXPECT_THROW((Range{1.0, 0.0}).validate(), InvalidArgument);
  EXPECT_THROW((Range{0.0, INFINITY}).validate(), InvalidArgument);
  EXPECT_NO_THROW((Range{0.5, 0.5}).validate());
}

TEST(ValuationProfile, ShapeAndRangeAreChecked) {
  EXPECT_THROW(ValuationProfile(2, 2, {0.1, 0.2, 0.3}), DimensionMismatch);
  EXPECT_THROW(ValuationProfile(0, 1, {}), InvalidArgument);
  EXPECT_THROW(ValuationProfile(1, 1, {1.5}), InvalidArgument);
  EXPECT_THROW(ValuationProfile(1, 1, {NAN}), InvalidArgument);
  EXPECT_NO_THROW(ValuationProfile(1, 1, {1.5}, Range{0.0, 2.0}));
}

TEST(ValuationProfile, AccessorsAreRowMajor) {
  const ValuationProfile v(2, 3, {0.1, 0.2, 0.3, 0.4, 0.5, 0.6});
  EXPECT_EQ(v(0, 2), 0.3);
  EXPECT_EQ(v(1, 0), 0.4);
  EXPECT_DOUBLE_EQ(v.bundle_value(1), 1.5);
  const std::vector<double> row{0.9, 0.9, 0.9};
  const auto w = v.with_bidder(0, row);
  EXPECT_EQ(w(0, 1), 0.9);
  EXPECT_EQ(w(1, 1), 0.5);
  EXPECT_LT(v, w);
}

TEST(SampleSet, RejectsEmptyAndMixedShapes) {
  EXPECT_THROW(SampleSet(std::vector<ValuationProfile>{}), InvalidArgument);
  std::vector<ValuationProfile> mixed{ValuationProfile::single(0.1), ValuationProfile(2, 1, {0.1, 0.2})};
  EXPECT_THROW(SampleSet(std::move(mixed)), DimensionMismatch);
}

TEST(SampleSet, ConcatKeepsOrder) {
  const auto a = SampleSet::from_values({0.1, 0.2});
  const auto b = SampleSet::from_values({0.3});
  const auto c = a.concat(b);
  ASSERT_EQ(c.size(), 3u);
  EXPECT_EQ(c[2](0, 0), 0.3);
  EXPECT_THROW(a.concat(SampleSet::from_values({0.3}, Range{0.0, 2.0})), DimensionMismatch);
}

TEST(Marginals, ValidationRules) {
  const Range unit{};
  EXPECT_THROW(validate(Discrete{{0.2, 0.4}, {0.5, 0.4}}, unit), InvalidArgument);
  EXPECT_NO_THROW(validate(Discrete{{0.2, 0.4}, {0.5, 0.5 + 5e-13}}, unit));
  EXPECT_THROW(validate(Discrete{{0.2, 1.4}, {0.5, 0.5}}, unit), InvalidArgument);
  EXPECT_THROW(validate(Uniform{0.0, 2.0}, unit), InvalidArgument);
  EXPECT_THROW(validate(TruncatedExponential{-1.0, 1.0}, unit), InvalidArgument);
  EXPECT_THROW(validate(TruncatedExponential{1.0, 3.0}, unit), InvalidArgument);
  EXPECT_THROW(DistributionSpec::iid(1, 1, Uniform{0.0, 2.0}), InvalidArgument);
  EXPECT_THROW(DistributionSpec(2, 1, {Uniform{}}), DimensionMismatch);
}

TEST(SampleValues, PointMassGivesTheAtom) {
  const auto s = sample_values(DistributionSpec::iid(1, 1, point_mass(0.5)), 3, Seed{99});
  ASSERT_EQ(s.size(), 3u);
  for (const auto& v : s) EXPECT_EQ(v(0, 0), 0.5);
}

TEST(SampleValues, MeanOfUniformWithinThreeSigma) {
  const auto s = sample_values(DistributionSpec::iid(1, 1, Uniform{0.0, 1.0}), 10000, Seed{7});
  double total = 0.0;
  for (const auto& v : s) total += v(0, 0);
  const double sigma = (1.0 / std::sqrt(12.0)) / 100.0;
  EXPECT_NEAR(total / 10000.0, 0.5, 3.0 * sigma);
}

TEST(SampleValues, DeterministicInSeed) {
  const auto spec = DistributionSpec::iid(2, 2, Uniform{0.0, 1.0});
  const auto a = sample_values(spec, 5, Seed{1234});
  const auto b = sample_values(spec, 5, Seed{1234});
  const auto c = sample_values(spec, 5, Seed{1235});
  EXPECT_EQ(a.profiles(), b.profiles());
  EXPECT_NE(a.profiles(), c.profiles());
  EXPECT_THROW(sample_values(spec, 0, Seed{1}), InvalidArgument);
}

TEST(SampleValues, RecordsProvenance) {
  const auto spec = DistributionSpec::iid(1, 1, Uniform{0.0, 1.0});
  const auto s = sample_values(spec, 2, Seed{5});
  const auto* from = std::get_if<GeneratedFrom>(&s.provenance());
  ASSERT_NE(from, nullptr);
  EXPECT_EQ(from->seed, Seed{5});
}

class MarginalKs : public ::testing::TestWithParam<Marginal> {};

TEST_P(MarginalKs, EmpiricalCdfWithinOnePercent) {
  const Marginal m = GetParam();
  const auto spec = DistributionSpec::iid(1, 1, m);
  Rng rng(Seed{2024}.derive("ks"));
  std::vector<double> xs;
  for (int i = 0; i < 100000; ++i) xs.push_back(spec.draw(rng)(0, 0));
  // P(X < x) = 1 - P(X >= x), which the oracle needs at atoms.
  const double d = oracle::ks_distance(
      xs, [&](double x) { return cdf(m, x); }, [&](double x) { return 1.0 - probability_at_least(m, x); });
  EXPECT_LE(d, 0.01);
}

INSTANTIATE_TEST_SUITE_P(AllFamilies, MarginalKs,
                         ::testing::Values(Marginal{Uniform{0.0, 1.0}}, Marginal{Uniform{0.2, 0.7}},
                                           Marginal{TruncatedExponential{3.0, 1.0}},
                                           Marginal{TruncatedExponential{0.5, 0.8}},
                                           Marginal{Discrete{{0.1, 0.5, 0.9}, {0.2, 0.5, 0.3}}}));

TEST(Quantile, TruncatedExponentialMatchesClosedForm) {
  const TruncatedExponential d{2.0, 1.0};
  for (double u : {0.0, 0.1, 0.5, 0.9, 0.999}) {
    const double x = quantile(d, u);
    const double expected_cdf = (1.0 - std::exp(-2.0 * x)) / (1.0 - std::exp(-2.0));
    EXPECT_NEAR(expected_cdf, u, 1e-12);
  }
}

TEST(Seed, DerivationIsPureAndSeparatesLabels) {
  const Seed s{42};
  EXPECT_EQ(s.derive("a", 1), s.derive("a", 1));
  std::set<std::uint64_t> seen;
  for (const char* label : {"a", "b", "sample_values"}) {
    for (std::uint64_t i = 0; i < 100; ++i) seen.insert(s.derive(label, i).master);
  }
  EXPECT_EQ(seen.size(), 300u);
  EXPECT_NE(Seed{1}.derive("a").master, Seed{2}.derive("a").master);
}

TEST(Rng, TransformsStayInRange) {
  Rng rng(Seed{3});
  int plus = 0;
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    ASSERT_LT(rng.below(7), 7u);
    plus += rng.sign() > 0 ? 1 : 0;
  }
  EXPECT_NEAR(plus / 10000.0, 0.5, 3.0 * 0.5 / 100.0);
}

TEST(Rng, FixedSequenceForFixedSeed) {
  Rng a(Seed{77});
  Rng b(Seed{77});
  for (int i = 0; i < 100; ++i) ASSERT_EQ(a.next(), b.next());
}

TEST(CompensatedSum, RecoversSmallTerms) {
  CompensatedSum s;
  s.add(1.0);
  for (int i = 0; i < 1000; ++i) s.add(1e-16);
  s.add(-1.0);
  EXPECT_NEAR(s.value(), 1e-13, 1e-20);
}

TEST(Parallel, ResultIndependentOfWorkers) {
  const auto body = [](std::size_t i) { return static_cast<double>(i * i) * 0.5; };
  const auto one = parallel_map<double>(1000, Parallelism{1}, body);
  const auto four = parallel_map<double>(1000, Parallelism{4}, body);
  EXPECT_EQ(one, four);
}

TEST(Parallel, RethrowsWorkerFailure) {
  EXPECT_THROW(parallel_for(100, Parallelism{3},
                            [](std::size_t i) {
                              if (i == 57) throw InvalidArgument("boom");
                            }),
               InvalidArgument);
}

TEST(TrueRevenue, AnalyticExamples) {
  const auto spec = DistributionSpec::iid(1, 1, Uniform{0.0, 1.0});
  EXPECT_DOUBLE_EQ(true_revenue(SingleReserve{0.5}, spec).value, 0.25);
  EXPECT_EQ(true_revenue(SingleReserve{0.0}, spec).value, 0.0);
  const auto discrete = DistributionSpec::iid(1, 1, Discrete{{0.2, 0.6}, {0.5, 0.5}});
  EXPECT_DOUBLE_EQ(true_revenue(SingleReserve{0.6}, discrete).value, 0.3);
  EXPECT_DOUBLE_EQ(true_revenue(SingleReserve{0.2}, discrete).value, 0.2);
}

TEST(TrueRevenue, MonteCarloAgreesWithAnalytic) {
  const auto spec = DistributionSpec::iid(1, 1, Uniform{0.0, 1.0});
  const auto mc = true_revenue(SingleReserve{0.5}, spec, RevenueMethod::monte_carlo(1000000, Seed{11}));
  EXPECT_FALSE(mc.analytic);
  EXPECT_GT(mc.std_error, 0.0);
  EXPECT_NEAR(mc.value, 0.25, 3.0 * mc.std_error);

  const auto items = DistributionSpec(1, 2, {Uniform{0.0, 1.0}, Discrete{{0.3, 0.8}, {0.6, 0.4}}});
  const Hypothesis h = ItemPrices{true, 2, {0.4, 0.8}};
  const auto exact = true_revenue(h, items);
  const auto approx = true_revenue(h, items, RevenueMethod::monte_carlo(200000, Seed{12}));
  EXPECT_DOUBLE_EQ(exact.value, 0.4 * 0.6 + 0.8 * 0.4);
  EXPECT_NEAR(approx.value, exact.value, 3.0 * approx.std_error);
}

TEST(TrueRevenue, AnalyticRejectedWhereNoClosedForm) {
  const auto two = DistributionSpec::iid(2, 1, Uniform{0.0, 1.0});
  EXPECT_THROW(true_revenue(AnonymousReserve{0.5}, two), InvalidArgument);
  const auto texp = DistributionSpec::iid(1, 1, TruncatedExponential{1.0, 1.0});
  EXPECT_THROW(true_revenue(SingleReserve{0.5}, texp), InvalidArgument);
  EXPECT_NO_THROW(true_revenue(AnonymousReserve{0.5}, two, RevenueMethod::monte_carlo(1000, Seed{1})));
}
