#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "instances.hpp"
#include "ssg/experiments.hpp"

using namespace ssg;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.m_grid = {25, 50, 100, 200};
  c.replicates = 300;
  c.seed = Seed{71};
  return c;
}

std::string csv(const std::vector<ExperimentRow>& rows) {
  std::ostringstream out;
  write_experiment_csv_header(out);
  for (const auto& r : rows) write_experiment_csv_row(out, r);
  return out.str();
}

std::size_t fields(const std::string& line) { return static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1; }

}  // namespace

TEST(InClassOptimum, UniformPostedPrice) {
  const auto r = in_class_optimum(AuctionClass{}, DistributionSpec::iid(1, 1, Uniform{0.0, 1.0}));
  EXPECT_TRUE(r.analytic);
  EXPECT_DOUBLE_EQ(r.value, 0.25);
  EXPECT_DOUBLE_EQ(std::get<SingleReserve>(r.argmax).reserve, 0.5);
}

TEST(InClassOptimum, PointMassSellsAtTheAtom) {
  const auto r = in_class_optimum(AuctionClass{}, DistributionSpec::iid(1, 1, point_mass(0.7)));
  EXPECT_DOUBLE_EQ(r.value, 0.7);
}

TEST(InClassOptimum, DenseGridForTwoUniformBidders) {
  // Second price with reserve 1/2 against two U(0,1) bidders earns 5/12.
  const auto cls = instances::make_class(ClassKind::AnonymousReserve, 2, 1);
  const auto spec = DistributionSpec::iid(2, 1, Uniform{0.0, 1.0});
  EXPECT_FALSE(has_analytic_optimum(cls, spec));
  EXPECT_THROW(in_class_optimum(cls, spec), InvalidArgument);
  const auto r = in_class_optimum(cls, spec, OptimumMethod::dense_grid(0.01, 200000, Seed{72}));
  EXPECT_FALSE(r.analytic);
  EXPECT_NEAR(r.value, 5.0 / 12.0, 4.0 * r.std_error + 1e-3);
  EXPECT_NEAR(std::get<AnonymousReserve>(r.argmax).reserve, 0.5, 0.1);
}

TEST(Experiment, PointMassHasNoGap) {
  auto c = small_config();
  c.spec = DistributionSpec::iid(1, 1, point_mass(0.4));
  for (const auto& row : generalization_experiment(c)) {
    EXPECT_DOUBLE_EQ(row.mean_revenue, 0.4);
    EXPECT_NEAR(row.gap, 0.0, 1e-15);
    EXPECT_EQ(row.violation_fraction, 0.0);
  }
}

TEST(Experiment, GapShrinksAndStaysBelowTheBound) {
  const auto rows = generalization_experiment(small_config());
  ASSERT_EQ(rows.size(), 4u);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_TRUE(rows[i].optimum_analytic);
    EXPECT_LE(rows[i].gap - 3.0 * rows[i].gap_std_error, rows[i].bound);
    EXPECT_DOUBLE_EQ(rows[i].bound, std::sqrt(2.0 * std::log(2.0 * static_cast<double>(rows[i].m)) / static_cast<double>(rows[i].m)));
    EXPECT_DOUBLE_EQ(rows[i].high_prob_bound, rows[i].bound / 0.25);
    if (i > 0) {
      EXPECT_LE(rows[i].gap, rows[i - 1].gap + 3.0 * std::hypot(rows[i].gap_std_error, rows[i - 1].gap_std_error));
    }
  }
}

TEST(Experiment, IndependentOfThreadCount) {
  auto one = small_config();
  one.m_grid = {20, 40};
  one.replicates = 100;
  auto three = one;
  one.parallelism = Parallelism{1};
  three.parallelism = Parallelism{3};
  EXPECT_EQ(csv(generalization_experiment(one)), csv(generalization_experiment(three)));
}

TEST(Experiment, MonteCarloScoringIndependentOfThreadCount) {
  ExperimentConfig c;
  c.cls = instances::make_class(ClassKind::AnonymousReserve, 2, 1);
  c.spec = DistributionSpec::iid(2, 1, Uniform{0.0, 1.0});
  c.m_grid = {10};
  c.replicates = 20;
  c.eval_draws = 2000;
  c.optimum_step = 0.05;
  c.seed = Seed{73};
  auto four = c;
  c.parallelism = Parallelism{1};
  four.parallelism = Parallelism{4};
  const auto a = generalization_experiment(c);
  EXPECT_FALSE(a[0].optimum_analytic);
  EXPECT_GT(a[0].optimum_std_error, 0.0);
  EXPECT_EQ(csv(a), csv(generalization_experiment(four)));
}

TEST(Experiment, ReferenceFactorsAreReported) {
  auto c = small_config();
  c.m_grid = {10};
  c.replicates = 5;
  EXPECT_FALSE(generalization_experiment(c)[0].prophet_factor.has_value());

  c.cls = instances::make_class(ClassKind::PlayerReserves, 1, 1);
  EXPECT_EQ(generalization_experiment(c)[0].prophet_factor, 0.5);

  c.cls = instances::make_class(ClassKind::BestOf, 1, 2);
  c.spec = DistributionSpec::iid(1, 2, Uniform{0.0, 1.0});
  c.eval_draws = 1000;
  c.optimum_step = 0.1;
  const auto row = generalization_experiment(c)[0];
  EXPECT_EQ(row.best_of_factor_stated, 1.0 / 8.0);
  EXPECT_EQ(row.best_of_factor_displayed, 1.0 / 6.0);
}

TEST(Experiment, ConfigValidation) {
  auto c = small_config();
  c.m_grid = {};
  EXPECT_THROW(generalization_experiment(c), InvalidArgument);
  c = small_config();
  c.delta = 1.0;
  EXPECT_THROW(generalization_experiment(c), InvalidArgument);
  c = small_config();
  c.replicates = 0;
  EXPECT_THROW(generalization_experiment(c), InvalidArgument);
  c = small_config();
  c.cls = instances::make_class(ClassKind::AnonymousReserve, 2, 1);
  EXPECT_THROW(generalization_experiment(c), DimensionMismatch);
}

TEST(Experiment, FingerprintTracksResultRelevantFields) {
  auto a = small_config();
  auto b = small_config();
  b.parallelism = Parallelism{5};
  EXPECT_EQ(a.fingerprint(), b.fingerprint());
  EXPECT_EQ(a.fingerprint().size(), 16u);
  b.seed = Seed{72};
  EXPECT_NE(a.fingerprint(), b.fingerprint());
  b = a;
  b.m_grid.push_back(400);
  EXPECT_NE(a.fingerprint(), b.fingerprint());
}

TEST(Experiment, CsvRowsMatchTheHeader) {
  auto c = small_config();
  c.m_grid = {10, 20};
  c.replicates = 10;
  std::istringstream in(csv(generalization_experiment(c)));
  std::string header;
  std::getline(in, header);
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) {
    EXPECT_EQ(fields(line), fields(header));
    ++rows;
  }
  EXPECT_EQ(rows, 2);
}

TEST(Curve, BoundSampleSizes) {
  auto c = small_config();
  const auto rows = generalization_experiment(c);
  const auto curve = sample_complexity_curve(c, {5.0, 0.5, 0.1}, rows);
  ASSERT_EQ(curve.size(), 3u);
  EXPECT_EQ(curve[0].bound_m, 1u);
  EXPECT_EQ(curve[1].bound_m, 34u);
  ASSERT_TRUE(curve[2].empirical_m.has_value());
  EXPECT_LE(*curve[2].empirical_m, curve[2].bound_m);
  EXPECT_EQ(curve[2].fingerprint, c.fingerprint());
}

TEST(Curve, UnreachedTargetIsEmpty) {
  auto c = small_config();
  c.m_grid = {5};
  c.replicates = 50;
  const auto curve = sample_complexity_curve(c, {1e-6});
  EXPECT_FALSE(curve[0].empirical_m.has_value());
  std::ostringstream out;
  write_curve_csv_row(out, curve[0]);
  EXPECT_NE(out.str().find(",,"), std::string::npos);
}
