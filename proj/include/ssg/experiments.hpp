#pragma once

// Generalization experiments: draw S, learn h_S by ERM, score R_D(h_S),
// and compare the shortfall from the in-class optimum with the bound.

#include <algorithm>
#include <cmath>
#include <mutex>
#include <ostream>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ssg/bounds.hpp"
#include "ssg/distribution_io.hpp"
#include "ssg/erm.hpp"
#include "ssg/hypothesis.hpp"
#include "ssg/model.hpp"
#include "ssg/optimum.hpp"
#include "ssg/parallel.hpp"
#include "ssg/report.hpp"
#include "ssg/rng.hpp"
#include "ssg/true_revenue.hpp"

namespace ssg {

struct ExperimentConfig {
  AuctionClass cls{};
  DistributionSpec spec = DistributionSpec::iid(1, 1, Uniform{0.0, 1.0});
  std::vector<std::size_t> m_grid{50, 100, 200, 400};
  std::size_t replicates = 1000;
  Seed seed{};
  double delta = 0.25;
  std::size_t eval_draws = 100000;  // Monte Carlo draws for R_D without a closed form
  double optimum_step = 1e-3;       // dense-grid step when the optimum has no closed form
  ErmOptions erm{};
  Parallelism parallelism{};  // not part of the fingerprint: results do not depend on it

  void validate() const {
    cls.validate();
    if (m_grid.empty()) throw InvalidArgument("m-grid is empty");
    for (std::size_t m : m_grid) {
      if (m == 0) throw InvalidArgument("m-grid entries must be >= 1");
    }
    if (replicates == 0) throw InvalidArgument("replicates must be >= 1");
    if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("delta must lie in (0, 1)");
    if (eval_draws == 0) throw InvalidArgument("eval draws must be >= 1");
    if (!(optimum_step > 0.0)) throw InvalidArgument("optimum step must be positive");
  }

  [[nodiscard]] nlohmann::json canonical() const {
    return {{"class", to_json(cls)},
            {"distribution", to_json(spec)},
            {"m_grid", m_grid},
            {"replicates", replicates},
            {"seed", seed.master},
            {"delta", delta},
            {"eval_draws", eval_draws},
            {"optimum_step", optimum_step},
            {"candidate_ceiling", erm.candidate_ceiling}};
  }

  [[nodiscard]] std::string fingerprint() const { return ssg::fingerprint(canonical()); }
};

struct ExperimentRow {
  AuctionClass cls;
  std::size_t m = 0;
  std::size_t replicates = 0;
  double mean_revenue = 0.0;  // mean over replicates of R_D(h_S)
  double revenue_std_error = 0.0;
  double optimum = 0.0;
  double optimum_std_error = 0.0;
  bool optimum_analytic = false;
  double gap = 0.0;  // optimum - mean_revenue
  double gap_std_error = 0.0;
  double bound = 0.0;
  double delta = 0.0;
  double high_prob_bound = 0.0;
  double violation_fraction = 0.0;  // replicates with gap > bound / delta
  double violation_sigma = 0.0;     // sqrt(delta (1 - delta) / replicates)
  // Reference approximation factors, reported and never checked.
  std::optional<double> prophet_factor;
  std::optional<double> best_of_factor_stated;
  std::optional<double> best_of_factor_displayed;
  std::string fingerprint;
};

namespace detail {

// Scores hypotheses by R_D: closed form where one exists, otherwise on a
// single shared set of draws.
class RevenueOracle {
 public:
  RevenueOracle(const DistributionSpec& spec, std::size_t draws, Seed seed) : spec_(spec), draws_(draws), seed_(seed) {}

  RevenueEstimate operator()(const Hypothesis& h) const {
    if (has_analytic_revenue(h, spec_)) return true_revenue(h, spec_);
    std::call_once(once_, [&] {
      Rng rng(seed_);
      pool_.reserve(draws_);
      for (std::size_t d = 0; d < draws_; ++d) pool_.push_back(spec_.draw(rng));
    });
    MeanAccumulator acc;
    for (const auto& v : pool_) acc.add(revenue(h, v));
    return {acc.mean(), acc.std_error(), false};
  }

 private:
  const DistributionSpec& spec_;
  std::size_t draws_;
  Seed seed_;
  mutable std::once_flag once_;
  mutable std::vector<ValuationProfile> pool_;
};

inline OptimumMethod optimum_method_for(const ExperimentConfig& config) {
  if (has_analytic_optimum(config.cls, config.spec)) return OptimumMethod::analytic();
  return OptimumMethod::dense_grid(config.optimum_step, config.eval_draws, config.seed.derive("experiment_optimum"));
}

}  // namespace detail

inline std::vector<ExperimentRow> generalization_experiment(const ExperimentConfig& config) {
  config.validate();
  detail::check_class_fits(config.cls, config.spec.bidders(), config.spec.items());
  const Range reward = config.cls.revenue_range(config.spec.range());
  const auto opt = in_class_optimum(config.cls, config.spec, detail::optimum_method_for(config));
  const detail::RevenueOracle oracle(config.spec, config.eval_draws, config.seed.derive("experiment_eval"));
  const std::string print = config.fingerprint();

  std::vector<ExperimentRow> rows;
  for (std::size_t m : config.m_grid) {
    const BoundReport bound = with_confidence(main_bound(config.cls, m, reward), config.delta);
    const Seed m_seed = config.seed.derive("experiment_m", m);
    const auto values = parallel_map<double>(config.replicates, config.parallelism, [&](std::size_t r) {
      const SampleSet s = sample_values(config.spec, m, m_seed.derive("replicate", r));
      return oracle(erm(config.cls, s, config.erm)).value;
    });

    MeanAccumulator acc;
    std::size_t violations = 0;
    for (double v : values) {
      acc.add(v);
      if (opt.value - v > *bound.high_prob) ++violations;
    }
    ExperimentRow row;
    row.cls = config.cls;
    row.m = m;
    row.replicates = config.replicates;
    row.mean_revenue = acc.mean();
    row.revenue_std_error = acc.std_error();
    row.optimum = opt.value;
    row.optimum_std_error = opt.std_error;
    row.optimum_analytic = opt.analytic;
    row.gap = opt.value - acc.mean();
    row.gap_std_error = std::hypot(acc.std_error(), opt.std_error);
    row.bound = bound.expected_gap;
    row.delta = config.delta;
    row.high_prob_bound = *bound.high_prob;
    const double reps = static_cast<double>(config.replicates);
    row.violation_fraction = static_cast<double>(violations) / reps;
    row.violation_sigma = std::sqrt(config.delta * (1.0 - config.delta) / reps);
    if (config.cls.kind == ClassKind::PlayerReserves) row.prophet_factor = 0.5;
    if (config.cls.kind == ClassKind::BestOf && config.cls.bidders == 1) {
      row.best_of_factor_stated = 1.0 / 8.0;
      row.best_of_factor_displayed = 1.0 / 6.0;
    }
    row.fingerprint = print;
    rows.push_back(std::move(row));
  }
  return rows;
}

struct CurveRow {
  double epsilon = 0.0;
  std::uint64_t bound_m = 0;               // from the closed-form bound
  std::optional<std::size_t> empirical_m;  // smallest grid m with measured gap <= epsilon
  std::string fingerprint;
};

// Pairs each accuracy target with the bound's sample size and the smallest
// m on the experiment grid that reached it.
inline std::vector<CurveRow> sample_complexity_curve(const ExperimentConfig& config,
                                                     const std::vector<double>& epsilons,
                                                     const std::vector<ExperimentRow>& rows) {
  const Range reward = config.cls.revenue_range(config.spec.range());
  std::vector<const ExperimentRow*> by_m;
  for (const auto& r : rows) by_m.push_back(&r);
  std::stable_sort(by_m.begin(), by_m.end(), [](const auto* a, const auto* b) { return a->m < b->m; });

  std::vector<CurveRow> out;
  for (double eps : epsilons) {
    CurveRow row{eps, sample_complexity_estimate(config.cls, eps, reward), std::nullopt, config.fingerprint()};
    for (const auto* r : by_m) {
      if (r->gap <= eps) {
        row.empirical_m = r->m;
        break;
      }
    }
    out.push_back(row);
  }
  return out;
}

inline std::vector<CurveRow> sample_complexity_curve(const ExperimentConfig& config,
                                                     const std::vector<double>& epsilons) {
  return sample_complexity_curve(config, epsilons, generalization_experiment(config));
}

inline void write_experiment_csv_header(std::ostream& out) {
  out << "class,m,n,k,s,replicates,mean_revenue,revenue_se,optimum,optimum_se,optimum_analytic,gap,gap_se,bound,"
         "delta,hp_bound,violation_fraction,violation_sigma,prophet_factor,best_of_stated,best_of_displayed,"
         "fingerprint\n";
}

inline void write_experiment_csv_row(std::ostream& out, const ExperimentRow& r) {
  const auto opt = [](const std::optional<double>& x) { return x ? format_exact(*x) : std::string(); };
  out << class_name(r.cls.kind) << ',' << r.m << ',' << r.cls.bidders << ',' << r.cls.items << ',' << r.cls.levels
      << ',' << r.replicates << ',' << format_exact(r.mean_revenue) << ',' << format_exact(r.revenue_std_error) << ','
      << format_exact(r.optimum) << ',' << format_exact(r.optimum_std_error) << ',' << (r.optimum_analytic ? 1 : 0)
      << ',' << format_exact(r.gap) << ',' << format_exact(r.gap_std_error) << ',' << format_exact(r.bound) << ','
      << format_exact(r.delta) << ',' << format_exact(r.high_prob_bound) << ',' << format_exact(r.violation_fraction)
      << ',' << format_exact(r.violation_sigma) << ',' << opt(r.prophet_factor) << ',' << opt(r.best_of_factor_stated)
      << ',' << opt(r.best_of_factor_displayed) << ',' << r.fingerprint << '\n';
}

inline nlohmann::json to_json(const ExperimentRow& r) {
  nlohmann::json j = to_json(r.cls);
  j["m"] = r.m;
  j["replicates"] = r.replicates;
  j["mean_revenue"] = r.mean_revenue;
  j["revenue_se"] = r.revenue_std_error;
  j["optimum"] = r.optimum;
  j["optimum_se"] = r.optimum_std_error;
  j["optimum_analytic"] = r.optimum_analytic;
  j["gap"] = r.gap;
  j["gap_se"] = r.gap_std_error;
  j["bound"] = r.bound;
  j["delta"] = r.delta;
  j["hp_bound"] = r.high_prob_bound;
  j["violation_fraction"] = r.violation_fraction;
  j["violation_sigma"] = r.violation_sigma;
  if (r.prophet_factor) j["prophet_factor"] = *r.prophet_factor;
  if (r.best_of_factor_stated) j["best_of_stated"] = *r.best_of_factor_stated;
  if (r.best_of_factor_displayed) j["best_of_displayed"] = *r.best_of_factor_displayed;
  j["fingerprint"] = r.fingerprint;
  return j;
}

inline void write_curve_csv_header(std::ostream& out) { out << "epsilon,bound_m,empirical_m,fingerprint\n"; }

inline void write_curve_csv_row(std::ostream& out, const CurveRow& r) {
  out << format_exact(r.epsilon) << ',' << r.bound_m << ','
      << (r.empirical_m ? std::to_string(*r.empirical_m) : std::string()) << ',' << r.fingerprint << '\n';
}

inline nlohmann::json to_json(const CurveRow& r) {
  nlohmann::json j{{"epsilon", r.epsilon}, {"bound_m", r.bound_m}, {"fingerprint", r.fingerprint}};
  j["empirical_m"] = r.empirical_m ? nlohmann::json(*r.empirical_m) : nlohmann::json(nullptr);
  return j;
}

// Gap and bound against m.
inline void write_experiment_svg(std::ostream& out, const std::vector<ExperimentRow>& rows) {
  std::vector<double> x;
  ChartSeries gap{"measured gap", "#1f77b4", {}};
  ChartSeries bound{"bound", "#d62728", {}};
  for (const auto& r : rows) {
    x.push_back(static_cast<double>(r.m));
    gap.y.push_back(std::max(0.0, r.gap));
    bound.y.push_back(r.bound);
  }
  const std::string title = rows.empty() ? std::string("gap vs m") : std::string(class_name(rows[0].cls.kind)) + ": gap and bound vs m";
  write_svg_chart(out, title, x, {gap, bound});
}

}  // namespace ssg
