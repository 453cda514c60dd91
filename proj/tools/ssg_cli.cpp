// ssg: sample, learn and bound revenue-maximizing auctions from the command line.

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ssg.hpp"

namespace {

// JSON config files. Top-level keys are long flag names of the selected
// subcommand; an object keyed by a subcommand name scopes its contents to
// that subcommand. Arrays become repeated values. Flags given on the command
// line win over the file.
class JsonConfig : public CLI::Config {
 public:
  explicit JsonConfig(const CLI::App* root) : root_(root) {}

  std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override {
    nlohmann::json out = nlohmann::json::object();
    for (const CLI::App* sub : app->get_subcommands()) {
      for (const CLI::Option* opt : sub->get_options()) {
        if (!opt->get_configurable() || opt->get_lnames().empty()) continue;
        const auto& results = opt->results();
        if (!results.empty()) {
          out[opt->get_lnames().front()] = results.size() == 1 ? nlohmann::json(results.front()) : nlohmann::json(results);
        } else if (default_also && !opt->get_default_str().empty()) {
          out[opt->get_lnames().front()] = opt->get_default_str();
        }
      }
    }
    return out.dump(2) + "\n";
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& in) const override {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw CLI::ConversionError(std::string("config file is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw CLI::ConversionError("config file must hold a JSON object");
    std::vector<std::string> scope;
    for (const CLI::App* sub : root_->get_subcommands()) scope.push_back(sub->get_name());

    std::vector<CLI::ConfigItem> items;
    for (const auto& [key, value] : doc.items()) {
      if (value.is_object()) {
        if (root_->get_subcommand_no_throw(key) == nullptr) {
          throw CLI::ConversionError("config section '" + key + "' is not a subcommand");
        }
        // sections for other subcommands are left alone
        if (scope.empty() || scope.front() != key) continue;
        for (const auto& [inner, v] : value.items()) add(items, {key}, inner, v);
      } else {
        add(items, scope, key, value);
      }
    }
    return items;
  }

 private:
  static std::string scalar(const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number()) return v.dump();
    throw CLI::ConversionError("config values must be strings, numbers, booleans or arrays of those");
  }

  static void add(std::vector<CLI::ConfigItem>& items, std::vector<std::string> parents, const std::string& name,
                  const nlohmann::json& value) {
    if (value.is_null()) return;
    CLI::ConfigItem item;
    item.parents = std::move(parents);
    item.name = name;
    if (value.is_array()) {
      for (const auto& v : value) item.inputs.push_back(scalar(v));
    } else {
      item.inputs.push_back(scalar(value));
    }
    items.push_back(std::move(item));
  }

  const CLI::App* root_;
};

struct Options {
  // class
  std::string cls = "single-reserve";
  std::size_t n = 1;
  std::size_t k = 1;
  std::size_t s = 1;
  bool per_player = false;
  // values and data
  double alpha = 0.0;
  double beta = 1.0;
  std::string dist;
  std::vector<double> values;
  std::string samples;
  std::size_t m = 100;
  std::vector<std::size_t> m_grid;
  // run control
  std::size_t replicates = 1000;
  std::uint64_t draws = 0;
  double delta = 0.0;
  std::vector<double> epsilons;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::string mode = "exact";
  double optimum_step = 1e-3;
  std::uint64_t candidate_ceiling = ssg::ErmOptions{}.candidate_ceiling;
  std::uint64_t subset_ceiling = ssg::SplitSampleOptions{}.subset_ceiling;
  // output
  std::string out;
  std::string format = "auto";
  std::string svg;

  [[nodiscard]] ssg::Range range() const { return {alpha, beta}; }

  [[nodiscard]] ssg::AuctionClass auction_class() const {
    ssg::AuctionClass c;
    c.kind = ssg::parse_class_kind(cls);
    c.bidders = n;
    c.items = k;
    c.levels = c.kind == ssg::ClassKind::TLevel ? s : 0;
    c.anonymous = !per_player;
    c.validate();
    return c;
  }

  [[nodiscard]] ssg::DistributionSpec distribution() const {
    const std::string text = dist.empty() ? "uniform:" + ssg::format_exact(alpha) + ":" + ssg::format_exact(beta) : dist;
    return ssg::parse_distribution(text, n, k, range());
  }

  [[nodiscard]] std::vector<std::size_t> sizes() const { return m_grid.empty() ? std::vector<std::size_t>{m} : m_grid; }

  [[nodiscard]] ssg::Parallelism parallelism() const { return {threads}; }

  [[nodiscard]] std::uint64_t draws_or(std::uint64_t fallback) const { return draws == 0 ? fallback : draws; }

  // text for the terminal, csv or jsonl for files unless asked otherwise
  [[nodiscard]] std::string resolved_format() const {
    if (format != "auto") return format;
    return out.empty() ? "text" : "csv";
  }
};

// Where results go: the --out file if given, stdout otherwise.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw ssg::Error("cannot open " + path + " for writing");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

ssg::SampleSet input_sample(const Options& o) {
  if (!o.values.empty()) {
    if (o.n != 1 || o.k != 1) throw ssg::InvalidArgument("--values describes single-bidder, single-item samples");
    return ssg::SampleSet::from_values(o.values, o.range());
  }
  if (!o.samples.empty()) {
    const ssg::SampleShape shape = ssg::peek_sample_shape(o.samples);
    if (shape.bidders != o.n || shape.items != o.k) {
      throw ssg::DimensionMismatch(o.samples + " holds (n, k) = (" + std::to_string(shape.bidders) + ", " +
                                   std::to_string(shape.items) + "), but the class asks for (" + std::to_string(o.n) +
                                   ", " + std::to_string(o.k) + ")");
    }
    return ssg::load_samples(o.samples, shape);
  }
  return ssg::sample_values(o.distribution(), o.m, ssg::Seed{o.seed});
}

void add_class_flags(CLI::App& cmd, Options& o) {
  cmd.add_option("--class", o.cls,
                 "hypothesis class: single-reserve, anonymous-reserve, player-reserves, t-level, bundle, "
                 "item-prices, best-of")
      ->capture_default_str();
  cmd.add_option("--n", o.n, "number of bidders")->capture_default_str()->check(CLI::PositiveNumber);
  cmd.add_option("--k", o.k, "number of items")->capture_default_str()->check(CLI::PositiveNumber);
  cmd.add_option("--s", o.s, "thresholds per bidder (t-level only)")->capture_default_str()->check(CLI::PositiveNumber);
  cmd.add_flag("--per-player", o.per_player, "per-bidder prices for bundle, item-prices and best-of (default: anonymous)");
}

void add_range_flags(CLI::App& cmd, Options& o) {
  cmd.add_option("--alpha", o.alpha, "lower end of the value range (value units)")->capture_default_str();
  cmd.add_option("--beta", o.beta, "upper end of the value range (value units)")->capture_default_str();
}

void add_dist_flags(CLI::App& cmd, Options& o) {
  cmd.add_option("--dist", o.dist,
                 "value distribution: uniform:LO:HI | texp:RATE:CAP | discrete:V@P,V@P,... | point:C; one marginal "
                 "for all (bidder, item) pairs or n*k joined by ';' (default: uniform over [alpha, beta])");
  cmd.add_option("--seed", o.seed, "master seed")->capture_default_str();
}

void add_sample_input_flags(CLI::App& cmd, Options& o) {
  cmd.add_option("--values", o.values, "inline single-bidder sample, comma separated (value units)")->delimiter(',');
  cmd.add_option("--samples", o.samples, "sample file written by 'ssg sample'")->check(CLI::ExistingFile);
  cmd.add_option("--m", o.m, "sample size to draw when neither --values nor --samples is given (profiles)")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  add_dist_flags(cmd, o);
}

void add_output_flags(CLI::App& cmd, Options& o, bool tabular = true) {
  cmd.add_option("--out", o.out, "output file (full precision); stdout when omitted (6 significant digits)");
  if (tabular) {
    cmd.add_option("--format", o.format, "text | csv | jsonl (auto: text on stdout, csv in files)")
        ->capture_default_str()
        ->check(CLI::IsMember({"auto", "text", "csv", "jsonl"}));
  }
}

void add_threads_flag(CLI::App& cmd, Options& o) {
  cmd.add_option("--threads", o.threads, "worker cap, 0 = all cores; results do not depend on it")
      ->capture_default_str();
}

// ---------------------------------------------------------------------------

void run_sample(const Options& o) {
  const auto spec = o.distribution();
  const auto sample = ssg::sample_values(spec, o.m, ssg::Seed{o.seed});
  Sink sink(o.out);
  ssg::write_samples(sink.stream(), sample);
}

void run_erm(const Options& o) {
  const auto cls = o.auction_class();
  const auto sample = input_sample(o);
  const auto result = ssg::erm_detailed(cls, sample, ssg::ErmOptions{o.candidate_ceiling});
  const double average = result.empirical_revenue / static_cast<double>(sample.size());
  Sink sink(o.out);
  auto& os = sink.stream();
  const std::string format = o.resolved_format();
  if (format == "text") {
    os << ssg::describe(result.hypothesis) << '\n';
    os << "empirical revenue " << ssg::format_human(average) << " per profile over " << sample.size()
       << " profiles (" << result.candidates << " candidates)\n";
    return;
  }
  nlohmann::json record = ssg::to_record(result.hypothesis);
  record["empirical_revenue"] = average;
  record["m"] = sample.size();
  record["candidates"] = result.candidates;
  if (format == "jsonl") {
    os << record.dump() << '\n';
  } else {
    os << "class,m,candidates,empirical_revenue,params\n";
    std::string params;
    for (double p : ssg::parameters(result.hypothesis)) params += (params.empty() ? "" : ";") + ssg::format_exact(p);
    os << ssg::class_name(cls.kind) << ',' << sample.size() << ',' << result.candidates << ','
       << ssg::format_exact(average) << ',' << params << '\n';
  }
}

void run_split_sample(const Options& o) {
  const auto cls = o.auction_class();
  const auto sample = input_sample(o);
  ssg::SplitSampleOptions options;
  options.subset_ceiling = o.subset_ceiling;
  options.erm.candidate_ceiling = o.candidate_ceiling;
  options.parallelism = o.parallelism();
  ssg::SplitSampleMode mode;
  if (o.mode == "monte-carlo") {
    mode = ssg::SplitSampleMode::monte_carlo(o.draws_or(1000), ssg::Seed{o.seed}.derive("cli_split_sample"));
  }
  const auto space = ssg::split_sample_space(cls, sample, mode, options);
  Sink sink(o.out);
  auto& os = sink.stream();
  const std::string format = o.resolved_format();
  if (format == "text") {
    os << space.size() << " distinct hypotheses from " << space.subsets_examined << " subsets of size "
       << space.subset_size << '\n';
    for (const auto& h : space.hypotheses) os << "  " << ssg::describe(h) << '\n';
  } else if (format == "jsonl") {
    for (const auto& h : space.hypotheses) os << ssg::to_record(h).dump() << '\n';
  } else {
    os << "class,index,params\n";
    for (std::size_t i = 0; i < space.hypotheses.size(); ++i) {
      std::string params;
      for (double p : ssg::parameters(space.hypotheses[i])) params += (params.empty() ? "" : ";") + ssg::format_exact(p);
      os << ssg::class_name(cls.kind) << ',' << i << ',' << params << '\n';
    }
  }
}

void run_growth(const Options& o) {
  const auto cls = o.auction_class();
  const auto spec = o.distribution();
  ssg::SplitSampleOptions options;
  options.subset_ceiling = o.subset_ceiling;
  options.erm.candidate_ceiling = o.candidate_ceiling;
  options.parallelism = o.parallelism();
  const std::size_t draws = o.draws_or(20);
  Sink sink(o.out);
  auto& os = sink.stream();
  const std::string format = o.resolved_format();
  if (format == "csv") ssg::write_growth_csv_header(os);
  for (std::size_t m : o.sizes()) {
    const auto g = ssg::growth_rate_estimate(cls, m, spec, draws, ssg::Seed{o.seed}.derive("cli_growth", m), options);
    if (format == "csv") {
      ssg::write_growth_csv_row(os, g);
    } else if (format == "jsonl") {
      nlohmann::json j = ssg::to_json(cls);
      j["m"] = m;
      j["draws"] = g.draws;
      j["observed_max"] = g.observed_max;
      j["log_bound"] = g.bound.log_value;
      os << j.dump() << '\n';
    } else {
      os << ssg::class_name(cls.kind) << " m=" << m << " observed max |H_S| = " << g.observed_max << " over " << draws
         << " samples; bound " << (g.bound.exact ? std::to_string(*g.bound.exact) : "exp(" + ssg::format_human(g.bound.log_value) + ")")
         << '\n';
    }
  }
}

void run_bound(const Options& o) {
  const auto cls = o.auction_class();
  const ssg::Range reward = cls.revenue_range(o.range());
  Sink sink(o.out);
  auto& os = sink.stream();
  const std::string format = o.resolved_format();
  if (format == "csv") ssg::write_bound_csv_header(os);
  for (std::size_t m : o.sizes()) {
    auto report = ssg::main_bound(cls, m, reward);
    if (o.delta != 0.0) report = ssg::with_confidence(report, o.delta);
    if (format == "csv") {
      ssg::write_bound_csv_row(os, report);
    } else if (format == "jsonl") {
      nlohmann::json j = ssg::to_json(cls);
      j["m"] = m;
      j["log_tau_2m"] = report.log_tau_2m;
      j["bound"] = report.expected_gap;
      if (report.delta) {
        j["delta"] = *report.delta;
        j["hp_bound"] = *report.high_prob;
      }
      j["vacuous"] = report.vacuous();
      j["formula"] = ssg::bound_formula(cls);
      os << j.dump() << '\n';
    } else {
      os << ssg::class_name(cls.kind) << " m=" << m << ": bound " << ssg::format_human(report.expected_gap) << " = "
         << ssg::bound_formula(cls) << " on revenue range [" << ssg::format_human(reward.lo) << ", "
         << ssg::format_human(reward.hi) << "]";
      if (report.high_prob) {
        os << "; with probability " << ssg::format_human(1.0 - *report.delta) << " at most "
           << ssg::format_human(*report.high_prob);
      }
      if (report.vacuous()) os << " (vacuous)";
      os << '\n';
    }
  }
}

void run_rademacher(const Options& o) {
  const auto cls = o.auction_class();
  const auto sample = input_sample(o);
  ssg::SplitSampleOptions options;
  options.subset_ceiling = o.subset_ceiling;
  options.erm.candidate_ceiling = o.candidate_ceiling;
  options.parallelism = o.parallelism();
  const auto space = ssg::split_sample_space(cls, sample, ssg::SplitSampleMode::exact(), options);
  const auto est = ssg::rademacher_estimate(sample, space.hypotheses, o.draws_or(10000),
                                            ssg::Seed{o.seed}.derive("cli_rademacher"), o.parallelism());
  const double massart = ssg::massart_bound(space.size(), sample.size(), cls.revenue_range(sample.range()));
  Sink sink(o.out);
  auto& os = sink.stream();
  const std::string format = o.resolved_format();
  if (format == "text") {
    os << "rademacher " << ssg::format_human(est.estimate) << " +/- " << ssg::format_human(est.std_error) << " over "
       << est.draws << " sign draws; |H| = " << space.size() << ", massart " << ssg::format_human(massart) << '\n';
  } else if (format == "jsonl") {
    nlohmann::json j = ssg::to_json(cls);
    j["m"] = sample.size();
    j["estimate"] = est.estimate;
    j["std_error"] = est.std_error;
    j["draws"] = est.draws;
    j["hypotheses"] = space.size();
    j["massart"] = massart;
    os << j.dump() << '\n';
  } else {
    os << "class,m,hypotheses,draws,estimate,std_error,massart\n";
    os << ssg::class_name(cls.kind) << ',' << sample.size() << ',' << space.size() << ',' << est.draws << ','
       << ssg::format_exact(est.estimate) << ',' << ssg::format_exact(est.std_error) << ','
       << ssg::format_exact(massart) << '\n';
  }
}

ssg::ExperimentConfig experiment_config(const Options& o) {
  ssg::ExperimentConfig c;
  c.cls = o.auction_class();
  c.spec = o.distribution();
  c.m_grid = o.sizes();
  c.replicates = o.replicates;
  c.seed = ssg::Seed{o.seed};
  c.delta = o.delta == 0.0 ? 0.25 : o.delta;
  c.eval_draws = o.draws_or(100000);
  c.optimum_step = o.optimum_step;
  c.erm.candidate_ceiling = o.candidate_ceiling;
  c.parallelism = o.parallelism();
  return c;
}

void write_svg(const Options& o, const std::vector<ssg::ExperimentRow>& rows) {
  if (o.svg.empty()) return;
  std::ofstream svg(o.svg, std::ios::binary);
  if (!svg) throw ssg::Error("cannot open " + o.svg + " for writing");
  ssg::write_experiment_svg(svg, rows);
}

void run_experiment(const Options& o) {
  const auto config = experiment_config(o);
  const auto rows = ssg::generalization_experiment(config);
  Sink sink(o.out);
  auto& os = sink.stream();
  const std::string format = o.resolved_format();
  if (format == "csv") {
    ssg::write_experiment_csv_header(os);
    for (const auto& r : rows) ssg::write_experiment_csv_row(os, r);
  } else if (format == "jsonl") {
    for (const auto& r : rows) os << ssg::to_json(r).dump() << '\n';
  } else {
    os << "config " << config.fingerprint() << '\n';
    for (const auto& r : rows) {
      os << ssg::class_name(r.cls.kind) << " m=" << r.m << ": optimum " << ssg::format_human(r.optimum)
         << ", mean R_D(h_S) " << ssg::format_human(r.mean_revenue) << " +/- " << ssg::format_human(r.revenue_std_error)
         << ", gap " << ssg::format_human(r.gap) << ", bound " << ssg::format_human(r.bound) << ", P(gap > bound/"
         << ssg::format_human(r.delta) << ") " << ssg::format_human(r.violation_fraction) << '\n';
    }
  }
  write_svg(o, rows);
}

void run_curve(const Options& o) {
  if (o.epsilons.empty()) throw ssg::InvalidArgument("curve needs --eps");
  const auto config = experiment_config(o);
  const auto rows = ssg::generalization_experiment(config);
  const auto curve = ssg::sample_complexity_curve(config, o.epsilons, rows);
  Sink sink(o.out);
  auto& os = sink.stream();
  const std::string format = o.resolved_format();
  if (format == "csv") {
    ssg::write_curve_csv_header(os);
    for (const auto& r : curve) ssg::write_curve_csv_row(os, r);
  } else if (format == "jsonl") {
    for (const auto& r : curve) os << ssg::to_json(r).dump() << '\n';
  } else {
    for (const auto& r : curve) {
      os << "epsilon " << ssg::format_human(r.epsilon) << ": bound m " << r.bound_m << ", empirical m "
         << (r.empirical_m ? std::to_string(*r.empirical_m) : std::string("not reached on grid")) << '\n';
    }
  }
  write_svg(o, rows);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sample-based learning of revenue-maximizing auctions: ERM, split-sample growth, and bounds."};
  app.require_subcommand(1);
  app.fallthrough();
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.config_formatter(std::make_shared<JsonConfig>(&app));
  app.set_config("--config", "", "JSON file of flag values; command-line flags take precedence");

  Options o;

  auto* sample = app.add_subcommand("sample", "draw m valuation profiles and write a sample file");
  add_class_flags(*sample, o);
  add_range_flags(*sample, o);
  add_dist_flags(*sample, o);
  sample->add_option("--m", o.m, "number of profiles")->capture_default_str()->check(CLI::PositiveNumber);
  add_output_flags(*sample, o, false);

  auto* erm = app.add_subcommand("erm", "empirical revenue maximizer over a sample");
  add_class_flags(*erm, o);
  add_range_flags(*erm, o);
  add_sample_input_flags(*erm, o);
  erm->add_option("--candidate-ceiling", o.candidate_ceiling, "largest candidate set ERM will scan")->capture_default_str();
  add_output_flags(*erm, o);

  auto* split = app.add_subcommand("split-sample", "distinct ERM outputs over half-size subsets of a sample");
  add_class_flags(*split, o);
  add_range_flags(*split, o);
  add_sample_input_flags(*split, o);
  split->add_option("--mode", o.mode, "exact | monte-carlo")->capture_default_str()->check(CLI::IsMember({"exact", "monte-carlo"}));
  split->add_option("--draws", o.draws, "subsets drawn in monte-carlo mode (default 1000)");
  split->add_option("--candidate-ceiling", o.candidate_ceiling, "largest candidate set ERM will scan")->capture_default_str();
  split->add_option("--subset-ceiling", o.subset_ceiling, "largest number of subsets exact mode will enumerate")->capture_default_str();
  add_threads_flag(*split, o);
  add_output_flags(*split, o);

  auto* growth = app.add_subcommand("growth", "observed split-sample growth next to the closed-form bound");
  add_class_flags(*growth, o);
  add_range_flags(*growth, o);
  add_dist_flags(*growth, o);
  growth->add_option("--m", o.m, "sample size (profiles)")->capture_default_str()->check(CLI::PositiveNumber);
  growth->add_option("--m-grid", o.m_grid, "comma-separated sample sizes; overrides --m")->delimiter(',');
  growth->add_option("--draws", o.draws, "samples drawn per m (default 20)");
  growth->add_option("--candidate-ceiling", o.candidate_ceiling, "largest candidate set ERM will scan")->capture_default_str();
  growth->add_option("--subset-ceiling", o.subset_ceiling, "largest number of subsets enumerated per sample")->capture_default_str();
  add_threads_flag(*growth, o);
  add_output_flags(*growth, o);

  auto* bound = app.add_subcommand("bound", "expected generalization-gap bound (revenue units)");
  add_class_flags(*bound, o);
  add_range_flags(*bound, o);
  bound->add_option("--m", o.m, "sample size (profiles)")->capture_default_str()->check(CLI::PositiveNumber);
  bound->add_option("--m-grid", o.m_grid, "comma-separated sample sizes; overrides --m")->delimiter(',');
  bound->add_option("--delta", o.delta, "failure probability in (0, 1) for the high-probability bound (off by default)");
  add_output_flags(*bound, o);

  auto* rad = app.add_subcommand("rademacher", "Monte Carlo Rademacher complexity of the split-sample space");
  add_class_flags(*rad, o);
  add_range_flags(*rad, o);
  add_sample_input_flags(*rad, o);
  rad->add_option("--draws", o.draws, "sign vectors drawn (default 10000)");
  rad->add_option("--candidate-ceiling", o.candidate_ceiling, "largest candidate set ERM will scan")->capture_default_str();
  rad->add_option("--subset-ceiling", o.subset_ceiling, "largest number of subsets enumerated")->capture_default_str();
  add_threads_flag(*rad, o);
  add_output_flags(*rad, o);

  const auto add_experiment_flags = [&](CLI::App& cmd) {
    add_class_flags(cmd, o);
    add_range_flags(cmd, o);
    add_dist_flags(cmd, o);
    cmd.add_option("--m-grid", o.m_grid, "comma-separated sample sizes (default 50,100,200,400)")->delimiter(',');
    cmd.add_option("--replicates", o.replicates, "independent samples per m")->capture_default_str()->check(CLI::PositiveNumber);
    cmd.add_option("--draws", o.draws, "Monte Carlo draws for revenue without a closed form (default 100000)");
    cmd.add_option("--delta", o.delta, "failure probability in (0, 1) for the high-probability check (default 0.25)");
    cmd.add_option("--optimum-step", o.optimum_step, "grid step for the in-class optimum without a closed form (value units)")
        ->capture_default_str();
    cmd.add_option("--candidate-ceiling", o.candidate_ceiling, "largest candidate set ERM will scan")->capture_default_str();
    cmd.add_option("--svg", o.svg, "also write a gap/bound vs m chart here");
    add_threads_flag(cmd, o);
    add_output_flags(cmd, o);
  };

  auto* experiment = app.add_subcommand("experiment", "sample, learn, evaluate: measured gap against the bound");
  add_experiment_flags(*experiment);

  auto* curve = app.add_subcommand("curve", "sample complexity: bound-based and measured m for each accuracy target");
  add_experiment_flags(*curve);
  curve->add_option("--eps", o.epsilons, "comma-separated accuracy targets (revenue units)")->delimiter(',');

  for (CLI::App* sub : app.get_subcommands({})) {
    sub->footer("Also accepts --config FILE: a JSON object of the long flag names above, e.g.\n"
                "  {\"class\": \"player-reserves\", \"n\": 2, \"m-grid\": [50, 100]}\n"
                "Flags given on the command line take precedence over the file.");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ConfigError& e) {
    // CLI11 words unknown config keys in INI terms.
    std::string what = e.what();
    const std::string ini = "INI was not able to parse ";
    if (what.rfind(ini, 0) == 0) what = "unknown key '" + what.substr(ini.size()) + "' in --config file";
    std::cerr << "error: " << what << '\n';
    return e.get_exit_code();
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  if (o.m_grid.empty() && (experiment->parsed() || curve->parsed())) o.m_grid = {50, 100, 200, 400};

  try {
    if (sample->parsed()) run_sample(o);
    if (erm->parsed()) run_erm(o);
    if (split->parsed()) run_split_sample(o);
    if (growth->parsed()) run_growth(o);
    if (bound->parsed()) run_bound(o);
    if (rad->parsed()) run_rademacher(o);
    if (experiment->parsed()) run_experiment(o);
    if (curve->parsed()) run_curve(o);
  } catch (const ssg::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
