#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "skewreg/binning.hpp"
#include "skewreg/csv.hpp"
#include "skewreg/dataset.hpp"
#include "skewreg/metrics.hpp"
#include "skewreg/reweight.hpp"
#include "skewreg/synthetic.hpp"
#include "skewreg/trainer.hpp"

namespace skewreg {

/// Where the experiment data comes from: a CSV on disk or the synthetic
/// generator (exactly one must be set).
struct DataSource {
  std::optional<std::string> csv_path;
  std::optional<SynthConfig> synth;
};

/// Full description of a comparison run: one dataset, `repetitions`
/// re-splits, and one model trained per scheme on every split. Within a
/// repetition all schemes see the identical split and the identical model
/// seed, isolating the effect of the re-weighting itself.
struct ExperimentConfig {
  DataSource data;
  double train_fraction = 0.70;
  BinSpec bin_spec = BinSpec::yield_percent(1.0);
  RegionThresholds thresholds{20, 65};
  std::vector<WeightScheme> schemes{WeightScheme::Vanilla};
  MlpConfig model;
  KernelConfig kernel;
  FocalConfig focal;
  std::size_t repetitions = 10;
  std::uint64_t base_seed = 0;
};

inline void validate(const ExperimentConfig& cfg) {
  if (cfg.data.csv_path.has_value() == cfg.data.synth.has_value()) {
    throw std::invalid_argument(
        "ExperimentConfig: exactly one of data.csv / data.synth is required");
  }
  if (!(cfg.train_fraction > 0.0 && cfg.train_fraction < 1.0)) {
    throw std::invalid_argument(
        "ExperimentConfig: train_fraction must be in (0, 1)");
  }
  if (cfg.schemes.empty()) {
    throw std::invalid_argument("ExperimentConfig: scheme list is empty");
  }
  if (cfg.repetitions == 0) {
    throw std::invalid_argument("ExperimentConfig: repetitions must be >= 1");
  }
  validate(cfg.model);
  validate(cfg.kernel);
  validate(cfg.focal);
}

/// Removes duplicate schemes, keeping first occurrences.
inline std::vector<WeightScheme> dedup_schemes(
    const std::vector<WeightScheme>& schemes) {
  std::vector<WeightScheme> out;
  for (WeightScheme s : schemes) {
    if (std::find(out.begin(), out.end(), s) == out.end()) {
      out.push_back(s);
    }
  }
  return out;
}

/// Mean and standard deviation over the repetitions in which a value was
/// present (a region can be empty in some splits). n is that count.
struct MetricAgg {
  std::size_t n = 0;
  std::optional<double> mean;
  std::optional<double> stddev;
};

inline MetricAgg aggregate(const std::vector<double>& values) {
  MetricAgg agg;
  agg.n = values.size();
  if (values.empty()) {
    return agg;
  }
  double sum = 0.0;
  for (double v : values) {
    sum += v;
  }
  const double mean = sum / static_cast<double>(values.size());
  agg.mean = mean;
  if (values.size() == 1) {
    agg.stddev = 0.0;
  } else {
    double ss = 0.0;
    for (double v : values) {
      const double d = v - mean;
      ss += d * d;
    }
    agg.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return agg;
}

struct RegionAgg {
  double mean_count = 0.0;
  MetricAgg mae;
  MetricAgg rmse;
  MetricAgg gmean;
};

/// Relative change of a scheme's mean metrics versus vanilla, in percent.
/// Negative means the error went down (an improvement).
struct RelativeChange {
  std::optional<double> mae_pct;
  std::optional<double> rmse_pct;
  std::optional<double> gmean_pct;
};

struct SchemeStats {
  WeightScheme scheme = WeightScheme::Vanilla;
  RegionAgg all;
  RegionAgg many;
  RegionAgg medium;
  RegionAgg few;
  MetricAgg pearson;
  std::optional<RelativeChange> change_all;  // present iff vanilla was run
  std::optional<RelativeChange> change_few;

  const RegionAgg& region(Region r) const {
    switch (r) {
      case Region::Many:
        return many;
      case Region::Medium:
        return medium;
      case Region::Few:
        return few;
    }
    return all;
  }
};

struct ComparisonReport {
  std::size_t repetitions = 0;
  std::uint64_t base_seed = 0;
  std::vector<SchemeStats> schemes;
};

namespace detail {

struct MetricSeries {
  std::vector<double> counts;
  std::vector<double> mae, rmse, gmean;

  void add(const RegionMetrics& m) {
    counts.push_back(static_cast<double>(m.count));
    if (m.mae) {
      mae.push_back(*m.mae);
      rmse.push_back(*m.rmse);
      gmean.push_back(*m.gmean);
    }
  }

  RegionAgg aggregate_all() const {
    RegionAgg agg;
    double sum = 0.0;
    for (double c : counts) {
      sum += c;
    }
    agg.mean_count = counts.empty() ? 0.0 : sum / static_cast<double>(counts.size());
    agg.mae = aggregate(mae);
    agg.rmse = aggregate(rmse);
    agg.gmean = aggregate(gmean);
    return agg;
  }
};

inline std::optional<double> pct_change(const MetricAgg& scheme,
                                        const MetricAgg& vanilla) {
  if (!scheme.mean || !vanilla.mean || *vanilla.mean == 0.0) {
    return std::nullopt;
  }
  return (*scheme.mean - *vanilla.mean) / *vanilla.mean * 100.0;
}

inline RelativeChange relative_change(const RegionAgg& scheme,
                                      const RegionAgg& vanilla) {
  return RelativeChange{pct_change(scheme.mae, vanilla.mae),
                        pct_change(scheme.rmse, vanilla.rmse),
                        pct_change(scheme.gmean, vanilla.gmean)};
}

}  // namespace detail

inline Dataset materialize(const DataSource& source) {
  if (source.csv_path) {
    return load_csv(*source.csv_path);
  }
  return generate_synthetic(*source.synth);
}

/// Runs the full comparison: for repetition r, split with seed base_seed + r,
/// derive the region partition from training counts, train one model per
/// scheme on the identical split with the identical model seed, evaluate on
/// the test split, and aggregate mean +- std across repetitions.
inline ComparisonReport run_experiment(const ExperimentConfig& raw_cfg) {
  ExperimentConfig cfg = raw_cfg;
  cfg.schemes = dedup_schemes(cfg.schemes);
  validate(cfg);

  const Dataset dataset = materialize(cfg.data);

  const std::size_t n_schemes = cfg.schemes.size();
  std::vector<std::vector<RegionReport>> reports(n_schemes);

  for (std::size_t rep = 0; rep < cfg.repetitions; ++rep) {
    const std::uint64_t seed = cfg.base_seed + rep;
    try {
      const TrainTestSplit parts =
          split(dataset, SplitSpec{cfg.train_fraction, seed});
      const BinCounts train_counts = count_bins(parts.train, cfg.bin_spec);
      const RegionPartition partition =
          partition_regions(train_counts, cfg.thresholds);
      const std::vector<double> test_labels = parts.test.labels();

      for (std::size_t si = 0; si < n_schemes; ++si) {
        MlpConfig model_cfg = cfg.model;
        model_cfg.seed = seed;
        const TrainedModel model =
            train(parts.train, cfg.schemes[si], model_cfg, cfg.bin_spec,
                  cfg.kernel, cfg.focal);
        const std::vector<double> preds = predict(model, parts.test);
        reports[si].push_back(region_report(preds, test_labels, partition,
                                            cfg.bin_spec, train_counts));
      }
    } catch (const std::exception& e) {
      throw std::runtime_error("run_experiment: repetition " +
                               std::to_string(rep) + ": " + e.what());
    }
  }

  ComparisonReport out;
  out.repetitions = cfg.repetitions;
  out.base_seed = cfg.base_seed;

  std::optional<std::size_t> vanilla_index;
  for (std::size_t si = 0; si < n_schemes; ++si) {
    if (cfg.schemes[si] == WeightScheme::Vanilla) {
      vanilla_index = si;
    }
  }

  for (std::size_t si = 0; si < n_schemes; ++si) {
    detail::MetricSeries all, many, medium, few;
    std::vector<double> pearson_values;
    for (const RegionReport& r : reports[si]) {
      all.add(r.all);
      many.add(r.many);
      medium.add(r.medium);
      few.add(r.few);
      if (r.pearson_r) {
        pearson_values.push_back(*r.pearson_r);
      }
    }
    SchemeStats stats;
    stats.scheme = cfg.schemes[si];
    stats.all = all.aggregate_all();
    stats.many = many.aggregate_all();
    stats.medium = medium.aggregate_all();
    stats.few = few.aggregate_all();
    stats.pearson = aggregate(pearson_values);
    out.schemes.push_back(std::move(stats));
  }

  if (vanilla_index) {
    const RegionAgg vanilla_all = out.schemes[*vanilla_index].all;
    const RegionAgg vanilla_few = out.schemes[*vanilla_index].few;
    for (SchemeStats& stats : out.schemes) {
      if (stats.scheme == WeightScheme::Vanilla) {
        continue;  // changes are only reported against vanilla, not for it
      }
      stats.change_all = detail::relative_change(stats.all, vanilla_all);
      stats.change_few = detail::relative_change(stats.few, vanilla_few);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON config parsing (the `bench` subcommand input format).

inline ExperimentConfig experiment_from_json(const nlohmann::json& j) {
  ExperimentConfig cfg;

  const auto& jd = j.at("data");
  if (jd.contains("csv")) {
    cfg.data.csv_path = jd.at("csv").get<std::string>();
  }
  if (jd.contains("synth")) {
    const auto& js = jd.at("synth");
    SynthConfig synth;
    synth.n = js.at("n").get<std::size_t>();
    synth.dim = js.at("dim").get<std::size_t>();
    synth.skew = js.value("skew", synth.skew);
    synth.noise_sd = js.value("noise_sd", synth.noise_sd);
    synth.seed = js.value("seed", synth.seed);
    cfg.data.synth = synth;
  }

  cfg.train_fraction = j.value("train_fraction", cfg.train_fraction);
  if (j.contains("bins")) {
    cfg.bin_spec =
        BinSpec::yield_percent(j.at("bins").value("width", 1.0));
  }
  if (j.contains("thresholds")) {
    const auto& jt = j.at("thresholds");
    if (jt.contains("preset")) {
      cfg.thresholds = region_preset(jt.at("preset").get<std::string>());
    } else {
      cfg.thresholds = RegionThresholds(jt.at("lower").get<std::int64_t>(),
                                        jt.at("upper").get<std::int64_t>());
    }
  }
  if (j.contains("schemes")) {
    cfg.schemes.clear();
    for (const auto& js : j.at("schemes")) {
      cfg.schemes.push_back(parse_scheme(js.get<std::string>()));
    }
    cfg.schemes = dedup_schemes(cfg.schemes);
  }
  if (j.contains("model")) {
    const auto& jm = j.at("model");
    cfg.model.hidden_sizes =
        jm.value("hidden_sizes", cfg.model.hidden_sizes);
    cfg.model.epochs = jm.value("epochs", cfg.model.epochs);
    cfg.model.batch_size = jm.value("batch_size", cfg.model.batch_size);
    cfg.model.learning_rate =
        jm.value("learning_rate", cfg.model.learning_rate);
    cfg.model.output_clamp = jm.value("output_clamp", cfg.model.output_clamp);
  }
  if (j.contains("kernel")) {
    cfg.kernel.ell = j.at("kernel").value("ell", cfg.kernel.ell);
    cfg.kernel.sigma = j.at("kernel").value("sigma", cfg.kernel.sigma);
  }
  if (j.contains("focal")) {
    cfg.focal.alpha = j.at("focal").value("alpha", cfg.focal.alpha);
    cfg.focal.gamma = j.at("focal").value("gamma", cfg.focal.gamma);
  }
  cfg.repetitions = j.value("repetitions", cfg.repetitions);
  cfg.base_seed = j.value("base_seed", cfg.base_seed);

  validate(cfg);
  return cfg;
}

inline nlohmann::json to_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  if (cfg.data.csv_path) {
    j["data"]["csv"] = *cfg.data.csv_path;
  }
  if (cfg.data.synth) {
    j["data"]["synth"] = {{"n", cfg.data.synth->n},
                          {"dim", cfg.data.synth->dim},
                          {"skew", cfg.data.synth->skew},
                          {"noise_sd", cfg.data.synth->noise_sd},
                          {"seed", cfg.data.synth->seed}};
  }
  j["train_fraction"] = cfg.train_fraction;
  j["bins"] = {{"width", cfg.bin_spec.width()}};
  j["thresholds"] = {{"lower", cfg.thresholds.lower},
                     {"upper", cfg.thresholds.upper}};
  nlohmann::json schemes = nlohmann::json::array();
  for (WeightScheme s : cfg.schemes) {
    schemes.push_back(to_string(s));
  }
  j["schemes"] = schemes;
  j["model"] = {{"hidden_sizes", cfg.model.hidden_sizes},
                {"epochs", cfg.model.epochs},
                {"batch_size", cfg.model.batch_size},
                {"learning_rate", cfg.model.learning_rate},
                {"output_clamp", cfg.model.output_clamp}};
  j["kernel"] = {{"ell", cfg.kernel.ell}, {"sigma", cfg.kernel.sigma}};
  j["focal"] = {{"alpha", cfg.focal.alpha}, {"gamma", cfg.focal.gamma}};
  j["repetitions"] = cfg.repetitions;
  j["base_seed"] = cfg.base_seed;
  return j;
}

}  // namespace skewreg
