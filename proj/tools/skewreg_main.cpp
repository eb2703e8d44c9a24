// skewreg command-line tool: synthesize skewed datasets, inspect label-space
// bins and LDS weights, train re-weighted regressors, and run full
// vanilla-vs-reweighted comparisons.

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "skewreg/skewreg.hpp"

namespace {

using namespace skewreg;

struct ThresholdOptions {
  std::string preset;
  std::optional<std::int64_t> lower;
  std::optional<std::int64_t> upper;

  void attach(CLI::App* cmd) {
    cmd->add_option("--preset", preset,
                    "named region thresholds: bh (25,50), sm (20,65), az (3,5)");
    auto* lo = cmd->add_option("--lower", lower,
                               "few/medium count threshold (overrides preset)");
    auto* hi = cmd->add_option("--upper", upper,
                               "medium/many count threshold (overrides preset)");
    lo->needs(hi);
    hi->needs(lo);
  }

  RegionThresholds resolve() const {
    if (lower && upper) {
      return RegionThresholds(*lower, *upper);
    }
    return region_preset(preset.empty() ? "bh" : preset);
  }
};

std::string scheme_help() {
  return "weight scheme: vanilla, focal, lds, focal+lds";
}

void print_payload(const nlohmann::json& payload, OutputFormat format,
                   const std::string& table) {
  switch (format) {
    case OutputFormat::Json:
      std::cout << payload.dump(2) << '\n';
      break;
    case OutputFormat::Csv:
    case OutputFormat::Table:
      std::cout << table;
      break;
  }
}

int run_synth(const SynthConfig& cfg, const std::string& out_path,
              OutputFormat format) {
  const Dataset data = generate_synthetic(cfg);
  save_csv(data, out_path);
  nlohmann::json payload = {{"path", out_path},
                            {"n", data.size()},
                            {"dim", data.dim()},
                            {"skew", cfg.skew},
                            {"noise_sd", cfg.noise_sd},
                            {"seed", cfg.seed}};
  print_payload(payload, format,
                "wrote " + std::to_string(data.size()) + " samples (dim " +
                    std::to_string(data.dim()) + ") to " + out_path + "\n");
  return 0;
}

int run_bins(const std::string& data_path, double width,
             const ThresholdOptions& th_opts, OutputFormat format) {
  const Dataset data = load_csv(data_path);
  if (data.empty()) {
    throw std::runtime_error("bins: '" + data_path + "' holds no samples");
  }
  const BinSpec spec = BinSpec::yield_percent(width);
  const RegionThresholds th = th_opts.resolve();
  const BinCounts counts = count_bins(data, spec);
  const RegionPartition partition = partition_regions(counts, th);
  const double ratio = imbalance_ratio(counts);
  const bool ratio_finite = std::isfinite(ratio);

  std::size_t region_bins[3] = {0, 0, 0};
  std::int64_t region_samples[3] = {0, 0, 0};
  for (std::size_t k = 0; k < spec.bin_count(); ++k) {
    const auto r = static_cast<std::size_t>(partition.region_of_bin[k]);
    ++region_bins[r];
    region_samples[r] += counts.counts[k];
  }

  nlohmann::json bins = nlohmann::json::array();
  std::string table;
  table += "bin        range          count  region\n";
  char line[128];
  for (std::size_t k = 0; k < spec.bin_count(); ++k) {
    if (counts.counts[k] == 0 && format != OutputFormat::Json) {
      continue;  // keep the table focused on occupied bins
    }
    const double lo = spec.lo() + static_cast<double>(k) * spec.width();
    const double hi = lo + spec.width();
    bins.push_back({{"bin", k},
                    {"lo", lo},
                    {"hi", hi},
                    {"count", counts.counts[k]},
                    {"region", to_string(partition.region_of_bin[k])}});
    std::snprintf(line, sizeof(line), "%-6zu [%6.2f,%6.2f) %8lld  %s\n", k, lo,
                  hi, static_cast<long long>(counts.counts[k]),
                  to_string(partition.region_of_bin[k]));
    table += line;
  }
  std::snprintf(line, sizeof(line),
                "N=%lld bins=%zu imbalance_ratio=%s thresholds=(%lld,%lld)\n",
                static_cast<long long>(counts.total()), spec.bin_count(),
                ratio_finite ? std::to_string(ratio).c_str() : "inf",
                static_cast<long long>(th.lower),
                static_cast<long long>(th.upper));
  table += line;
  std::snprintf(line, sizeof(line),
                "many: %zu bins / %lld samples, medium: %zu / %lld, few: %zu / %lld\n",
                region_bins[0], static_cast<long long>(region_samples[0]),
                region_bins[1], static_cast<long long>(region_samples[1]),
                region_bins[2], static_cast<long long>(region_samples[2]));
  table += line;

  nlohmann::json payload = {
      {"n", counts.total()},
      {"bin_count", spec.bin_count()},
      {"imbalance_ratio",
       ratio_finite ? nlohmann::json(ratio) : nlohmann::json("inf")},
      {"thresholds", {{"lower", th.lower}, {"upper", th.upper}}},
      {"bins", bins}};

  if (format == OutputFormat::Csv) {
    std::string csv = "bin,lo,hi,count,region\n";
    for (std::size_t k = 0; k < spec.bin_count(); ++k) {
      const double lo = spec.lo() + static_cast<double>(k) * spec.width();
      csv += std::to_string(k) + ',' + std::to_string(lo) + ',' +
             std::to_string(lo + spec.width()) + ',' +
             std::to_string(counts.counts[k]) + ',' +
             to_string(partition.region_of_bin[k]) + '\n';
    }
    std::cout << csv;
    return 0;
  }
  print_payload(payload, format, table);
  return 0;
}

int run_weights(const std::string& data_path, double width,
                const KernelConfig& kernel, OutputFormat format) {
  const Dataset data = load_csv(data_path);
  if (data.empty()) {
    throw std::runtime_error("weights: '" + data_path + "' holds no samples");
  }
  const BinSpec spec = BinSpec::yield_percent(width);
  const BinCounts counts = count_bins(data, spec);
  const std::vector<double> smoothed = smoothed_counts(counts, kernel);
  const WeightVector weights = lds_weights(data, spec, kernel);

  // Per-bin weight (constant within a bin): recover from any member sample.
  std::vector<std::optional<double>> bin_weight(spec.bin_count());
  for (std::size_t i = 0; i < data.size(); ++i) {
    bin_weight[bin_index(data[i].label, spec)] = weights.values[i];
  }

  double min_w = weights.values[0];
  double max_w = weights.values[0];
  for (double w : weights.values) {
    min_w = std::min(min_w, w);
    max_w = std::max(max_w, w);
  }

  nlohmann::json bins = nlohmann::json::array();
  std::string table = "bin    count  smoothed     weight\n";
  std::string csv = "bin,count,smoothed,weight\n";
  char line[128];
  for (std::size_t k = 0; k < spec.bin_count(); ++k) {
    if (!bin_weight[k]) {
      continue;
    }
    bins.push_back({{"bin", k},
                    {"count", counts.counts[k]},
                    {"smoothed", smoothed[k]},
                    {"weight", *bin_weight[k]}});
    std::snprintf(line, sizeof(line), "%-4zu %7lld  %8.3f  %9.5f\n", k,
                  static_cast<long long>(counts.counts[k]), smoothed[k],
                  *bin_weight[k]);
    table += line;
    csv += std::to_string(k) + ',' + std::to_string(counts.counts[k]) + ',' +
           std::to_string(smoothed[k]) + ',' + std::to_string(*bin_weight[k]) +
           '\n';
  }
  std::snprintf(line, sizeof(line),
                "samples=%zu mean_weight=%.9f min=%.5f max=%.5f (ell=%d sigma=%g)\n",
                weights.size(), weights.mean(), min_w, max_w, kernel.ell,
                kernel.sigma);
  table += line;

  nlohmann::json payload = {{"n", weights.size()},
                            {"mean_weight", weights.mean()},
                            {"min_weight", min_w},
                            {"max_weight", max_w},
                            {"kernel", {{"ell", kernel.ell}, {"sigma", kernel.sigma}}},
                            {"bins", bins}};
  if (format == OutputFormat::Csv) {
    std::cout << csv;
    return 0;
  }
  print_payload(payload, format, table);
  return 0;
}

int run_train(const std::string& data_path, const std::string& out_path,
              const std::string& scheme_name, double width,
              const ThresholdOptions& th_opts, const MlpConfig& model_cfg,
              const KernelConfig& kernel, const FocalConfig& focal,
              OutputFormat format) {
  const Dataset data = load_csv(data_path);
  if (data.empty()) {
    throw std::runtime_error("train: '" + data_path + "' holds no samples");
  }
  const WeightScheme scheme = parse_scheme(scheme_name);
  const BinSpec spec = BinSpec::yield_percent(width);
  const TrainedModel model =
      train(data, scheme, model_cfg, spec, kernel, focal);
  const ModelArtifact artifact{model, th_opts.resolve()};
  save_model(artifact, out_path);

  nlohmann::json payload = {{"path", out_path},
                            {"scheme", to_string(scheme)},
                            {"train_samples", data.size()},
                            {"epochs", model.config.epochs},
                            {"final_train_loss", model.training_log.back()}};
  char line[160];
  std::snprintf(line, sizeof(line),
                "trained %s on %zu samples, final weighted loss %.5f -> %s\n",
                to_string(scheme), data.size(), model.training_log.back(),
                out_path.c_str());
  print_payload(payload, format, line);
  return 0;
}

int run_eval(const std::string& model_path, const std::string& data_path,
             OutputFormat format) {
  const ModelArtifact artifact = load_model(model_path);
  const Dataset data = load_csv(data_path);
  if (data.empty()) {
    throw std::runtime_error("eval: '" + data_path + "' holds no samples");
  }
  if (data.dim() != artifact.model.params.input_dim()) {
    throw std::runtime_error(
        "eval: data dim " + std::to_string(data.dim()) +
        " does not match model input dim " +
        std::to_string(artifact.model.params.input_dim()));
  }
  const RegionPartition partition =
      partition_regions(artifact.model.train_counts, artifact.thresholds);
  const std::vector<double> preds = predict(artifact.model, data);
  const std::vector<double> labels = data.labels();
  const RegionReport report =
      region_report(preds, labels, partition, artifact.model.bin_spec,
                    artifact.model.train_counts);
  std::cout << format_report(report, format);
  return 0;
}

int run_bench(const std::string& config_path, const std::string& out_path,
              OutputFormat format, std::optional<std::uint64_t> seed) {
  std::ifstream in(config_path);
  if (!in) {
    throw std::runtime_error("bench: cannot open config '" + config_path + "'");
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("bench: config is not valid JSON: " +
                             std::string(e.what()));
  }
  ExperimentConfig cfg = experiment_from_json(j);
  if (seed) {
    cfg.base_seed = *seed;
  }
  const ComparisonReport report = run_experiment(cfg);
  if (out_path.empty()) {
    emit_report(report, format, std::cout);
  } else {
    emit_report(report, format, out_path);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"skewreg: imbalanced-regression toolkit for skewed-label "
               "(yield) prediction"};
  app.require_subcommand(1);

  std::string format_name = "table";
  app.add_option("--format", format_name, "output format: table, json, csv")
      ->capture_default_str();

  // synth ------------------------------------------------------------------
  auto* synth = app.add_subcommand("synth", "generate a synthetic skewed CSV");
  SynthConfig synth_cfg;
  std::string synth_out;
  synth->add_option("-o,--out", synth_out, "output CSV path")->required();
  synth->add_option("--n", synth_cfg.n, "sample count")->capture_default_str();
  synth->add_option("--dim", synth_cfg.dim, "feature dimension")
      ->capture_default_str();
  synth->add_option("--skew", synth_cfg.skew,
                    "label density decay (0 = uniform)")
      ->capture_default_str();
  synth->add_option("--noise-sd", synth_cfg.noise_sd, "feature noise sd")
      ->capture_default_str();
  synth->add_option("--seed", synth_cfg.seed, "generator seed")
      ->capture_default_str();

  // bins -------------------------------------------------------------------
  auto* bins = app.add_subcommand(
      "bins", "bin counts, regions and imbalance ratio of a CSV");
  std::string bins_data;
  double bins_width = 1.0;
  ThresholdOptions bins_th;
  std::uint64_t unused_seed = 0;
  bins->add_option("-d,--data", bins_data, "input CSV")->required();
  bins->add_option("--width", bins_width, "bin width in yield points")
      ->capture_default_str();
  bins_th.attach(bins);
  bins->add_option("--seed", unused_seed, "unused; accepted for uniformity");

  // weights ----------------------------------------------------------------
  auto* weights =
      app.add_subcommand("weights", "LDS weight summary for a CSV");
  std::string weights_data;
  double weights_width = 1.0;
  KernelConfig weights_kernel;
  weights->add_option("-d,--data", weights_data, "input CSV")->required();
  weights->add_option("--width", weights_width, "bin width in yield points")
      ->capture_default_str();
  weights->add_option("--ell", weights_kernel.ell, "kernel window (odd, bins)")
      ->capture_default_str();
  weights->add_option("--sigma", weights_kernel.sigma, "kernel sd (bins)")
      ->capture_default_str();
  weights->add_option("--seed", unused_seed, "unused; accepted for uniformity");

  // train ------------------------------------------------------------------
  auto* train_cmd =
      app.add_subcommand("train", "train one model and save the artifact");
  std::string train_data, train_out, train_scheme = "vanilla";
  double train_width = 1.0;
  ThresholdOptions train_th;
  MlpConfig model_cfg;
  KernelConfig train_kernel;
  FocalConfig train_focal;
  train_cmd->add_option("-d,--data", train_data, "training CSV")->required();
  train_cmd->add_option("-o,--out", train_out, "model output path (JSON)")
      ->required();
  train_cmd->add_option("--scheme", train_scheme, scheme_help())
      ->capture_default_str();
  train_cmd->add_option("--width", train_width, "bin width in yield points")
      ->capture_default_str();
  train_th.attach(train_cmd);
  train_cmd->add_option("--hidden", model_cfg.hidden_sizes,
                        "hidden layer sizes")
      ->capture_default_str();
  train_cmd->add_option("--epochs", model_cfg.epochs, "training epochs")
      ->capture_default_str();
  train_cmd->add_option("--batch", model_cfg.batch_size, "mini-batch size")
      ->capture_default_str();
  train_cmd->add_option("--lr", model_cfg.learning_rate, "learning rate")
      ->capture_default_str();
  train_cmd->add_option("--seed", model_cfg.seed, "init/shuffle seed")
      ->capture_default_str();
  train_cmd
      ->add_flag("--clamp,!--no-clamp", model_cfg.output_clamp,
                 "clamp predictions to [0,100] at inference")
      ->capture_default_str();
  train_cmd->add_option("--ell", train_kernel.ell, "LDS kernel window")
      ->capture_default_str();
  train_cmd->add_option("--sigma", train_kernel.sigma, "LDS kernel sd")
      ->capture_default_str();
  train_cmd->add_option("--alpha", train_focal.alpha, "Focal alpha")
      ->capture_default_str();
  train_cmd->add_option("--gamma", train_focal.gamma, "Focal gamma")
      ->capture_default_str();

  // eval -------------------------------------------------------------------
  auto* eval_cmd = app.add_subcommand(
      "eval", "evaluate a saved model on a CSV (region-stratified)");
  std::string eval_model, eval_data;
  eval_cmd->add_option("-m,--model", eval_model, "model artifact path")
      ->required();
  eval_cmd->add_option("-d,--data", eval_data, "evaluation CSV")->required();
  eval_cmd->add_option("--seed", unused_seed, "unused; accepted for uniformity");

  // bench ------------------------------------------------------------------
  auto* bench = app.add_subcommand(
      "bench", "run a full scheme comparison from a JSON config");
  std::string bench_config, bench_out;
  std::optional<std::uint64_t> bench_seed;
  bench->add_option("-c,--config", bench_config, "experiment config (JSON)")
      ->required();
  bench->add_option("-o,--out", bench_out,
                    "write the report here instead of stdout");
  bench->add_option("--seed", bench_seed, "override the config base seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      return app.exit(e);  // --help and friends
    }
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    const OutputFormat format = parse_format(format_name);
    if (synth->parsed()) {
      return run_synth(synth_cfg, synth_out, format);
    }
    if (bins->parsed()) {
      return run_bins(bins_data, bins_width, bins_th, format);
    }
    if (weights->parsed()) {
      return run_weights(weights_data, weights_width, weights_kernel, format);
    }
    if (train_cmd->parsed()) {
      return run_train(train_data, train_out, train_scheme, train_width,
                       train_th, model_cfg, train_kernel, train_focal, format);
    }
    if (eval_cmd->parsed()) {
      return run_eval(eval_model, eval_data, format);
    }
    if (bench->parsed()) {
      return run_bench(bench_config, bench_out, format, bench_seed);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
