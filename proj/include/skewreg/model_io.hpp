#pragma once

#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "skewreg/binning.hpp"
#include "skewreg/trainer.hpp"

namespace skewreg {

/// A trained model together with the region thresholds chosen at training
/// time, which evaluation needs to rebuild the many/medium/few partition.
struct ModelArtifact {
  TrainedModel model;
  RegionThresholds thresholds;
};

inline constexpr int kModelFormatVersion = 1;

inline nlohmann::json to_json(const ModelArtifact& artifact) {
  const TrainedModel& m = artifact.model;
  nlohmann::json j;
  j["format_version"] = kModelFormatVersion;
  j["scheme"] = to_string(m.scheme);
  j["config"] = {{"hidden_sizes", m.config.hidden_sizes},
                 {"epochs", m.config.epochs},
                 {"batch_size", m.config.batch_size},
                 {"learning_rate", m.config.learning_rate},
                 {"seed", m.config.seed},
                 {"output_clamp", m.config.output_clamp}};
  j["standardizer"] = {{"mean", m.standardizer.mean},
                       {"inv_sd", m.standardizer.inv_sd}};
  nlohmann::json layers = nlohmann::json::array();
  for (const Layer& l : m.params.layers) {
    layers.push_back({{"in", l.in},
                      {"out", l.out},
                      {"weights", l.weights},
                      {"bias", l.bias}});
  }
  j["layers"] = layers;
  j["training_log"] = m.training_log;
  j["bin_spec"] = {{"lo", m.bin_spec.lo()},
                   {"hi", m.bin_spec.hi()},
                   {"width", m.bin_spec.width()}};
  j["train_counts"] = m.train_counts.counts;
  j["thresholds"] = {{"lower", artifact.thresholds.lower},
                     {"upper", artifact.thresholds.upper}};
  return j;
}

inline ModelArtifact model_from_json(const nlohmann::json& j) {
  if (!j.contains("format_version") ||
      j.at("format_version").get<int>() != kModelFormatVersion) {
    throw std::runtime_error("model file: unsupported format version");
  }

  MlpConfig cfg;
  const auto& jc = j.at("config");
  cfg.hidden_sizes = jc.at("hidden_sizes").get<std::vector<std::size_t>>();
  cfg.epochs = jc.at("epochs").get<std::size_t>();
  cfg.batch_size = jc.at("batch_size").get<std::size_t>();
  cfg.learning_rate = jc.at("learning_rate").get<double>();
  cfg.seed = jc.at("seed").get<std::uint64_t>();
  cfg.output_clamp = jc.at("output_clamp").get<bool>();

  Standardizer standardizer;
  standardizer.mean = j.at("standardizer").at("mean").get<std::vector<double>>();
  standardizer.inv_sd =
      j.at("standardizer").at("inv_sd").get<std::vector<double>>();

  MlpParams params;
  for (const auto& jl : j.at("layers")) {
    Layer l;
    l.in = jl.at("in").get<std::size_t>();
    l.out = jl.at("out").get<std::size_t>();
    l.weights = jl.at("weights").get<std::vector<double>>();
    l.bias = jl.at("bias").get<std::vector<double>>();
    if (l.weights.size() != l.in * l.out || l.bias.size() != l.out) {
      throw std::runtime_error("model file: layer dimension mismatch");
    }
    params.layers.push_back(std::move(l));
  }
  if (params.layers.empty()) {
    throw std::runtime_error("model file: no layers");
  }
  for (std::size_t l = 0; l + 1 < params.layers.size(); ++l) {
    if (params.layers[l].out != params.layers[l + 1].in) {
      throw std::runtime_error("model file: layer dimension mismatch between "
                               "layers " +
                               std::to_string(l) + " and " +
                               std::to_string(l + 1));
    }
  }
  if (params.layers.back().out != 1) {
    throw std::runtime_error("model file: output layer must have width 1");
  }
  if (standardizer.mean.size() != params.input_dim() ||
      standardizer.inv_sd.size() != params.input_dim()) {
    throw std::runtime_error(
        "model file: standardizer dimension does not match input layer");
  }

  const auto& jb = j.at("bin_spec");
  BinSpec bin_spec(jb.at("lo").get<double>(), jb.at("hi").get<double>(),
                   jb.at("width").get<double>());

  BinCounts counts;
  counts.counts = j.at("train_counts").get<std::vector<std::int64_t>>();
  if (counts.counts.size() != bin_spec.bin_count()) {
    throw std::runtime_error(
        "model file: train_counts length does not match bin spec");
  }

  RegionThresholds thresholds(j.at("thresholds").at("lower").get<std::int64_t>(),
                              j.at("thresholds").at("upper").get<std::int64_t>());

  TrainedModel model{std::move(cfg),
                     parse_scheme(j.at("scheme").get<std::string>()),
                     std::move(standardizer),
                     std::move(params),
                     j.at("training_log").get<std::vector<double>>(),
                     bin_spec,
                     std::move(counts)};
  return ModelArtifact{std::move(model), thresholds};
}

inline void save_model(const ModelArtifact& artifact, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("save_model: cannot open '" + path +
                             "' for writing");
  }
  out << to_json(artifact).dump(2) << '\n';
  if (!out) {
    throw std::runtime_error("save_model: write to '" + path + "' failed");
  }
}

inline ModelArtifact load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("load_model: cannot open '" + path + "'");
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("load_model: '" + path +
                             "' is not valid JSON: " + e.what());
  }
  try {
    return model_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("load_model: '" + path +
                             "' has invalid structure: " + e.what());
  }
}

}  // namespace skewreg
