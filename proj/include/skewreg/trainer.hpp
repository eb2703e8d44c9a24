#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "skewreg/binning.hpp"
#include "skewreg/dataset.hpp"
#include "skewreg/mlp.hpp"
#include "skewreg/reweight.hpp"
#include "skewreg/rng.hpp"

namespace skewreg {

/// A fitted regressor plus everything evaluation needs: the feature
/// standardization fitted on the training split and the training-side bin
/// counts (region membership is always derived from training counts).
struct TrainedModel {
  MlpConfig config;
  WeightScheme scheme = WeightScheme::Vanilla;
  Standardizer standardizer;
  MlpParams params;
  std::vector<double> training_log;  // mean weighted loss, one entry per epoch
  BinSpec bin_spec;
  BinCounts train_counts;
};

/// Called after each epoch with the current parameters; used by the
/// trajectory-equivalence tests.
using EpochObserver =
    std::function<void(std::size_t epoch, const MlpParams& params,
                       double epoch_loss)>;

/// Minimizes the weighted L1 objective by mini-batch descent with Adam
/// steps. LDS weights are computed once from training labels before epoch 1;
/// Focal weights are recomputed per batch from the current residuals and are
/// not differentiated through. Bit-reproducible for fixed inputs and seed.
inline TrainedModel train(const Dataset& train_set, WeightScheme scheme,
                          const MlpConfig& cfg, const BinSpec& bin_spec,
                          const KernelConfig& kernel = {},
                          const FocalConfig& focal = {},
                          const EpochObserver& on_epoch = {}) {
  validate(cfg);
  if (uses_focal(scheme)) {
    validate(focal);
  }
  if (train_set.empty()) {
    throw std::invalid_argument("train: empty training set");
  }

  const std::size_t n = train_set.size();
  const BinCounts counts = count_bins(train_set, bin_spec);

  const WeightVector static_weights = uses_lds(scheme)
                                          ? lds_weights(train_set, bin_spec, kernel)
                                          : WeightVector::uniform(n);

  const Standardizer standardizer = Standardizer::fit(train_set);
  std::vector<std::vector<double>> rows;
  std::vector<double> labels;
  rows.reserve(n);
  labels.reserve(n);
  for (const Sample& s : train_set.samples()) {
    rows.push_back(standardizer.apply(s.features));
    labels.push_back(s.label);
  }

  Rng rng(cfg.seed);
  MlpParams params = init_params(train_set.dim(), cfg.hidden_sizes, rng);
  MlpParams grad = params.zero_like();
  AdamState adam(params);
  Backprop bp;

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) {
    order[i] = i;
  }

  std::vector<double> training_log;
  training_log.reserve(cfg.epochs);
  std::vector<double> batch_losses;
  std::vector<double> coef;
  WeightVector batch_static;
  const bool focal_active = uses_focal(scheme);

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(order);
    double epoch_weighted_sum = 0.0;
    for (std::size_t start = 0; start < n; start += cfg.batch_size) {
      const std::size_t stop = std::min(start + cfg.batch_size, n);
      const std::span<const std::size_t> idx(order.data() + start,
                                             stop - start);
      const std::size_t nb = idx.size();

      const auto preds = bp.forward(params, rows, idx);

      batch_losses.resize(nb);
      batch_static.values.resize(nb);
      for (std::size_t s = 0; s < nb; ++s) {
        batch_losses[s] = std::abs(preds[s] - labels[idx[s]]);
        if (!std::isfinite(batch_losses[s])) {
          throw std::runtime_error("train: loss diverged at epoch " +
                                   std::to_string(epoch + 1) + " (scheme " +
                                   to_string(scheme) + ")");
        }
        batch_static.values[s] = static_weights.values[idx[s]];
      }
      const WeightVector batch_weights =
          focal_active
              ? combine_weights(batch_static, focal_weights(batch_losses, focal))
              : batch_static;

      coef.resize(nb);
      const auto nb_d = static_cast<double>(nb);
      for (std::size_t s = 0; s < nb; ++s) {
        const double r = preds[s] - labels[idx[s]];
        epoch_weighted_sum += batch_weights.values[s] * std::abs(r);
        const double sign = (r > 0.0) ? 1.0 : (r < 0.0 ? -1.0 : 0.0);
        coef[s] = batch_weights.values[s] * sign / nb_d;
      }

      grad.set_zero();
      bp.backward(params, coef, grad);
      adam.step(params, grad, cfg.learning_rate);
    }

    const double epoch_loss = epoch_weighted_sum / static_cast<double>(n);
    if (!std::isfinite(epoch_loss) || !params.all_finite()) {
      throw std::runtime_error("train: loss diverged at epoch " +
                               std::to_string(epoch + 1) + " (scheme " +
                               to_string(scheme) + ")");
    }
    training_log.push_back(epoch_loss);
    if (on_epoch) {
      on_epoch(epoch, params, epoch_loss);
    }
  }

  return TrainedModel{cfg,    scheme,       standardizer, std::move(params),
                      std::move(training_log), bin_spec, counts};
}

inline double predict(const TrainedModel& model,
                      std::span<const double> features) {
  if (features.size() != model.params.input_dim()) {
    throw std::invalid_argument(
        "predict: feature length " + std::to_string(features.size()) +
        " != model input dim " + std::to_string(model.params.input_dim()));
  }
  const std::vector<double> z = model.standardizer.apply(features);
  double y = forward(model.params, z);
  if (model.config.output_clamp) {
    y = std::min(std::max(y, kLabelMin), kLabelMax);
  }
  return y;
}

inline std::vector<double> predict(const TrainedModel& model,
                                   const Dataset& data) {
  std::vector<double> out;
  out.reserve(data.size());
  for (const Sample& s : data.samples()) {
    out.push_back(predict(model, s.features));
  }
  return out;
}

}  // namespace skewreg
