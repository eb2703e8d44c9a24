#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "skewreg/rng.hpp"

namespace skewreg {

inline constexpr double kLabelMin = 0.0;
inline constexpr double kLabelMax = 100.0;

/// One observation: a feature vector plus a yield label in [0, 100].
struct Sample {
  std::vector<double> features;
  double label = 0.0;
};

/// Ordered, immutable collection of samples that all share one feature
/// dimension. Construction validates every invariant, so a Dataset value can
/// be trusted downstream without re-checking.
class Dataset {
 public:
  Dataset() = default;

  Dataset(std::vector<Sample> samples, std::size_t dim) : dim_(dim) {
    if (dim_ == 0) {
      throw std::invalid_argument("Dataset: dim must be positive");
    }
    for (std::size_t i = 0; i < samples.size(); ++i) {
      validate_sample(samples[i], dim_, i);
    }
    samples_ = std::move(samples);
  }

  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }
  std::size_t dim() const { return dim_; }

  const Sample& operator[](std::size_t i) const { return samples_[i]; }
  const std::vector<Sample>& samples() const { return samples_; }

  std::vector<double> labels() const {
    std::vector<double> out;
    out.reserve(samples_.size());
    for (const Sample& s : samples_) {
      out.push_back(s.label);
    }
    return out;
  }

 private:
  static void validate_sample(const Sample& s, std::size_t dim,
                              std::size_t index) {
    if (s.features.size() != dim) {
      throw std::invalid_argument(
          "Dataset: sample " + std::to_string(index) + " has " +
          std::to_string(s.features.size()) + " features, expected " +
          std::to_string(dim));
    }
    if (!std::isfinite(s.label) || s.label < kLabelMin || s.label > kLabelMax) {
      throw std::invalid_argument("Dataset: sample " + std::to_string(index) +
                                  " label " + std::to_string(s.label) +
                                  " outside [0, 100]");
    }
    for (double f : s.features) {
      if (!std::isfinite(f)) {
        throw std::invalid_argument("Dataset: sample " +
                                    std::to_string(index) +
                                    " contains a non-finite feature");
      }
    }
  }

  std::vector<Sample> samples_;
  std::size_t dim_ = 1;
};

/// Train/test split policy: seeded uniform shuffle, then a prefix/suffix cut.
struct SplitSpec {
  double train_fraction = 0.70;
  std::uint64_t seed = 0;
};

struct TrainTestSplit {
  Dataset train;
  Dataset test;
};

/// Splits `dataset` into disjoint train/test parts whose multiset union is
/// the input. |train| = round(train_fraction * N). Deterministic in the seed.
inline TrainTestSplit split(const Dataset& dataset, const SplitSpec& spec) {
  if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0)) {
    throw std::invalid_argument("split: train_fraction must be in (0, 1)");
  }
  const std::size_t n = dataset.size();
  if (n < 2) {
    throw std::invalid_argument("split: dataset needs at least 2 samples");
  }
  const auto n_train = static_cast<std::size_t>(
      std::llround(spec.train_fraction * static_cast<double>(n)));
  if (n_train == 0 || n_train >= n) {
    throw std::invalid_argument(
        "split: fraction " + std::to_string(spec.train_fraction) + " of " +
        std::to_string(n) + " samples leaves one side empty");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(spec.seed);
  rng.shuffle(order);

  std::vector<Sample> train_samples;
  std::vector<Sample> test_samples;
  train_samples.reserve(n_train);
  test_samples.reserve(n - n_train);
  for (std::size_t i = 0; i < n; ++i) {
    if (i < n_train) {
      train_samples.push_back(dataset[order[i]]);
    } else {
      test_samples.push_back(dataset[order[i]]);
    }
  }
  return {Dataset(std::move(train_samples), dataset.dim()),
          Dataset(std::move(test_samples), dataset.dim())};
}

}  // namespace skewreg
