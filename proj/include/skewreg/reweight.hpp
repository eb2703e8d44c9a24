#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "skewreg/binning.hpp"
#include "skewreg/dataset.hpp"

namespace skewreg {

/// Difficulty-based (Focal) weighting: w = sigmoid(alpha * loss)^gamma.
/// gamma = 0 switches the weighting off exactly.
struct FocalConfig {
  double alpha = 0.2;
  double gamma = 1.0;
};

/// Gaussian kernel used to smooth the per-bin label density: window size
/// `ell` (odd, in bins) and standard deviation `sigma` (in bins).
struct KernelConfig {
  int ell = 5;
  double sigma = 2.0;
};

inline void validate(const FocalConfig& cfg) {
  if (!(cfg.alpha > 0.0) || !std::isfinite(cfg.alpha)) {
    throw std::invalid_argument("FocalConfig: alpha must be > 0");
  }
  if (!(cfg.gamma >= 0.0) || !std::isfinite(cfg.gamma)) {
    throw std::invalid_argument("FocalConfig: gamma must be >= 0");
  }
}

inline void validate(const KernelConfig& cfg) {
  if (cfg.ell < 1 || cfg.ell % 2 == 0) {
    throw std::invalid_argument("KernelConfig: ell must be an odd positive integer");
  }
  if (!(cfg.sigma > 0.0) || !std::isfinite(cfg.sigma)) {
    throw std::invalid_argument("KernelConfig: sigma must be > 0");
  }
}

/// One positive, finite weight per training sample.
struct WeightVector {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }

  static WeightVector uniform(std::size_t n) {
    WeightVector w;
    w.values.assign(n, 1.0);
    return w;
  }

  double mean() const {
    if (values.empty()) {
      return 0.0;
    }
    double sum = 0.0;
    for (double v : values) {
      sum += v;
    }
    return sum / static_cast<double>(values.size());
  }
};

inline double gaussian_kernel(double dy, double sigma) {
  if (!(sigma > 0.0)) {
    throw std::invalid_argument("gaussian_kernel: sigma must be > 0");
  }
  return std::exp(-(dy * dy) / (2.0 * sigma * sigma));
}

/// Convolves the bin histogram with a truncated Gaussian: the window covers
/// offsets -(ell-1)/2 .. +(ell-1)/2, clipped at the label-space edges with no
/// renormalization. Distances are in bin units.
inline std::vector<double> smoothed_counts(const BinCounts& counts,
                                           const KernelConfig& cfg) {
  validate(cfg);
  const std::size_t n_bins = counts.bin_count();
  const int half = (cfg.ell - 1) / 2;

  std::vector<double> kernel(static_cast<std::size_t>(half) + 1);
  for (int d = 0; d <= half; ++d) {
    kernel[static_cast<std::size_t>(d)] =
        gaussian_kernel(static_cast<double>(d), cfg.sigma);
  }

  std::vector<double> smoothed(n_bins, 0.0);
  for (std::size_t k = 0; k < n_bins; ++k) {
    const auto ik = static_cast<std::int64_t>(k);
    const std::int64_t j_lo = std::max<std::int64_t>(0, ik - half);
    const std::int64_t j_hi =
        std::min<std::int64_t>(static_cast<std::int64_t>(n_bins) - 1, ik + half);
    double acc = 0.0;
    for (std::int64_t j = j_lo; j <= j_hi; ++j) {
      const auto d = static_cast<std::size_t>(std::abs(ik - j));
      acc += kernel[d] * static_cast<double>(counts.counts[static_cast<std::size_t>(j)]);
    }
    smoothed[k] = acc;
  }
  return smoothed;
}

/// Label-density weights: the raw weight of a sample is the inverse of its
/// bin's smoothed count, rescaled so the mean weight over the training set is
/// one. Weights depend on labels only and are constant within a bin.
///
/// The normalization is evaluated per bin, w_k = (raw_k * N) / sum_j(count_j
/// * raw_j), which is the same quantity as raw_i * N / sum_i(raw_i) but makes
/// the flat-density fixed point exact: when every occupied bin shares one
/// smoothed count, numerator and denominator are the identical product and
/// every weight comes out bit-for-bit 1.0.
inline WeightVector lds_weights(const Dataset& train, const BinSpec& spec,
                                const KernelConfig& cfg) {
  if (train.empty()) {
    throw std::invalid_argument("lds_weights: empty training set");
  }
  const BinCounts counts = count_bins(train, spec);
  const std::vector<double> smoothed = smoothed_counts(counts, cfg);

  const std::size_t n_bins = counts.bin_count();
  std::vector<double> raw(n_bins, 0.0);
  double weighted_sum = 0.0;  // sum over samples of their raw weight
  for (std::size_t k = 0; k < n_bins; ++k) {
    if (counts.counts[k] == 0) {
      continue;
    }
    if (!(smoothed[k] > 0.0)) {
      throw std::runtime_error(
          "lds_weights: occupied bin " + std::to_string(k) +
          " has non-positive smoothed count");  // unreachable by construction
    }
    raw[k] = 1.0 / smoothed[k];
    weighted_sum += static_cast<double>(counts.counts[k]) * raw[k];
  }

  const auto n = static_cast<double>(train.size());
  std::vector<double> per_bin(n_bins, 0.0);
  for (std::size_t k = 0; k < n_bins; ++k) {
    if (counts.counts[k] > 0) {
      per_bin[k] = (raw[k] * n) / weighted_sum;
      if (!std::isfinite(per_bin[k]) || per_bin[k] <= 0.0) {
        throw std::runtime_error("lds_weights: non-finite weight for bin " +
                                 std::to_string(k));
      }
    }
  }

  WeightVector out;
  out.values.reserve(train.size());
  for (const Sample& s : train.samples()) {
    out.values.push_back(per_bin[bin_index(s.label, spec)]);
  }
  return out;
}

/// Focal weights from current per-sample losses: sigmoid(alpha * loss)^gamma,
/// each in (0, 1]. Not mean-normalized; these are bounded scaling factors and
/// are treated as constants by the optimizer.
inline WeightVector focal_weights(std::span<const double> losses,
                                  const FocalConfig& cfg) {
  validate(cfg);
  WeightVector out;
  out.values.reserve(losses.size());
  for (double loss : losses) {
    if (!std::isfinite(loss) || loss < 0.0) {
      throw std::invalid_argument(
          "focal_weights: losses must be finite and nonnegative");
    }
    if (cfg.gamma == 0.0) {
      out.values.push_back(1.0);
      continue;
    }
    const double sig = 1.0 / (1.0 + std::exp(-cfg.alpha * loss));
    out.values.push_back(std::pow(sig, cfg.gamma));
  }
  return out;
}

/// Elementwise product of two weightings (static LDS x dynamic Focal).
inline WeightVector combine_weights(const WeightVector& a,
                                    const WeightVector& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("combine_weights: length mismatch (" +
                                std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()) + ")");
  }
  WeightVector out;
  out.values.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    out.values.push_back(a.values[i] * b.values[i]);
  }
  return out;
}

/// Weighted mean absolute error: (1/N) * sum_i w_i * |y_i - yhat_i|.
inline double weighted_l1(std::span<const double> preds,
                          std::span<const double> labels,
                          const WeightVector& weights) {
  if (preds.size() != labels.size() || preds.size() != weights.size()) {
    throw std::invalid_argument("weighted_l1: length mismatch");
  }
  if (preds.empty()) {
    throw std::invalid_argument("weighted_l1: empty input");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (!std::isfinite(preds[i]) || !std::isfinite(labels[i]) ||
        !std::isfinite(weights.values[i])) {
      throw std::invalid_argument("weighted_l1: non-finite input at index " +
                                  std::to_string(i));
    }
    sum += weights.values[i] * std::abs(labels[i] - preds[i]);
  }
  return sum / static_cast<double>(preds.size());
}

/// Training weight schemes, selectable by name in configs and the CLI.
enum class WeightScheme { Vanilla, Focal, Lds, FocalLds };

inline const char* to_string(WeightScheme s) {
  switch (s) {
    case WeightScheme::Vanilla:
      return "vanilla";
    case WeightScheme::Focal:
      return "focal";
    case WeightScheme::Lds:
      return "lds";
    case WeightScheme::FocalLds:
      return "focal+lds";
  }
  return "?";
}

inline WeightScheme parse_scheme(std::string_view name) {
  if (name == "vanilla") {
    return WeightScheme::Vanilla;
  }
  if (name == "focal") {
    return WeightScheme::Focal;
  }
  if (name == "lds") {
    return WeightScheme::Lds;
  }
  if (name == "focal+lds" || name == "lds+focal") {
    return WeightScheme::FocalLds;
  }
  throw std::invalid_argument(
      "parse_scheme: unknown scheme '" + std::string(name) +
      "' (expected vanilla, focal, lds, focal+lds)");
}

inline bool uses_focal(WeightScheme s) {
  return s == WeightScheme::Focal || s == WeightScheme::FocalLds;
}

inline bool uses_lds(WeightScheme s) {
  return s == WeightScheme::Lds || s == WeightScheme::FocalLds;
}

}  // namespace skewreg
