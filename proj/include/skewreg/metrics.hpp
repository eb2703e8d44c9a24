#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "skewreg/binning.hpp"

namespace skewreg {

namespace detail {
inline void check_paired(std::span<const double> preds,
                         std::span<const double> labels, const char* who) {
  if (preds.size() != labels.size()) {
    throw std::invalid_argument(std::string(who) + ": length mismatch");
  }
  if (preds.empty()) {
    throw std::invalid_argument(std::string(who) + ": empty input");
  }
}
}  // namespace detail

inline double mae(std::span<const double> preds,
                  std::span<const double> labels) {
  detail::check_paired(preds, labels, "mae");
  double sum = 0.0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    sum += std::abs(preds[i] - labels[i]);
  }
  return sum / static_cast<double>(preds.size());
}

inline double rmse(std::span<const double> preds,
                   std::span<const double> labels) {
  detail::check_paired(preds, labels, "rmse");
  double sum = 0.0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const double d = preds[i] - labels[i];
    sum += d * d;
  }
  return std::sqrt(sum / static_cast<double>(preds.size()));
}

/// Geometric mean of absolute errors, exp(mean(log(max(|err|, eps)))). The
/// eps floor keeps exact-zero errors (common on discrete-valued yields) from
/// collapsing the whole product.
inline double gmean(std::span<const double> preds,
                    std::span<const double> labels, double eps = 1e-10) {
  detail::check_paired(preds, labels, "gmean");
  if (!(eps > 0.0)) {
    throw std::invalid_argument("gmean: eps must be > 0");
  }
  double log_sum = 0.0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    log_sum += std::log(std::max(std::abs(preds[i] - labels[i]), eps));
  }
  return std::exp(log_sum / static_cast<double>(preds.size()));
}

/// Sample Pearson correlation. Undefined (zero variance) is reported as
/// absence, not as zero.
inline std::optional<double> pearson(std::span<const double> x,
                                     std::span<const double> y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("pearson: length mismatch");
  }
  if (x.size() < 2) {
    throw std::invalid_argument("pearson: need at least 2 points");
  }
  const auto n = static_cast<double>(x.size());
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mean_x += x[i];
    mean_y += y[i];
  }
  mean_x /= n;
  mean_y /= n;

  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mean_x;
    const double dy = y[i] - mean_y;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    return std::nullopt;
  }
  const double r = sxy / std::sqrt(sxx * syy);
  return std::clamp(r, -1.0, 1.0);
}

/// Metrics for one region; absent (not zero) when the region holds no test
/// samples.
struct RegionMetrics {
  std::size_t count = 0;
  std::optional<double> mae;
  std::optional<double> rmse;
  std::optional<double> gmean;
};

struct PerBinError {
  std::size_t bin = 0;
  std::size_t count = 0;  // test samples in this bin
  double mean_abs_error = 0.0;
};

/// Region-stratified evaluation of one prediction vector, plus the per-bin
/// error curve and the train-count vs test-error correlation diagnostic.
struct RegionReport {
  RegionMetrics all;
  RegionMetrics many;
  RegionMetrics medium;
  RegionMetrics few;
  /// Pearson r of (training count, mean test L1 error) over bins occupied in
  /// both splits; absent when fewer than 2 such bins or variance is zero.
  std::optional<double> pearson_r;
  std::vector<PerBinError> per_bin_errors;

  const RegionMetrics& region(Region r) const {
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

namespace detail {
inline RegionMetrics metrics_for(const std::vector<double>& preds,
                                 const std::vector<double>& labels) {
  RegionMetrics m;
  m.count = preds.size();
  if (!preds.empty()) {
    m.mae = mae(preds, labels);
    m.rmse = rmse(preds, labels);
    m.gmean = gmean(preds, labels);
  }
  return m;
}
}  // namespace detail

/// Groups test samples by the training-derived region of their label bin and
/// reports MAE/RMSE/G-Mean per region and overall. The partition is frozen:
/// test-time counts never alter region membership.
inline RegionReport region_report(std::span<const double> preds,
                                  std::span<const double> labels,
                                  const RegionPartition& partition,
                                  const BinSpec& spec,
                                  const BinCounts& train_counts) {
  detail::check_paired(preds, labels, "region_report");
  if (partition.region_of_bin.size() != spec.bin_count() ||
      train_counts.bin_count() != spec.bin_count()) {
    throw std::invalid_argument(
        "region_report: partition/counts size does not match bin spec");
  }

  std::vector<double> all_p, all_l;
  std::vector<double> reg_p[3], reg_l[3];
  std::vector<double> bin_err_sum(spec.bin_count(), 0.0);
  std::vector<std::size_t> bin_n(spec.bin_count(), 0);

  all_p.reserve(preds.size());
  all_l.reserve(preds.size());
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const std::size_t b = bin_index(labels[i], spec);
    const auto r = static_cast<std::size_t>(partition.region_of_bin[b]);
    all_p.push_back(preds[i]);
    all_l.push_back(labels[i]);
    reg_p[r].push_back(preds[i]);
    reg_l[r].push_back(labels[i]);
    bin_err_sum[b] += std::abs(preds[i] - labels[i]);
    ++bin_n[b];
  }

  RegionReport report;
  report.all = detail::metrics_for(all_p, all_l);
  report.many = detail::metrics_for(
      reg_p[static_cast<std::size_t>(Region::Many)],
      reg_l[static_cast<std::size_t>(Region::Many)]);
  report.medium = detail::metrics_for(
      reg_p[static_cast<std::size_t>(Region::Medium)],
      reg_l[static_cast<std::size_t>(Region::Medium)]);
  report.few = detail::metrics_for(
      reg_p[static_cast<std::size_t>(Region::Few)],
      reg_l[static_cast<std::size_t>(Region::Few)]);

  std::vector<double> paired_counts;
  std::vector<double> paired_errors;
  for (std::size_t b = 0; b < spec.bin_count(); ++b) {
    if (bin_n[b] == 0) {
      continue;
    }
    const double mean_err = bin_err_sum[b] / static_cast<double>(bin_n[b]);
    report.per_bin_errors.push_back({b, bin_n[b], mean_err});
    if (train_counts.counts[b] > 0) {
      paired_counts.push_back(static_cast<double>(train_counts.counts[b]));
      paired_errors.push_back(mean_err);
    }
  }
  if (paired_counts.size() >= 2) {
    report.pearson_r = pearson(paired_counts, paired_errors);
  }
  return report;
}

}  // namespace skewreg
