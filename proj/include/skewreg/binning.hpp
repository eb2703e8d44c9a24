#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "skewreg/dataset.hpp"

namespace skewreg {

/// Equal-width partition of the label space. Bins are half-open
/// [b_{k-1}, b_k) except the last, which is closed so hi itself (yield 100)
/// stays representable.
class BinSpec {
 public:
  BinSpec(double lo, double hi, double width)
      : lo_(lo), hi_(hi), width_(width) {
    if (!(std::isfinite(lo) && std::isfinite(hi) && hi > lo)) {
      throw std::invalid_argument("BinSpec: need finite lo < hi");
    }
    if (!(width > 0.0) || !std::isfinite(width)) {
      throw std::invalid_argument("BinSpec: width must be positive");
    }
    const double ratio = (hi - lo) / width;
    const double rounded = std::round(ratio);
    if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * rounded) {
      throw std::invalid_argument(
          "BinSpec: (hi - lo) / width must be a positive integer, got " +
          std::to_string(ratio));
    }
    bin_count_ = static_cast<std::size_t>(rounded);
  }

  /// The paper-standard label space: [0, 100] in equal bins (default width 1).
  static BinSpec yield_percent(double width = 1.0) {
    return BinSpec(kLabelMin, kLabelMax, width);
  }

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double width() const { return width_; }
  std::size_t bin_count() const { return bin_count_; }

  /// Center of bin k, in label units. Kernel distances are measured between
  /// these, i.e. in whole-bin units once divided by width.
  double bin_center(std::size_t k) const {
    return lo_ + (static_cast<double>(k) + 0.5) * width_;
  }

  bool operator==(const BinSpec& o) const {
    return lo_ == o.lo_ && hi_ == o.hi_ && width_ == o.width_;
  }

 private:
  double lo_;
  double hi_;
  double width_;
  std::size_t bin_count_;
};

/// floor((label - lo) / width), with label == hi mapped into the top bin.
inline std::size_t bin_index(double label, const BinSpec& spec) {
  if (!(label >= spec.lo() && label <= spec.hi())) {
    throw std::out_of_range("bin_index: label " + std::to_string(label) +
                            " outside [" + std::to_string(spec.lo()) + ", " +
                            std::to_string(spec.hi()) + "]");
  }
  const double offset = (label - spec.lo()) / spec.width();
  auto idx = static_cast<std::size_t>(std::floor(offset));
  if (idx >= spec.bin_count()) {
    idx = spec.bin_count() - 1;  // label == hi, or floating-point overshoot
  }
  return idx;
}

struct BinCounts {
  std::vector<std::int64_t> counts;

  std::size_t bin_count() const { return counts.size(); }

  std::int64_t total() const {
    std::int64_t sum = 0;
    for (std::int64_t c : counts) {
      sum += c;
    }
    return sum;
  }
};

inline BinCounts count_bins(const Dataset& dataset, const BinSpec& spec) {
  BinCounts out;
  out.counts.assign(spec.bin_count(), 0);
  for (const Sample& s : dataset.samples()) {
    ++out.counts[bin_index(s.label, spec)];
  }
  return out;
}

/// max/min ratio over per-bin counts. Any empty bin makes the ratio +inf;
/// an all-empty histogram is an error.
inline double imbalance_ratio(const BinCounts& counts) {
  std::int64_t max_count = 0;
  std::int64_t min_count = std::numeric_limits<std::int64_t>::max();
  for (std::int64_t c : counts.counts) {
    if (c < 0) {
      throw std::invalid_argument("imbalance_ratio: negative count");
    }
    max_count = std::max(max_count, c);
    min_count = std::min(min_count, c);
  }
  if (max_count == 0) {
    throw std::invalid_argument("imbalance_ratio: all bins are empty");
  }
  if (min_count == 0) {
    return std::numeric_limits<double>::infinity();
  }
  return static_cast<double>(max_count) / static_cast<double>(min_count);
}

enum class Region { Many, Medium, Few };

inline const char* to_string(Region r) {
  switch (r) {
    case Region::Many:
      return "many";
    case Region::Medium:
      return "medium";
    case Region::Few:
      return "few";
  }
  return "?";
}

/// Count thresholds that classify bins into regions: a bin is many-shot when
/// its training count exceeds `upper`, few-shot when below `lower`, and
/// medium-shot in the inclusive band between them.
struct RegionThresholds {
  std::int64_t lower = 0;
  std::int64_t upper = 0;

  RegionThresholds(std::int64_t lower_, std::int64_t upper_)
      : lower(lower_), upper(upper_) {
    if (lower < 1 || upper < lower) {
      throw std::invalid_argument(
          "RegionThresholds: need 1 <= lower <= upper, got (" +
          std::to_string(lower) + ", " + std::to_string(upper) + ")");
    }
  }
};

/// Named per-dataset presets: "bh" (25, 50), "sm" (20, 65), "az" (3, 5).
inline RegionThresholds region_preset(std::string_view name) {
  if (name == "bh") {
    return RegionThresholds(25, 50);
  }
  if (name == "sm") {
    return RegionThresholds(20, 65);
  }
  if (name == "az") {
    return RegionThresholds(3, 5);
  }
  throw std::invalid_argument("region_preset: unknown preset '" +
                              std::string(name) + "' (expected bh, sm, az)");
}

struct RegionPartition {
  std::vector<Region> region_of_bin;
};

inline RegionPartition partition_regions(const BinCounts& counts,
                                         const RegionThresholds& th) {
  RegionPartition out;
  out.region_of_bin.reserve(counts.counts.size());
  for (std::int64_t c : counts.counts) {
    if (c > th.upper) {
      out.region_of_bin.push_back(Region::Many);
    } else if (c >= th.lower) {
      out.region_of_bin.push_back(Region::Medium);
    } else {
      out.region_of_bin.push_back(Region::Few);
    }
  }
  return out;
}

}  // namespace skewreg
