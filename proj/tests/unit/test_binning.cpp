#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <vector>

#include "skewreg/binning.hpp"
#include "skewreg/rng.hpp"
#include "skewreg/synthetic.hpp"

using namespace skewreg;

namespace {

Dataset labels_only(const std::vector<double>& labels) {
  std::vector<Sample> samples;
  for (double y : labels) {
    samples.push_back(Sample{{0.0}, y});
  }
  return Dataset(std::move(samples), 1);
}

int region_rank(Region r) {
  switch (r) {
    case Region::Few:
      return 0;
    case Region::Medium:
      return 1;
    case Region::Many:
      return 2;
  }
  return -1;
}

}  // namespace

TEST_CASE("bin spec validates the bin grid") {
  REQUIRE(BinSpec::yield_percent(1.0).bin_count() == 100);
  REQUIRE(BinSpec::yield_percent(0.25).bin_count() == 400);
  REQUIRE(BinSpec::yield_percent(100.0).bin_count() == 1);
  REQUIRE_THROWS_AS(BinSpec(0.0, 100.0, 7.0), std::invalid_argument);
  REQUIRE_THROWS_AS(BinSpec(0.0, 100.0, 0.0), std::invalid_argument);
  REQUIRE_THROWS_AS(BinSpec(0.0, 100.0, -1.0), std::invalid_argument);
  REQUIRE_THROWS_AS(BinSpec(100.0, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("bin_index boundary behavior") {
  const BinSpec spec = BinSpec::yield_percent(1.0);
  REQUIRE(bin_index(0.0, spec) == 0);
  REQUIRE(bin_index(100.0, spec) == 99);  // closed top bin
  REQUIRE(bin_index(33.7, spec) == 33);
  REQUIRE(bin_index(99.0, spec) == 99);
  REQUIRE(bin_index(98.9999999, spec) == 98);
  REQUIRE_THROWS_AS(bin_index(-0.001, spec), std::out_of_range);
  REQUIRE_THROWS_AS(bin_index(100.001, spec), std::out_of_range);

  const BinSpec wide = BinSpec::yield_percent(2.0);
  REQUIRE(bin_index(50.0, wide) == 25);
}

TEST_CASE("bin_index is monotone and covers every bin") {
  const BinSpec spec = BinSpec::yield_percent(1.0);
  std::vector<bool> seen(spec.bin_count(), false);
  std::size_t prev = 0;
  for (int i = 0; i <= 10000; ++i) {
    const double y = 100.0 * static_cast<double>(i) / 10000.0;
    const std::size_t idx = bin_index(y, spec);
    REQUIRE(idx >= prev);
    prev = idx;
    seen[idx] = true;
  }
  for (bool s : seen) {
    REQUIRE(s);
  }
}

TEST_CASE("count_bins counts and conserves") {
  const BinSpec spec = BinSpec::yield_percent(1.0);
  const BinCounts counts = count_bins(labels_only({0.5, 0.7, 99.9}), spec);
  REQUIRE(counts.counts[0] == 2);
  REQUIRE(counts.counts[99] == 1);
  REQUIRE(counts.total() == 3);
  std::int64_t nonzero = 0;
  for (auto c : counts.counts) {
    nonzero += (c != 0);
  }
  REQUIRE(nonzero == 2);

  const Dataset synth = generate_synthetic({5000, 2, 3.0, 1.0, 1});
  REQUIRE(count_bins(synth, spec).total() == 5000);
}

TEST_CASE("imbalance ratio") {
  REQUIRE(imbalance_ratio(BinCounts{{10, 10, 10}}) == 1.0);
  REQUIRE(imbalance_ratio(BinCounts{{412, 80, 1}}) == 412.0);
  REQUIRE(std::isinf(imbalance_ratio(BinCounts{{5, 0, 5}})));
  REQUIRE_THROWS_AS(imbalance_ratio(BinCounts{{0, 0}}), std::invalid_argument);
}

TEST_CASE("region classification at the paper thresholds") {
  const RegionThresholds bh = region_preset("bh");
  REQUIRE(bh.lower == 25);
  REQUIRE(bh.upper == 50);
  const RegionThresholds sm = region_preset("sm");
  REQUIRE(sm.lower == 20);
  REQUIRE(sm.upper == 65);
  const RegionThresholds az = region_preset("az");
  REQUIRE(az.lower == 3);
  REQUIRE(az.upper == 5);
  REQUIRE_THROWS_AS(region_preset("xx"), std::invalid_argument);

  const auto partition = partition_regions(
      BinCounts{{51, 50, 25, 24, 0}}, bh);
  REQUIRE(partition.region_of_bin[0] == Region::Many);    // over upper
  REQUIRE(partition.region_of_bin[1] == Region::Medium);  // == upper
  REQUIRE(partition.region_of_bin[2] == Region::Medium);  // == lower
  REQUIRE(partition.region_of_bin[3] == Region::Few);     // below lower
  REQUIRE(partition.region_of_bin[4] == Region::Few);

  const auto az_part = partition_regions(BinCounts{{0, 2, 3, 5, 6, 145}}, az);
  REQUIRE(az_part.region_of_bin[0] == Region::Few);
  REQUIRE(az_part.region_of_bin[1] == Region::Few);
  REQUIRE(az_part.region_of_bin[2] == Region::Medium);
  REQUIRE(az_part.region_of_bin[3] == Region::Medium);
  REQUIRE(az_part.region_of_bin[4] == Region::Many);
  REQUIRE(az_part.region_of_bin[5] == Region::Many);
}

TEST_CASE("thresholds validate lower <= upper") {
  REQUIRE_THROWS_AS(RegionThresholds(10, 5), std::invalid_argument);
  REQUIRE_THROWS_AS(RegionThresholds(0, 5), std::invalid_argument);
  REQUIRE_NOTHROW(RegionThresholds(5, 5));
}

TEST_CASE("partition is total and count-monotone") {
  Rng rng(31);
  const RegionThresholds th(7, 19);
  for (int trial = 0; trial < 50; ++trial) {
    BinCounts counts;
    for (int k = 0; k < 40; ++k) {
      counts.counts.push_back(static_cast<std::int64_t>(rng.below(30)));
    }
    const auto part = partition_regions(counts, th);
    REQUIRE(part.region_of_bin.size() == counts.counts.size());

    // Bump one bin: its region rank must not decrease.
    const std::size_t k = rng.below(counts.counts.size());
    BinCounts bumped = counts;
    bumped.counts[k] += 1 + static_cast<std::int64_t>(rng.below(10));
    const auto part2 = partition_regions(bumped, th);
    REQUIRE(region_rank(part2.region_of_bin[k]) >=
            region_rank(part.region_of_bin[k]));
  }
}
