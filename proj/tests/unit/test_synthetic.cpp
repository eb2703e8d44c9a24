#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "skewreg/binning.hpp"
#include "skewreg/synthetic.hpp"

using namespace skewreg;

namespace {

// Spearman rank correlation with average ranks for ties.
double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  const auto ranks = [n](const std::vector<double>& v) {
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) {
      order[i] = i;
    }
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(n);
    std::size_t i = 0;
    while (i < n) {
      std::size_t j = i;
      while (j + 1 < n && v[order[j + 1]] == v[order[i]]) {
        ++j;
      }
      const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
      for (std::size_t k = i; k <= j; ++k) {
        r[order[k]] = avg;
      }
      i = j + 1;
    }
    return r;
  };
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace

TEST_CASE("zero skew gives near-uniform decade counts") {
  const Dataset d = generate_synthetic({20000, 2, 0.0, 1.0, 9});
  const BinCounts counts = count_bins(d, BinSpec::yield_percent(10.0));
  const auto [min_it, max_it] =
      std::minmax_element(counts.counts.begin(), counts.counts.end());
  REQUIRE(*min_it > 0);
  REQUIRE(static_cast<double>(*max_it) / static_cast<double>(*min_it) < 2.0);
}

TEST_CASE("skew 3 leaves the top decade much emptier than the bottom") {
  const Dataset d = generate_synthetic({5000, 4, 3.0, 5.0, 10});
  const BinCounts counts = count_bins(d, BinSpec::yield_percent(10.0));
  REQUIRE(counts.counts.front() > counts.counts.back());
}

TEST_CASE("generator is a pure function of its config") {
  const SynthConfig cfg{500, 3, 2.0, 1.5, 123};
  const Dataset a = generate_synthetic(cfg);
  const Dataset b = generate_synthetic(cfg);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    REQUIRE(a[i].label == b[i].label);
    REQUIRE(a[i].features == b[i].features);
  }
  const Dataset c = generate_synthetic({500, 3, 2.0, 1.5, 124});
  REQUIRE(a[0].label != c[0].label);
}

TEST_CASE("positive skew makes bin counts decay in rank") {
  const Dataset d = generate_synthetic({20000, 2, 2.0, 1.0, 21});
  const BinCounts counts = count_bins(d, BinSpec::yield_percent(1.0));
  std::vector<double> bin_idx, bin_count;
  for (std::size_t k = 0; k < counts.counts.size(); ++k) {
    bin_idx.push_back(static_cast<double>(k));
    bin_count.push_back(static_cast<double>(counts.counts[k]));
  }
  REQUIRE(spearman(bin_idx, bin_count) < -0.5);
}

TEST_CASE("labels stay inside the yield range") {
  const Dataset d = generate_synthetic({2000, 1, 8.0, 0.0, 3});
  for (const Sample& s : d.samples()) {
    REQUIRE(s.label >= 0.0);
    REQUIRE(s.label <= 100.0);
  }
}

TEST_CASE("generator rejects invalid configs") {
  REQUIRE_THROWS_AS(generate_synthetic({5, 2, 1.0, 1.0, 0}),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(generate_synthetic({100, 0, 1.0, 1.0, 0}),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(generate_synthetic({100, 2, -1.0, 1.0, 0}),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(generate_synthetic({100, 2, 1.0, -1.0, 0}),
                    std::invalid_argument);
}
