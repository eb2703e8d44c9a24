#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "skewreg/metrics.hpp"
#include "skewreg/rng.hpp"

using namespace skewreg;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Naive reference implementations, kept deliberately separate from the
// library code paths.
double naive_mae(const std::vector<double>& p, const std::vector<double>& l) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    s += std::fabs(p[i] - l[i]);
  }
  return s / static_cast<double>(p.size());
}

double naive_rmse(const std::vector<double>& p, const std::vector<double>& l) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    s += (p[i] - l[i]) * (p[i] - l[i]);
  }
  return std::sqrt(s / static_cast<double>(p.size()));
}

double naive_gmean(const std::vector<double>& p, const std::vector<double>& l,
                   double eps) {
  double prod_log = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    double e = std::fabs(p[i] - l[i]);
    if (e < eps) {
      e = eps;
    }
    prod_log += std::log(e);
  }
  return std::exp(prod_log / static_cast<double>(p.size()));
}

double naive_pearson(const std::vector<double>& x,
                     const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    syy += y[i] * y[i];
    sxy += x[i] * y[i];
  }
  const double cov = sxy / n - (sx / n) * (sy / n);
  const double vx = sxx / n - (sx / n) * (sx / n);
  const double vy = syy / n - (sy / n) * (sy / n);
  return cov / std::sqrt(vx * vy);
}

}  // namespace

TEST_CASE("mae and rmse hand values") {
  const std::vector<double> preds{10.0, 20.0};
  const std::vector<double> labels{12.0, 16.0};
  REQUIRE_THAT(mae(preds, labels), WithinRel(3.0, 1e-15));
  REQUIRE_THAT(rmse(preds, labels), WithinRel(std::sqrt(10.0), 1e-15));

  REQUIRE(mae(labels, labels) == 0.0);
  REQUIRE(rmse(labels, labels) == 0.0);

  const std::vector<double> one_p{7.0};
  const std::vector<double> one_l{4.5};
  REQUIRE_THAT(mae(one_p, one_l), WithinRel(2.5, 1e-15));
  REQUIRE(mae(one_p, one_l) == rmse(one_p, one_l));

  REQUIRE_THROWS_AS(mae(std::vector<double>{}, std::vector<double>{}),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(rmse(one_p, labels), std::invalid_argument);
}

TEST_CASE("gmean hand values and the eps floor") {
  const std::vector<double> labels{0.0, 0.0};
  const std::vector<double> preds{1.0, 4.0};
  REQUIRE_THAT(gmean(preds, labels), WithinRel(2.0, 1e-12));

  const std::vector<double> equal_p{13.0, 3.0, 23.0};
  const std::vector<double> equal_l{10.0, 0.0, 20.0};
  REQUIRE_THAT(gmean(equal_p, equal_l), WithinRel(3.0, 1e-12));

  // One exact-zero error among large ones: floored at eps, still far below
  // the MAE.
  const std::vector<double> zp{10.0, 50.0, 90.0};
  const std::vector<double> zl{10.0, 40.0, 80.0};
  const double g = gmean(zp, zl);
  const std::vector<double> floored_p{10.0 + 1e-10, 50.0, 90.0};
  REQUIRE(g <= gmean(floored_p, zl) * (1.0 + 1e-12));
  REQUIRE(g < mae(zp, zl));

  REQUIRE_THROWS_AS(gmean(zp, zl, 0.0), std::invalid_argument);
}

TEST_CASE("pearson hand values and degenerate cases") {
  REQUIRE_THAT(*pearson(std::vector<double>{1, 2, 3},
                        std::vector<double>{2, 4, 6}),
               WithinRel(1.0, 1e-12));
  REQUIRE_THAT(*pearson(std::vector<double>{1, 2, 3},
                        std::vector<double>{6, 4, 2}),
               WithinRel(-1.0, 1e-12));
  REQUIRE_THAT(*pearson(std::vector<double>{1, 2, 3, 4},
                        std::vector<double>{1, 3, 2, 4}),
               WithinRel(0.8, 1e-12));
  REQUIRE_FALSE(pearson(std::vector<double>{1, 1, 1},
                        std::vector<double>{2, 4, 6})
                    .has_value());
  REQUIRE_THROWS_AS(pearson(std::vector<double>{1}, std::vector<double>{2}),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(pearson(std::vector<double>{1, 2}, std::vector<double>{2}),
                    std::invalid_argument);
}

TEST_CASE("pearson is affine-invariant and symmetric") {
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> x, y, x_affine;
    for (int i = 0; i < 30; ++i) {
      x.push_back(rng.uniform(-10, 10));
      y.push_back(rng.uniform(-10, 10));
    }
    const double a = rng.uniform(0.1, 5.0);
    const double b = rng.uniform(-20, 20);
    for (double v : x) {
      x_affine.push_back(a * v + b);
    }
    const double r = *pearson(x, y);
    REQUIRE_THAT(*pearson(x_affine, y), WithinAbs(r, 1e-12));
    REQUIRE_THAT(*pearson(y, x), WithinAbs(r, 1e-12));
  }
}

TEST_CASE("metrics match naive oracles on random vectors") {
  Rng rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.below(100);
    std::vector<double> preds, labels;
    for (std::size_t i = 0; i < n; ++i) {
      preds.push_back(rng.uniform(0, 100));
      labels.push_back(rng.uniform(0, 100));
    }
    REQUIRE_THAT(mae(preds, labels), WithinRel(naive_mae(preds, labels), 1e-9));
    REQUIRE_THAT(rmse(preds, labels),
                 WithinRel(naive_rmse(preds, labels), 1e-9));
    REQUIRE_THAT(gmean(preds, labels),
                 WithinRel(naive_gmean(preds, labels, 1e-10), 1e-9));
    if (n >= 2) {
      const auto r = pearson(preds, labels);
      if (r) {
        REQUIRE_THAT(*r, WithinAbs(naive_pearson(preds, labels), 1e-9));
      }
    }
  }
}

TEST_CASE("gmean <= mae <= rmse on any sample") {
  Rng rng(123);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + rng.below(50);
    std::vector<double> preds, labels;
    for (std::size_t i = 0; i < n; ++i) {
      preds.push_back(rng.uniform(0, 100));
      labels.push_back(rng.uniform(0, 100));
    }
    const double g = gmean(preds, labels);
    const double a = mae(preds, labels);
    const double r = rmse(preds, labels);
    REQUIRE(g <= a * (1.0 + 1e-12));
    REQUIRE(a <= r * (1.0 + 1e-12));
  }
}

namespace {

struct ReportFixture {
  BinSpec spec = BinSpec::yield_percent(10.0);  // 10 bins
  BinCounts train_counts;
  RegionPartition partition;

  ReportFixture() {
    // Bins 0-3 many, 4-6 medium, 7-9 few (thresholds 10/50 on these counts).
    train_counts.counts = {80, 70, 60, 55, 30, 20, 12, 5, 2, 1};
    partition = partition_regions(train_counts, RegionThresholds(10, 50));
  }
};

}  // namespace

TEST_CASE_METHOD(ReportFixture, "region report splits metrics by region") {
  // Two samples per region block.
  const std::vector<double> labels{5.0, 15.0, 45.0, 55.0, 75.0, 95.0};
  const std::vector<double> preds{6.0, 17.0, 44.0, 52.0, 70.0, 85.0};
  const auto report =
      region_report(preds, labels, partition, spec, train_counts);

  REQUIRE(report.all.count == 6);
  REQUIRE(report.many.count == 2);
  REQUIRE(report.medium.count == 2);
  REQUIRE(report.few.count == 2);
  REQUIRE_THAT(*report.many.mae, WithinRel(1.5, 1e-12));   // errors 1, 2
  REQUIRE_THAT(*report.medium.mae, WithinRel(2.0, 1e-12)); // errors 1, 3
  REQUIRE_THAT(*report.few.mae, WithinRel(7.5, 1e-12));    // errors 5, 10

  // All-region MAE equals the count-weighted mean of region MAEs.
  const double weighted =
      (2.0 * *report.many.mae + 2.0 * *report.medium.mae +
       2.0 * *report.few.mae) /
      6.0;
  REQUIRE_THAT(*report.all.mae, WithinRel(weighted, 1e-12));

  // Per-bin errors cover exactly the occupied test bins.
  REQUIRE(report.per_bin_errors.size() == 6);
  REQUIRE(report.per_bin_errors.front().bin == 0);
  REQUIRE(report.per_bin_errors.front().count == 1);
  REQUIRE_THAT(report.per_bin_errors.front().mean_abs_error,
               WithinRel(1.0, 1e-12));
  REQUIRE(report.pearson_r.has_value());
  REQUIRE(*report.pearson_r < 0.0);  // errors grow as counts shrink here
}

TEST_CASE_METHOD(ReportFixture, "regions with no test samples report absence") {
  const std::vector<double> labels{5.0, 15.0, 35.0};  // many-shot bins only
  const std::vector<double> preds{7.0, 15.0, 30.0};
  const auto report =
      region_report(preds, labels, partition, spec, train_counts);
  REQUIRE(report.many.count == 3);
  REQUIRE(report.medium.count == 0);
  REQUIRE(report.few.count == 0);
  REQUIRE_FALSE(report.medium.mae.has_value());
  REQUIRE_FALSE(report.few.rmse.has_value());
  REQUIRE(*report.all.mae == *report.many.mae);
  REQUIRE(*report.all.rmse == *report.many.rmse);
}

TEST_CASE_METHOD(ReportFixture, "perfect predictions zero the metrics") {
  const std::vector<double> labels{5.0, 45.0, 95.0};
  const auto report =
      region_report(labels, labels, partition, spec, train_counts);
  REQUIRE_THAT(*report.all.mae, WithinAbs(0.0, 1e-15));
  REQUIRE_THAT(*report.all.rmse, WithinAbs(0.0, 1e-15));
  REQUIRE_THAT(*report.all.gmean, WithinAbs(0.0, 1e-9));  // eps-floored
  // All per-bin errors identical (zero): no variance, so no correlation.
  REQUIRE_FALSE(report.pearson_r.has_value());
}

TEST_CASE_METHOD(ReportFixture, "region report validates shapes") {
  const std::vector<double> labels{5.0};
  REQUIRE_THROWS_AS(region_report(std::vector<double>{1.0, 2.0}, labels,
                                  partition, spec, train_counts),
                    std::invalid_argument);
  BinCounts short_counts;
  short_counts.counts = {1, 2};
  REQUIRE_THROWS_AS(
      region_report(labels, labels, partition, spec, short_counts),
      std::invalid_argument);
}
