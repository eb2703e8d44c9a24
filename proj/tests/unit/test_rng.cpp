#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "skewreg/rng.hpp"

using skewreg::Rng;

TEST_CASE("identical seeds give identical streams") {
  Rng a(42);
  Rng b(42);
  for (int i = 0; i < 1000; ++i) {
    REQUIRE(a.next_u64() == b.next_u64());
  }
}

TEST_CASE("uniform01 stays in [0, 1)") {
  Rng rng(7);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform01();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
  }
}

TEST_CASE("below respects the bound and rejects zero") {
  Rng rng(3);
  for (int i = 0; i < 10000; ++i) {
    REQUIRE(rng.below(7) < 7);
  }
  REQUIRE(rng.below(1) == 0);
  REQUIRE_THROWS_AS(rng.below(0), std::invalid_argument);
}

TEST_CASE("shuffle produces a permutation, deterministic in the seed") {
  std::vector<int> v(100);
  std::iota(v.begin(), v.end(), 0);
  std::vector<int> w = v;

  Rng(11).shuffle(v);
  Rng(11).shuffle(w);
  REQUIRE(v == w);

  std::vector<int> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> expected(100);
  std::iota(expected.begin(), expected.end(), 0);
  REQUIRE(sorted == expected);

  std::vector<int> u(100);
  std::iota(u.begin(), u.end(), 0);
  Rng(12).shuffle(u);
  REQUIRE(u != v);
}

TEST_CASE("normal draws have roughly standard moments") {
  Rng rng(5);
  const int n = 20000;
  double sum = 0.0;
  double sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    sum += z;
    sq += z * z;
  }
  const double mean = sum / n;
  const double var = sq / n - mean * mean;
  REQUIRE(std::abs(mean) < 0.03);
  REQUIRE(std::abs(var - 1.0) < 0.05);
}
