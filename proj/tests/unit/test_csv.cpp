#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "skewreg/csv.hpp"
#include "skewreg/synthetic.hpp"

using namespace skewreg;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("skewreg_csv_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

}  // namespace

TEST_CASE("loads a small well-formed file") {
  TempDir tmp;
  const auto path = tmp.file("ok.csv");
  write_file(path,
             "f0,f1,yield\n"
             "1.5,-2.25,10\n"
             "0,3,0\n"
             "4,5,100\n");
  const Dataset d = load_csv(path);
  REQUIRE(d.size() == 3);
  REQUIRE(d.dim() == 2);
  REQUIRE(d[0].features == std::vector<double>{1.5, -2.25});
  REQUIRE(d[2].label == 100.0);
}

TEST_CASE("save then load reproduces every value exactly") {
  TempDir tmp;
  const auto path = tmp.file("roundtrip.csv");
  const Dataset d = generate_synthetic({1000, 5, 2.5, 3.0, 42});
  save_csv(d, path);
  const Dataset d2 = load_csv(path);
  REQUIRE(d2.size() == d.size());
  REQUIRE(d2.dim() == d.dim());
  for (std::size_t i = 0; i < d.size(); ++i) {
    REQUIRE(d2[i].label == d[i].label);  // 17 significant digits round-trip
    REQUIRE(d2[i].features == d[i].features);
  }
}

TEST_CASE("out-of-range yield reports the offending line") {
  TempDir tmp;
  const auto path = tmp.file("bad_yield.csv");
  write_file(path,
             "f0,yield\n"
             "1,50\n"
             "2,101\n");
  REQUIRE_THROWS_WITH(load_csv(path), Catch::Matchers::ContainsSubstring(":3"));
}

TEST_CASE("malformed numbers and ragged rows are rejected with line numbers") {
  TempDir tmp;
  const auto ragged = tmp.file("ragged.csv");
  write_file(ragged, "f0,f1,yield\n1,2,3\n1,2\n");
  REQUIRE_THROWS_WITH(load_csv(ragged),
                      Catch::Matchers::ContainsSubstring(":3"));

  const auto junk = tmp.file("junk.csv");
  write_file(junk, "f0,yield\nabc,50\n");
  REQUIRE_THROWS_WITH(load_csv(junk), Catch::Matchers::ContainsSubstring(":2"));

  const auto nan_file = tmp.file("nan.csv");
  write_file(nan_file, "f0,yield\nnan,50\n");
  REQUIRE_THROWS_WITH(load_csv(nan_file),
                      Catch::Matchers::ContainsSubstring(":2"));

  const auto trailing = tmp.file("trailing.csv");
  write_file(trailing, "f0,yield\n1.5x,50\n");
  REQUIRE_THROWS_WITH(load_csv(trailing),
                      Catch::Matchers::ContainsSubstring(":2"));
}

TEST_CASE("header must match the expected layout") {
  TempDir tmp;
  const auto bad1 = tmp.file("bad_header1.csv");
  write_file(bad1, "a,b,yield\n1,2,3\n");
  REQUIRE_THROWS_WITH(load_csv(bad1), Catch::Matchers::ContainsSubstring(":1"));

  const auto bad2 = tmp.file("bad_header2.csv");
  write_file(bad2, "f0,f1,label\n1,2,3\n");
  REQUIRE_THROWS_AS(load_csv(bad2), std::runtime_error);

  const auto empty = tmp.file("empty.csv");
  write_file(empty, "");
  REQUIRE_THROWS_AS(load_csv(empty), std::runtime_error);

  REQUIRE_THROWS_AS(load_csv(tmp.file("does_not_exist.csv")),
                    std::runtime_error);
}

TEST_CASE("tolerates CRLF line endings and a trailing newline") {
  TempDir tmp;
  const auto path = tmp.file("crlf.csv");
  write_file(path, "f0,yield\r\n1,50\r\n2,60\r\n");
  const Dataset d = load_csv(path);
  REQUIRE(d.size() == 2);
  REQUIRE(d[1].label == 60.0);
}
