#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "gridcop/io.hpp"
#include "helpers.hpp"

using namespace gridcop;
using gridcop::testing::random_copula;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "gridcop_io_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("grid text round trip") {
  const Grid g({{0.25, 0.5, 1.0}, {1.0 / 3.0, 1.0}});
  const Grid back = grid_from_text(grid_to_text(g));
  CHECK(back == g);  // 17 significant digits round-trip doubles exactly
  CHECK_THROWS_AS(grid_from_text("1 2 0.5 1"), IoError);
  CHECK_THROWS_AS(grid_from_text("2 2 0.5"), IoError);
}

TEST_CASE("csv dataset io") {
  const auto path = temp_file("data.csv");
  {
    std::ofstream out(path);
    out << "a,b\n0.5,0.25\n0.125,0.75\n";
  }
  const Dataset d = read_csv_dataset(path, true);
  CHECK(d.n == 2);
  CHECK(d.d == 2);
  CHECK(d.at(1, 0) == 0.125);

  const Dataset sub = read_csv_dataset(path, true, {1});
  CHECK(sub.d == 1);
  CHECK(sub.at(0, 0) == 0.25);

  {
    std::ofstream out(path);
    out << "0.5,abc\n";
  }
  CHECK_THROWS_AS(read_csv_dataset(path, false), IoError);
  CHECK_THROWS_AS(read_csv_dataset(temp_file("missing.csv"), false), IoError);
}

TEST_CASE("copula file round trip") {
  const auto path = temp_file("c.copula");
  const GridCopula c = random_copula(Grid::uniform(2, 4), 200, 5);
  write_copula(path, c);
  const GridCopula back = read_copula(path);
  CHECK(back.grid() == c.grid());
  for (std::size_t f = 0; f < c.grid().cell_count(); ++f) {
    CHECK(back.mass_at(f) == c.mass_at(f));  // exact via %.17g
  }
  {
    std::ofstream out(path);
    out << "NOT-A-COPULA\n";
  }
  CHECK_THROWS_AS(read_copula(path), IoError);
}

TEST_CASE("chain round trip, text and binary") {
  const Grid g = Grid::uniform(2, 3);
  std::vector<std::vector<double>> samples;
  for (int s = 0; s < 5; ++s) {
    const GridCopula c = random_copula(g, 50 + s, 100 + s);
    samples.emplace_back(c.mass().begin(), c.mass().end());
  }

  for (auto fmt : {ChainFormat::text, ChainFormat::binary}) {
    const auto path = temp_file(fmt == ChainFormat::text ? "chain.txt" : "chain.bin");
    write_chain(path, g, samples, fmt);
    const ChainFile back = read_chain(path);
    CHECK(back.grid == g);
    REQUIRE(back.samples.size() == samples.size());
    for (std::size_t s = 0; s < samples.size(); ++s) {
      for (std::size_t f = 0; f < g.cell_count(); ++f) {
        CHECK(back.samples[s][f] == samples[s][f]);
      }
    }
  }

  // Empty chain: header-only file still round-trips.
  const auto empty_path = temp_file("empty.txt");
  write_chain(empty_path, g, {}, ChainFormat::text);
  CHECK(read_chain(empty_path).samples.empty());

  // 3-sample chain on a 2x2 grid is 5 lines + the count line.
  const auto small_path = temp_file("small.txt");
  const Grid g2 = Grid::uniform(2, 2);
  write_chain(small_path, g2,
              {{0.25, 0.25, 0.25, 0.25}, {0.5, 0.0, 0.0, 0.5}, {0.1, 0.4, 0.4, 0.1}},
              ChainFormat::text);
  std::ifstream in(small_path);
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) ++lines;
  CHECK(lines == 6);
}

TEST_CASE("chain truncation detection") {
  const Grid g = Grid::uniform(2, 2);
  const auto path = temp_file("bad.txt");

  // Missing count line.
  {
    std::ofstream out(path);
    out << "GRIDCOP-CHAIN 1\n" << grid_to_text(g) << "\n0.25 0.25 0.25 0.25\n";
  }
  CHECK_THROWS_AS(read_chain(path), IoError);

  // Wrong declared count.
  {
    std::ofstream out(path);
    out << "GRIDCOP-CHAIN 1\n" << grid_to_text(g) << "\n0.25 0.25 0.25 0.25\ncount 2\n";
  }
  CHECK_THROWS_AS(read_chain(path), IoError);

  // Version / magic mismatch.
  {
    std::ofstream out(path);
    out << "GRIDCOP-CHAIN 9\n" << grid_to_text(g) << "\ncount 0\n";
  }
  CHECK_THROWS_AS(read_chain(path), IoError);

  // Truncated sample line.
  {
    std::ofstream out(path);
    out << "GRIDCOP-CHAIN 1\n" << grid_to_text(g) << "\n0.25 0.25\ncount 1\n";
  }
  CHECK_THROWS_AS(read_chain(path), IoError);
}

TEST_CASE("format_double round trips") {
  Rng rng(3);
  for (int t = 0; t < 1000; ++t) {
    const double x = rng.normal() * std::pow(10.0, static_cast<double>(rng.uniform_int(20)) - 10.0);
    CHECK(std::stod(format_double(x)) == x);
  }
}

TEST_CASE("fnv1a is stable") {
  CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a("a") != fnv1a("b"));
  CHECK(fnv1a("config") == fnv1a("config"));
}
