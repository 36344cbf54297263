#include <doctest.h>

#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "latkde/errors.hpp"
#include "latkde/qmc.hpp"

using namespace latkde;

namespace {

std::vector<std::vector<double>> read_golden(const std::string& name) {
  std::ifstream in(std::string(LATKDE_GOLDEN_DIR) + "/" + name);
  REQUIRE(in);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::vector<double> row;
    for (double v; ss >> v;) row.push_back(v);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST_SUITE("qmc") {

TEST_CASE("golden prefix in d = 6") {
  const auto golden = read_golden("sobol_d6_first16.txt");
  REQUIRE(golden.size() == 16);
  const PointSet p = generate_shifts(16, 6);
  for (std::size_t i = 0; i < 16; ++i)
    for (std::size_t j = 0; j < 6; ++j) CHECK(p.at(i, j) == golden[i][j]);
}

TEST_CASE("first point and one-dimensional prefix") {
  const PointSet one = generate_shifts(1, 9);
  for (std::size_t j = 0; j < 9; ++j) CHECK(one.at(0, j) == 0.5);
  const PointSet p = generate_shifts(7, 1);
  const double expected[] = {0.5, 0.75, 0.25, 0.375, 0.875, 0.625, 0.125};
  for (std::size_t i = 0; i < 7; ++i) CHECK(p.at(i, 0) == expected[i]);
}

TEST_CASE("distinct points in [0,1)") {
  const PointSet p = generate_shifts(4096, 10);
  std::set<std::vector<double>> seen;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto x = p.point(i);
    for (double v : x) CHECK((v >= 0.0 && v < 1.0));
    seen.insert(x);
  }
  CHECK(seen.size() == p.size());
}

TEST_CASE("coordinate means") {
  const PointSet p = generate_shifts(1024, 6);
  for (std::size_t j = 0; j < 6; ++j) {
    double s = 0.0;
    for (double v : p.coordinate(j)) s += v;
    CHECK(std::abs(s / 1024.0 - 0.5) <= 0.02);
  }
}

TEST_CASE("determinism") {
  const PointSet a = generate_shifts(100, 15), b = generate_shifts(100, 15);
  for (std::size_t j = 0; j < 15; ++j)
    for (std::size_t i = 0; i < 100; ++i) CHECK(a.at(i, j) == b.at(i, j));
}

TEST_CASE("high dimension from the full table") {
  const PointSet p = generate_shifts(3, 21201);
  CHECK(p.at(0, 21200) == 0.5);
  CHECK_THROWS_AS(generate_shifts(3, 21202), ConfigError);
}

TEST_CASE("table limits") {
  const auto table = DirectionTable::load(default_direction_table_path(), 4);
  CHECK(table.max_dim() == 4);
  CHECK(table.entry(1).degree == 1);
  CHECK(table.entry(2).m == std::vector<std::uint32_t>{1, 3});
  CHECK(table.entry(3).m == std::vector<std::uint32_t>{1, 3, 1});
  CHECK_THROWS_AS(generate_shifts(2, 5, table), ConfigError);
  CHECK_THROWS_AS(DirectionTable::load("/nonexistent/dir/table.txt", 4), ConfigError);
}

}  // TEST_SUITE
