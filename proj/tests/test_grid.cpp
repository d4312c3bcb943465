#include <doctest.h>

#include <algorithm>

#include "asv/grid.hpp"
#include "helpers.hpp"

using namespace asv;

TEST_CASE("minimal grid parses with one deploy cell") {
  GridMap m = load_map("3 3\n111\n121\n111\n", "mini");
  CHECK(m.height == 3);
  CHECK(m.width == 3);
  CHECK(m.navigable_count() == 9);
  REQUIRE(m.deploy_zones.size() == 1);
  REQUIRE(m.deploy_zones[0].size() == 1);
  CHECK(m.deploy_zones[0][0].i == 1);
  CHECK(m.deploy_zones[0][0].j == 1);
}

TEST_CASE("shipped scenarios load with their published dimensions") {
  GridMap a = load_map_file(test::asset("scenario_a.map"));
  CHECK(a.height == 62);
  CHECK(a.width == 46);
  CHECK(a.name == "scenario_a");
  CHECK(!a.deploy_zones.empty());

  GridMap b = load_map_file(test::asset("scenario_b.map"));
  CHECK(b.height == 62);
  CHECK(b.width == 46);
  CHECK(b.navigable_count() < a.navigable_count());

  GridMap d = load_map_file(test::asset("desk_open.map"));
  CHECK(d.height == 24);
  CHECK(d.width == 18);
  CHECK(d.navigable_count() == 24 * 18);
  CHECK(d.deploy_cells().size() >= 4);
}

TEST_CASE("disconnected navigable regions are rejected") {
  CHECK_THROWS_AS(load_map("3 3\n100\n000\n002\n", "split"), MapError);
}

TEST_CASE("malformed grids are rejected") {
  CHECK_THROWS_AS(load_map("", "empty"), MapError);
  CHECK_THROWS_AS(load_map("2 2\n12\n", "short"), MapError);
  CHECK_THROWS_AS(load_map("2 2\n12\n111\n", "ragged"), MapError);
  CHECK_THROWS_AS(load_map("2 2\n12\nx1\n", "badchar"), MapError);
  CHECK_THROWS_AS(load_map("1 2\n11\n", "nodeploy"), MapError);
  CHECK_THROWS_AS(load_map("0 2\n", "badheader"), MapError);
  CHECK_THROWS_AS(load_map("1 1\n0\n", "nowater"), MapError);
}

TEST_CASE("comments and blank lines are ignored") {
  GridMap m = load_map("# a note\n\n2 2\n# rows follow\n12\n11\n", "commented");
  CHECK(m.height == 2);
  CHECK(m.navigable_count() == 4);
}

TEST_CASE("sensing disk uses a strict euclidean bound") {
  auto d1 = disk_offsets(1.0);
  REQUIRE(d1.size() == 1);
  CHECK(d1[0] == std::pair<int, int>{0, 0});

  auto d6 = disk_offsets(6.0);
  CHECK(d6.size() == 109);
  auto has = [&](int di, int dj) {
    return std::find(d6.begin(), d6.end(), std::pair<int, int>{di, dj}) != d6.end();
  };
  CHECK(has(0, 5));
  CHECK(has(3, 4));
  CHECK(has(-5, -3));
  CHECK(!has(0, 6));
  CHECK(!has(4, 5));
  CHECK(!has(-6, 0));
}

TEST_CASE("cell distance is euclidean between centers") {
  CHECK(cell_dist({0, 0}, {3, 4}) == doctest::Approx(5.0));
  CHECK(cell_dist({2, 2}, {2, 2}) == 0.0);
  CHECK(load_map("2 2\n12\n11\n", "m").diagonal() ==
        doctest::Approx(std::sqrt(8.0)));
}
