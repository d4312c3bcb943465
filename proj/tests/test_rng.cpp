#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "asv/rng.hpp"

using namespace asv;

TEST_CASE("named streams are reproducible and decoupled") {
  Rng a1 = Rng::stream(42, "alpha");
  Rng a2 = Rng::stream(42, "alpha");
  Rng b = Rng::stream(42, "beta");
  Rng a_idx = Rng::stream(42, "alpha", 1);
  Rng a_master = Rng::stream(43, "alpha");

  bool b_differs = false, idx_differs = false, master_differs = false;
  for (int k = 0; k < 16; ++k) {
    uint64_t v = a1.next_u64();
    CHECK(v == a2.next_u64());
    b_differs |= v != b.next_u64();
    idx_differs |= v != a_idx.next_u64();
    master_differs |= v != a_master.next_u64();
  }
  CHECK(b_differs);
  CHECK(idx_differs);
  CHECK(master_differs);
}

TEST_CASE("uniform covers [0,1) without escaping it") {
  Rng rng(7);
  double lo = 1.0, hi = 0.0;
  for (int k = 0; k < 100000; ++k) {
    double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  CHECK(lo < 0.001);
  CHECK(hi > 0.999);
}

TEST_CASE("uniform_int is unbiased over its range") {
  Rng rng(11);
  const int n = 6, draws = 120000;
  std::vector<int> count(n, 0);
  for (int k = 0; k < draws; ++k) {
    int v = rng.uniform_int(n);
    REQUIRE(v >= 0);
    REQUIRE(v < n);
    ++count[v];
  }
  for (int v = 0; v < n; ++v)
    CHECK(std::abs(count[v] / double(draws) - 1.0 / n) < 0.01);
}

TEST_CASE("normal draws match their first two moments") {
  Rng rng(13);
  const int draws = 200000;
  double sum = 0.0, sq = 0.0;
  for (int k = 0; k < draws; ++k) {
    double x = rng.normal(2.0, 3.0);
    sum += x;
    sq += x * x;
  }
  double m = sum / draws;
  double sd = std::sqrt(sq / draws - m * m);
  CHECK(std::abs(m - 2.0) < 0.05);
  CHECK(std::abs(sd - 3.0) < 0.05);
}

TEST_CASE("serialize captures the exact stream position") {
  Rng rng(99);
  for (int k = 0; k < 3; ++k) rng.next_u64();
  std::string saved = rng.serialize();
  std::vector<uint64_t> expect;
  for (int k = 0; k < 5; ++k) expect.push_back(rng.next_u64());

  Rng restored(0);
  restored.deserialize(saved);
  for (uint64_t v : expect) CHECK(restored.next_u64() == v);
}
