#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "qcf/rng.hpp"

using qcf::RandomStream;

TEST_CASE("same seed reproduces the sequence") {
  RandomStream a(12345), b(12345);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("different seeds and different split ids diverge") {
  RandomStream a(1), b(2);
  int equal = 0;
  for (int i = 0; i < 100; ++i) equal += (a.next_u64() == b.next_u64());
  CHECK(equal == 0);

  RandomStream root(7);
  RandomStream c1 = root.split(1), c2 = root.split(2);
  CHECK(c1.next_u64() != c2.next_u64());
  RandomStream c1_a = root.split(1), c1_b = root.split(1);
  CHECK(c1_a.next_u64() == c1_b.next_u64());
}

TEST_CASE("splitting does not disturb the parent stream") {
  RandomStream a(99), b(99);
  (void)a.split(5);
  (void)a.split(6);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("next_double lies in [0,1) and is uniform to 4 sigma") {
  RandomStream rng(2024);
  const int n = 100000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.next_double();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  const double mean = sum / n;
  const double sigma = std::sqrt(1.0 / 12.0 / n);
  CHECK(std::abs(mean - 0.5) < 4.0 * sigma);
}

TEST_CASE("uniform_int stays in range and hits every value") {
  RandomStream rng(5);
  std::set<std::uint32_t> seen;
  for (int i = 0; i < 1000; ++i) {
    const std::uint32_t v = rng.uniform_int(7);
    REQUIRE(v < 7);
    seen.insert(v);
  }
  CHECK(seen.size() == 7);
}

TEST_CASE("coin is a fair bit to 4 sigma") {
  RandomStream rng(31337);
  const int n = 100000;
  int ones = 0;
  for (int i = 0; i < n; ++i) ones += rng.coin();
  CHECK(std::abs(ones - n / 2.0) < 4.0 * std::sqrt(n * 0.25));
}
