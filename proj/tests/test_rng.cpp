#include "doctest.h"

#include <cmath>
#include <set>
#include <vector>

#include "gaplab/parallel.hpp"
#include "gaplab/rng.hpp"

using namespace gaplab;

TEST_CASE("philox matches the published known-answer vectors") {
  using A4 = std::array<std::uint32_t, 4>;
  CHECK(philox4x32_10({0, 0, 0, 0}, {0, 0}) == A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("seek makes draws a function of (seed, stream, step)") {
  CounterRng a(1, 2, Domain::walk), b(1, 2, Domain::walk);
  a.seek(10);
  double x = a.uniform();
  b.seek(9);
  (void)b.uniform();
  b.seek(10);
  CHECK(b.uniform() == x);
  CounterRng c(1, 3, Domain::walk);
  c.seek(10);
  CHECK(c.uniform() != x);
  CounterRng d(1, 2, Domain::base);
  d.seek(10);
  CHECK(d.uniform() != x);
}

TEST_CASE("uniform and normal moments") {
  CounterRng r(99, 0);
  const int n = 200000;
  double s = 0, s2 = 0, g = 0, g2 = 0, g4 = 0;
  for (int i = 0; i < n; ++i) {
    double u = r.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    s += u;
    s2 += u * u;
    double z = r.normal();
    g += z;
    g2 += z * z;
    g4 += z * z * z * z;
  }
  CHECK(std::abs(s / n - 0.5) < 4 * std::sqrt(1.0 / 12 / n));
  CHECK(std::abs(s2 / n - 1.0 / 3) < 0.005);
  CHECK(std::abs(g / n) < 4 / std::sqrt(n));
  CHECK(std::abs(g2 / n - 1.0) < 0.015);
  CHECK(std::abs(g4 / n - 3.0) < 0.1);
}

TEST_CASE("below is unbiased on a small range") {
  CounterRng r(5, 5);
  std::vector<int> counts(3, 0);
  for (int i = 0; i < 30000; ++i) ++counts[r.below(3)];
  for (int c : counts) CHECK(std::abs(c - 10000) < 4 * std::sqrt(30000 * (1.0 / 3) * (2.0 / 3)));
}

TEST_CASE("alias table reproduces its weights") {
  std::vector<double> w{0.1, 0.2, 0.3, 0.4};
  AliasTable t(w);
  CounterRng r(11, 0);
  const int n = 400000;
  std::vector<int> counts(4, 0);
  for (int i = 0; i < n; ++i) ++counts[t.sample(r)];
  for (int i = 0; i < 4; ++i) {
    double sd = std::sqrt(n * w[i] * (1 - w[i]));
    CHECK(std::abs(counts[i] - n * w[i]) < 4 * sd);
  }
  AliasTable point({0.0, 1.0, 0.0});
  for (int i = 0; i < 100; ++i) CHECK(point.sample(r) == 1);
  CHECK_THROWS(AliasTable(std::vector<double>{}));
  CHECK_THROWS(AliasTable({-1.0, 2.0}));
}

TEST_CASE("parallel_map is independent of the worker count") {
  auto f = [](std::size_t i) {
    CounterRng r(3, i);
    return r.uniform();
  };
  set_thread_count(1);
  auto a = parallel_map<double>(1000, f);
  set_thread_count(4);
  auto b = parallel_map<double>(1000, f);
  set_thread_count(0);
  CHECK(a == b);
}
