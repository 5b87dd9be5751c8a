#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstring>
#include <stdexcept>
#include <vector>

#include "andlab/accumulator.hpp"
#include "andlab/parallel.hpp"
#include "andlab/rng.hpp"

using andlab::McAccumulator;
using andlab::parallel_for;

namespace {

bool same_bits(const McAccumulator& a, const McAccumulator& b) {
  return a.n == b.n && std::memcmp(&a.mean, &b.mean, sizeof(double)) == 0 &&
         std::memcmp(&a.m2, &b.m2, sizeof(double)) == 0;
}

std::vector<double> draws(int n, std::uint64_t seed) {
  std::vector<double> xs(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    xs[static_cast<std::size_t>(i)] =
        andlab::rng::uniform01(seed, 0, static_cast<std::uint64_t>(i)) * 10.0 - 3.0;
  return xs;
}

}  // namespace

TEST_CASE("streaming moments agree with the two-pass formulas") {
  const auto xs = draws(10000, 31);
  McAccumulator acc;
  for (double x : xs) acc.add(x);

  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double var = ss / (static_cast<double>(xs.size()) - 1.0);

  CHECK(acc.n == 10000);
  CHECK(acc.mean == Catch::Approx(mean).epsilon(1e-12));
  CHECK(acc.variance() == Catch::Approx(var).epsilon(1e-10));
  CHECK(acc.std_error() ==
        Catch::Approx(std::sqrt(var / static_cast<double>(xs.size()))).epsilon(1e-10));
}

TEST_CASE("merging partials is commutative to the bit") {
  const auto xs = draws(501, 32);
  McAccumulator a;
  McAccumulator b;
  for (std::size_t i = 0; i < xs.size(); ++i) (i < 200 ? a : b).add(xs[i]);
  CHECK(same_bits(McAccumulator::merged(a, b), McAccumulator::merged(b, a)));

  McAccumulator serial;
  for (double x : xs) serial.add(x);
  const auto merged = McAccumulator::merged(a, b);
  CHECK(merged.n == serial.n);
  CHECK(merged.mean == Catch::Approx(serial.mean).epsilon(1e-13));
  CHECK(merged.m2 == Catch::Approx(serial.m2).epsilon(1e-11));
}

TEST_CASE("merging with an empty accumulator is the identity") {
  McAccumulator a;
  a.add(1.5);
  a.add(-2.5);
  const McAccumulator empty;
  CHECK(same_bits(McAccumulator::merged(a, empty), a));
  CHECK(same_bits(McAccumulator::merged(empty, a), a));
  CHECK(McAccumulator::merged(empty, empty).n == 0);
}

TEST_CASE("too few samples yield NaN spread estimates") {
  McAccumulator acc;
  CHECK(std::isnan(acc.std_error()));
  acc.add(3.0);
  CHECK(std::isnan(acc.variance()));
  CHECK(acc.mean == 3.0);
}

TEST_CASE("parallel slots are filled independently of the worker count") {
  const int n = 200;
  auto run = [n](int workers) {
    std::vector<double> slot(static_cast<std::size_t>(n), 0.0);
    parallel_for(n, workers, [&](long i) {
      slot[static_cast<std::size_t>(i)] =
          andlab::rng::uniform01(77, static_cast<std::uint64_t>(i), 0);
    });
    return slot;
  };
  const auto serial = run(1);
  CHECK(run(4) == serial);
  CHECK(run(8) == serial);
}

TEST_CASE("worker exceptions surface at the call site") {
  CHECK_THROWS_WITH(parallel_for(50, 4,
                                 [](long i) {
                                   if (i == 33)
                                     throw std::runtime_error("bad slot");
                                 }),
                    Catch::Matchers::ContainsSubstring("bad slot"));
}
