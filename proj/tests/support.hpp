#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "andlab/rng.hpp"

namespace testsupport {

// Homogeneous Poisson process on [-window, window]: count first, then
// positions, all driven by the counter generator so runs are reproducible.
inline std::vector<std::vector<double>> poisson_point_sets(std::uint64_t seed,
                                                           int realizations,
                                                           double rate,
                                                           double window) {
  std::vector<std::vector<double>> sets(static_cast<std::size_t>(realizations));
  const double lambda = 2.0 * window * rate;
  const double floor = std::exp(-lambda);
  for (int r = 0; r < realizations; ++r) {
    std::uint64_t lane = 0;
    double prod = 1.0;
    int count = -1;
    do {
      prod *= andlab::rng::uniform01(seed, static_cast<std::uint64_t>(r), 0, lane++);
      ++count;
    } while (prod > floor);
    auto& pts = sets[static_cast<std::size_t>(r)];
    pts.resize(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
      const double u =
          andlab::rng::uniform01(seed, static_cast<std::uint64_t>(r), 1, static_cast<std::uint64_t>(i));
      pts[static_cast<std::size_t>(i)] = window * (2.0 * u - 1.0);
    }
    std::sort(pts.begin(), pts.end());
  }
  return sets;
}

}  // namespace testsupport
