#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "andlab/lattice.hpp"

using andlab::build_box;
using andlab::choose_decoupling_sublattice;
using andlab::SiteIndex;

TEST_CASE("coordinates and flat indices round-trip") {
  for (const auto& [d, L] : std::vector<std::pair<int, int>>{{1, 8}, {2, 6}, {3, 4}}) {
    const SiteIndex box = build_box(d, L);
    REQUIRE(box.volume() == std::lround(std::pow(L, d)));
    for (long i = 0; i < box.volume(); ++i) {
      const auto c = box.coord(i);
      for (int a = 0; a < d; ++a) {
        CHECK(c[static_cast<std::size_t>(a)] >= -L / 2);
        CHECK(c[static_cast<std::size_t>(a)] < L - L / 2);
      }
      CHECK(box.index(c) == i);
    }
  }
}

TEST_CASE("indexing wraps periodically") {
  const SiteIndex box = build_box(2, 6);
  const auto c = box.coord(17);
  auto shifted = c;
  shifted[0] += 6;
  shifted[1] -= 12;
  CHECK(box.index(shifted) == 17);
}

TEST_CASE("neighbor stencil is symmetric and has degree 2d") {
  const SiteIndex box = build_box(2, 6);
  for (long i = 0; i < box.volume(); ++i) {
    const auto nbrs = box.neighbors(i);
    REQUIRE(nbrs.size() == 4);
    for (long j : nbrs) {
      const auto back = box.neighbors(j);
      CHECK(std::count(back.begin(), back.end(), i) == 1);
    }
  }
}

TEST_CASE("neighbor steps move one unit along one axis") {
  const SiteIndex box = build_box(3, 4);
  for (long i : {0L, 13L, 63L}) {
    for (int axis = 0; axis < 3; ++axis) {
      const auto c = box.coord(i);
      auto cp = c;
      cp[static_cast<std::size_t>(axis)] += 1;
      CHECK(box.neighbor(i, axis, +1) == box.index(cp));
      cp[static_cast<std::size_t>(axis)] -= 2;
      CHECK(box.neighbor(i, axis, -1) == box.index(cp));
    }
  }
}

TEST_CASE("box construction rejects bad shapes") {
  CHECK_THROWS_WITH(build_box(0, 8), Catch::Matchers::ContainsSubstring("dimension"));
  CHECK_THROWS_WITH(build_box(1, 1), Catch::Matchers::ContainsSubstring("side length"));
  CHECK_THROWS_WITH(build_box(3, 17), Catch::Matchers::ContainsSubstring("volume cap exceeded"));
  CHECK_NOTHROW(build_box(3, 17, {}, 17L * 17L * 17L));
}

TEST_CASE("squared distances respect the torus metric") {
  const SiteIndex box = build_box(1, 8);
  CHECK(box.norm2(box.index({-4})) == 16);  // half way around
  CHECK(box.norm2(box.index({-1})) == 1);
  CHECK(box.norm2(box.index({7})) == 1);  // wraps to coordinate -1
}

TEST_CASE("the mod-4 sublattice tiles the box at density 4^-d") {
  for (const auto& [d, L] : std::vector<std::pair<int, int>>{{1, 8}, {2, 8}}) {
    const SiteIndex box = build_box(d, L);
    const auto sub = choose_decoupling_sublattice(box, 1);
    const auto sites = sub.sites(box);
    const long expected = box.volume() / (1L << (2 * d));
    CHECK(static_cast<long>(sites.size()) == expected);
    for (long s : sites) CHECK(box.residue4(s) == sub.offset);
  }
}

TEST_CASE("the chosen sublattice avoids the origin and the probe site") {
  const SiteIndex line = build_box(1, 8);
  const auto sub = choose_decoupling_sublattice(line, line.index({2}));
  CHECK(sub.offset == std::vector<int>{1});

  // Exhaustive check in d = 2: the offset must be the lexicographically first
  // residue class containing neither excluded site.
  const SiteIndex plane = build_box(2, 8);
  const auto r0 = plane.residue4(plane.index({0, 0}));
  for (long k = 1; k < plane.volume(); ++k) {
    const auto pick = choose_decoupling_sublattice(plane, k);
    const auto rk = plane.residue4(k);
    REQUIRE(pick.offset != r0);
    REQUIRE(pick.offset != rk);
    std::vector<int> first;
    for (int a = 0; a < 4 && first.empty(); ++a)
      for (int b = 0; b < 4 && first.empty(); ++b) {
        const std::vector<int> cand{a, b};
        if (cand != r0 && cand != rk) first = cand;
      }
    REQUIRE(pick.offset == first);
  }
}

TEST_CASE("sublattice selection needs a side divisible by 4") {
  const SiteIndex box = build_box(1, 6);
  CHECK_THROWS_WITH(choose_decoupling_sublattice(box, 1),
                    Catch::Matchers::ContainsSubstring("divisible by 4"));
}
