#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "andlab/disorder.hpp"
#include "andlab/lattice.hpp"

using andlab::build_box;
using andlab::DistributionSpec;
using andlab::mask_potential;
using andlab::sample_disorder;

TEST_CASE("distribution parsing accepts the documented forms") {
  const auto u = DistributionSpec::parse("uniform:0,2");
  CHECK(u.support_inf() == 0.0);
  CHECK(u.support_sup() == 2.0);
  CHECK(u.density_sup() == Catch::Approx(0.5));
  CHECK(u.label() == "uniform:0,2");

  const auto p = DistributionSpec::parse("piecewise:0,1,2;0.75,0.25");
  CHECK(p.support_sup() == 2.0);
  CHECK(p.density(0.5) == Catch::Approx(0.75));
  CHECK(p.density(1.5) == Catch::Approx(0.25));
  CHECK(DistributionSpec::parse(p.label()).label() == p.label());
}

TEST_CASE("distributions away from zero are rejected") {
  CHECK_THROWS_WITH(DistributionSpec::uniform(0.5, 1.0),
                    Catch::Matchers::ContainsSubstring("support infimum must be 0"));
  CHECK_THROWS_WITH(DistributionSpec::parse("piecewise:0.5,1;2"),
                    Catch::Matchers::ContainsSubstring("support infimum must be 0"));
}

TEST_CASE("densities must be nonnegative and integrate to one") {
  CHECK_THROWS_WITH(DistributionSpec::parse("piecewise:0,1;0.9"),
                    Catch::Matchers::ContainsSubstring("integrate to 1"));
  CHECK_THROWS_WITH(DistributionSpec::parse("piecewise:0,1,2;2,-1"),
                    Catch::Matchers::ContainsSubstring("nonnegative"));
  CHECK_THROWS_WITH(DistributionSpec::parse("piecewise:0,1;x"),
                    Catch::Matchers::ContainsSubstring("malformed number"));
}

TEST_CASE("quantiles invert the cumulative mass") {
  const auto u = DistributionSpec::uniform(0.0, 2.0);
  CHECK(u.quantile(0.25) == Catch::Approx(0.5));
  CHECK(u.quantile(0.0) == Catch::Approx(0.0));
  CHECK(u.quantile(1.0 - 1e-12) == Catch::Approx(2.0));
  CHECK_THROWS(u.quantile(1.0));
  CHECK_THROWS(u.quantile(-0.1));

  const auto p = DistributionSpec::parse("piecewise:0,1,2;0.75,0.25");
  CHECK(p.quantile(0.75) == Catch::Approx(1.0));
  CHECK(p.quantile(0.875) == Catch::Approx(1.5));

  // Zero-density stretch in the middle: mass 0.5 is reached at x = 1, and any
  // extra mass must come from beyond the gap.
  const auto gap = DistributionSpec::parse("piecewise:0,1,2,3;0.5,0,0.5");
  CHECK(gap.quantile(0.5 - 1e-9) < 1.0);
  CHECK(gap.quantile(0.5 + 1e-9) >= 2.0);
  CHECK(gap.quantile(0.75) == Catch::Approx(2.5));
}

TEST_CASE("density-weighted nodes reproduce low moments exactly") {
  const auto u = DistributionSpec::uniform(0.0, 3.0);
  const auto nodes = u.weighted_nodes(16);
  double mass = 0.0;
  double m1 = 0.0;
  double m2 = 0.0;
  for (const auto& [x, w] : nodes) {
    mass += w;
    m1 += w * x;
    m2 += w * x * x;
  }
  CHECK(mass == Catch::Approx(1.0).margin(1e-13));
  CHECK(m1 == Catch::Approx(1.5).margin(1e-12));
  CHECK(m2 == Catch::Approx(3.0).margin(1e-12));

  const auto p = DistributionSpec::parse("piecewise:0,1,2;0.75,0.25");
  double pm1 = 0.0;
  for (const auto& [x, w] : p.weighted_nodes(16)) pm1 += w * x;
  // 0.75 * 1/2 + 0.25 * 3/2
  CHECK(pm1 == Catch::Approx(0.75).margin(1e-12));
}

TEST_CASE("sampled fields are reproducible and distributed as requested") {
  const auto box = build_box(1, 64);
  const auto dist = DistributionSpec::uniform(0.0, 1.0);
  const auto a = sample_disorder(box, dist, 9, 0);
  const auto b = sample_disorder(box, dist, 9, 0);
  CHECK(a.values == b.values);
  CHECK(sample_disorder(box, dist, 9, 1).values != a.values);

  double sum = 0.0;
  int count = 0;
  for (int r = 0; r < 400; ++r) {
    const auto f = sample_disorder(box, dist, 10, static_cast<std::uint64_t>(r));
    for (double v : f.values) {
      REQUIRE(v >= 0.0);
      REQUIRE(v <= 1.0);
      sum += v;
      ++count;
    }
  }
  CHECK(std::abs(sum / count - 0.5) < 0.01);
}

TEST_CASE("masking zeroes the complement of the kept set") {
  const auto box = build_box(1, 8);
  auto field = sample_disorder(box, DistributionSpec::uniform(0.0, 1.0), 3, 0);
  const auto masked = mask_potential(field, {1, 5});
  for (std::size_t i = 0; i < 8; ++i) {
    if (i == 1 || i == 5)
      CHECK(masked.values[i] == field.values[i]);
    else
      CHECK(masked.values[i] == 0.0);
  }
  CHECK_THROWS_WITH(mask_potential(field, {8}),
                    Catch::Matchers::ContainsSubstring("outside"));
}
