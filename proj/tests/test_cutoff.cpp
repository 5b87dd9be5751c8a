#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "andlab/cutoff.hpp"

using andlab::audit_cutoff;
using andlab::SmoothCutoff;

TEST_CASE("the shape function steps down smoothly from 1 to 0") {
  CHECK(SmoothCutoff::shape(-1.0) == 1.0);
  CHECK(SmoothCutoff::shape(0.0) == 1.0);
  CHECK(SmoothCutoff::shape(1.0) == 0.0);
  CHECK(SmoothCutoff::shape(2.0) == 0.0);
  // Midpoint is exact by mirror symmetry of the two bump factors.
  CHECK(SmoothCutoff::shape(0.5) == Catch::Approx(0.5).margin(1e-15));
  for (double x : {0.2, 0.35, 0.7})
    CHECK(SmoothCutoff::shape(x) + SmoothCutoff::shape(1.0 - x) ==
          Catch::Approx(1.0).margin(1e-14));
  // Same symmetry, differentiated once and twice.
  CHECK(SmoothCutoff::shape_derivative(1, 0.3) ==
        Catch::Approx(SmoothCutoff::shape_derivative(1, 0.7)).epsilon(1e-12));
  CHECK(SmoothCutoff::shape_derivative(2, 0.3) ==
        Catch::Approx(-SmoothCutoff::shape_derivative(2, 0.7)).epsilon(1e-12));
}

TEST_CASE("analytic derivatives match finite differences of the next order down") {
  const double h = 1e-5;
  for (int order = 1; order <= 6; ++order) {
    for (double x : {0.15, 0.3, 0.5, 0.7, 0.85}) {
      const double fd = (SmoothCutoff::shape_derivative(order - 1, x + h) -
                         SmoothCutoff::shape_derivative(order - 1, x - h)) /
                        (2.0 * h);
      const double exact = SmoothCutoff::shape_derivative(order, x);
      CHECK(fd == Catch::Approx(exact).margin(1e-4 * std::max(1.0, std::abs(exact))));
    }
  }
}

TEST_CASE("cutoff plateaus are exact at machine precision") {
  const double E = 0.25;
  const SmoothCutoff f(E);
  for (double t : {0.0, 0.1, 0.2, E}) CHECK(f(t) == 1.0);
  for (double t : {2.0 * E, 0.6, 1.0, 100.0}) CHECK(f(t) == 0.0);
  for (int order = 1; order <= 4; ++order) {
    CHECK(f.derivative(order, 0.5 * E) == 0.0);
    CHECK(f.derivative(order, 3.0 * E) == 0.0);
  }
  CHECK(f(1.5 * E) > 0.0);
  CHECK(f(1.5 * E) < 1.0);
}

TEST_CASE("derivatives carry the expected power of the scale") {
  const SmoothCutoff narrow(0.1);
  const SmoothCutoff wide(0.4);
  for (int order : {1, 2, 3}) {
    const double a = narrow.derivative(order, 0.15);   // x = 0.5
    const double b = wide.derivative(order, 0.6);      // x = 0.5
    CHECK(a * std::pow(0.1, order) ==
          Catch::Approx(b * std::pow(0.4, order)).epsilon(1e-12));
  }
}

TEST_CASE("scaled derivative sups are uniform in the scale") {
  const auto a = audit_cutoff(0.02, 8);
  const auto b = audit_cutoff(0.1, 8);
  const auto c = audit_cutoff(0.5, 8);
  for (int j = 0; j <= 8; ++j) {
    CHECK(std::isfinite(a.sup_scaled[static_cast<std::size_t>(j)]));
    CHECK(a.sup_scaled[static_cast<std::size_t>(j)] ==
          Catch::Approx(b.sup_scaled[static_cast<std::size_t>(j)]).epsilon(1e-10));
    CHECK(b.sup_scaled[static_cast<std::size_t>(j)] ==
          Catch::Approx(c.sup_scaled[static_cast<std::size_t>(j)]).epsilon(1e-10));
  }
  CHECK(a.range_ok);
  CHECK(a.monotone_ok);
  CHECK(a.plateau_ok);
  CHECK(a.sup_scaled[0] == 1.0);
}

TEST_CASE("the recurrence stays finite at the top admitted order") {
  for (double x : {0.1, 0.5, 0.9})
    CHECK(std::isfinite(SmoothCutoff::shape_derivative(SmoothCutoff::kMaxOrder, x)));
}

TEST_CASE("invalid cutoff parameters are rejected") {
  CHECK_THROWS_WITH(SmoothCutoff(0.0),
                    Catch::Matchers::ContainsSubstring("scale must be positive"));
  CHECK_THROWS_WITH(SmoothCutoff(-1.0),
                    Catch::Matchers::ContainsSubstring("scale must be positive"));
  CHECK_THROWS_WITH(SmoothCutoff::shape_derivative(SmoothCutoff::kMaxOrder + 1, 0.5),
                    Catch::Matchers::ContainsSubstring("order out of range"));
  CHECK_THROWS_WITH(audit_cutoff(0.1, SmoothCutoff::kMaxOrder + 1),
                    Catch::Matchers::ContainsSubstring("order out of range"));
}
