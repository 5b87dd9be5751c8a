#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "andlab/cutoff.hpp"
#include "andlab/disorder.hpp"
#include "andlab/hamiltonian.hpp"
#include "andlab/lattice.hpp"
#include "andlab/spectral.hpp"

using namespace andlab;

namespace {

DisorderField zero_field(const SiteIndex& box) {
  DisorderField f;
  f.values.assign(static_cast<std::size_t>(box.volume()), 0.0);
  return f;
}

std::vector<double> free_line_spectrum(int L) {
  std::vector<double> out(static_cast<std::size_t>(L));
  for (int k = 0; k < L; ++k)
    out[static_cast<std::size_t>(k)] =
        2.0 - 2.0 * std::cos(2.0 * std::numbers::pi * k / L);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("the coupling-free line has the cosine band") {
  const int L = 8;
  const auto box = build_box(1, L);
  const auto sys = eigensolve(assemble_hamiltonian(box, zero_field(box)), false);
  const auto exact = free_line_spectrum(L);
  for (int k = 0; k < L; ++k)
    CHECK(sys.values(k) == Catch::Approx(exact[static_cast<std::size_t>(k)]).margin(1e-12));
}

TEST_CASE("the coupling-free plane band is the sum of two line bands") {
  const int L = 4;
  const auto box = build_box(2, L);
  const auto sys = eigensolve(assemble_hamiltonian(box, zero_field(box)), false);
  std::vector<double> exact;
  for (int kx = 0; kx < L; ++kx)
    for (int ky = 0; ky < L; ++ky)
      exact.push_back(4.0 - 2.0 * std::cos(2.0 * std::numbers::pi * kx / L) -
                      2.0 * std::cos(2.0 * std::numbers::pi * ky / L));
  std::sort(exact.begin(), exact.end());
  for (long i = 0; i < box.volume(); ++i)
    CHECK(sys.values(i) == Catch::Approx(exact[static_cast<std::size_t>(i)]).margin(1e-12));
  CHECK(sys.values(box.volume() - 1) <= 8.0 + 1e-12);
  CHECK(sys.values(0) >= -1e-12);
}

TEST_CASE("the four-site ring spectrum is exactly {0, 2, 2, 4}") {
  const auto box = build_box(1, 4);
  const auto sys = eigensolve(assemble_hamiltonian(box, zero_field(box)), false);
  CHECK(sys.values(0) == Catch::Approx(0.0).margin(1e-14));
  CHECK(sys.values(1) == Catch::Approx(2.0).margin(1e-14));
  CHECK(sys.values(2) == Catch::Approx(2.0).margin(1e-14));
  CHECK(sys.values(3) == Catch::Approx(4.0).margin(1e-14));
}

TEST_CASE("nonnegative couplings keep the spectrum in [0, 4d + sup]") {
  const auto box = build_box(1, 32);
  const auto dist = DistributionSpec::uniform(0.0, 1.0);
  for (std::uint64_t r = 0; r < 5; ++r) {
    const auto sys = eigensolve(
        assemble_hamiltonian(box, sample_disorder(box, dist, 21, r)), false);
    CHECK(sys.values(0) >= -1e-12);
    CHECK(sys.values(box.volume() - 1) <= 4.0 + 1.0 + 1e-12);
  }
}

TEST_CASE("spectra are invariant under lattice translations of the field") {
  const auto box = build_box(1, 16);
  const auto field = sample_disorder(box, DistributionSpec::uniform(0.0, 1.0), 4, 0);
  DisorderField shifted;
  shifted.values.resize(field.values.size());
  for (long i = 0; i < box.volume(); ++i)
    shifted.values[static_cast<std::size_t>(box.neighbor(i, 0, +1))] =
        field.values[static_cast<std::size_t>(i)];
  const auto a = eigensolve(assemble_hamiltonian(box, field), false);
  const auto b = eigensolve(assemble_hamiltonian(box, shifted), false);
  for (long i = 0; i < box.volume(); ++i)
    CHECK(a.values(i) == Catch::Approx(b.values(i)).margin(1e-10));
}

TEST_CASE("asymmetric input is rejected before factorization") {
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(3, 3);
  M(0, 1) = 1.0;
  CHECK_THROWS_WITH(eigensolve_dense(M, false),
                    Catch::Matchers::ContainsSubstring("not symmetric"));
  CHECK_THROWS_WITH(eigensolve_dense(Eigen::MatrixXd::Zero(10, 10), false, 4),
                    Catch::Matchers::ContainsSubstring("volume cap exceeded"));
}

TEST_CASE("counting uses closed-interval conventions") {
  Eigen::VectorXd v(5);
  v << 1.0, 2.0, 2.0, 3.0, 5.0;
  CHECK(count_below(v, 2.0) == 3);
  CHECK(count_below(v, 1.999999) == 1);
  CHECK(count_below(v, 0.0) == 0);
  CHECK(count_below(v, 10.0) == 5);
  CHECK(count_in(v, EnergyInterval(2.0, 2.0)) == 2);
  CHECK(count_in(v, EnergyInterval(1.5, 3.0)) == 3);
  CHECK_THROWS(EnergyInterval(1.0, 0.5));
}

TEST_CASE("local weights resolve the identity and the flat ground state") {
  const int L = 8;
  const auto box = build_box(1, L);
  const auto sys = eigensolve(assemble_hamiltonian(box, zero_field(box)), true);
  for (long site : {0L, 3L}) {
    const double total = local_spectral_weight(sys, site, [](double) { return 1.0; });
    CHECK(total == Catch::Approx(1.0).margin(1e-12));
    // The bottom of the band is the constant vector, weight 1/L everywhere.
    const double bottom = local_spectral_weight(
        sys, site, [](double x) { return x < 0.1 ? 1.0 : 0.0; });
    CHECK(bottom == Catch::Approx(1.0 / L).margin(1e-12));
  }
}

TEST_CASE("heat kernel entries match the short-time expansion") {
  const auto box = build_box(1, 6);
  const auto field = sample_disorder(box, DistributionSpec::uniform(0.0, 1.0), 8, 0);
  const auto H = assemble_hamiltonian(box, field);
  const auto sys = eigensolve(H, true);
  const double t = 1e-3;
  const Eigen::MatrixXd heat =
      operator_function(sys, [t](double x) { return std::exp(-t * x); });
  const Eigen::MatrixXd Hd = H.dense();
  const Eigen::MatrixXd taylor = Eigen::MatrixXd::Identity(6, 6) - t * Hd +
                                 0.5 * t * t * Hd * Hd;
  CHECK((heat - taylor).cwiseAbs().maxCoeff() < 1e-7);
}

TEST_CASE("entry, row, and full-matrix evaluations agree") {
  const auto box = build_box(1, 12);
  const auto field = sample_disorder(box, DistributionSpec::uniform(0.0, 1.0), 5, 0);
  const auto sys = eigensolve(assemble_hamiltonian(box, field), true);
  auto g = [](double x) { return 1.0 / (1.0 + x * x); };
  const Eigen::MatrixXd full = operator_function(sys, g);
  const Eigen::VectorXd row = operator_row(sys, 7, g);
  for (long k = 0; k < box.volume(); ++k) {
    CHECK(row(k) == Catch::Approx(full(7, k)).margin(1e-13));
    CHECK(operator_entry(sys, 7, k, g) == Catch::Approx(full(7, k)).margin(1e-13));
  }
  double tr = 0.0;
  for (long i = 0; i < box.volume(); ++i) tr += full(i, i);
  CHECK(trace_function(sys, g) == Catch::Approx(tr).margin(1e-12));
  CHECK(sys.residual_bound < 1e-12);
}

TEST_CASE("smooth kernel rows on the free line match the Fourier sum") {
  // On the coupling-free ring every function of H is a circulant, and the row
  // through site 0 has the closed form (1/L) sum_j f(eps_j) cos(2 pi j k / L).
  // This checks the eigenbasis evaluation against plain trigonometry.
  const int L = 32;
  const auto box = build_box(1, L);
  const auto sys = eigensolve(assemble_hamiltonian(box, zero_field(box)), true);
  const SmoothCutoff f(0.5);
  const Eigen::VectorXd row = operator_row(sys, 0, [&](double x) { return f(x); });
  for (long k = 0; k < L; ++k) {
    double exact = 0.0;
    for (int j = 0; j < L; ++j) {
      const double eps = 2.0 - 2.0 * std::cos(2.0 * std::numbers::pi * j / L);
      exact += f(eps) * std::cos(2.0 * std::numbers::pi * j * k / L);
    }
    exact /= L;
    CHECK(row(k) == Catch::Approx(exact).margin(1e-10));
  }
}
