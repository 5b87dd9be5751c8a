#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "andlab/accumulator.hpp"
#include "andlab/disorder.hpp"
#include "andlab/hamiltonian.hpp"
#include "andlab/lattice.hpp"
#include "andlab/parallel.hpp"
#include "andlab/spectral.hpp"

// Monte Carlo estimators over disorder realizations.  Every estimator follows
// the same discipline: realization r is a pure function of (seed, r), workers
// fill one output slot per realization, and the slots are reduced in index
// order.  Rerunning with a different worker count reproduces the numbers bit
// for bit.

namespace andlab {

struct RunOptions {
  unsigned workers = 1;
  long volume_cap = kDefaultVolumeCap;
};

// ---- integrated density of states ----

struct IdsCurve {
  std::vector<double> grid;
  std::vector<double> n_hat;
  std::vector<double> std_err;
  long long samples = 0;
  std::uint64_t seed = 0;
  long volume = 0;
};

// N_hat(E) = average over realizations of |Lambda|^{-1} #{eigenvalues <= E}.
inline IdsCurve estimate_ids(const SiteIndex& box, const DistributionSpec& dist,
                             const std::vector<double>& grid,
                             long long samples, std::uint64_t seed,
                             const RunOptions& opt = {}) {
  if (grid.empty()) throw std::invalid_argument("energy grid is empty");
  for (std::size_t g = 0; g + 1 < grid.size(); ++g)
    if (!(grid[g] < grid[g + 1]))
      throw std::invalid_argument("energy grid must be strictly increasing");
  if (samples < 1) throw std::invalid_argument("samples must be at least 1");

  std::vector<std::vector<long>> counts(samples);
  parallel_for(samples, opt.workers, [&](std::size_t r) {
    DisorderField field = sample_disorder(box, dist, seed, r);
    EigenSystem sys =
        eigensolve(assemble_hamiltonian(box, field), false, opt.volume_cap);
    std::vector<long> row(grid.size());
    for (std::size_t g = 0; g < grid.size(); ++g)
      row[g] = count_below(sys.values, grid[g]);
    counts[r] = std::move(row);
  });

  std::vector<McAccumulator> acc(grid.size());
  for (long long r = 0; r < samples; ++r)
    for (std::size_t g = 0; g < grid.size(); ++g)
      acc[g].add(static_cast<double>(counts[r][g]) / box.volume());

  IdsCurve curve;
  curve.grid = grid;
  curve.samples = samples;
  curve.seed = seed;
  curve.volume = box.volume();
  curve.n_hat.resize(grid.size());
  curve.std_err.resize(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    curve.n_hat[g] = acc[g].mean;
    curve.std_err[g] = acc[g].std_error();
  }
  return curve;
}

// ---- density of states ----

struct DosEstimate {
  std::vector<double> edges;
  std::vector<double> n_hat;          // histogram density per unit energy
  std::vector<double> std_err;
  std::vector<double> n_smooth;       // advisory smoothed curve
  std::vector<long long> pooled_counts;
  double bandwidth = 0.0;
  long long samples = 0;
  std::uint64_t seed = 0;
  long volume = 0;

  double center(std::size_t j) const {
    return 0.5 * (edges[j] + edges[j + 1]);
  }
};

// Bin index for an eigenvalue; bins are [e_j, e_{j+1}), the top edge closed.
// Eigensolver rounding may push an eigenvalue marginally past the covering
// interval, so a small tolerance is absorbed into the boundary bins.
inline std::size_t dos_bin(const std::vector<double>& edges, double lambda) {
  if (lambda < edges.front() - 1e-9 || lambda > edges.back() + 1e-9)
    throw std::runtime_error("eigenvalue outside the covering bin range");
  auto it = std::upper_bound(edges.begin(), edges.end(), lambda);
  long j = (it - edges.begin()) - 1;
  if (j < 0) j = 0;
  if (j >= static_cast<long>(edges.size()) - 1)
    j = static_cast<long>(edges.size()) - 2;
  return static_cast<std::size_t>(j);
}

// Histogram of record plus a Gaussian-kernel smoothed companion.  The raw
// histogram is what downstream consumers should trust; the smoothed curve is
// advisory and clearly labeled as such in the emitted schema.
inline DosEstimate estimate_dos(const SiteIndex& box,
                                const DistributionSpec& dist,
                                const std::vector<double>& edges,
                                long long samples, std::uint64_t seed,
                                double bandwidth = 0.0,
                                const RunOptions& opt = {}) {
  if (edges.size() < 2)
    throw std::invalid_argument("need at least one histogram bin");
  for (std::size_t j = 0; j + 1 < edges.size(); ++j)
    if (!(edges[j] < edges[j + 1]))
      throw std::invalid_argument("bin edges must be strictly increasing");
  double top = 4.0 * box.dim() + dist.support_sup();
  if (edges.front() > 0.0 || edges.back() < top)
    throw std::invalid_argument(
        "bins must cover the almost-sure spectral interval [0, " +
        fmt_double(top) + "]");
  if (samples < 1) throw std::invalid_argument("samples must be at least 1");

  const std::size_t nbins = edges.size() - 1;
  std::vector<std::vector<long>> counts(samples);
  parallel_for(samples, opt.workers, [&](std::size_t r) {
    DisorderField field = sample_disorder(box, dist, seed, r);
    EigenSystem sys =
        eigensolve(assemble_hamiltonian(box, field), false, opt.volume_cap);
    std::vector<long> row(nbins, 0);
    for (long i = 0; i < sys.values.size(); ++i)
      ++row[dos_bin(edges, sys.values(i))];
    counts[r] = std::move(row);
  });

  std::vector<McAccumulator> acc(nbins);
  std::vector<long long> pooled(nbins, 0);
  for (long long r = 0; r < samples; ++r)
    for (std::size_t j = 0; j < nbins; ++j) {
      double width = edges[j + 1] - edges[j];
      acc[j].add(counts[r][j] / (box.volume() * width));
      pooled[j] += counts[r][j];
    }

  DosEstimate dos;
  dos.edges = edges;
  dos.samples = samples;
  dos.seed = seed;
  dos.volume = box.volume();
  dos.pooled_counts = std::move(pooled);
  dos.n_hat.resize(nbins);
  dos.std_err.resize(nbins);
  for (std::size_t j = 0; j < nbins; ++j) {
    dos.n_hat[j] = acc[j].mean;
    dos.std_err[j] = acc[j].std_error();
  }

  double mean_width = (edges.back() - edges.front()) / nbins;
  dos.bandwidth = bandwidth > 0.0 ? bandwidth : 2.0 * mean_width;
  dos.n_smooth.resize(nbins);
  for (std::size_t j = 0; j < nbins; ++j) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < nbins; ++i) {
      double width = edges[i + 1] - edges[i];
      double z = (dos.center(i) - dos.center(j)) / dos.bandwidth;
      double k = std::exp(-0.5 * z * z) * width;
      num += k * dos.n_hat[i];
      den += k;
    }
    dos.n_smooth[j] = num / den;
  }
  return dos;
}

// ---- Wegner ratio ----

struct WegnerReport {
  EnergyInterval interval;
  double trp_mean = 0.0;
  double trp_stderr = 0.0;
  double k_hat = 0.0;     // trp_mean / (rho_sup |I| |Lambda|)
  double k_stderr = 0.0;
  double rho_sup = 0.0;
  long long samples = 0;
  long volume = 0;
  bool flagged = false;   // k_hat exceeds 1 beyond 3 standard errors
};

inline WegnerReport wegner_ratio(const SiteIndex& box,
                                 const DistributionSpec& dist,
                                 const EnergyInterval& I, long long samples,
                                 std::uint64_t seed,
                                 const RunOptions& opt = {}) {
  if (!(I.width() > 0.0))
    throw std::invalid_argument("zero-width interval: ratio undefined");
  if (samples < 1) throw std::invalid_argument("samples must be at least 1");

  std::vector<long> counts(samples);
  parallel_for(samples, opt.workers, [&](std::size_t r) {
    DisorderField field = sample_disorder(box, dist, seed, r);
    EigenSystem sys =
        eigensolve(assemble_hamiltonian(box, field), false, opt.volume_cap);
    counts[r] = count_in(sys.values, I);
  });

  McAccumulator acc;
  for (long long r = 0; r < samples; ++r)
    acc.add(static_cast<double>(counts[r]));

  WegnerReport rep{I};
  rep.trp_mean = acc.mean;
  rep.trp_stderr = acc.std_error();
  rep.rho_sup = dist.density_sup();
  rep.samples = samples;
  rep.volume = box.volume();
  double denom = rep.rho_sup * I.width() * box.volume();
  rep.k_hat = rep.trp_mean / denom;
  rep.k_stderr = rep.trp_stderr / denom;
  rep.flagged = rep.k_hat - 3.0 * rep.k_stderr > 1.0;
  return rep;
}

// ---- spectral averaging ----

struct SpectralAveragingReport {
  long site = 0;
  EnergyInterval interval;
  double average = 0.0;
  double std_err = 0.0;
  double bound = 0.0;     // rho_sup |I|
  int nodes = 0;
  long long samples = 0;
  bool flagged = false;
};

// Averages <delta_site, P(I) delta_site> over the coupling at one site with a
// deterministic density-weighted quadrature, then over the remaining
// couplings by Monte Carlo.  The quadrature replaces the site's sampled
// value, so the outer randomness is untouched.
inline SpectralAveragingReport spectral_averaging_audit(
    const SiteIndex& box, const DistributionSpec& dist, long site,
    const EnergyInterval& I, long long samples, std::uint64_t seed,
    int nodes_per_piece = 64, const RunOptions& opt = {}) {
  if (site < 0 || site >= box.volume())
    throw std::invalid_argument("site outside box");
  if (samples < 1) throw std::invalid_argument("samples must be at least 1");
  auto nodes = dist.weighted_nodes(nodes_per_piece);

  std::vector<double> inner(samples);
  parallel_for(samples, opt.workers, [&](std::size_t r) {
    DisorderField field = sample_disorder(box, dist, seed, r);
    double avg = 0.0;
    for (const auto& [x, w] : nodes) {
      field.values[site] = x;
      EigenSystem sys =
          eigensolve(assemble_hamiltonian(box, field), true, opt.volume_cap);
      avg += w * local_spectral_weight(sys, site, I);
    }
    inner[r] = avg;
  });

  McAccumulator acc;
  for (long long r = 0; r < samples; ++r) acc.add(inner[r]);

  SpectralAveragingReport rep{site, I};
  rep.average = acc.mean;
  rep.std_err = acc.std_error();
  rep.bound = dist.density_sup() * I.width();
  rep.nodes = static_cast<int>(nodes.size());
  rep.samples = samples;
  rep.flagged = rep.average - rep.bound > 3.0 * rep.std_err;
  return rep;
}

// ---- Lifshitz exponent fit ----

struct LifshitzPoint {
  double energy = 0.0;
  double ell = 0.0;    // log|log N_hat| / log E
  bool usable = false;
  std::string note;
};

struct LifshitzFit {
  std::vector<LifshitzPoint> points;
  double max_ell = 0.0;   // over usable points
  double slope = 0.0;     // least-squares slope of ell against log E
  int usable_count = 0;
  double window_lo = 0.0;
  double window_hi = 0.0;
};

// Double-log exponent at each usable grid point.  A grid point with an empty
// count cannot produce a finite exponent; it is excluded from the fit and
// replaced, for display only, by the exponent of an upper confidence bound
// on N(E) at that energy (the largest N consistent at the 5% level with
// seeing no eigenvalue in samples * |Lambda| trials).
inline LifshitzFit lifshitz_exponent_fit(const IdsCurve& curve,
                                         double window_lo, double window_hi) {
  if (!(window_lo > 0.0) || !(window_lo <= window_hi) || !(window_hi < 1.0))
    throw std::invalid_argument(
        "fit window must satisfy 0 < lo <= hi < 1 so log E keeps one sign");

  LifshitzFit fit;
  fit.window_lo = window_lo;
  fit.window_hi = window_hi;
  double trials =
      static_cast<double>(curve.samples) * static_cast<double>(curve.volume);
  for (std::size_t g = 0; g < curve.grid.size(); ++g) {
    double e = curve.grid[g];
    if (e < window_lo || e > window_hi) continue;
    LifshitzPoint p;
    p.energy = e;
    double n = curve.n_hat[g];
    if (n > 0.0 && n < 1.0) {
      p.ell = std::log(-std::log(n)) / std::log(e);
      p.usable = true;
    } else if (n == 0.0) {
      double n_ub = 1.0 - std::pow(0.05, 1.0 / trials);
      p.ell = std::log(-std::log(n_ub)) / std::log(e);
      p.note = "zero count; exponent of 95% upper confidence bound";
    } else {
      p.ell = std::numeric_limits<double>::quiet_NaN();
      p.note = "saturated";
    }
    fit.points.push_back(std::move(p));
  }

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  fit.max_ell = -std::numeric_limits<double>::infinity();
  for (const LifshitzPoint& p : fit.points) {
    if (!p.usable) continue;
    ++fit.usable_count;
    double x = std::log(p.energy);
    sx += x;
    sy += p.ell;
    sxx += x * x;
    sxy += x * p.ell;
  }
  if (fit.usable_count < 3)
    throw std::runtime_error(
        "fewer than 3 usable grid points in the fit window");
  for (const LifshitzPoint& p : fit.points)
    if (p.usable && p.ell > fit.max_ell) fit.max_ell = p.ell;
  double n = fit.usable_count;
  fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return fit;
}

// ---- eigenvalue statistics near a reference energy ----

struct MinamiStatistics {
  double count_mean = 0.0;
  double count_variance = 0.0;
  double var_over_mean = 0.0;
  double spacing_ratio_mean = 0.0;  // min/max of adjacent spacing pairs
  double ks_exponential = 0.0;      // KS distance of spacings to Exp(rate)
  long long total_points = 0;
  long long realizations = 0;
};

// Statistics of point configurations in a fixed window, already rescaled so
// a Poisson limit would have the given rate.  Shared by the estimator below
// and by synthetic-ensemble oracles in the tests.
inline MinamiStatistics minami_diagnostics(
    const std::vector<std::vector<double>>& points, double rate) {
  if (!(rate > 0.0)) throw std::invalid_argument("rate must be positive");
  MinamiStatistics st;
  st.realizations = static_cast<long long>(points.size());
  McAccumulator count_acc;
  McAccumulator ratio_acc;
  std::vector<double> spacings;
  for (const auto& pts : points) {
    count_acc.add(static_cast<double>(pts.size()));
    st.total_points += static_cast<long long>(pts.size());
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
      spacings.push_back(pts[i + 1] - pts[i]);
    for (std::size_t i = 0; i + 2 < pts.size(); ++i) {
      double a = pts[i + 1] - pts[i];
      double b = pts[i + 2] - pts[i + 1];
      double hi = std::max(a, b);
      if (hi > 0.0) ratio_acc.add(std::min(a, b) / hi);
    }
  }
  if (st.total_points < 100)
    throw std::runtime_error("insufficient data for statistics");
  st.count_mean = count_acc.mean;
  st.count_variance = count_acc.variance();
  if (!(st.count_mean > 0.0))
    throw std::runtime_error("insufficient data for statistics");
  st.var_over_mean = st.count_variance / st.count_mean;
  st.spacing_ratio_mean = ratio_acc.mean;

  std::sort(spacings.begin(), spacings.end());
  double ks = 0.0;
  double m = static_cast<double>(spacings.size());
  for (std::size_t i = 0; i < spacings.size(); ++i) {
    double fmodel = 1.0 - std::exp(-rate * spacings[i]);
    ks = std::max(ks, std::abs(fmodel - i / m));
    ks = std::max(ks, std::abs((i + 1) / m - fmodel));
  }
  st.ks_exponential = ks;
  return st;
}

struct MinamiReport {
  double energy = 0.0;
  double window = 0.0;     // half width in rescaled units, symmetric about 0
  double intensity = 0.0;  // histogram density at the reference energy
  long long samples = 0;
  long volume = 0;
  std::uint64_t seed = 0;
  std::vector<std::vector<double>> rescaled;  // per realization, sorted
  MinamiStatistics stats;
};

// Rescales eigenvalues near E by the volume and runs the window diagnostics.
// The window half width defaults to 5 expected spacings at the locally
// estimated density.
inline MinamiReport minami_statistics(const SiteIndex& box,
                                      const DistributionSpec& dist, double energy,
                                      long long samples, std::uint64_t seed,
                                      double half_width = 0.0,
                                      const RunOptions& opt = {}) {
  if (samples < 1) throw std::invalid_argument("samples must be at least 1");
  double top = 4.0 * box.dim() + dist.support_sup();
  if (!(energy >= 0.0) || !(energy <= top))
    throw std::invalid_argument("energy outside the almost-sure spectrum");

  std::vector<std::vector<double>> spectra(samples);
  parallel_for(samples, opt.workers, [&](std::size_t r) {
    DisorderField field = sample_disorder(box, dist, seed, r);
    EigenSystem sys =
        eigensolve(assemble_hamiltonian(box, field), false, opt.volume_cap);
    spectra[r].assign(sys.values.data(), sys.values.data() + sys.values.size());
  });

  // Local density from a fixed-width histogram over the pooled spectra; the
  // same number later serves as the Poisson rate for the diagnostics.
  const double bin = 0.1;
  long long hits = 0;
  double lo = std::floor(energy / bin) * bin;
  for (const auto& vals : spectra)
    for (double v : vals)
      if (v >= lo && v < lo + bin) ++hits;
  double intensity = hits / (bin * box.volume() * static_cast<double>(samples));
  if (!(intensity > 0.0))
    throw std::invalid_argument(
        "no spectral weight near the requested energy");

  MinamiReport rep;
  rep.energy = energy;
  rep.intensity = intensity;
  rep.window = half_width > 0.0 ? half_width : 5.0 / intensity;
  rep.samples = samples;
  rep.volume = box.volume();
  rep.seed = seed;
  rep.rescaled.resize(samples);
  for (long long r = 0; r < samples; ++r) {
    for (double v : spectra[r]) {
      double z = box.volume() * (v - energy);
      if (z >= -rep.window && z <= rep.window) rep.rescaled[r].push_back(z);
    }
  }
  rep.stats = minami_diagnostics(rep.rescaled, intensity);
  return rep;
}

// Peak of the smoothed density restricted to energies at or below a cap;
// used to pick a reference energy inside the well-populated part of the low
// band without hand tuning.
inline double dos_peak_energy(const DosEstimate& dos, double energy_cap) {
  double best = -1.0;
  double where = 0.0;
  for (std::size_t j = 0; j + 1 < dos.edges.size(); ++j) {
    double c = dos.center(j);
    if (c > energy_cap) continue;
    if (dos.n_hat[j] > best) {
      best = dos.n_hat[j];
      where = c;
    }
  }
  if (best <= 0.0)
    throw std::runtime_error("no populated bin at or below the energy cap");
  return where;
}

}  // namespace andlab
