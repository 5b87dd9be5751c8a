#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "andlab/accumulator.hpp"
#include "andlab/cutoff.hpp"
#include "andlab/disorder.hpp"
#include "andlab/hamiltonian.hpp"
#include "andlab/lattice.hpp"
#include "andlab/parallel.hpp"
#include "andlab/rng.hpp"
#include "andlab/spectral.hpp"

// Numerical probes of the inequalities the low-energy analysis rests on.
// Each probe evaluates both sides of an inequality on concrete finite
// operators and reports the margin (rhs minus lhs), so a violation shows up
// as a negative margin instead of a silent wrong constant.

namespace andlab {

// ---- trace inequality for spectral cutoffs ----

// tr f(H0 + W) W <= tr f(H0 + W) W g(H0) whenever f is nonnegative and
// vanishes above a threshold E0 and g is [0,1]-valued and equals 1 up to E0.
// The hypotheses only matter on the spectra of H = H0 + W and H0, which is
// where they are checked.

struct LemmaCase {
  Eigen::MatrixXd h0;
  Eigen::MatrixXd w;
  double e0 = 0.0;
  std::function<double(double)> f;
  std::function<double(double)> g;
};

struct LemmaCheck {
  bool hypotheses_ok = false;
  std::string reject_reason;
  double lhs = 0.0;     // tr f(H) W
  double rhs = 0.0;     // tr f(H) W g(H0)
  double margin = 0.0;  // rhs - lhs
};

inline LemmaCheck check_trace_lemma(const LemmaCase& c) {
  LemmaCheck out;
  EigenSystem h = eigensolve_dense(c.h0 + c.w, true, 64);
  EigenSystem h0 = eigensolve_dense(c.h0, true, 64);
  const double tol = 1e-12;
  for (long i = 0; i < h.values.size(); ++i) {
    double fv = c.f(h.values(i));
    if (fv < -tol) {
      out.reject_reason = "f negative on the spectrum of H";
      return out;
    }
    if (h.values(i) > c.e0 && std::abs(fv) > tol) {
      out.reject_reason = "f does not vanish above the threshold";
      return out;
    }
  }
  for (long i = 0; i < h0.values.size(); ++i) {
    double gv = c.g(h0.values(i));
    if (gv < -tol || gv > 1.0 + tol) {
      out.reject_reason = "g leaves [0,1] on the spectrum of H0";
      return out;
    }
    if (h0.values(i) <= c.e0 && gv < 1.0 - tol) {
      out.reject_reason = "g falls below 1 at or under the threshold";
      return out;
    }
  }
  out.hypotheses_ok = true;
  Eigen::MatrixXd fH = operator_function(h, c.f);
  Eigen::MatrixXd gH0 = operator_function(h0, c.g);
  out.lhs = (fH * c.w).trace();
  out.rhs = (fH * c.w * gH0).trace();
  out.margin = out.rhs - out.lhs;
  return out;
}

enum class PerturbationFamily {
  kNonnegativeDiagonal,  // W = diag(u), u_i in [0, 1]
  kGeneralSymmetric,     // W symmetric with Gaussian entries
};

// Random hypothesis-valid case: H0 is a Wigner-type symmetric matrix with
// spectral radius around 1, the threshold sits inside its spectral range,
// f is a smooth cutoff dying at the threshold and g one dying at twice the
// threshold, so both hypotheses hold by construction.
inline LemmaCase random_lemma_case(std::uint64_t seed, std::uint64_t index,
                                   int n_max, PerturbationFamily family) {
  if (n_max < 2) throw std::invalid_argument("case size must be at least 2");
  int n = 2 + static_cast<int>(rng::derive(seed, index, 0, 100) %
                               static_cast<std::uint64_t>(n_max - 1));
  LemmaCase c;
  c.h0.resize(n, n);
  double scale = 0.5 / std::sqrt(static_cast<double>(n));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double a = scale * rng::gaussian(seed, index, i * n_max + j, 1);
      c.h0(i, j) = a;
      c.h0(j, i) = a;
    }
  c.e0 = 0.15 + 0.85 * rng::uniform01(seed, index, 0, 101);
  c.w = Eigen::MatrixXd::Zero(n, n);
  if (family == PerturbationFamily::kNonnegativeDiagonal) {
    for (int i = 0; i < n; ++i)
      c.w(i, i) = rng::uniform01(seed, index, i, 102);
  } else {
    double wscale = 0.25 / std::sqrt(static_cast<double>(n));
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double a = wscale * rng::gaussian(seed, index, i * n_max + j, 2);
        c.w(i, j) = a;
        c.w(j, i) = a;
      }
  }
  // f = cutoff at e0/2 is supported on (-inf, e0]; g = cutoff at e0 is 1 on
  // (-inf, e0] and lives in [0,1] everywhere.
  SmoothCutoff f(c.e0 / 2.0), g(c.e0);
  c.f = [f](double t) { return f(t); };
  c.g = [g](double t) { return g(t); };
  return c;
}

// ---- reference-time and scale bookkeeping for the decoupling regime ----

struct DecouplingParams {
  int d = 0;
  double energy = 0.0;
  double eps = 0.0;
  double t = 0.0;       // (4E)^{-d/2-1+eps} - (1+2d) ln 2 / (4E)
  bool in_regime = false;  // t > 0

  // Both sides of the defining identity exp(-4tE) = 2 * 4^d *
  // exp(-(4E)^{-d/2+eps}); their relative gap should be rounding-level.
  double identity_lhs = 0.0;
  double identity_rhs = 0.0;
};

inline DecouplingParams compute_decoupling_params(int d, double energy,
                                                  double eps) {
  if (d < 1) throw std::invalid_argument("dimension must be at least 1");
  if (!(energy > 0.0)) throw std::invalid_argument("energy must be positive");
  if (!(eps > 0.0 && eps < 0.5 * d))
    throw std::invalid_argument("eps must lie in (0, d/2)");
  DecouplingParams p;
  p.d = d;
  p.energy = energy;
  p.eps = eps;
  double e4 = 4.0 * energy;
  p.t = std::pow(e4, -0.5 * d - 1.0 + eps) -
        (1.0 + 2.0 * d) * std::log(2.0) / e4;
  p.in_regime = p.t > 0.0;
  p.identity_lhs = std::exp(-4.0 * p.t * energy);
  p.identity_rhs =
      2.0 * std::pow(4.0, d) * std::exp(-std::pow(e4, -0.5 * d + eps));
  return p;
}

// ---- heat kernel comparison at one site ----

struct HeatCheck {
  double t = 0.0;
  double energy = 0.0;
  long site = 0;
  double diag_full = 0.0;     // <delta_r, exp(-tH) delta_r>
  double diag_masked = 0.0;   // same with the potential masked to Gamma
  double mono_margin = 0.0;   // diag_masked - diag_full
  double chi_weight = 0.0;    // <delta_r, chi_{<=4E}(H_Gamma) delta_r>
  double split_margin = 0.0;  // chi_weight + exp(-4tE) - diag_masked
  double domination_margin = 0.0;  // min_i lambda_i(H) - lambda_i(H_Gamma)
};

// Masking the (nonnegative) potential to a sublattice lowers the operator,
// which raises every diagonal heat kernel entry; and on a nonnegative
// operator exp(-t lambda) <= chi_{lambda <= 4E} + exp(-4tE) splits the
// masked diagonal into a low-energy weight plus an exponentially small rest.
inline HeatCheck heat_comparison(const SiteIndex& box,
                                 const DisorderField& field,
                                 const SublatticeSpec& gamma, long site,
                                 double t, double energy,
                                 long cap = kDefaultVolumeCap) {
  if (box.side() % 4 != 0)
    throw std::invalid_argument("L must be divisible by 4");
  if (!(t >= 0.0)) throw std::invalid_argument("time must be nonnegative");
  if (!(energy > 0.0)) throw std::invalid_argument("energy must be positive");
  if (gamma.contains(box, site))
    throw std::invalid_argument("site must lie off the sublattice");
  for (double v : field.values)
    if (v < 0.0)
      throw std::invalid_argument("potential must be nonnegative");

  EigenSystem full =
      eigensolve(assemble_hamiltonian(box, field), true, cap);
  DisorderField masked = mask_potential(field, gamma.sites(box));
  EigenSystem part =
      eigensolve(assemble_hamiltonian(box, masked), true, cap);

  HeatCheck out;
  out.t = t;
  out.energy = energy;
  out.site = site;
  auto heat = [t](double x) { return std::exp(-t * x); };
  out.diag_full = local_spectral_weight(full, site, heat);
  out.diag_masked = local_spectral_weight(part, site, heat);
  out.mono_margin = out.diag_masked - out.diag_full;
  out.chi_weight = local_spectral_weight(part, site, [energy](double x) {
    return x <= 4.0 * energy ? 1.0 : 0.0;
  });
  out.split_margin =
      out.chi_weight + std::exp(-4.0 * t * energy) - out.diag_masked;
  out.domination_margin = (full.values - part.values).minCoeff();
  return out;
}

// ---- Cauchy-Schwarz chain at the anchor site ----

struct ChainCheck {
  double lhs = 0.0;          // <delta_0, P(I) delta_0>
  double rhs = 0.0;          // (1/2) sum_k (P_00 + P_kk) |<delta_0, F delta_k>|
  double margin = 0.0;       // rhs - lhs
  double step_margin = 0.0;  // tr P(I) Pi_0 F - tr P(I) Pi_0, the lemma step
};

// Chain: with F = f_E(H with the coupling at 0 removed) and I inside [0, E],
//   tr P(I) Pi_0  <=  tr P(I) Pi_0 F
//                 <=  (1/2) sum_k (P_00 + P_kk) |F_0k|.
// The first step is the trace inequality with W proportional to Pi_0; the
// second is Cauchy-Schwarz plus the arithmetic-geometric mean bound.
inline ChainCheck chain_check(const SiteIndex& box, const DisorderField& field,
                              double energy, const EnergyInterval& I,
                              long cap = kDefaultVolumeCap) {
  if (!(energy > 0.0)) throw std::invalid_argument("energy must be positive");
  if (I.lower < 0.0 || I.upper > energy)
    throw std::invalid_argument("interval must sit inside [0, E]");
  long zero = box.index(std::vector<long>(box.dim(), 0));

  EigenSystem sysH =
      eigensolve(assemble_hamiltonian(box, field), true, cap);
  DisorderField perp = field;
  perp.values[zero] = 0.0;
  EigenSystem sysPerp =
      eigensolve(assemble_hamiltonian(box, perp), true, cap);

  SmoothCutoff f(energy);
  Eigen::VectorXd frow =
      operator_row(sysPerp, zero, [&f](double x) { return f(x); });
  Eigen::VectorXd prow = operator_row(sysH, zero, I);

  ChainCheck out;
  out.lhs = prow(zero);
  double rhs = 0.0;
  for (long k = 0; k < box.volume(); ++k) {
    double pkk = local_spectral_weight(sysH, k, I);
    rhs += 0.5 * (out.lhs + pkk) * std::abs(frow(k));
  }
  out.rhs = rhs;
  out.margin = out.rhs - out.lhs;
  out.step_margin = frow.dot(prow) - out.lhs;
  return out;
}

// ---- kernel decay of the smooth cutoff ----

struct DecayShell {
  long norm2 = 0;           // squared displacement length
  double k_bracket = 0.0;   // sqrt(1 + norm2)
  double envelope = 0.0;    // max over the shell of the averaged |entry|
};

struct DecayProfile {
  double energy = 0.0;
  long long samples = 0;
  std::vector<DecayShell> shells;   // ascending in norm2
  double fitted_exponent = 0.0;     // slope of -log envelope vs log k_bracket
  double fit_lo = 0.0, fit_hi = 0.0;
};

// Averages |<delta_0, f_E(H) delta_k>| (coupling at 0 removed) over disorder,
// collapses displacements into shells of equal length, and fits the envelope
// decay against sqrt(1 + |k|^2) on mid-range shells where neither the
// plateau at 0 nor the wrap-around tail distorts the slope.
inline DecayProfile kernel_decay_profile(const SiteIndex& box,
                                         const DistributionSpec& dist,
                                         double energy, long long samples,
                                         std::uint64_t seed,
                                         unsigned workers = 1,
                                         long cap = kDefaultVolumeCap) {
  if (!(energy > 0.0)) throw std::invalid_argument("energy must be positive");
  if (samples < 1) throw std::invalid_argument("samples must be at least 1");
  long zero = box.index(std::vector<long>(box.dim(), 0));
  SmoothCutoff f(energy);

  std::vector<std::vector<double>> rows(samples);
  parallel_for(samples, workers, [&](std::size_t r) {
    DisorderField field = sample_disorder(box, dist, seed, r);
    field.values[zero] = 0.0;
    EigenSystem sys =
        eigensolve(assemble_hamiltonian(box, field), true, cap);
    Eigen::VectorXd frow =
        operator_row(sys, zero, [&f](double x) { return f(x); });
    rows[r].resize(box.volume());
    for (long k = 0; k < box.volume(); ++k) rows[r][k] = std::abs(frow(k));
  });

  std::vector<double> avg(box.volume(), 0.0);
  for (long long r = 0; r < samples; ++r)
    for (long k = 0; k < box.volume(); ++k) avg[k] += rows[r][k];
  for (long k = 0; k < box.volume(); ++k) avg[k] /= samples;

  std::vector<std::pair<long, double>> by_norm;
  for (long k = 0; k < box.volume(); ++k)
    by_norm.emplace_back(box.norm2(k), avg[k]);
  std::sort(by_norm.begin(), by_norm.end());

  DecayProfile prof;
  prof.energy = energy;
  prof.samples = samples;
  for (const auto& [n2, v] : by_norm) {
    if (!prof.shells.empty() && prof.shells.back().norm2 == n2)
      prof.shells.back().envelope = std::max(prof.shells.back().envelope, v);
    else
      prof.shells.push_back(
          {n2, std::sqrt(1.0 + static_cast<double>(n2)), v});
  }

  prof.fit_lo = 2.0;
  prof.fit_hi = box.side() / 4.0;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  long used = 0;
  for (const DecayShell& s : prof.shells) {
    double dist_k = std::sqrt(static_cast<double>(s.norm2));
    if (dist_k < prof.fit_lo || dist_k > prof.fit_hi) continue;
    if (!(s.envelope > 0.0)) continue;
    double x = std::log(s.k_bracket);
    double y = std::log(s.envelope);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++used;
  }
  if (used < 2)
    throw std::runtime_error("too few shells in the decay fit window");
  prof.fitted_exponent =
      -(used * sxy - sx * sy) / (used * sxx - sx * sx);
  return prof;
}

// ---- the assembled decoupling bound ----

struct DecouplingReport {
  DecouplingParams params;
  std::vector<long> k_coord;
  std::vector<int> sublattice_offset;
  long sublattice_count = 0;
  long long samples = 0;

  // Worst margins over all realizations and both anchor sites r in {0, k}.
  double min_cutoff_vs_heat = 0.0;   // e^{2tE} heat_perp(r) - ptilde(r)
  double min_mask_monotone = 0.0;    // heat_masked(r) - heat_perp(r)
  double min_split = 0.0;            // chi(r) + e^{-4tE} - heat_masked(r)
  double min_orbit_vs_trace = 0.0;   // 4^d tr chi / |Lambda| - orbit avg
  double min_chain = 0.0;            // Cauchy-Schwarz chain margin
  double min_domination = 0.0;       // eigenvalue domination, masked vs perp

  // Orbit-average stationarity: the anchor diagonal minus its orbit average
  // should vanish in expectation.
  double orbit_diff_mean = 0.0;
  double orbit_diff_stderr = 0.0;

  // Scale comparisons, reported but not asserted: finite volume and finite E
  // only approach these asymptotic envelopes.
  double mean_ptilde_0 = 0.0;
  double mean_ptilde_k = 0.0;
  double mean_chi_volume = 0.0;      // E{tr chi_{<=4E}(H_Gamma)} / |Lambda|
  double tail_envelope = 0.0;        // exp(-(4E)^{-d/2+eps})
  double ptilde_envelope = 0.0;      // 4^{d+1} tail = 2 exp(-4 t E)

  bool flagged = false;
};

// Evaluates every deterministic inequality in the decoupling argument on
// sampled disorder: the cutoff-to-heat bound, masking monotonicity, the
// low-energy split, the orbit-average trace bound, and the Cauchy-Schwarz
// chain, plus the stationarity identity in expectation.
inline DecouplingReport evaluate_decoupling_bound(
    const SiteIndex& box, const DistributionSpec& dist, double energy,
    double eps, long long samples, std::uint64_t seed,
    const std::vector<long>& k_coord_in = {}, unsigned workers = 1,
    long cap = kDefaultVolumeCap) {
  if (box.side() % 4 != 0)
    throw std::invalid_argument("L must be divisible by 4");
  if (samples < 1) throw std::invalid_argument("samples must be at least 1");

  DecouplingReport rep;
  rep.params = compute_decoupling_params(box.dim(), energy, eps);
  rep.samples = samples;
  std::vector<long> k_coord = k_coord_in;
  if (k_coord.empty()) k_coord.assign(box.dim(), box.side() / 4);
  if (static_cast<int>(k_coord.size()) != box.dim())
    throw std::invalid_argument("k coordinate dimension mismatch");
  rep.k_coord = k_coord;
  long zero = box.index(std::vector<long>(box.dim(), 0));
  long ksite = box.index(k_coord);
  if (ksite == zero)
    throw std::invalid_argument("k must differ from the lattice point 0");

  SublatticeSpec gamma = choose_decoupling_sublattice(box, ksite);
  rep.sublattice_offset = gamma.offset;
  std::vector<long> gsites = gamma.sites(box);
  rep.sublattice_count = static_cast<long>(gsites.size());
  if (!rep.params.in_regime) return rep;

  const double t = rep.params.t;
  const double e4 = 4.0 * energy;
  const long r_sites[2] = {zero, ksite};

  // Orbit of r under the 4Z^d period lattice, torus-wrapped.
  auto orbit_of = [&](long r) {
    std::vector<long> orbit;
    std::vector<long> base = box.coord(r);
    long reps = box.side() / 4;
    std::vector<long> step(box.dim(), 0);
    while (true) {
      std::vector<long> c(base);
      for (int a = 0; a < box.dim(); ++a) c[a] += 4 * step[a];
      orbit.push_back(box.index(c));
      int a = box.dim() - 1;
      while (a >= 0 && step[a] == reps - 1) step[a--] = 0;
      if (a < 0) break;
      ++step[a];
    }
    return orbit;
  };
  std::vector<long> orbits[2] = {orbit_of(zero), orbit_of(ksite)};

  struct Slot {
    double s_cutoff, s_mask, s_split, s_orbit, s_chain, s_domination;
    double ptilde0, ptildek, chi_volume, orbit_diff;
  };
  std::vector<Slot> slots(samples);
  SmoothCutoff f(energy);

  parallel_for(samples, workers, [&](std::size_t rlz) {
    DisorderField field = sample_disorder(box, dist, seed, rlz);
    DisorderField perp = field;
    perp.values[zero] = 0.0;
    DisorderField masked = mask_potential(field, gsites);

    EigenSystem sys_perp =
        eigensolve(assemble_hamiltonian(box, perp), true, cap);
    EigenSystem sys_mask =
        eigensolve(assemble_hamiltonian(box, masked), true, cap);

    auto heat = [t](double x) { return std::exp(-t * x); };
    auto chi = [e4](double x) { return x <= e4 ? 1.0 : 0.0; };

    Slot s;
    s.s_cutoff = s.s_mask = s.s_split = s.s_orbit =
        std::numeric_limits<double>::infinity();
    double tr_chi = trace_function(sys_mask, chi);
    double per_site = std::pow(4.0, box.dim()) * tr_chi / box.volume();
    double ptilde[2], orbit_avg[2], chi_diag[2];
    for (int ri = 0; ri < 2; ++ri) {
      long r = r_sites[ri];
      ptilde[ri] =
          local_spectral_weight(sys_perp, r, [&f](double x) { return f(x); });
      double heat_perp = local_spectral_weight(sys_perp, r, heat);
      double heat_mask = local_spectral_weight(sys_mask, r, heat);
      chi_diag[ri] = local_spectral_weight(sys_mask, r, chi);
      double acc = 0.0;
      for (long gsite : orbits[ri])
        acc += local_spectral_weight(sys_mask, gsite, chi);
      orbit_avg[ri] = acc / orbits[ri].size();

      s.s_cutoff = std::min(
          s.s_cutoff, std::exp(2.0 * t * energy) * heat_perp - ptilde[ri]);
      s.s_mask = std::min(s.s_mask, heat_mask - heat_perp);
      s.s_split = std::min(
          s.s_split, chi_diag[ri] + std::exp(-4.0 * t * energy) - heat_mask);
      s.s_orbit = std::min(s.s_orbit, per_site - orbit_avg[ri]);
    }
    s.s_domination = (sys_perp.values - sys_mask.values).minCoeff();
    s.ptilde0 = ptilde[0];
    s.ptildek = ptilde[1];
    s.chi_volume = tr_chi / box.volume();
    s.orbit_diff = chi_diag[0] - orbit_avg[0];

    ChainCheck chain =
        chain_check(box, field, energy, EnergyInterval(0.0, energy), cap);
    s.s_chain = chain.margin;
    slots[rlz] = s;
  });

  McAccumulator p0, pk, chiv, odiff;
  rep.min_cutoff_vs_heat = rep.min_mask_monotone = rep.min_split =
      rep.min_orbit_vs_trace = rep.min_chain = rep.min_domination =
          std::numeric_limits<double>::infinity();
  for (long long rlz = 0; rlz < samples; ++rlz) {
    const Slot& s = slots[rlz];
    rep.min_cutoff_vs_heat = std::min(rep.min_cutoff_vs_heat, s.s_cutoff);
    rep.min_mask_monotone = std::min(rep.min_mask_monotone, s.s_mask);
    rep.min_split = std::min(rep.min_split, s.s_split);
    rep.min_orbit_vs_trace = std::min(rep.min_orbit_vs_trace, s.s_orbit);
    rep.min_chain = std::min(rep.min_chain, s.s_chain);
    rep.min_domination = std::min(rep.min_domination, s.s_domination);
    p0.add(s.ptilde0);
    pk.add(s.ptildek);
    chiv.add(s.chi_volume);
    odiff.add(s.orbit_diff);
  }
  rep.mean_ptilde_0 = p0.mean;
  rep.mean_ptilde_k = pk.mean;
  rep.mean_chi_volume = chiv.mean;
  rep.orbit_diff_mean = odiff.mean;
  rep.orbit_diff_stderr = odiff.std_error();
  rep.tail_envelope = std::exp(-std::pow(e4, -0.5 * box.dim() + eps));
  rep.ptilde_envelope = std::pow(4.0, box.dim() + 1) * rep.tail_envelope;

  const double tol = 1e-9;
  rep.flagged = rep.min_cutoff_vs_heat < -tol ||
                rep.min_mask_monotone < -tol || rep.min_split < -tol ||
                rep.min_orbit_vs_trace < -tol || rep.min_chain < -tol ||
                rep.min_domination < -tol ||
                std::abs(rep.orbit_diff_mean) >
                    3.0 * rep.orbit_diff_stderr + 1e-12;
  return rep;
}

}  // namespace andlab
