#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "andlab/format.hpp"

// Experiment configuration shared by the command line tool and the tests.
// A config canonicalizes to a sorted key=value listing of the fields that
// affect the numbers; its hash names the output files, so rerunning the same
// physics lands on the same file and a changed parameter cannot silently
// overwrite older results.  Worker count and output directory are excluded
// from the hash on purpose: they must not change any emitted value.

namespace andlab {

enum class Experiment {
  kIds,
  kDos,
  kWegner,
  kSpectralAveraging,
  kLifshitzFit,
  kMinami,
  kProbeLemma,
  kProbeCutoff,
  kProbeDecay,
  kProbeHeat,
  kProbeDecoupling,
};

inline const std::vector<std::pair<std::string, Experiment>>&
experiment_names() {
  static const std::vector<std::pair<std::string, Experiment>> names = {
      {"ids", Experiment::kIds},
      {"dos", Experiment::kDos},
      {"wegner", Experiment::kWegner},
      {"spectral-averaging", Experiment::kSpectralAveraging},
      {"lifshitz-fit", Experiment::kLifshitzFit},
      {"minami", Experiment::kMinami},
      {"probe-lemma", Experiment::kProbeLemma},
      {"probe-cutoff", Experiment::kProbeCutoff},
      {"probe-decay", Experiment::kProbeDecay},
      {"probe-heat", Experiment::kProbeHeat},
      {"probe-decoupling", Experiment::kProbeDecoupling},
  };
  return names;
}

inline std::string experiment_name(Experiment e) {
  for (const auto& [name, exp] : experiment_names())
    if (exp == e) return name;
  throw std::logic_error("unnamed experiment");
}

struct ExperimentConfig {
  Experiment experiment = Experiment::kIds;

  int dim = 1;
  int side = 32;
  std::string dist = "uniform:0,1";
  long long samples = 100;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  long volume_cap = 4096;
  std::string out_dir;  // empty means ANDLAB_OUT_DIR or the working directory

  // Energy grid (ids, dos, lifshitz-fit).
  double emin = 0.02;
  double emax = 0.5;
  int npoints = 40;

  // Interval (wegner, spectral-averaging).
  double interval_lo = 0.0;
  double interval_hi = 0.1;

  // Reference energy (minami, probes).
  double energy = 0.25;

  int site = 0;            // spectral-averaging
  int nodes = 64;          // spectral-averaging quadrature
  double window_lo = 0.05;  // lifshitz-fit window
  double window_hi = 0.3;
  int bins = 200;           // dos
  double bandwidth = 0.0;   // dos smoothing; 0 picks the default
  double half_width = 0.0;  // minami window; 0 picks the default
  double peak_cap = 0.0;    // minami auto energy cap; 0 means half the band
  long long cases = 10000;  // probe-lemma, probe-heat
  int nmax = 12;            // probe-lemma
  int jmax = 0;             // probe-cutoff; 0 means 2d+3
  std::vector<double> tvals = {0.5, 2.0, 8.0};  // probe-heat
  double eps = 0.1;                             // probe-decoupling
  std::vector<long> k_coord;                    // probe-decoupling; empty auto
};

// Fields that feed the output, sorted by key.  Only fields the experiment
// actually reads are listed, so unrelated defaults cannot disturb the hash.
inline std::vector<std::pair<std::string, std::string>> canonical_fields(
    const ExperimentConfig& c) {
  std::vector<std::pair<std::string, std::string>> f;
  f.emplace_back("experiment", experiment_name(c.experiment));
  f.emplace_back("dim", fmt_int(c.dim));
  f.emplace_back("seed", fmt_uint(c.seed));
  auto grid = [&] {
    f.emplace_back("emin", fmt_double(c.emin));
    f.emplace_back("emax", fmt_double(c.emax));
    f.emplace_back("npoints", fmt_int(c.npoints));
  };
  auto lattice = [&] {
    f.emplace_back("L", fmt_int(c.side));
    f.emplace_back("dist", c.dist);
    f.emplace_back("samples", fmt_int(c.samples));
    f.emplace_back("volume_cap", fmt_int(c.volume_cap));
  };
  switch (c.experiment) {
    case Experiment::kIds:
      lattice();
      grid();
      break;
    case Experiment::kDos:
      lattice();
      f.emplace_back("bins", fmt_int(c.bins));
      f.emplace_back("bandwidth", fmt_double(c.bandwidth));
      break;
    case Experiment::kWegner:
      lattice();
      f.emplace_back("ilo", fmt_double(c.interval_lo));
      f.emplace_back("ihi", fmt_double(c.interval_hi));
      break;
    case Experiment::kSpectralAveraging:
      lattice();
      f.emplace_back("ilo", fmt_double(c.interval_lo));
      f.emplace_back("ihi", fmt_double(c.interval_hi));
      f.emplace_back("site", fmt_int(c.site));
      f.emplace_back("nodes", fmt_int(c.nodes));
      break;
    case Experiment::kLifshitzFit:
      lattice();
      grid();
      f.emplace_back("wlo", fmt_double(c.window_lo));
      f.emplace_back("whi", fmt_double(c.window_hi));
      break;
    case Experiment::kMinami:
      lattice();
      f.emplace_back("energy", fmt_double(c.energy));
      f.emplace_back("half_width", fmt_double(c.half_width));
      f.emplace_back("peak_cap", fmt_double(c.peak_cap));
      break;
    case Experiment::kProbeLemma:
      f.emplace_back("cases", fmt_int(c.cases));
      f.emplace_back("nmax", fmt_int(c.nmax));
      break;
    case Experiment::kProbeCutoff:
      f.emplace_back("energy", fmt_double(c.energy));
      f.emplace_back("jmax", fmt_int(c.jmax));
      break;
    case Experiment::kProbeDecay:
      lattice();
      f.emplace_back("energy", fmt_double(c.energy));
      break;
    case Experiment::kProbeHeat:
      lattice();
      f.emplace_back("energy", fmt_double(c.energy));
      f.emplace_back("cases", fmt_int(c.cases));
      {
        std::string ts;
        for (std::size_t i = 0; i < c.tvals.size(); ++i)
          ts += (i ? "," : "") + fmt_double(c.tvals[i]);
        f.emplace_back("tvals", ts);
      }
      break;
    case Experiment::kProbeDecoupling:
      lattice();
      f.emplace_back("energy", fmt_double(c.energy));
      f.emplace_back("eps", fmt_double(c.eps));
      {
        std::string ks;
        for (std::size_t i = 0; i < c.k_coord.size(); ++i)
          ks += (i ? "," : "") + fmt_int(c.k_coord[i]);
        f.emplace_back("k", ks);
      }
      break;
  }
  std::sort(f.begin(), f.end());
  return f;
}

inline std::string canonical_text(const ExperimentConfig& c) {
  std::string out;
  for (const auto& [k, v] : canonical_fields(c))
    out += k + "=" + v + "\n";
  return out;
}

inline std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::string config_hash(const ExperimentConfig& c) {
  static const char* hex = "0123456789abcdef";
  std::uint64_t h = fnv1a64(canonical_text(c));
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = hex[h & 0xf];
    h >>= 4;
  }
  return out;
}

}  // namespace andlab
