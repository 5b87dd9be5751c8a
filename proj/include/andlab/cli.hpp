#pragma once

#include <string>
#include <vector>

#include "CLI11.hpp"

#include "andlab/config.hpp"
#include "andlab/version.hpp"

// Command line front end: one subcommand per experiment, flags bound straight
// onto ExperimentConfig.  An INI config file can preload any option
// (section name = subcommand); explicit flags override file values.

namespace andlab {

struct CliParser {
  CLI::App app{"numerical laboratory for disordered lattice Hamiltonians",
               "andlab"};
  ExperimentConfig cfg;
  std::vector<std::pair<CLI::App*, Experiment>> subs;

  CliParser() {
    app.require_subcommand(1);
    app.set_config("--config", "", "INI file with per-subcommand sections")
        ->configurable(false);
    app.set_version_flag("--version", std::string("andlab ") + kVersion);

    for (const auto& [name, exp] : experiment_names()) {
      CLI::App* sub = app.add_subcommand(name, description(exp));
      sub->configurable();
      add_common(sub);
      add_specific(sub, exp);
      subs.emplace_back(sub, exp);
    }
  }

  // Returns the populated config; throws CLI::ParseError out of app.parse.
  ExperimentConfig parse(int argc, const char* const* argv) {
    app.parse(argc, argv);
    for (const auto& [sub, exp] : subs)
      if (sub->parsed()) cfg.experiment = exp;
    return cfg;
  }

 private:
  static const char* description(Experiment e) {
    switch (e) {
      case Experiment::kIds:
        return "integrated density of states on an energy grid";
      case Experiment::kDos:
        return "density of states histogram with smoothed companion";
      case Experiment::kWegner:
        return "expected eigenvalue count in an interval vs the density bound";
      case Experiment::kSpectralAveraging:
        return "single-site spectral average vs the density bound";
      case Experiment::kLifshitzFit:
        return "double-log tail exponent fit of the integrated density";
      case Experiment::kMinami:
        return "rescaled eigenvalue statistics near a reference energy";
      case Experiment::kProbeLemma:
        return "trace inequality margins on generated matrix cases";
      case Experiment::kProbeCutoff:
        return "smooth cutoff shape and scaled-derivative audit";
      case Experiment::kProbeDecay:
        return "off-diagonal decay profile of the smooth cutoff kernel";
      case Experiment::kProbeHeat:
        return "heat kernel monotonicity and low-energy split margins";
      case Experiment::kProbeDecoupling:
        return "assembled sublattice decoupling bound margins";
    }
    return "";
  }

  void add_common(CLI::App* sub) {
    sub->add_option("--dim", cfg.dim, "lattice dimension")
        ->check(CLI::Range(1, 6));
    sub->add_option("--L", cfg.side, "box side length");
    sub->add_option("--dist", cfg.dist,
                    "coupling distribution, uniform:a,b or "
                    "piecewise:e0,e1,...;d0,...");
    sub->add_option("--samples", cfg.samples, "number of disorder realizations");
    sub->add_option("--seed", cfg.seed, "master seed");
    sub->add_option("--workers", cfg.workers, "worker threads");
    sub->add_option("--volume-cap", cfg.volume_cap,
                    "largest volume accepted for dense solves");
    sub->add_option("--out-dir", cfg.out_dir,
                    "output directory (default $ANDLAB_OUT_DIR or .)");
  }

  void add_specific(CLI::App* sub, Experiment e) {
    auto grid = [&] {
      sub->add_option("--emin", cfg.emin, "grid start");
      sub->add_option("--emax", cfg.emax, "grid end");
      sub->add_option("--npoints", cfg.npoints, "grid size");
    };
    auto interval = [&] {
      sub->add_option("--ilo", cfg.interval_lo, "interval lower edge");
      sub->add_option("--ihi", cfg.interval_hi, "interval upper edge");
    };
    switch (e) {
      case Experiment::kIds:
        grid();
        break;
      case Experiment::kDos:
        sub->add_option("--bins", cfg.bins, "histogram bin count");
        sub->add_option("--bandwidth", cfg.bandwidth,
                        "smoothing bandwidth (0 = twice the bin width)");
        break;
      case Experiment::kWegner:
        interval();
        break;
      case Experiment::kSpectralAveraging:
        interval();
        sub->add_option("--site", cfg.site, "averaged site index");
        sub->add_option("--nodes", cfg.nodes,
                        "quadrature nodes per density piece");
        break;
      case Experiment::kLifshitzFit:
        grid();
        sub->add_option("--wlo", cfg.window_lo, "fit window start");
        sub->add_option("--whi", cfg.window_hi, "fit window end");
        break;
      case Experiment::kMinami:
        sub->add_option("--energy", cfg.energy,
                        "reference energy (<= 0 picks the density peak)");
        sub->add_option("--half-width", cfg.half_width,
                        "window half width in rescaled units "
                        "(0 = 5 expected spacings)");
        sub->add_option("--peak-cap", cfg.peak_cap,
                        "upper energy for the automatic peak search "
                        "(0 = half the band)");
        break;
      case Experiment::kProbeLemma:
        sub->add_option("--cases", cfg.cases, "generated cases across families");
        sub->add_option("--nmax", cfg.nmax, "largest matrix size")
            ->check(CLI::Range(2, 64));
        break;
      case Experiment::kProbeCutoff:
        sub->add_option("--energy", cfg.energy, "cutoff scale");
        sub->add_option("--jmax", cfg.jmax,
                        "highest derivative order (0 = 2 dim + 3)");
        break;
      case Experiment::kProbeDecay:
        sub->add_option("--energy", cfg.energy, "cutoff scale");
        break;
      case Experiment::kProbeHeat:
        sub->add_option("--energy", cfg.energy, "split-bound energy");
        sub->add_option("--cases", cfg.cases, "disorder realizations");
        sub->add_option("--tvals", cfg.tvals, "heat kernel times")
            ->delimiter(',');
        break;
      case Experiment::kProbeDecoupling:
        sub->add_option("--energy", cfg.energy, "reference energy");
        sub->add_option("--eps", cfg.eps, "tail exponent offset in (0, dim/2)");
        sub->add_option("--k", cfg.k_coord,
                        "companion site coordinates (default L/4 each axis)")
            ->delimiter(',');
        break;
    }
  }
};

}  // namespace andlab
