#pragma once

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "andlab/config.hpp"
#include "andlab/csv.hpp"
#include "andlab/estimators.hpp"
#include "andlab/probes.hpp"
#include "andlab/version.hpp"

// Experiment driver: validates a config, runs the estimator or probe it
// names, and emits one or more CSV tables plus a JSON manifest.  File names
// are derived from the config hash, results are written atomically, and a
// tripped inequality flag turns into exit code 1 so batch runs notice.

namespace andlab {

struct RunResult {
  int exit_code = 0;
  bool flagged = false;
  std::vector<std::string> files;
  std::vector<std::string> flag_reasons;
  std::vector<std::pair<std::string, std::string>> summary;
};

namespace detail {

inline std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 1) throw std::invalid_argument("npoints must be at least 1");
  if (n == 1) {
    if (lo != hi)
      throw std::invalid_argument("single-point grid needs emin == emax");
    return {lo};
  }
  if (!(lo < hi)) throw std::invalid_argument("emin must be below emax");
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = lo + (hi - lo) * i / (n - 1);
  return out;
}

inline std::string pass_str(bool ok) { return ok ? "1" : "0"; }

}  // namespace detail

class ExperimentRun {
 public:
  explicit ExperimentRun(const ExperimentConfig& cfg) : cfg_(cfg) {}

  RunResult run() {
    auto t0 = std::chrono::steady_clock::now();
    dispatch();
    auto t1 = std::chrono::steady_clock::now();
    wall_ms_ = std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0)
                   .count();
    emit();
    result_.exit_code = result_.flagged ? 1 : 0;
    return result_;
  }

 private:
  void dispatch() {
    switch (cfg_.experiment) {
      case Experiment::kIds: run_ids(); break;
      case Experiment::kDos: run_dos(); break;
      case Experiment::kWegner: run_wegner(); break;
      case Experiment::kSpectralAveraging: run_spectral_averaging(); break;
      case Experiment::kLifshitzFit: run_lifshitz(); break;
      case Experiment::kMinami: run_minami(); break;
      case Experiment::kProbeLemma: run_probe_lemma(); break;
      case Experiment::kProbeCutoff: run_probe_cutoff(); break;
      case Experiment::kProbeDecay: run_probe_decay(); break;
      case Experiment::kProbeHeat: run_probe_heat(); break;
      case Experiment::kProbeDecoupling: run_probe_decoupling(); break;
    }
  }

  RunOptions options() const {
    return RunOptions{cfg_.workers, cfg_.volume_cap};
  }

  SiteIndex box() const {
    return build_box(cfg_.dim, cfg_.side, {}, cfg_.volume_cap);
  }

  void flag(const std::string& reason) {
    result_.flagged = true;
    result_.flag_reasons.push_back(reason);
  }

  void note(const std::string& key, const std::string& value) {
    result_.summary.emplace_back(key, value);
  }

  // ---- estimators ----

  void run_ids() {
    SiteIndex b = box();
    DistributionSpec dist = DistributionSpec::parse(cfg_.dist);
    IdsCurve curve =
        estimate_ids(b, dist, detail::linspace(cfg_.emin, cfg_.emax, cfg_.npoints),
                     cfg_.samples, cfg_.seed, options());
    CsvTable t;
    t.header = {"E", "N_hat", "stderr", "samples", "volume"};
    for (std::size_t g = 0; g < curve.grid.size(); ++g)
      t.add_row({fmt_double(curve.grid[g]), fmt_double(curve.n_hat[g]),
                 fmt_double(curve.std_err[g]), fmt_int(curve.samples),
                 fmt_int(curve.volume)});
    tables_.emplace_back("", std::move(t));
    note("points", fmt_int(static_cast<long long>(curve.grid.size())));
    note("N_hat_max", fmt_double(curve.n_hat.back()));
  }

  void run_dos() {
    SiteIndex b = box();
    DistributionSpec dist = DistributionSpec::parse(cfg_.dist);
    double top = 4.0 * b.dim() + dist.support_sup();
    if (cfg_.bins < 1) throw std::invalid_argument("bins must be at least 1");
    std::vector<double> edges = detail::linspace(0.0, top, cfg_.bins + 1);
    DosEstimate dos = estimate_dos(b, dist, edges, cfg_.samples, cfg_.seed,
                                   cfg_.bandwidth, options());
    CsvTable t;
    t.header = {"E_lo", "E_hi", "n_hat", "stderr", "n_smooth", "pooled_count"};
    for (std::size_t j = 0; j + 1 < dos.edges.size(); ++j)
      t.add_row({fmt_double(dos.edges[j]), fmt_double(dos.edges[j + 1]),
                 fmt_double(dos.n_hat[j]), fmt_double(dos.std_err[j]),
                 fmt_double(dos.n_smooth[j]), fmt_int(dos.pooled_counts[j])});
    tables_.emplace_back("", std::move(t));
    double mass = 0.0;
    for (std::size_t j = 0; j + 1 < dos.edges.size(); ++j)
      mass += dos.n_hat[j] * (dos.edges[j + 1] - dos.edges[j]);
    note("bins", fmt_int(cfg_.bins));
    note("bandwidth", fmt_double(dos.bandwidth));
    note("total_mass", fmt_double(mass));
  }

  void run_wegner() {
    SiteIndex b = box();
    DistributionSpec dist = DistributionSpec::parse(cfg_.dist);
    WegnerReport rep =
        wegner_ratio(b, dist, EnergyInterval(cfg_.interval_lo, cfg_.interval_hi),
                     cfg_.samples, cfg_.seed, options());
    CsvTable t;
    t.header = {"I_lo",   "I_hi",     "trP_mean", "trP_stderr",
                "K_hat",  "K_stderr", "flagged"};
    t.add_row({fmt_double(rep.interval.lower), fmt_double(rep.interval.upper),
               fmt_double(rep.trp_mean), fmt_double(rep.trp_stderr),
               fmt_double(rep.k_hat), fmt_double(rep.k_stderr),
               detail::pass_str(rep.flagged)});
    tables_.emplace_back("", std::move(t));
    note("K_hat", fmt_double(rep.k_hat));
    note("K_stderr", fmt_double(rep.k_stderr));
    if (rep.flagged) flag("wegner ratio exceeds 1 beyond 3 standard errors");
  }

  void run_spectral_averaging() {
    SiteIndex b = box();
    DistributionSpec dist = DistributionSpec::parse(cfg_.dist);
    SpectralAveragingReport rep = spectral_averaging_audit(
        b, dist, cfg_.site, EnergyInterval(cfg_.interval_lo, cfg_.interval_hi),
        cfg_.samples, cfg_.seed, cfg_.nodes, options());
    CsvTable t;
    t.header = {"site", "I_lo", "I_hi", "avg", "stderr", "bound", "flagged"};
    t.add_row({fmt_int(rep.site), fmt_double(rep.interval.lower),
               fmt_double(rep.interval.upper), fmt_double(rep.average),
               fmt_double(rep.std_err), fmt_double(rep.bound),
               detail::pass_str(rep.flagged)});
    tables_.emplace_back("", std::move(t));
    note("avg", fmt_double(rep.average));
    note("bound", fmt_double(rep.bound));
    if (rep.flagged)
      flag("spectral average exceeds the density bound beyond 3 sigma");
  }

  void run_lifshitz() {
    SiteIndex b = box();
    DistributionSpec dist = DistributionSpec::parse(cfg_.dist);
    IdsCurve curve =
        estimate_ids(b, dist, detail::linspace(cfg_.emin, cfg_.emax, cfg_.npoints),
                     cfg_.samples, cfg_.seed, options());
    LifshitzFit fit =
        lifshitz_exponent_fit(curve, cfg_.window_lo, cfg_.window_hi);
    CsvTable t;
    t.header = {"E", "ell_hat", "usable", "note"};
    for (const LifshitzPoint& p : fit.points)
      t.add_row({fmt_double(p.energy), fmt_double(p.ell),
                 detail::pass_str(p.usable), p.note});
    tables_.emplace_back("", std::move(t));
    note("usable", fmt_int(fit.usable_count));
    note("max_ell", fmt_double(fit.max_ell));
    note("slope_vs_logE", fmt_double(fit.slope));
  }

  void run_minami() {
    SiteIndex b = box();
    DistributionSpec dist = DistributionSpec::parse(cfg_.dist);
    double energy = cfg_.energy;
    if (energy <= 0.0) {
      double top = 4.0 * b.dim() + dist.support_sup();
      double cap = cfg_.peak_cap > 0.0 ? cfg_.peak_cap : 0.5 * top;
      std::vector<double> edges =
          detail::linspace(0.0, top, static_cast<int>(std::lround(top / 0.1)) + 1);
      DosEstimate dos = estimate_dos(b, dist, edges, cfg_.samples, cfg_.seed,
                                     0.0, options());
      energy = dos_peak_energy(dos, cap);
      note("auto_energy", fmt_double(energy));
    }
    MinamiReport rep = minami_statistics(b, dist, energy, cfg_.samples,
                                         cfg_.seed, cfg_.half_width, options());
    const double ratio_target = 2.0 * std::log(2.0) - 1.0;
    bool vm_ok = rep.stats.var_over_mean >= 0.8 && rep.stats.var_over_mean <= 1.2;
    bool ratio_ok = std::abs(rep.stats.spacing_ratio_mean - ratio_target) <= 0.03;
    CsvTable t;
    t.header = {"stat_name", "value", "target", "tolerance", "pass"};
    t.add_row({"count_var_over_mean", fmt_double(rep.stats.var_over_mean), "1",
               "0.2", detail::pass_str(vm_ok)});
    t.add_row({"mean_spacing_ratio", fmt_double(rep.stats.spacing_ratio_mean),
               fmt_double(ratio_target), "0.03", detail::pass_str(ratio_ok)});
    t.add_row({"ks_distance_exponential", fmt_double(rep.stats.ks_exponential),
               "0", "", "na"});
    t.add_row({"count_mean", fmt_double(rep.stats.count_mean), "", "", "na"});
    t.add_row({"energy", fmt_double(rep.energy), "", "", "na"});
    t.add_row({"intensity", fmt_double(rep.intensity), "", "", "na"});
    t.add_row({"window_half_width", fmt_double(rep.window), "", "", "na"});
    t.add_row({"total_points", fmt_int(rep.stats.total_points), "", "", "na"});
    tables_.emplace_back("", std::move(t));
    note("var_over_mean", fmt_double(rep.stats.var_over_mean));
    note("spacing_ratio", fmt_double(rep.stats.spacing_ratio_mean));
    note("total_points", fmt_int(rep.stats.total_points));
    if (!vm_ok) flag("count variance/mean outside [0.8, 1.2]");
    if (!ratio_ok) flag("spacing ratio off the independent-points value");
  }

  // ---- probes ----

  void run_probe_lemma() {
    if (cfg_.cases < 1) throw std::invalid_argument("cases must be at least 1");
    struct FamilyStats {
      std::string name;
      PerturbationFamily family;
      long long cases = 0;
      double min_margin = std::numeric_limits<double>::infinity();
      long long violations = 0;
    };
    FamilyStats fams[2] = {
        {"nonneg-diagonal", PerturbationFamily::kNonnegativeDiagonal},
        {"general-symmetric", PerturbationFamily::kGeneralSymmetric}};
    long long gone_cases = 0, gone_violations = 0;
    double gone_max = 0.0;
    for (auto& fam : fams) {
      long long n = cfg_.cases / 2;
      for (long long i = 0; i < n; ++i) {
        LemmaCase c = random_lemma_case(cfg_.seed, i, cfg_.nmax, fam.family);
        LemmaCheck chk = check_trace_lemma(c);
        if (!chk.hypotheses_ok)
          throw std::runtime_error("generated case failed hypothesis check: " +
                                   chk.reject_reason);
        ++fam.cases;
        fam.min_margin = std::min(fam.min_margin, chk.margin);
        if (chk.margin < -1e-9) ++fam.violations;
        // Every 20th case rechecks the degenerate g = 1 setting, where both
        // sides coincide and the margin measures pure rounding noise.
        if (i % 20 == 0) {
          LemmaCase c1 = c;
          c1.g = [](double) { return 1.0; };
          LemmaCheck chk1 = check_trace_lemma(c1);
          if (!chk1.hypotheses_ok)
            throw std::runtime_error("g = 1 case failed hypothesis check");
          ++gone_cases;
          gone_max = std::max(gone_max, std::abs(chk1.margin));
          if (std::abs(chk1.margin) > 1e-12) ++gone_violations;
        }
      }
    }
    CsvTable t;
    t.header = {"family", "cases", "statistic", "value", "violations"};
    for (const auto& fam : fams)
      t.add_row({fam.name, fmt_int(fam.cases), "min_margin",
                 fmt_double(fam.min_margin), fmt_int(fam.violations)});
    t.add_row({"g-equals-1", fmt_int(gone_cases), "max_abs_margin",
               fmt_double(gone_max), fmt_int(gone_violations)});
    tables_.emplace_back("", std::move(t));
    note("min_margin", fmt_double(std::min(fams[0].min_margin,
                                           fams[1].min_margin)));
    note("g1_max_abs_margin", fmt_double(gone_max));
    for (const auto& fam : fams)
      if (fam.violations > 0)
        flag("trace inequality violated in family " + fam.name);
    if (gone_violations > 0) flag("g = 1 margin above rounding tolerance");
  }

  void run_probe_cutoff() {
    int jmax = cfg_.jmax > 0 ? cfg_.jmax : 2 * cfg_.dim + 3;
    CutoffAudit audit = audit_cutoff(cfg_.energy, jmax);
    CsvTable t;
    t.header = {"check", "value", "pass"};
    t.add_row({"range_in_unit_interval", fmt_double(audit.range_ok),
               detail::pass_str(audit.range_ok)});
    t.add_row({"nonincreasing", fmt_double(audit.monotone_ok),
               detail::pass_str(audit.monotone_ok)});
    t.add_row({"plateaus", fmt_double(audit.plateau_ok),
               detail::pass_str(audit.plateau_ok)});
    for (int j = 0; j <= jmax; ++j)
      t.add_row({"sup_scaled_deriv_" + std::to_string(j),
                 fmt_double(audit.sup_scaled[j]), "na"});
    tables_.emplace_back("", std::move(t));
    note("jmax", fmt_int(jmax));
    note("sup_scaled_max",
         fmt_double(*std::max_element(audit.sup_scaled.begin(),
                                      audit.sup_scaled.end())));
    if (!audit.range_ok || !audit.monotone_ok || !audit.plateau_ok)
      flag("cutoff shape check failed");
  }

  void run_probe_decay() {
    SiteIndex b = box();
    DistributionSpec dist = DistributionSpec::parse(cfg_.dist);
    DecayProfile prof =
        kernel_decay_profile(b, dist, cfg_.energy, cfg_.samples, cfg_.seed,
                             cfg_.workers, cfg_.volume_cap);
    CsvTable t;
    t.header = {"norm2", "k_bracket", "envelope"};
    for (const DecayShell& s : prof.shells)
      t.add_row({fmt_int(s.norm2), fmt_double(s.k_bracket),
                 fmt_double(s.envelope)});
    tables_.emplace_back("", std::move(t));
    note("fitted_exponent", fmt_double(prof.fitted_exponent));
    note("shells", fmt_int(static_cast<long long>(prof.shells.size())));
  }

  void run_probe_heat() {
    SiteIndex b = box();
    DistributionSpec dist = DistributionSpec::parse(cfg_.dist);
    if (cfg_.cases < 1) throw std::invalid_argument("cases must be at least 1");
    long zero = b.index(std::vector<long>(b.dim(), 0));
    long ksite = b.index(std::vector<long>(b.dim(), b.side() / 4));
    SublatticeSpec gamma = choose_decoupling_sublattice(b, ksite);
    CsvTable t;
    t.header = {"case", "t",          "site",        "mono_margin",
                "split_margin", "domination_margin"};
    double min_mono = std::numeric_limits<double>::infinity();
    double min_split = min_mono, min_dom = min_mono;
    long long violations = 0;
    for (long long c = 0; c < cfg_.cases; ++c) {
      DisorderField field = sample_disorder(b, dist, cfg_.seed, c);
      for (double tv : cfg_.tvals)
        for (long site : {zero, ksite}) {
          HeatCheck chk = heat_comparison(b, field, gamma, site, tv,
                                          cfg_.energy, cfg_.volume_cap);
          min_mono = std::min(min_mono, chk.mono_margin);
          min_split = std::min(min_split, chk.split_margin);
          min_dom = std::min(min_dom, chk.domination_margin);
          if (chk.mono_margin < -1e-10 || chk.split_margin < -1e-10 ||
              chk.domination_margin < -1e-10)
            ++violations;
          t.add_row({fmt_int(c), fmt_double(tv), fmt_int(site),
                     fmt_double(chk.mono_margin), fmt_double(chk.split_margin),
                     fmt_double(chk.domination_margin)});
        }
    }
    tables_.emplace_back("", std::move(t));
    note("min_mono_margin", fmt_double(min_mono));
    note("min_split_margin", fmt_double(min_split));
    note("min_domination_margin", fmt_double(min_dom));
    note("violations", fmt_int(violations));
    if (violations > 0) flag("heat comparison violated");
  }

  void run_probe_decoupling() {
    SiteIndex b = box();
    DistributionSpec dist = DistributionSpec::parse(cfg_.dist);
    DecouplingReport rep = evaluate_decoupling_bound(
        b, dist, cfg_.energy, cfg_.eps, cfg_.samples, cfg_.seed, cfg_.k_coord,
        cfg_.workers, cfg_.volume_cap);
    CsvTable t;
    t.header = {"quantity", "value"};
    auto row = [&t](const std::string& k, const std::string& v) {
      t.add_row({k, v});
    };
    row("t", fmt_double(rep.params.t));
    row("in_regime", detail::pass_str(rep.params.in_regime));
    row("identity_lhs", fmt_double(rep.params.identity_lhs));
    row("identity_rhs", fmt_double(rep.params.identity_rhs));
    if (rep.params.in_regime) {
      row("min_cutoff_vs_heat", fmt_double(rep.min_cutoff_vs_heat));
      row("min_mask_monotone", fmt_double(rep.min_mask_monotone));
      row("min_split", fmt_double(rep.min_split));
      row("min_orbit_vs_trace", fmt_double(rep.min_orbit_vs_trace));
      row("min_chain", fmt_double(rep.min_chain));
      row("min_domination", fmt_double(rep.min_domination));
      row("orbit_diff_mean", fmt_double(rep.orbit_diff_mean));
      row("orbit_diff_stderr", fmt_double(rep.orbit_diff_stderr));
      row("mean_ptilde_0", fmt_double(rep.mean_ptilde_0));
      row("mean_ptilde_k", fmt_double(rep.mean_ptilde_k));
      row("mean_chi_volume", fmt_double(rep.mean_chi_volume));
      row("tail_envelope", fmt_double(rep.tail_envelope));
      row("ptilde_envelope", fmt_double(rep.ptilde_envelope));
      row("sublattice_count", fmt_int(rep.sublattice_count));
    } else {
      row("note", "outside the positive-t regime; no bound evaluated");
    }
    tables_.emplace_back("", std::move(t));
    note("t", fmt_double(rep.params.t));
    note("in_regime", detail::pass_str(rep.params.in_regime));
    if (rep.params.in_regime) {
      note("min_chain", fmt_double(rep.min_chain));
      note("mean_ptilde_0", fmt_double(rep.mean_ptilde_0));
    }
    if (rep.flagged) flag("decoupling inequality check violated");
  }

  // ---- emission ----

  void emit() {
    namespace fs = std::filesystem;
    fs::path dir = cfg_.out_dir;
    if (dir.empty()) {
      const char* env = std::getenv("ANDLAB_OUT_DIR");
      dir = env && *env ? env : ".";
    }
    try {
      fs::create_directories(dir);
    } catch (const fs::filesystem_error& e) {
      throw IoError(std::string("cannot create output directory: ") +
                    e.what());
    }
    std::string stem = experiment_name(cfg_.experiment) + "_" +
                       config_hash(cfg_);
    nlohmann::json manifest;
    manifest["tool"] = "andlab";
    manifest["version"] = kVersion;
    manifest["config_hash"] = config_hash(cfg_);
    nlohmann::json jcfg;
    for (const auto& [k, v] : canonical_fields(cfg_)) jcfg[k] = v;
    manifest["config"] = jcfg;
    manifest["workers"] = cfg_.workers;
    manifest["wall_ms"] = wall_ms_;
    nlohmann::json jresults = nlohmann::json::array();
    for (auto& [suffix, table] : tables_) {
      fs::path file = dir / (stem + suffix + ".csv");
      std::string body = table.render();
      write_file_atomic(file, body);
      result_.files.push_back(file.string());
      jresults.push_back({{"file", file.filename().string()},
                          {"rows", table.rows.size()},
                          {"fnv64", fnv1a64(body)}});
    }
    manifest["results"] = jresults;
    nlohmann::json jsummary;
    for (const auto& [k, v] : result_.summary) jsummary[k] = v;
    manifest["summary"] = jsummary;
    manifest["flags"] = {{"flagged", result_.flagged},
                         {"reasons", result_.flag_reasons}};
    fs::path mfile = dir / (stem + ".manifest.json");
    write_file_atomic(mfile, manifest.dump(2) + "\n");
    result_.files.push_back(mfile.string());
  }

  ExperimentConfig cfg_;
  RunResult result_;
  std::vector<std::pair<std::string, CsvTable>> tables_;
  long long wall_ms_ = 0;
};

inline RunResult run_experiment(const ExperimentConfig& cfg) {
  return ExperimentRun(cfg).run();
}

}  // namespace andlab
