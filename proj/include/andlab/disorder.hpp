#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "andlab/format.hpp"
#include "andlab/lattice.hpp"
#include "andlab/quadrature.hpp"
#include "andlab/rng.hpp"

// Single-site coupling distributions.  Only bounded densities with compact
// support whose infimum sits at 0 are admitted; that pins the bottom of the
// almost-sure spectrum at 0 and keeps every estimator's energy scale
// comparable across distributions.

namespace andlab {

class DistributionSpec {
 public:
  static DistributionSpec uniform(double a, double b) {
    if (a != 0.0)
      throw std::invalid_argument("dist: support infimum must be 0");
    if (!(b > 0.0) || !std::isfinite(b))
      throw std::invalid_argument("dist: upper edge must be positive");
    DistributionSpec d;
    d.edges_ = {0.0, b};
    d.dens_ = {1.0 / b};
    d.label_ = "uniform:" + fmt_double(a) + "," + fmt_double(b);
    d.finish();
    return d;
  }

  // Piecewise-constant density: dens[i] on (edges[i], edges[i+1]].
  static DistributionSpec piecewise(std::vector<double> edges,
                                    std::vector<double> dens) {
    if (edges.size() < 2 || dens.size() + 1 != edges.size())
      throw std::invalid_argument("dist: need n+1 edges for n densities");
    for (std::size_t i = 0; i + 1 < edges.size(); ++i)
      if (!(edges[i] < edges[i + 1]))
        throw std::invalid_argument("dist: edges must be strictly increasing");
    for (double v : dens)
      if (!(v >= 0.0) || !std::isfinite(v))
        throw std::invalid_argument("dist: densities must be nonnegative");
    DistributionSpec d;
    d.edges_ = std::move(edges);
    d.dens_ = std::move(dens);
    d.label_ = "piecewise:";
    for (std::size_t i = 0; i < d.edges_.size(); ++i)
      d.label_ += (i ? "," : "") + fmt_double(d.edges_[i]);
    d.label_ += ";";
    for (std::size_t i = 0; i < d.dens_.size(); ++i)
      d.label_ += (i ? "," : "") + fmt_double(d.dens_[i]);
    d.finish();
    return d;
  }

  // Text forms: "uniform:a,b" and "piecewise:e0,e1,...;d0,d1,...".
  static DistributionSpec parse(const std::string& text) {
    auto colon = text.find(':');
    std::string kind = text.substr(0, colon);
    std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
    if (kind == "uniform") {
      auto vals = split_doubles(rest, ',');
      if (vals.size() != 2)
        throw std::invalid_argument("dist: expected uniform:a,b");
      return uniform(vals[0], vals[1]);
    }
    if (kind == "piecewise") {
      auto semi = rest.find(';');
      if (semi == std::string::npos)
        throw std::invalid_argument(
            "dist: expected piecewise:e0,e1,...;d0,d1,...");
      return piecewise(split_doubles(rest.substr(0, semi), ','),
                       split_doubles(rest.substr(semi + 1), ','));
    }
    throw std::invalid_argument("dist: unknown kind '" + kind + "'");
  }

  double support_inf() const { return 0.0; }
  double support_sup() const { return sup_; }
  double density_sup() const { return dens_sup_; }
  const std::string& label() const { return label_; }

  double density(double x) const {
    for (std::size_t i = 0; i < dens_.size(); ++i)
      if (x >= edges_[i] && x <= edges_[i + 1]) return dens_[i];
    return 0.0;
  }

  // Inverse CDF.  Zero-density pieces carry no mass and are skipped.
  double quantile(double u) const {
    if (!(u >= 0.0 && u < 1.0))
      throw std::invalid_argument("quantile argument outside [0,1)");
    for (std::size_t i = 0; i < dens_.size(); ++i) {
      if (dens_[i] <= 0.0) continue;
      if (u < cum_[i + 1] || i + 1 == dens_.size())
        return std::min(edges_[i] + (u - cum_[i]) / dens_[i], sup_);
    }
    return sup_;
  }

  // Density-weighted Gauss-Legendre nodes: pairs (x_q, w_q rho(x_q)) whose
  // weights sum to 1.  Exact for expectations of polynomials piece by piece.
  std::vector<std::pair<double, double>> weighted_nodes(
      int per_piece = 64) const {
    std::vector<std::pair<double, double>> out;
    for (std::size_t i = 0; i < dens_.size(); ++i) {
      if (dens_[i] <= 0.0) continue;
      QuadratureRule rule =
          gauss_legendre(per_piece, edges_[i], edges_[i + 1]);
      for (int q = 0; q < per_piece; ++q)
        out.emplace_back(rule.nodes[q], rule.weights[q] * dens_[i]);
    }
    return out;
  }

 private:
  void finish() {
    double mass = 0.0;
    cum_.assign(edges_.size(), 0.0);
    for (std::size_t i = 0; i < dens_.size(); ++i) {
      mass += dens_[i] * (edges_[i + 1] - edges_[i]);
      cum_[i + 1] = mass;
    }
    if (std::abs(mass - 1.0) > 1e-10)
      throw std::invalid_argument("dist: density must integrate to 1, got " +
                                  fmt_double(mass));
    std::size_t lo = 0;
    while (lo < dens_.size() && dens_[lo] <= 0.0) ++lo;
    if (lo == dens_.size())
      throw std::invalid_argument("dist: density vanishes everywhere");
    if (edges_[lo] != 0.0)
      throw std::invalid_argument("dist: support infimum must be 0");
    std::size_t hi = dens_.size();
    while (hi > 0 && dens_[hi - 1] <= 0.0) --hi;
    sup_ = edges_[hi];
    dens_sup_ = *std::max_element(dens_.begin(), dens_.end());
  }

  static std::vector<double> split_doubles(const std::string& s, char sep) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
      auto next = s.find(sep, pos);
      if (next == std::string::npos) next = s.size();
      out.push_back(parse_double(s.substr(pos, next - pos)));
      pos = next + 1;
    }
    return out;
  }

  std::vector<double> edges_;
  std::vector<double> dens_;
  std::vector<double> cum_;
  std::string label_;
  double sup_ = 0.0;
  double dens_sup_ = 0.0;
};

// One sampled coupling field on a box.  Values are generated site by site
// from the counter stream, so the field for a given (seed, realization) is
// identical no matter which thread asks for it.
struct DisorderField {
  std::vector<double> values;
  std::uint64_t seed = 0;
  std::uint64_t realization = 0;
};

inline DisorderField sample_disorder(const SiteIndex& box,
                                     const DistributionSpec& dist,
                                     std::uint64_t seed,
                                     std::uint64_t realization) {
  DisorderField f;
  f.seed = seed;
  f.realization = realization;
  f.values.resize(box.volume());
  for (long i = 0; i < box.volume(); ++i)
    f.values[i] =
        dist.quantile(rng::uniform01(seed, realization, static_cast<std::uint64_t>(i)));
  return f;
}

// Restriction of the coupling field to a set of sites; everything else is
// set to 0.  Pointwise it never increases the potential, which is what the
// comparison arguments downstream rely on.
inline DisorderField mask_potential(const DisorderField& f,
                                    const std::vector<long>& keep) {
  DisorderField g;
  g.seed = f.seed;
  g.realization = f.realization;
  g.values.assign(f.values.size(), 0.0);
  for (long i : keep) {
    if (i < 0 || i >= static_cast<long>(f.values.size()))
      throw std::invalid_argument("mask site outside box");
    g.values[i] = f.values[i];
  }
  return g;
}

}  // namespace andlab
