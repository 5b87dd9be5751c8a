#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "andlab/hamiltonian.hpp"

// Dense symmetric eigensolves and spectral calculus.  Everything downstream
// (counting measures, spectral projections, heat kernels, smooth cutoffs of
// the Hamiltonian) is evaluated through one eigendecomposition per operator;
// no iterative shortcuts, so results carry LAPACK-grade accuracy and need no
// per-function convergence knobs.

namespace andlab {

struct EnergyInterval {
  double lower;
  double upper;

  EnergyInterval(double lo, double hi) : lower(lo), upper(hi) {
    if (!(lo <= hi))
      throw std::invalid_argument("interval must satisfy lower <= upper");
  }

  double width() const { return upper - lower; }

  // Closed-interval indicator, the spectral projection's scalar symbol.
  double operator()(double x) const {
    return (x >= lower && x <= upper) ? 1.0 : 0.0;
  }
};

struct EigenSystem {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // empty unless requested
  double residual_bound = 0.0;

  bool has_vectors() const { return vectors.size() > 0; }
};

inline EigenSystem eigensolve_dense(const Eigen::MatrixXd& H,
                                    bool need_vectors,
                                    long cap = kDefaultVolumeCap) {
  const long n = H.rows();
  if (n != H.cols()) throw std::invalid_argument("operator must be square");
  if (n > cap) throw std::invalid_argument("volume cap exceeded");
  for (long i = 0; i < n; ++i)
    for (long j = i + 1; j < n; ++j)
      if (H(i, j) != H(j, i))
        throw std::invalid_argument("operator entries are not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      H, need_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigensolver did not converge (n = " +
                             std::to_string(n) + ")");
  EigenSystem sys;
  sys.values = solver.eigenvalues();
  if (need_vectors) {
    sys.vectors = solver.eigenvectors();
    sys.residual_bound = (H * sys.vectors -
                          sys.vectors * sys.values.asDiagonal())
                             .colwise()
                             .norm()
                             .maxCoeff();
  } else {
    // No vectors to test against; report the standard backward-error scale.
    double scale = std::max(std::abs(sys.values(0)),
                            std::abs(sys.values(n - 1)));
    sys.residual_bound =
        scale * n * std::numeric_limits<double>::epsilon();
  }
  return sys;
}

inline EigenSystem eigensolve(const OperatorMatrix& H, bool need_vectors,
                              long cap = kDefaultVolumeCap) {
  return eigensolve_dense(H.dense(cap), need_vectors, cap);
}

// Number of eigenvalues <= E.
inline long count_below(const Eigen::VectorXd& sorted_values, double E) {
  return std::upper_bound(sorted_values.data(),
                          sorted_values.data() + sorted_values.size(), E) -
         sorted_values.data();
}

// Number of eigenvalues in the closed interval.
inline long count_in(const Eigen::VectorXd& sorted_values,
                     const EnergyInterval& I) {
  const double* begin = sorted_values.data();
  const double* end = begin + sorted_values.size();
  return std::upper_bound(begin, end, I.upper) -
         std::lower_bound(begin, end, I.lower);
}

// <delta_site, g(H) delta_site>.
template <class G>
double local_spectral_weight(const EigenSystem& sys, long site, G&& g) {
  if (!sys.has_vectors())
    throw std::invalid_argument("eigenvectors required for local weights");
  double acc = 0.0;
  for (long i = 0; i < sys.values.size(); ++i) {
    double v = sys.vectors(site, i);
    acc += g(sys.values(i)) * v * v;
  }
  return acc;
}

// <delta_j, g(H) delta_k>.
template <class G>
double operator_entry(const EigenSystem& sys, long j, long k, G&& g) {
  if (!sys.has_vectors())
    throw std::invalid_argument("eigenvectors required for matrix entries");
  double acc = 0.0;
  for (long i = 0; i < sys.values.size(); ++i)
    acc += g(sys.values(i)) * sys.vectors(j, i) * sys.vectors(k, i);
  return acc;
}

// Full row <delta_j, g(H) delta_.>, one pass over the eigenbasis.
template <class G>
Eigen::VectorXd operator_row(const EigenSystem& sys, long j, G&& g) {
  if (!sys.has_vectors())
    throw std::invalid_argument("eigenvectors required for matrix rows");
  Eigen::VectorXd scaled(sys.values.size());
  for (long i = 0; i < sys.values.size(); ++i)
    scaled(i) = g(sys.values(i)) * sys.vectors(j, i);
  return sys.vectors * scaled;
}

// g(H) as a dense matrix.
template <class G>
Eigen::MatrixXd operator_function(const EigenSystem& sys, G&& g) {
  if (!sys.has_vectors())
    throw std::invalid_argument("eigenvectors required for matrix functions");
  Eigen::VectorXd gv(sys.values.size());
  for (long i = 0; i < sys.values.size(); ++i) gv(i) = g(sys.values(i));
  return sys.vectors * gv.asDiagonal() * sys.vectors.transpose();
}

// tr g(H).
template <class G>
double trace_function(const EigenSystem& sys, G&& g) {
  double acc = 0.0;
  for (long i = 0; i < sys.values.size(); ++i) acc += g(sys.values(i));
  return acc;
}

}  // namespace andlab
