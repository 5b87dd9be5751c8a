#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <stdexcept>
#include <vector>

#include "andlab/disorder.hpp"
#include "andlab/lattice.hpp"

// Tight-binding Hamiltonian H = -Delta + V on the torus box: 2d + omega_n on
// the diagonal, -1 on every nearest-neighbor edge.  With this sign and shift
// convention the free spectrum is [0, 4d] and adding the (nonnegative)
// coupling field only pushes energy up.

namespace andlab {

struct OperatorMatrix {
  Eigen::SparseMatrix<double> mat;
  int d = 0;

  long volume() const { return mat.rows(); }

  Eigen::MatrixXd dense(long cap = kDefaultVolumeCap) const {
    if (mat.rows() > cap)
      throw std::invalid_argument("volume cap exceeded for dense conversion");
    return Eigen::MatrixXd(mat);
  }
};

inline OperatorMatrix assemble_hamiltonian(const SiteIndex& box,
                                           const DisorderField& field) {
  const long n = box.volume();
  if (static_cast<long>(field.values.size()) != n)
    throw std::invalid_argument("field size does not match box volume");
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(n * (2 * box.dim() + 1));
  for (long i = 0; i < n; ++i) {
    entries.emplace_back(i, i, 2.0 * box.dim() + field.values[i]);
    // Walk only the positive directions so each torus edge is visited once,
    // then insert both orientations with the same constant.
    for (int axis = 0; axis < box.dim(); ++axis) {
      long j = box.neighbor(i, axis, +1);
      entries.emplace_back(i, j, -1.0);
      entries.emplace_back(j, i, -1.0);
    }
  }
  OperatorMatrix H;
  H.d = box.dim();
  H.mat.resize(n, n);
  H.mat.setFromTriplets(entries.begin(), entries.end());
  return H;
}

}  // namespace andlab
