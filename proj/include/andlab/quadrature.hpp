#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <utility>
#include <vector>

// Gauss-Legendre rules via the Golub-Welsch construction: nodes are the
// eigenvalues of the Jacobi matrix of the Legendre recurrence, weights come
// from the first components of its eigenvectors.

namespace andlab {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Rule on [-1, 1], exact for polynomials of degree 2n - 1.
inline QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("quadrature order must be positive");
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    double b = k / std::sqrt(4.0 * k * k - 1.0);
    jacobi(k, k - 1) = b;
    jacobi(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("quadrature eigensolve failed");
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int k = 0; k < n; ++k) {
    rule.nodes[k] = solver.eigenvalues()(k);
    double v0 = solver.eigenvectors()(0, k);
    rule.weights[k] = 2.0 * v0 * v0;
  }
  return rule;
}

// Affine image of the rule on [a, b].
inline QuadratureRule gauss_legendre(int n, double a, double b) {
  QuadratureRule rule = gauss_legendre(n);
  double mid = 0.5 * (a + b);
  double half = 0.5 * (b - a);
  for (int k = 0; k < n; ++k) {
    rule.nodes[k] = mid + half * rule.nodes[k];
    rule.weights[k] *= half;
  }
  return rule;
}

}  // namespace andlab
