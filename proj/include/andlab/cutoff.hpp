#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

// Smooth step-down cutoff built from the classic exp(-1/x) bump.  The shape
// function h is 1 on (-inf, 0], 0 on [1, inf), and C-infinity in between;
// the cutoff at scale E is f_E(t) = h((t - E)/E), so it is 1 up to E, 0 from
// 2E on, and its j-th derivative is bounded by a j-dependent constant times
// E^{-j}.  Derivatives are evaluated analytically through the recurrences
// below, not by finite differences, so high orders stay accurate.

namespace andlab {

class SmoothCutoff {
 public:
  // Coefficient growth in the derivative recurrences stays comfortably inside
  // double range up to this order.
  static constexpr int kMaxOrder = 16;

  explicit SmoothCutoff(double scale) : scale_(scale) {
    if (!(scale > 0.0))
      throw std::invalid_argument("cutoff scale must be positive");
  }

  double scale() const { return scale_; }

  double operator()(double t) const { return shape((t - scale_) / scale_); }

  double derivative(int order, double t) const {
    double x = (t - scale_) / scale_;
    return shape_derivative(order, x) * std::pow(scale_, -order);
  }

  // h(x) = sigma(1-x) / (sigma(x) + sigma(1-x)).
  static double shape(double x) { return shape_derivative(0, x); }

  // j-th derivative of h.  On (0, 1) the denominator sigma(x) + sigma(1-x)
  // is bounded below by exp(-2), so the Leibniz solve for h^{(j)} is stable
  // at every order we admit.
  static double shape_derivative(int order, double x) {
    if (order < 0 || order > kMaxOrder)
      throw std::invalid_argument("cutoff derivative order out of range");
    // Outside (kEdge, 1 - kEdge) every returned quantity is below the double
    // rounding threshold of the exact value (1, or 0 for derivatives).
    if (x <= kEdge) return order == 0 ? 1.0 : 0.0;
    if (x >= 1.0 - kEdge) return 0.0;
    std::vector<double> sig_x = sigma_derivatives(x, order);
    std::vector<double> sig_1mx = sigma_derivatives(1.0 - x, order);
    // N = sigma(1-x), D = sigma(x) + sigma(1-x); the chain rule brings a
    // (-1)^j for every derivative passing through 1-x.
    std::vector<double> numer(order + 1), denom(order + 1);
    double sign = 1.0;
    for (int j = 0; j <= order; ++j) {
      numer[j] = sign * sig_1mx[j];
      denom[j] = sig_x[j] + sign * sig_1mx[j];
      sign = -sign;
    }
    std::vector<double> h(order + 1);
    for (int j = 0; j <= order; ++j) {
      double acc = numer[j];
      for (int i = 0; i < j; ++i)
        acc -= binomial(j, i) * h[i] * denom[j - i];
      h[j] = acc / denom[0];
    }
    return h[order];
  }

 private:
  static constexpr double kEdge = 1e-3;

  // sigma^{(j)}(y) for j = 0..jmax, where sigma(y) = exp(-1/y) on y > 0.
  // Writing sigma^{(j)}(y) = exp(-1/y) Q_j(1/y) gives the polynomial
  // recurrence Q_{j+1}(u) = u^2 (Q_j(u) - Q_j'(u)).
  static std::vector<double> sigma_derivatives(double y, int jmax) {
    const auto& table = q_table();
    double u = 1.0 / y;
    double base = std::exp(-u);
    std::vector<double> out(jmax + 1);
    for (int j = 0; j <= jmax; ++j) {
      const std::vector<double>& q = table[j];
      double acc = 0.0;
      for (int p = static_cast<int>(q.size()) - 1; p >= 0; --p)
        acc = acc * u + q[p];
      out[j] = base * acc;
    }
    return out;
  }

  // Coefficients of Q_j in ascending powers of u, built once.
  static const std::vector<std::vector<double>>& q_table() {
    static const std::vector<std::vector<double>> table = [] {
      std::vector<std::vector<double>> t;
      t.push_back({1.0});
      for (int j = 0; j < kMaxOrder; ++j) {
        const std::vector<double>& q = t.back();
        std::vector<double> next(q.size() + 2, 0.0);
        for (std::size_t p = 0; p < q.size(); ++p) {
          next[p + 2] += q[p];
          if (p >= 1) next[p + 1] -= static_cast<double>(p) * q[p];
        }
        t.push_back(std::move(next));
      }
      return t;
    }();
    return table;
  }

  static double binomial(int n, int k) {
    static const std::vector<std::vector<double>> pascal = [] {
      std::vector<std::vector<double>> p(kMaxOrder + 1);
      for (int i = 0; i <= kMaxOrder; ++i) {
        p[i].assign(i + 1, 1.0);
        for (int j = 1; j < i; ++j) p[i][j] = p[i - 1][j - 1] + p[i - 1][j];
      }
      return p;
    }();
    return pascal[n][k];
  }

  double scale_;
};

inline SmoothCutoff make_cutoff(double scale) { return SmoothCutoff(scale); }

// Scan record for one cutoff: scaled derivative sups and the plateau and
// range checks that make f_E usable as a spectral test function.
struct CutoffAudit {
  double scale = 0.0;
  std::vector<double> sup_scaled;  // sup_t |f^{(j)}(t)| * scale^j, j = 0..jmax
  bool range_ok = false;     // 0 <= f <= 1 everywhere scanned
  bool monotone_ok = false;  // nonincreasing
  bool plateau_ok = false;   // f = 1 up to E, f = 0 from 2E on
};

inline CutoffAudit audit_cutoff(double scale, int jmax,
                                int grid_points = 4001) {
  if (jmax > SmoothCutoff::kMaxOrder)
    throw std::invalid_argument("cutoff derivative order out of range");
  SmoothCutoff f(scale);
  CutoffAudit audit;
  audit.scale = scale;
  audit.sup_scaled.assign(jmax + 1, 0.0);
  audit.range_ok = true;
  audit.monotone_ok = true;
  audit.plateau_ok = true;
  double prev = 1.0;
  for (int g = 0; g < grid_points; ++g) {
    double t = 3.0 * scale * g / (grid_points - 1);
    double v = f(t);
    if (v < 0.0 || v > 1.0) audit.range_ok = false;
    if (v > prev + 1e-15) audit.monotone_ok = false;
    prev = v;
    if (t <= scale && v != 1.0) audit.plateau_ok = false;
    if (t >= 2.0 * scale && v != 0.0) audit.plateau_ok = false;
    for (int j = 0; j <= jmax; ++j) {
      double scaled =
          std::abs(f.derivative(j, t)) * std::pow(scale, j);
      if (scaled > audit.sup_scaled[j]) audit.sup_scaled[j] = scaled;
    }
  }
  return audit;
}

}  // namespace andlab
