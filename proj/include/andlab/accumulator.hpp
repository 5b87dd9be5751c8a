#pragma once

#include <cmath>
#include <limits>

// Streaming mean/variance in Welford form plus an exactly commutative merge.
// Merging partials in a fixed order reproduces the single-threaded result bit
// for bit, which is what makes worker count invisible in the output files.

namespace andlab {

struct McAccumulator {
  long long n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    double delta = x - mean;
    mean += delta / n;
    m2 += delta * (x - mean);
  }

  // Symmetric in (a, b): every subexpression is invariant under swapping the
  // arguments, so merged(a, b) and merged(b, a) agree bitwise.
  static McAccumulator merged(const McAccumulator& a, const McAccumulator& b) {
    if (a.n == 0) return b;
    if (b.n == 0) return a;
    McAccumulator out;
    out.n = a.n + b.n;
    out.mean = (a.n * a.mean + b.n * b.mean) / out.n;
    double delta = b.mean - a.mean;
    out.m2 = a.m2 + b.m2 +
             delta * delta * (static_cast<double>(a.n) * b.n / out.n);
    return out;
  }

  double variance() const {
    if (n < 2) return std::numeric_limits<double>::quiet_NaN();
    return m2 / (n - 1);
  }

  double std_error() const {
    if (n < 2) return std::numeric_limits<double>::quiet_NaN();
    return std::sqrt(m2 / (static_cast<double>(n) * (n - 1)));
  }
};

}  // namespace andlab
