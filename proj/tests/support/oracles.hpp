#pragma once

// Reference computations written without the library's algorithms.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

namespace oracle {

inline long double binom(unsigned n, unsigned k) {
  long double c = 1.0L;
  for (unsigned i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

/// Bernstein polynomial of f, straight from the definition.
inline double bernstein(unsigned n, const std::function<double(double)>& f, double x) {
  long double s = 0.0L;
  for (unsigned k = 0; k <= n; ++k) {
    s += binom(n, k) * std::pow((long double)x, k) * std::pow(1.0L - x, n - k) * f(double(k) / n);
  }
  return double(s);
}

/// Bernstein of node values v (size n+1) at x.
inline double bernstein_nodes(const std::vector<double>& v, double x) {
  const unsigned n = unsigned(v.size() - 1);
  long double s = 0.0L;
  for (unsigned k = 0; k <= n; ++k) s += binom(n, k) * std::pow((long double)x, k) * std::pow(1.0L - x, n - k) * v[k];
  return double(s);
}

/// a^m x^2 + (1 - a^m) x with a = 1 - 1/n.
inline double bernstein_e2_power(unsigned n, std::size_t m, double x) {
  const double am = std::pow(1.0 - 1.0 / n, double(m));
  return am * x * x + (1.0 - am) * x;
}

/// Positive root of (n-1) r^2 + r - n x^2 = 0 by bisection.
inline double king_r(unsigned n, double x) {
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if ((n - 1.0) * mid * mid + mid - n * x * x < 0.0) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

/// Brute force over every grid pair (x, x+h) with h <= delta.
inline double omega1(const std::function<double(double)>& f, double delta, std::size_t n) {
  std::vector<double> v(n + 1);
  for (std::size_t i = 0; i <= n; ++i) v[i] = f(double(i) / n);
  const std::size_t kmax = std::min<std::size_t>(n, std::size_t(std::floor(delta * n + 1e-9)));
  double w = 0.0;
  for (std::size_t k = 1; k <= kmax; ++k)
    for (std::size_t i = 0; i + k <= n; ++i) w = std::max(w, std::abs(v[i + k] - v[i]));
  return w;
}

inline double omega2(const std::function<double(double)>& f, double delta, std::size_t n) {
  std::vector<double> v(n + 1);
  for (std::size_t i = 0; i <= n; ++i) v[i] = f(double(i) / n);
  const std::size_t kmax = std::min<std::size_t>(n / 2, std::size_t(std::floor(delta * n + 1e-9)));
  double w = 0.0;
  for (std::size_t k = 1; k <= kmax; ++k)
    for (std::size_t i = k; i + k <= n; ++i) w = std::max(w, std::abs(v[i + k] - 2.0 * v[i] + v[i - k]));
  return w;
}

/**
 * Discrete minimax line. The optimal slope is a chord slope of some point pair,
 * so scanning every pair and taking the narrowest strip is exact.
 */
struct Line {
  double slope, intercept, deviation;
};

inline Line minimax_line(const std::vector<double>& xs, const std::vector<double>& ys) {
  Line best{0.0, 0.0, std::numeric_limits<double>::infinity()};
  auto width = [&](double s) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double r = ys[i] - s * xs[i];
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    return std::pair{lo, hi};
  };
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = i + 1; j < xs.size(); ++j) {
      const double s = (ys[j] - ys[i]) / (xs[j] - xs[i]);
      auto [lo, hi] = width(s);
      if ((hi - lo) / 2 < best.deviation) best = {s, (hi + lo) / 2, (hi - lo) / 2};
    }
  }
  return best;
}

/// Trapezoid rule with many panels, for checking the smoothing integral.
inline double trapezoid(const std::function<double(double)>& g, double a, double b, std::size_t panels) {
  const double h = (b - a) / panels;
  double s = 0.5 * (g(a) + g(b));
  for (std::size_t i = 1; i < panels; ++i) s += g(a + i * h);
  return s * h;
}

}  // namespace oracle
