#pragma once

#include <concepts>
#include <cstddef>
#include <optional>
#include <vector>

#include "korovkin/gridfn.hpp"

namespace korovkin {

/**
 * Discrete sup of the first or second difference of f over x on the
 * N_omega grid and steps h <= delta on the same grid:
 *
 *   order 1: |f(x+h) - f(x)|,         h <= min(delta, 1)
 *   order 2: |f(x+h) - 2f(x) + f(x-h)|, h <= min(delta, 1/2)
 *
 * Throws InvalidArgument for delta < 0, order not in {1,2}, or N_omega < 64.
 */
double omega(int order, const FunctionSpec& f, double delta,
             std::size_t n_omega = kDefaultOmegaGrid);

enum class ModulusMode {
  discrete,         ///< always the grid sup
  exact_when_known  ///< closed forms for e0..e3, grid sup otherwise
};

/// Moduli of one function, tabulated once and queried in O(1).
class Modulus {
 public:
  explicit Modulus(const FunctionSpec& f, std::size_t n_omega = kDefaultOmegaGrid,
                   ModulusMode mode = ModulusMode::exact_when_known);

  double operator()(int order, double delta) const;
  double first(double delta) const { return (*this)(1, delta); }
  double second(double delta) const { return (*this)(2, delta); }

  bool closed_form() const noexcept { return degree_.has_value(); }
  std::size_t resolution() const noexcept { return n_; }

 private:
  std::size_t n_;
  std::optional<int> degree_;
  std::vector<double> w1_;  // running max of the order-1 differences, by step index
  std::vector<double> w2_;
};

/// Best uniform approximation by a line on a discrete subgrid of [a,b].
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double deviation = 0.0;  ///< achieved max |f - line| on the subgrid
  int iterations = 0;
  bool fallback = false;   ///< exchange did not settle; dense minimax used instead

  double operator()(double x) const noexcept { return slope * x + intercept; }
};

template <class Fn>
concept RealFunction = requires(const Fn& fn, double x) {
  { fn(x) } -> std::convertible_to<double>;
};

/// Three-point exchange on `points`+1 equispaced abscissae.
LinearFit best_linear(const std::vector<double>& xs, const std::vector<double>& ys);

template <RealFunction Fn>
LinearFit best_linear(const Fn& f, double a, double b, std::size_t points = 2048) {
  std::vector<double> xs(points + 1), ys(points + 1);
  for (std::size_t i = 0; i <= points; ++i) {
    xs[i] = i == points ? b : a + (b - a) * (static_cast<double>(i) / static_cast<double>(points));
    ys[i] = f(xs[i]);
  }
  return best_linear(xs, ys);
}

/// Minimax line by minimizing the (convex) strip width over the slope.
LinearFit dense_minimax_line(const std::vector<double>& xs, const std::vector<double>& ys);

/**
 * f on [0,1], continued to [-h, 1+h] by its best lines on [0,h] (left) and
 * [1-h,1] (right). Requires 0 < h < 1/2.
 */
class Extension {
 public:
  Extension(FunctionSpec f, double h);

  double operator()(double x) const;

  enum class Piece { left, middle, right };
  /// Evaluates one branch, ignoring where x falls; used for one-sided limits at the seams.
  double branch(Piece piece, double x) const;

  double h() const noexcept { return h_; }
  const FunctionSpec& function() const noexcept { return f_; }
  const LinearFit& left() const noexcept { return left_; }
  const LinearFit& right() const noexcept { return right_; }

 private:
  FunctionSpec f_;
  double h_;
  LinearFit left_;
  LinearFit right_;
};

GridFunction extend(const FunctionSpec& f, double h, std::size_t intervals = kDefaultGrid);

inline constexpr int kSimpsonPanels = 64;

/**
 * Second-order Steklov mean of the extension:
 *
 *   Z_h f(x) = (1/h) * integral_{-h}^{h} (1 - |t|/h) f_h(x+t) dt,  x in [0,1].
 *
 * Composite Simpson, split at the kernel apex, the seams 0 and 1 and the
 * breakpoints of f, with about `panels` panels per half-support.
 */
class ZhukSmoother {
 public:
  ZhukSmoother(const FunctionSpec& f, double h, int panels = kSimpsonPanels);

  double operator()(double x) const;

  double h() const noexcept { return ext_.h(); }
  const Extension& extension() const noexcept { return ext_; }

 private:
  Extension ext_;
  int panels_;
  bool steep_;
  std::vector<double> kinks_;
};

struct SmoothedFunction {
  GridFunction zf;
  double h;
  double d1_bound;  ///< max |first difference| / spacing
  double d2_bound;  ///< max |second difference| / spacing^2
};

/// Tabulates Z_h f on [0,1]; needs at least 8 grid points across [-h,h].
SmoothedFunction zhuk(const FunctionSpec& f, double h, std::size_t intervals = kDefaultGrid,
                      int panels = kSimpsonPanels);

/// Measured sides of the smoothing inequalities for g = B_l(Z_h f).
struct ZhukReport {
  double h = 0.0;
  unsigned l = 0;
  double omega1 = 0.0;  ///< omega_1(f;h)
  double omega2 = 0.0;  ///< omega_2(f;h)

  double f_minus_g = 0.0;  ///< ||f - g||
  double eps = 0.0;        ///< ||B_l(Z_h f) - Z_h f||
  double g1 = 0.0;         ///< ||g'||
  double g2 = 0.0;         ///< ||g''||
  double z1 = 0.0;         ///< finite-difference ||(Z_h f)'||
  double z2 = 0.0;         ///< finite-difference ||(Z_h f)''||

  double bound0() const noexcept { return 0.75 * omega2; }
  double bound1() const noexcept { return (2.0 * omega1 + 1.5 * omega2) / h; }
  double bound2() const noexcept { return 1.5 * omega2 / (h * h); }

  bool approximation_ok() const noexcept { return f_minus_g <= bound0() + eps + 1e-12; }
  bool first_ok(double rel_slack) const noexcept { return g1 <= bound1() * (1.0 + rel_slack) + 1e-12; }
  bool second_ok(double rel_slack) const noexcept { return g2 <= bound2() * (1.0 + rel_slack) + 1e-12; }
  bool passes(double rel_slack = 0.05) const noexcept {
    return approximation_ok() && first_ok(rel_slack) && second_ok(rel_slack);
  }
};

ZhukReport check_zhuk_bounds(const FunctionSpec& f, double h, unsigned l,
                             std::size_t intervals = kDefaultGrid,
                             std::size_t n_omega = kDefaultOmegaGrid);

}  // namespace korovkin
