#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace korovkin {

inline constexpr std::size_t kDefaultGrid = 1024;
inline constexpr std::size_t kDefaultOmegaGrid = 4096;

/**
 * Values of a real function at the N+1 equispaced points of [lo, hi].
 *
 * The same type carries functions on [0,1] and their extensions to
 * [-h, 1+h]. Immutable after construction.
 */
class GridFunction {
 public:
  GridFunction(double lo, double hi, std::vector<double> values);

  /// Samples `fn` at the `intervals`+1 grid points of [lo, hi].
  static GridFunction tabulate(double lo, double hi, std::size_t intervals,
                               const std::function<double(double)>& fn);

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  std::size_t intervals() const noexcept { return values_.size() - 1; }
  std::size_t size() const noexcept { return values_.size(); }
  double spacing() const noexcept { return (hi_ - lo_) / static_cast<double>(intervals()); }

  /// Abscissa of grid point i; x(0) == lo and x(N) == hi exactly.
  double x(std::size_t i) const noexcept;
  std::vector<double> abscissae() const;

  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }

  /// Piecewise-linear interpolation; throws InvalidArgument outside [lo, hi].
  double eval_interp(double x) const;

  bool same_grid(const GridFunction& other) const noexcept;

 private:
  double lo_;
  double hi_;
  std::vector<double> values_;
};

/// max_i |g1_i - g2_i|; grids must coincide.
double sup_diff(const GridFunction& g1, const GridFunction& g2);
double sup_norm(const GridFunction& g);

enum class FunctionKind { monomial, abs_shift, sine_pi, exponential, sqrt_fn, ramp, custom_samples };

/// sup|g'| and sup|g''| on [0,1], known in closed form.
struct DerivativeNorms {
  double first;
  double second;
};

/**
 * A function of the test catalog.
 *
 *   monomial(i)   x^i, i in {0,1,2,3}
 *   abs_shift(c)  |x - c|
 *   sine_pi       sin(pi x)
 *   exponential   exp(x)
 *   sqrt_fn       sqrt(x)
 *   ramp(c)       max(0, x - c)
 *   custom        piecewise-linear through user samples on [0,1]
 */
class FunctionSpec {
 public:
  static FunctionSpec monomial(int degree);
  static FunctionSpec abs_shift(double c);
  static FunctionSpec sine_pi();
  static FunctionSpec exponential();
  static FunctionSpec sqrt_fn();
  static FunctionSpec ramp(double c);
  static FunctionSpec custom(GridFunction samples);

  FunctionKind kind() const noexcept { return kind_; }
  double parameter() const noexcept { return param_; }
  int degree() const noexcept { return static_cast<int>(param_); }

  /// Evaluates on [0,1]. Analytic entries are not range checked.
  double operator()(double x) const;

  /// Canonical spelling, parseable by parse_function().
  std::string name() const;

  std::optional<DerivativeNorms> derivative_norms() const;

  /// Points in (0,1) where the function fails to be smooth.
  std::vector<double> breakpoints() const;

  bool is_affine() const noexcept;

  /// True when f has an unbounded derivative at x = 0 (sqrt).
  bool steep_at_zero() const noexcept;

 private:
  FunctionSpec(FunctionKind kind, double param) : kind_(kind), param_(param) {}

  FunctionKind kind_;
  double param_ = 0.0;
  std::optional<GridFunction> samples_;
};

/// Parses "e0".."e3", "monomial:i", "abs_shift:c", "sine_pi", "exponential",
/// "sqrt", "ramp:c".
FunctionSpec parse_function(std::string_view text);

/// Values of f at the N+1 uniform points of [0,1].
GridFunction sample(const FunctionSpec& f, std::size_t intervals);

/// Same, on [0, hi] (operators restricted to a sub-window of [0,1]).
GridFunction sample(const FunctionSpec& f, std::size_t intervals, double hi);

}  // namespace korovkin
