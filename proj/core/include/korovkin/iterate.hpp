#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "korovkin/gridfn.hpp"
#include "korovkin/operators.hpp"

namespace korovkin {

/// Row-stochastic A[j][k] = phi_k(t_j); A^m drives T^m on node values.
struct TransitionMatrix {
  Eigen::MatrixXd a;
  std::vector<double> nodes;
};

TransitionMatrix transition_matrix(const SamplingOperator& op);

/// A^m v.
std::vector<double> power_on_nodes(const TransitionMatrix& tm, std::span<const double> v,
                                   std::size_t m);

/**
 * Caches the transition matrix and the basis evaluated on the report grid,
 * so T^m(f; x_i) = sum_k phi_k(x_i) (A^{m-1} f)_k costs one mat-vec per step.
 */
class IterationEngine {
 public:
  explicit IterationEngine(SamplingOperator op, std::size_t intervals = kDefaultGrid);

  const SamplingOperator& op() const noexcept { return op_; }
  const TransitionMatrix& transition() const noexcept { return tm_; }
  std::size_t intervals() const noexcept { return intervals_; }
  double hi() const noexcept { return op_.domain_hi(); }
  const std::vector<double>& xs() const noexcept { return xs_; }

  /// x_i -> sum_k phi_k(x_i) v_k.
  GridFunction lift(std::span<const double> node_values) const;

  /// T^m(f; .) on the report grid; m = 0 returns the samples of f.
  GridFunction apply_power(const FunctionSpec& f, std::size_t m) const;

  /// T^m(e_i; .) for i in {0,1,2}.
  GridFunction moment_power(int i, std::size_t m) const;

 private:
  SamplingOperator op_;
  TransitionMatrix tm_;
  std::size_t intervals_;
  std::vector<double> xs_;
  Eigen::MatrixXd phi_;  // (N+1) x rank
};

GridFunction apply_power(const SamplingOperator& op, const FunctionSpec& f, std::size_t m,
                         std::size_t intervals = kDefaultGrid);

enum class LimitKind { P, V, eval0, eval1, general };

std::string_view to_string(LimitKind kind);

inline constexpr double kLimitTolerance = 1e-10;
inline constexpr double kClassifyTolerance = 1e-8;
inline constexpr int kMaxSquarings = 60;

/// The limit operator, represented by a converged power of A plus its moments.
struct LimitInfo {
  LimitKind kind = LimitKind::general;
  GridFunction limit_e1;
  GridFunction limit_e2;
  std::uint64_t m_star = 0;  ///< power of A at detection (a power of two)
  double residual = 0.0;     ///< sup moment gap between the last two squarings
  Eigen::MatrixXd limit_matrix;
};

/**
 * Squares A until the node moments e1, e2 move by at most `tol` between
 * consecutive squarings. Throws ConvergenceError after `max_squarings`.
 */
LimitInfo converge_limit(const IterationEngine& engine, double tol = kLimitTolerance,
                         int max_squarings = kMaxSquarings);

LimitInfo converge_limit(const SamplingOperator& op, double tol = kLimitTolerance,
                         int max_squarings = kMaxSquarings, std::size_t intervals = kDefaultGrid);

/// Matches (limit_e1, limit_e2) against (e1,e1)->P, (e2,e2)->V, (0,0)->eval0, (1,1)->eval1.
LimitKind classify_limit(const GridFunction& limit_e1, const GridFunction& limit_e2,
                         double tol = kClassifyTolerance);

/// sup distance of the limit moments to the closed form of `kind` (NaN for general).
double closed_form_distance(const LimitInfo& limit);

double eval_P(const FunctionSpec& f, double x);
double eval_V(const FunctionSpec& f, double x);

/// T_inf(f; .) on the engine grid: closed form when classified, else via the limit matrix.
GridFunction limit_values(const IterationEngine& engine, const LimitInfo& limit,
                          const FunctionSpec& f);

}  // namespace korovkin
