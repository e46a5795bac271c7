#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "korovkin/gridfn.hpp"
#include "korovkin/iterate.hpp"
#include "korovkin/operators.hpp"
#include "korovkin/smoothness.hpp"

namespace korovkin {

/// Everything the estimates need to know about one operator.
struct OperatorAnalysis {
  IterationEngine engine;
  SignClass sign;
  LimitInfo limit;
  double e2_defect = 0.0;     ///< sup |T(e2;x) - x^2| on the probe grid
  std::optional<double> rate; ///< smallest a with T(e2) >= a e2 + (1-a) e1 (e1-preserving only)

  bool preserves_e2() const noexcept { return e2_defect <= kSignTolerance; }
  bool at_most_e1() const noexcept { return sign.tag == SignTag::preserves_e1 || sign.tag == SignTag::leq_e1; }
  bool at_least_e1() const noexcept { return sign.tag == SignTag::preserves_e1 || sign.tag == SignTag::geq_e1; }
};

struct AnalysisOptions {
  std::size_t intervals = kDefaultGrid;
  std::size_t probe_intervals = kDefaultGrid;
  double tol = kLimitTolerance;
  int max_squarings = kMaxSquarings;
};

/// Sign class, limit (propagates ConvergenceError) and second-moment data.
OperatorAnalysis analyze(const SamplingOperator& op, const AnalysisOptions& opts = {});

/**
 * sup over interior probe points of (x - T(e2;x)) / (x(1-x)): the smallest a
 * for which T(e2) >= a e2 + (1-a) e1 holds on the probe grid.
 */
double second_moment_rate(const SamplingOperator& op, std::size_t probe_intervals = kDefaultGrid);

/// E = |(T^m - T_inf)(e1)|, F = |(T_inf - T^m)(e2)| on the report grid.
struct MomentGaps {
  GridFunction e1_gap;
  GridFunction e2_gap;
  std::size_t m;
};

MomentGaps moment_gaps(const OperatorAnalysis& analysis, std::size_t m);

enum class Trend { below, above };

/**
 * General estimate for T(e1) <= e1 (below) or T(e1) >= e1 (above):
 *   3 w2(E) + 2 w1(E) + 3/4 w2(sqrt(F + 2E))   below
 *   3 w2(E) + 2 w1(E) + 3/4 w2(sqrt(F))        above
 */
GridFunction monotone_bound(Trend trend, const Modulus& mod, const MomentGaps& gaps);

/// 3/4 w2(sqrt(F)); throws HypothesisError unless `sign` preserves e1.
GridFunction linear_preserving_bound(const Modulus& mod, const MomentGaps& gaps, const SignClass& sign);

enum class IdentifiedLimit { endpoint_interpolation, quadratic_below, quadratic_above };

/**
 * Estimates when the limit is identified as P or V, with D = |T^m(e1;x) - x^2|:
 *   P:              3/4 w2(sqrt|x - T^m(e2;x)|)
 *   V, T(e1)<=e1:   3 w2(D) + 2 w1(D) + 3/4 w2(sqrt(2D))
 *   V, T(e1)>=e1:   3 w2(D) + 2 w1(D)
 */
GridFunction identified_limit_bound(IdentifiedLimit which, const Modulus& mod,
                                    const OperatorAnalysis& analysis, std::size_t m);

/// 3/4 w2(sqrt(a^m x(1-x))) at the given abscissae; requires 0 < a < 1.
GridFunction geometric_rate_bound(const Modulus& mod, double a, std::size_t m, double hi,
                                  std::size_t intervals);

enum class Endpoint { left, right };

/**
 * Limits f(0) (left) and f(1) (right):
 *   left:  3 w2(|T^m e1|) + 2 w1(|T^m e1|) + 3/4 w2(sqrt(|T^m e2| + 2|T^m e1|))
 *   right: 3 w2(|T^m e1 - 1|) + 2 w1(|T^m e1 - 1|) + 3/4 w2(sqrt|T^m e2 - 1|)
 */
GridFunction endpoint_limit_bound(Endpoint which, const Modulus& mod,
                                  const OperatorAnalysis& analysis, std::size_t m);

/// The estimates verify() can dispatch to, sharpest first.
enum class Estimate {
  geometric_rate,
  linear_preserving,
  endpoint_interpolation,
  quadratic_below,
  quadratic_above,
  left_endpoint,
  right_endpoint,
  monotone_below,
  monotone_above,
};

std::string_view to_string(Estimate e);

/// Empty when the hypotheses of `e` hold for the analysed operator, else the failed condition.
std::string hypothesis_failure(Estimate e, const OperatorAnalysis& analysis);

/// First estimate in preference order whose hypotheses hold.
std::optional<Estimate> select_estimate(const OperatorAnalysis& analysis);

/// Evaluates `e` after checking its hypotheses (HypothesisError otherwise).
GridFunction estimate_bound(Estimate e, const Modulus& mod, const OperatorAnalysis& analysis,
                            std::size_t m);

/// 1e-6 + 4/N_omega.
double default_slack(std::size_t n_omega = kDefaultOmegaGrid);

struct BoundReport {
  std::vector<double> xs;
  std::vector<double> actual;  ///< |T_inf(f;x) - T^m(f;x)|
  std::vector<double> bound;
  std::vector<double> margin;  ///< bound - actual
  Estimate estimate;
  std::size_t m;
  double slack;
  std::vector<std::size_t> violations;  ///< indices with margin < -slack

  double min_margin() const;
  bool ok() const noexcept { return violations.empty(); }
};

BoundReport verify(const OperatorAnalysis& analysis, const FunctionSpec& f, const Modulus& mod,
                   std::size_t m, double slack);

BoundReport verify(const SamplingOperator& op, const FunctionSpec& f, std::size_t m,
                   std::size_t intervals = kDefaultGrid, double slack = default_slack(),
                   std::size_t n_omega = kDefaultOmegaGrid);

/// x^2 <= T^m(e2;x) <= a^m x^2 + (1 - a^m) x, checked pointwise.
struct EnvelopeReport {
  std::size_t m = 0;
  double a = 0.0;
  double lower_violation = 0.0;  ///< max (x^2 - T^m e2), clipped at 0
  double upper_violation = 0.0;  ///< max (T^m e2 - upper), clipped at 0
  double upper_gap = 0.0;        ///< max |T^m e2 - upper|
  double slack = 1e-9;

  bool ok() const noexcept { return lower_violation <= slack && upper_violation <= slack; }
};

EnvelopeReport moment_envelope(const IterationEngine& engine, double a, std::size_t m,
                               double slack = 1e-9);

/**
 * Consecutive-iterate gap for a C^2 function g with known ||g'||, ||g''||.
 *
 *   increasing: |T^{m+p}g - T^m g| <= 1/2||g''|| |D e2| + ||g'|| |D e1|
 *   reflected:  same with e1, e2 replaced by (1-t), (1-t)^2, i.e.
 *               1/2||g''|| |D e2 - 2 D e1| + ||g'|| |D e1|
 *
 * The increasing form holds when T(e1) >= e1, the reflected one when T(e1) <= e1.
 */
enum class CauchyForm { increasing, reflected };

std::string_view to_string(CauchyForm form);

/// increasing for preserves/geq, reflected for leq; HypothesisError for mixed.
CauchyForm cauchy_form_for(const SignClass& sign);

struct CauchyReport {
  std::size_t m = 0;
  std::size_t p = 0;
  CauchyForm form = CauchyForm::increasing;
  double max_lhs = 0.0;
  double max_violation = 0.0;  ///< max (lhs - rhs), clipped at 0
  std::size_t violations = 0;  ///< points with lhs - rhs > slack
  double slack = 1e-9;

  bool ok() const noexcept { return violations == 0; }
};

CauchyReport cauchy_gap(const IterationEngine& engine, const FunctionSpec& g, std::size_t m,
                        std::size_t p, CauchyForm form, double slack = 1e-9);

}  // namespace korovkin
