#include <gtest/gtest.h>

#include <cmath>

#include "korovkin/bounds.hpp"
#include "korovkin/errors.hpp"
#include "oracles.hpp"

using namespace korovkin;

namespace {

OperatorAnalysis analysed(const char* spec, std::size_t n = 64) {
  AnalysisOptions o;
  o.intervals = n;
  return analyze(parse_operator(spec), o);
}

GridFunction zeros(std::size_t n) {
  return GridFunction::tabulate(0, 1, n, [](double) { return 0.0; });
}

std::size_t index_of(const GridFunction& g, double x) {
  return static_cast<std::size_t>(std::lround(x / g.spacing()));
}

}  // namespace

TEST(MonotoneBound, ZeroGapsGiveZero) {
  const MomentGaps gaps{zeros(32), zeros(32), 0};
  for (const auto& f : {FunctionSpec::sine_pi(), FunctionSpec::sqrt_fn()}) {
    const Modulus mod(f);
    for (Trend t : {Trend::below, Trend::above}) EXPECT_EQ(sup_norm(monotone_bound(t, mod, gaps)), 0.0);
  }
}

TEST(MonotoneBound, AffineReducesToFirstModulus) {
  const auto an = analysed("king:4");
  const MomentGaps gaps = moment_gaps(an, 3);
  const Modulus mod(FunctionSpec::monomial(1));
  const auto b = monotone_bound(Trend::below, mod, gaps);
  for (std::size_t i = 0; i < b.size(); ++i) EXPECT_NEAR(b[i], 2 * gaps.e1_gap[i], 1e-15);
}

TEST(MonotoneBound, KingSquareAtHalf) {
  const auto an = analysed("king:4");
  const auto f = FunctionSpec::monomial(2);
  const Modulus mod(f);
  const auto b = monotone_bound(Trend::below, mod, moment_gaps(an, 4));
  const auto lim = limit_values(an.engine, an.limit, f);
  const auto it = an.engine.apply_power(f, 4);
  const std::size_t i = index_of(b, 0.5);
  EXPECT_GE(b[i], std::abs(lim[i] - it[i]));
}

TEST(MomentGaps, NonnegativeAndShrinking) {
  const auto an = analysed("king:4");
  double prev = INFINITY;
  for (std::size_t m : {1u, 2u, 4u, 8u, 16u, 32u}) {
    const auto g = moment_gaps(an, m);
    for (std::size_t i = 0; i < g.e1_gap.size(); ++i) {
      ASSERT_GE(g.e1_gap[i], 0.0);
      ASSERT_GE(g.e2_gap[i], 0.0);
    }
    const double s = std::max(sup_norm(g.e1_gap), sup_norm(g.e2_gap));
    EXPECT_LE(s, prev);
    prev = s;
  }
}

TEST(LinearPreservingBound, AffineIsZero) {
  const auto an = analysed("bernstein:5");
  EXPECT_EQ(sup_norm(linear_preserving_bound(Modulus(FunctionSpec::monomial(1)), moment_gaps(an, 2), an.sign)), 0.0);
}

TEST(LinearPreservingBound, BernsteinFiveSquare) {
  const auto an = analysed("bernstein:5");
  const auto gaps = moment_gaps(an, 3);
  const auto b = linear_preserving_bound(Modulus(FunctionSpec::monomial(2)), gaps, an.sign);
  const std::size_t i = index_of(b, 0.5);
  EXPECT_NEAR(gaps.e2_gap[i], 0.128, 1e-12);
  EXPECT_NEAR(b[i], 0.192, 1e-12);
}

TEST(LinearPreservingBound, DegreeOneBernsteinIsTight) {
  const auto an = analysed("bernstein:1");
  const auto f = FunctionSpec::sine_pi();
  for (std::size_t m : {1u, 5u}) {
    EXPECT_NEAR(sup_norm(linear_preserving_bound(Modulus(f), moment_gaps(an, m), an.sign)), 0.0, 1e-15);
    const auto r = verify(an, f, Modulus(f), m, 0.0);
    for (double a : r.actual) EXPECT_NEAR(a, 0.0, 1e-15);
  }
}

TEST(LinearPreservingBound, RefusesOperatorsThatMoveE1) {
  const auto an = analysed("king:4");
  EXPECT_THROW(linear_preserving_bound(Modulus(FunctionSpec::monomial(2)), moment_gaps(an, 1), an.sign),
               HypothesisError);
}

TEST(IdentifiedLimit, EndpointInterpolationRatioIsThreeHalves) {
  for (unsigned n : {2u, 5u, 10u}) {
    const auto an = analyze(make_bernstein(n), {256});
    const auto f = FunctionSpec::monomial(2);
    const Modulus mod(f);
    for (std::size_t m : {1u, 4u, 9u}) {
      const auto b = identified_limit_bound(IdentifiedLimit::endpoint_interpolation, mod, an, m);
      for (std::size_t i = 1; i + 1 < b.size(); ++i) {
        const double x = b.x(i);
        const double actual = std::pow(1.0 - 1.0 / n, double(m)) * x * (1 - x);
        ASSERT_NEAR(b[i] / actual, 1.5, 1e-8);
      }
    }
  }
}

TEST(IdentifiedLimit, KingAffine) {
  const auto an = analysed("king:4");
  const double s = 1.0;
  const auto f = FunctionSpec::monomial(1);
  const Modulus mod(f);
  for (std::size_t m : {1u, 3u}) {
    const auto b = identified_limit_bound(IdentifiedLimit::quadratic_below, mod, an, m);
    const auto t1 = an.engine.moment_power(1, m);
    const auto r = verify(an, f, mod, m, 1e-12);
    EXPECT_EQ(r.estimate, Estimate::quadratic_below);
    for (std::size_t i = 0; i < b.size(); ++i) {
      const double x = b.x(i);
      const double d = std::abs(t1[i] - x * x);
      ASSERT_NEAR(b[i], 2 * std::abs(s) * d, 1e-12);
      ASSERT_NEAR(r.actual[i], std::abs(s) * d, 1e-12);
      ASSERT_NEAR(r.margin[i], std::abs(s) * d, 1e-12);
    }
  }
}

TEST(IdentifiedLimit, HypothesesAreChecked) {
  const Modulus mod(FunctionSpec::monomial(2));
  EXPECT_THROW(identified_limit_bound(IdentifiedLimit::quadratic_below, mod, analysed("bernstein:3"), 1), HypothesisError);
  EXPECT_THROW(identified_limit_bound(IdentifiedLimit::endpoint_interpolation, mod, analysed("king:3"), 1), HypothesisError);
  EXPECT_THROW(identified_limit_bound(IdentifiedLimit::quadratic_above, mod, analysed("king:3"), 1), HypothesisError);
}

TEST(GeometricRate, VanishesAtEndpoints) {
  const auto b = geometric_rate_bound(Modulus(FunctionSpec::sine_pi()), 0.8, 2, 1.0, 32);
  EXPECT_EQ(b[0], 0.0);
  EXPECT_EQ(b[32], 0.0);
}

TEST(GeometricRate, BernsteinFiveSquareAtHalf) {
  const auto b = geometric_rate_bound(Modulus(FunctionSpec::monomial(2)), 0.8, 3, 1.0, 2);
  EXPECT_NEAR(b[1], 0.192, 1e-12);
}

TEST(GeometricRate, DecaysWithM) {
  const Modulus mod(FunctionSpec::abs_shift(0.5));
  GridFunction prev = geometric_rate_bound(mod, 0.8, 1, 1.0, 64);
  for (std::size_t m = 2; m <= 20; ++m) {
    const auto cur = geometric_rate_bound(mod, 0.8, m, 1.0, 64);
    for (std::size_t i = 0; i < cur.size(); ++i) ASSERT_LE(cur[i], prev[i]);
    prev = cur;
  }
}

TEST(GeometricRate, RateMustLieInUnitInterval) {
  const Modulus mod(FunctionSpec::monomial(2));
  EXPECT_THROW(geometric_rate_bound(mod, 1.0, 1, 1.0, 8), HypothesisError);
  EXPECT_THROW(geometric_rate_bound(mod, 0.0, 1, 1.0, 8), HypothesisError);
}

TEST(GeometricRate, FittedRateForBernstein) {
  for (unsigned n : {2u, 5u, 10u}) EXPECT_NEAR(second_moment_rate(make_bernstein(n)), 1.0 - 1.0 / n, 1e-12);
}

TEST(EndpointLimit, ShrinkingStancuIdentity) {
  const auto an = analysed("stancu:4:0:1");
  const Modulus mod(FunctionSpec::monomial(1));
  for (std::size_t m : {1u, 3u, 6u}) {
    const auto b = endpoint_limit_bound(Endpoint::left, mod, an, m);
    const auto r = verify(an, FunctionSpec::monomial(1), mod, m, 0.0);
    for (std::size_t i = 0; i < b.size(); ++i) {
      const double actual = std::pow(0.8, double(m)) * b.x(i);
      ASSERT_NEAR(r.actual[i], actual, 1e-14);
      ASSERT_GE(b[i], 2 * actual - 1e-14);
    }
    EXPECT_EQ(b[0], 0.0);
    EXPECT_EQ(r.actual[0], 0.0);
  }
}

TEST(EndpointLimit, ShiftedStancuAtOne) {
  const auto an = analysed("stancu:4:1:1");
  const Modulus mod(FunctionSpec::monomial(1));
  const auto b = endpoint_limit_bound(Endpoint::right, mod, an, 3);
  const auto r = verify(an, FunctionSpec::monomial(1), mod, 3, 0.0);
  EXPECT_EQ(r.estimate, Estimate::right_endpoint);
  EXPECT_NEAR(b[b.size() - 1], 0.0, 1e-15);
  EXPECT_NEAR(r.actual.back(), 0.0, 1e-15);
}

TEST(EndpointLimit, WrongSideIsRejected) {
  const Modulus mod(FunctionSpec::monomial(1));
  EXPECT_THROW(endpoint_limit_bound(Endpoint::right, mod, analysed("stancu:4:0:1"), 1), HypothesisError);
  EXPECT_THROW(endpoint_limit_bound(Endpoint::left, mod, analysed("stancu:4:1:1"), 1), HypothesisError);
}

TEST(Verify, BernsteinFiveSquareMargins) {
  const auto an = analysed("bernstein:5");
  const auto f = FunctionSpec::monomial(2);
  const auto r = verify(an, f, Modulus(f), 3, default_slack());
  EXPECT_EQ(r.estimate, Estimate::geometric_rate);
  EXPECT_TRUE(r.ok());
  for (std::size_t i = 0; i < r.xs.size(); ++i) {
    const double x = r.xs[i];
    ASSERT_NEAR(r.margin[i], 0.5 * 0.512 * x * (1 - x), 1e-12);
  }
  EXPECT_NEAR(r.margin[index_of(an.engine.moment_power(0, 0), 0.5)], 0.064, 1e-12);
}

TEST(Verify, KingKinkTwentySteps) {
  const auto an = analyze(make_king(4));
  const auto f = FunctionSpec::abs_shift(0.5);
  const Modulus mod(f);
  for (std::size_t m = 1; m <= 20; ++m) EXPECT_TRUE(verify(an, f, mod, m, default_slack()).ok()) << m;
}

TEST(Verify, MixedOperatorHasNoEstimate) {
  const auto an = analysed("stancu:4:1:2");
  EXPECT_FALSE(select_estimate(an).has_value());
  EXPECT_THROW(verify(an, FunctionSpec::monomial(2), Modulus(FunctionSpec::monomial(2)), 1, 1e-6), HypothesisError);
}

TEST(Verify, ViolationsFollowSlack) {
  const auto an = analysed("bernstein:5");
  const auto f = FunctionSpec::monomial(2);
  auto r = verify(an, f, Modulus(f), 2, default_slack());
  EXPECT_EQ(r.ok(), r.min_margin() >= -r.slack);
}

TEST(Dispatch, PreferenceOrder) {
  EXPECT_EQ(select_estimate(analysed("bernstein:4")), Estimate::geometric_rate);
  EXPECT_EQ(select_estimate(analysed("king:4")), Estimate::quadratic_below);
  EXPECT_EQ(select_estimate(analysed("stancu:4:0:1")), Estimate::left_endpoint);
  EXPECT_EQ(select_estimate(analysed("stancu:4:1:1")), Estimate::right_endpoint);
  EXPECT_EQ(select_estimate(analysed("mkz:2:1e-10:0.9")), Estimate::left_endpoint);
}

TEST(Dispatch, FailureMessagesNameTheCondition) {
  const auto king = analysed("king:4");
  EXPECT_NE(hypothesis_failure(Estimate::linear_preserving, king).find("T(e1) = e1"), std::string::npos);
  EXPECT_NE(hypothesis_failure(Estimate::quadratic_above, king).find("T(e1) >= e1"), std::string::npos);
  EXPECT_NE(hypothesis_failure(Estimate::left_endpoint, king).find("eval0"), std::string::npos);
  const auto bern = analysed("bernstein:4");
  EXPECT_NE(hypothesis_failure(Estimate::quadratic_below, bern).find("T(e2) = e2"), std::string::npos);
  EXPECT_EQ(to_string(Estimate::monotone_above), "monotone_above");
}

TEST(MomentEnvelope, ZeroStepsIsEquality) {
  IterationEngine eng(make_bernstein(5), 64);
  const auto r = moment_envelope(eng, 0.8, 0);
  EXPECT_TRUE(r.ok());
  EXPECT_NEAR(r.upper_gap, 0.0, 1e-15);
}

TEST(MomentEnvelope, BernsteinUpperEnvelopeIsExact) {
  for (unsigned n : {2u, 5u, 10u}) {
    IterationEngine eng(make_bernstein(n), 128);
    for (std::size_t m : {1u, 10u, 30u}) {
      const auto r = moment_envelope(eng, 1.0 - 1.0 / n, m);
      EXPECT_TRUE(r.ok());
      EXPECT_LE(r.upper_gap, 1e-10);
    }
  }
}

TEST(MomentEnvelope, EndpointsPinch) {
  IterationEngine eng(make_bernstein(3), 16);
  const auto t2 = eng.moment_power(2, 7);
  EXPECT_EQ(t2[0], 0.0);
  EXPECT_NEAR(t2[16], 1.0, 1e-15);
}

TEST(CauchyGap, NoStepsNoGap) {
  IterationEngine eng(make_bernstein(4), 32);
  const auto r = cauchy_gap(eng, FunctionSpec::sine_pi(), 3, 0, CauchyForm::increasing);
  EXPECT_EQ(r.max_lhs, 0.0);
  EXPECT_TRUE(r.ok());
}

TEST(CauchyGap, IdentityOnLinearPreservingOperator) {
  IterationEngine eng(make_bernstein(4), 32);
  const auto r = cauchy_gap(eng, FunctionSpec::monomial(1), 1, 5, CauchyForm::increasing);
  EXPECT_NEAR(r.max_lhs, 0.0, 1e-15);
  EXPECT_TRUE(r.ok());
}

TEST(CauchyGap, BernsteinSquareIsEquality) {
  IterationEngine eng(make_bernstein(5), 2);
  const auto r = cauchy_gap(eng, FunctionSpec::monomial(2), 2, 3, CauchyForm::increasing);
  const double lhs = std::abs(std::pow(0.8, 5) - std::pow(0.8, 2)) * 0.25;
  EXPECT_NEAR(lhs, 0.0781, 1e-4);
  EXPECT_NEAR(r.max_lhs, lhs, 1e-12);
  EXPECT_NEAR(r.max_violation, 0.0, 1e-12);
  EXPECT_TRUE(r.ok());
}

TEST(CauchyGap, FormFollowsSign) {
  EXPECT_EQ(cauchy_form_for(analysed("king:3").sign), CauchyForm::reflected);
  EXPECT_EQ(cauchy_form_for(analysed("stancu:4:1:1").sign), CauchyForm::increasing);
  EXPECT_EQ(cauchy_form_for(analysed("bernstein:3").sign), CauchyForm::increasing);
  EXPECT_THROW(cauchy_form_for(analysed("stancu:4:1:2").sign), HypothesisError);
}

TEST(CauchyGap, NeedsDerivativeNorms) {
  IterationEngine eng(make_bernstein(4), 32);
  EXPECT_THROW(cauchy_gap(eng, FunctionSpec::abs_shift(0.5), 1, 1, CauchyForm::increasing), InvalidArgument);
}
