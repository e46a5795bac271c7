#include "korovkin/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "korovkin/errors.hpp"

namespace korovkin {

namespace {

std::vector<double> probe_points(std::size_t intervals) {
  std::vector<double> xs(intervals + 1);
  for (std::size_t i = 0; i <= intervals; ++i) {
    xs[i] = i == intervals ? 1.0 : static_cast<double>(i) / static_cast<double>(intervals);
  }
  return xs;
}

double second_moment_at(const SamplingOperator& op, std::vector<double>& w, double x) {
  op.basis(x, w);
  double s = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) s += w[k] * op.nodes()[k] * op.nodes()[k];
  return s;
}

template <class Fn>
GridFunction pointwise(const GridFunction& like, Fn&& fn) {
  std::vector<double> v(like.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(i, like.x(i));
  return GridFunction(like.lo(), like.hi(), std::move(v));
}

// 3 w2(d) + 2 w1(d) + 3/4 w2(sqrt(s)); the last term is dropped for s < 0.
double three_term(const Modulus& mod, double d, double s) {
  double b = 3.0 * mod.second(d) + 2.0 * mod.first(d);
  if (s >= 0.0) b += 0.75 * mod.second(std::sqrt(s));
  return b;
}

}  // namespace

double second_moment_rate(const SamplingOperator& op, std::size_t probe_intervals) {
  std::vector<double> w(op.rank());
  double a = 0.0;
  for (double x : probe_points(probe_intervals)) {
    if (x <= 0.0 || x >= 1.0) continue;
    a = std::max(a, (x - second_moment_at(op, w, x)) / (x * (1.0 - x)));
  }
  return a;
}

OperatorAnalysis analyze(const SamplingOperator& op, const AnalysisOptions& opts) {
  IterationEngine engine(op, opts.intervals);
  SignClass sign = classify_sign(op, opts.probe_intervals);
  LimitInfo limit = converge_limit(engine, opts.tol, opts.max_squarings);

  std::vector<double> w(op.rank());
  double defect = 0.0;
  for (double x : probe_points(opts.probe_intervals)) {
    defect = std::max(defect, std::abs(second_moment_at(op, w, x) - x * x));
  }
  std::optional<double> rate;
  if (sign.tag == SignTag::preserves_e1) rate = second_moment_rate(op, opts.probe_intervals);
  return OperatorAnalysis{std::move(engine), sign, std::move(limit), defect, rate};
}

MomentGaps moment_gaps(const OperatorAnalysis& analysis, std::size_t m) {
  const auto& eng = analysis.engine;
  const GridFunction l1 = limit_values(eng, analysis.limit, FunctionSpec::monomial(1));
  const GridFunction l2 = limit_values(eng, analysis.limit, FunctionSpec::monomial(2));
  const GridFunction t1 = eng.moment_power(1, m);
  const GridFunction t2 = eng.moment_power(2, m);
  return MomentGaps{pointwise(t1, [&](std::size_t i, double) { return std::abs(t1[i] - l1[i]); }),
                    pointwise(t2, [&](std::size_t i, double) { return std::abs(l2[i] - t2[i]); }), m};
}

GridFunction monotone_bound(Trend trend, const Modulus& mod, const MomentGaps& gaps) {
  const auto& E = gaps.e1_gap;
  const auto& F = gaps.e2_gap;
  return pointwise(E, [&](std::size_t i, double) {
    const double s = trend == Trend::below ? F[i] + 2.0 * E[i] : F[i];
    return three_term(mod, E[i], s);
  });
}

GridFunction linear_preserving_bound(const Modulus& mod, const MomentGaps& gaps, const SignClass& sign) {
  if (sign.tag != SignTag::preserves_e1) {
    throw HypothesisError("linear-preserving estimate needs T(e1) = e1; operator is " +
                          std::string(to_string(sign.tag)));
  }
  const auto& F = gaps.e2_gap;
  return pointwise(F, [&](std::size_t i, double) { return 0.75 * mod.second(std::sqrt(F[i])); });
}

GridFunction identified_limit_bound(IdentifiedLimit which, const Modulus& mod,
                                    const OperatorAnalysis& analysis, std::size_t m) {
  const Estimate e = which == IdentifiedLimit::endpoint_interpolation ? Estimate::endpoint_interpolation
                     : which == IdentifiedLimit::quadratic_below      ? Estimate::quadratic_below
                                                                      : Estimate::quadratic_above;
  if (auto why = hypothesis_failure(e, analysis); !why.empty()) throw HypothesisError(why);

  if (which == IdentifiedLimit::endpoint_interpolation) {
    const GridFunction t2 = analysis.engine.moment_power(2, m);
    return pointwise(t2, [&](std::size_t i, double x) {
      return 0.75 * mod.second(std::sqrt(std::abs(x - t2[i])));
    });
  }
  const GridFunction t1 = analysis.engine.moment_power(1, m);
  return pointwise(t1, [&](std::size_t i, double x) {
    const double d = std::abs(t1[i] - x * x);
    return three_term(mod, d, which == IdentifiedLimit::quadratic_below ? 2.0 * d : -1.0);
  });
}

GridFunction geometric_rate_bound(const Modulus& mod, double a, std::size_t m, double hi,
                                  std::size_t intervals) {
  if (!(a > 0.0 && a < 1.0)) throw HypothesisError("geometric-rate estimate needs 0 < a < 1");
  const double am = std::pow(a, static_cast<double>(m));
  return GridFunction::tabulate(0.0, hi, intervals, [&](double x) {
    return 0.75 * mod.second(std::sqrt(am * x * (1.0 - x)));
  });
}

GridFunction endpoint_limit_bound(Endpoint which, const Modulus& mod,
                                  const OperatorAnalysis& analysis, std::size_t m) {
  const Estimate e = which == Endpoint::left ? Estimate::left_endpoint : Estimate::right_endpoint;
  if (auto why = hypothesis_failure(e, analysis); !why.empty()) throw HypothesisError(why);
  const GridFunction t1 = analysis.engine.moment_power(1, m);
  const GridFunction t2 = analysis.engine.moment_power(2, m);
  return pointwise(t1, [&](std::size_t i, double) {
    if (which == Endpoint::left) {
      const double d = std::abs(t1[i]);
      return three_term(mod, d, std::abs(t2[i]) + 2.0 * d);
    }
    const double d = std::abs(t1[i] - 1.0);
    return three_term(mod, d, std::abs(t2[i] - 1.0));
  });
}

// ---------------------------------------------------------------------------

std::string_view to_string(Estimate e) {
  switch (e) {
    case Estimate::geometric_rate: return "geometric_rate";
    case Estimate::linear_preserving: return "linear_preserving";
    case Estimate::endpoint_interpolation: return "endpoint_interpolation";
    case Estimate::quadratic_below: return "quadratic_below";
    case Estimate::quadratic_above: return "quadratic_above";
    case Estimate::left_endpoint: return "left_endpoint";
    case Estimate::right_endpoint: return "right_endpoint";
    case Estimate::monotone_below: return "monotone_below";
    case Estimate::monotone_above: return "monotone_above";
  }
  return "?";
}

std::string hypothesis_failure(Estimate e, const OperatorAnalysis& an) {
  const auto sign = std::string(to_string(an.sign.tag));
  const auto kind = std::string(to_string(an.limit.kind));
  auto need_limit = [&](LimitKind k) -> std::string {
    if (an.limit.kind == k) return {};
    return "limit is " + kind + ", estimate needs " + std::string(to_string(k));
  };
  auto need_e2 = [&]() -> std::string {
    if (an.preserves_e2()) return {};
    std::ostringstream s;
    s << "T(e2) = e2 fails (defect " << an.e2_defect << ")";
    return s.str();
  };

  switch (e) {
    case Estimate::geometric_rate: {
      if (an.sign.tag != SignTag::preserves_e1) return "T(e1) = e1 fails (sign class " + sign + ")";
      if (!an.rate || !(*an.rate > 0.0 && *an.rate < 1.0)) {
        return "no rate 0 < a < 1 with T(e2) >= a e2 + (1-a) e1";
      }
      // The rate was fitted on the probe grid; re-check the inequality there.
      const auto& op = an.engine.op();
      std::vector<double> w(op.rank());
      for (std::size_t i = 0; i <= kDefaultGrid; ++i) {
        const double x = i == kDefaultGrid ? 1.0 : static_cast<double>(i) / kDefaultGrid;
        const double rhs = *an.rate * x * x + (1.0 - *an.rate) * x;
        if (second_moment_at(op, w, x) < rhs - 1e-12) return "T(e2) >= a e2 + (1-a) e1 fails on the probe grid";
      }
      return {};
    }
    case Estimate::linear_preserving:
      return an.sign.tag == SignTag::preserves_e1 ? std::string{} : "T(e1) = e1 fails (sign class " + sign + ")";
    case Estimate::endpoint_interpolation:
      if (an.sign.tag != SignTag::preserves_e1) return "T(e1) = e1 fails (sign class " + sign + ")";
      return need_limit(LimitKind::P);
    case Estimate::quadratic_below:
      if (!an.at_most_e1()) return "T(e1) <= e1 fails (sign class " + sign + ")";
      if (auto s = need_e2(); !s.empty()) return s;
      return need_limit(LimitKind::V);
    case Estimate::quadratic_above:
      if (!an.at_least_e1()) return "T(e1) >= e1 fails (sign class " + sign + ")";
      if (auto s = need_e2(); !s.empty()) return s;
      return need_limit(LimitKind::V);
    case Estimate::left_endpoint:
      if (!an.at_most_e1()) return "T(e1) <= e1 fails (sign class " + sign + ")";
      return need_limit(LimitKind::eval0);
    case Estimate::right_endpoint:
      if (!an.at_least_e1()) return "T(e1) >= e1 fails (sign class " + sign + ")";
      return need_limit(LimitKind::eval1);
    case Estimate::monotone_below:
      return an.at_most_e1() ? std::string{} : "T(e1) <= e1 fails (sign class " + sign + ")";
    case Estimate::monotone_above:
      return an.at_least_e1() ? std::string{} : "T(e1) >= e1 fails (sign class " + sign + ")";
  }
  return "unknown estimate";
}

std::optional<Estimate> select_estimate(const OperatorAnalysis& analysis) {
  static constexpr Estimate order[] = {
      Estimate::geometric_rate,  Estimate::linear_preserving, Estimate::endpoint_interpolation,
      Estimate::quadratic_below, Estimate::quadratic_above,   Estimate::left_endpoint,
      Estimate::right_endpoint,  Estimate::monotone_below,    Estimate::monotone_above,
  };
  for (Estimate e : order) {
    if (hypothesis_failure(e, analysis).empty()) return e;
  }
  return std::nullopt;
}

GridFunction estimate_bound(Estimate e, const Modulus& mod, const OperatorAnalysis& analysis,
                            std::size_t m) {
  if (auto why = hypothesis_failure(e, analysis); !why.empty()) {
    throw HypothesisError(std::string(to_string(e)) + ": " + why);
  }
  switch (e) {
    case Estimate::geometric_rate:
      return geometric_rate_bound(mod, *analysis.rate, m, analysis.engine.hi(), analysis.engine.intervals());
    case Estimate::linear_preserving:
      return linear_preserving_bound(mod, moment_gaps(analysis, m), analysis.sign);
    case Estimate::endpoint_interpolation:
      return identified_limit_bound(IdentifiedLimit::endpoint_interpolation, mod, analysis, m);
    case Estimate::quadratic_below:
      return identified_limit_bound(IdentifiedLimit::quadratic_below, mod, analysis, m);
    case Estimate::quadratic_above:
      return identified_limit_bound(IdentifiedLimit::quadratic_above, mod, analysis, m);
    case Estimate::left_endpoint: return endpoint_limit_bound(Endpoint::left, mod, analysis, m);
    case Estimate::right_endpoint: return endpoint_limit_bound(Endpoint::right, mod, analysis, m);
    case Estimate::monotone_below: return monotone_bound(Trend::below, mod, moment_gaps(analysis, m));
    case Estimate::monotone_above: return monotone_bound(Trend::above, mod, moment_gaps(analysis, m));
  }
  throw HypothesisError("unknown estimate");
}

double default_slack(std::size_t n_omega) { return 1e-6 + 4.0 / static_cast<double>(n_omega); }

double BoundReport::min_margin() const {
  return margin.empty() ? 0.0 : *std::min_element(margin.begin(), margin.end());
}

BoundReport verify(const OperatorAnalysis& analysis, const FunctionSpec& f, const Modulus& mod,
                   std::size_t m, double slack) {
  const auto chosen = select_estimate(analysis);
  if (!chosen) {
    throw HypothesisError("no estimate applies to " + analysis.engine.op().name() + " (sign class " +
                          std::string(to_string(analysis.sign.tag)) + ")");
  }
  const GridFunction bound = estimate_bound(*chosen, mod, analysis, m);
  const GridFunction limit = limit_values(analysis.engine, analysis.limit, f);
  const GridFunction iterate = analysis.engine.apply_power(f, m);

  BoundReport r{analysis.engine.xs(), {}, {}, {}, *chosen, m, slack, {}};
  const std::size_t n = r.xs.size();
  r.actual.resize(n);
  r.bound.assign(bound.values().begin(), bound.values().end());
  r.margin.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    r.actual[i] = std::abs(limit[i] - iterate[i]);
    r.margin[i] = r.bound[i] - r.actual[i];
    if (r.margin[i] < -slack) r.violations.push_back(i);
  }
  return r;
}

BoundReport verify(const SamplingOperator& op, const FunctionSpec& f, std::size_t m,
                   std::size_t intervals, double slack, std::size_t n_omega) {
  AnalysisOptions opts;
  opts.intervals = intervals;
  const OperatorAnalysis an = analyze(op, opts);
  return verify(an, f, Modulus(f, n_omega), m, slack);
}

// ---------------------------------------------------------------------------

EnvelopeReport moment_envelope(const IterationEngine& engine, double a, std::size_t m, double slack) {
  EnvelopeReport r;
  r.m = m;
  r.a = a;
  r.slack = slack;
  const double am = std::pow(a, static_cast<double>(m));
  const GridFunction t2 = engine.moment_power(2, m);
  for (std::size_t i = 0; i < t2.size(); ++i) {
    const double x = t2.x(i);
    const double upper = am * x * x + (1.0 - am) * x;
    r.lower_violation = std::max(r.lower_violation, x * x - t2[i]);
    r.upper_violation = std::max(r.upper_violation, t2[i] - upper);
    r.upper_gap = std::max(r.upper_gap, std::abs(t2[i] - upper));
  }
  return r;
}

std::string_view to_string(CauchyForm form) {
  return form == CauchyForm::increasing ? "increasing" : "reflected";
}

CauchyForm cauchy_form_for(const SignClass& sign) {
  switch (sign.tag) {
    case SignTag::preserves_e1:
    case SignTag::geq_e1: return CauchyForm::increasing;
    case SignTag::leq_e1: return CauchyForm::reflected;
    case SignTag::mixed: break;
  }
  throw HypothesisError("Cauchy gap estimate needs T(e1) - e1 of one sign; operator is mixed");
}

CauchyReport cauchy_gap(const IterationEngine& engine, const FunctionSpec& g, std::size_t m,
                        std::size_t p, CauchyForm form, double slack) {
  const auto norms = g.derivative_norms();
  if (!norms) throw InvalidArgument("cauchy_gap: " + g.name() + " has no known derivative norms");

  CauchyReport r;
  r.m = m;
  r.p = p;
  r.form = form;
  r.slack = slack;
  const GridFunction ga = engine.apply_power(g, m);
  const GridFunction gb = engine.apply_power(g, m + p);
  const GridFunction a1 = engine.moment_power(1, m), b1 = engine.moment_power(1, m + p);
  const GridFunction a2 = engine.moment_power(2, m), b2 = engine.moment_power(2, m + p);
  for (std::size_t i = 0; i < ga.size(); ++i) {
    const double lhs = std::abs(gb[i] - ga[i]);
    const double d1 = b1[i] - a1[i];
    const double d2 = b2[i] - a2[i];
    const double quad = form == CauchyForm::increasing ? std::abs(d2) : std::abs(d2 - 2.0 * d1);
    const double rhs = 0.5 * norms->second * quad + norms->first * std::abs(d1);
    r.max_lhs = std::max(r.max_lhs, lhs);
    r.max_violation = std::max(r.max_violation, lhs - rhs);
    if (lhs - rhs > slack) ++r.violations;
  }
  return r;
}

}  // namespace korovkin
