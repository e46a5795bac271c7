#include "korovkin/iterate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "korovkin/errors.hpp"

namespace korovkin {

namespace {

Eigen::VectorXd to_vector(std::span<const double> v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

Eigen::VectorXd node_powers(const std::vector<double>& nodes, int i) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(nodes.size()));
  for (std::size_t k = 0; k < nodes.size(); ++k) v[static_cast<Eigen::Index>(k)] = std::pow(nodes[k], i);
  return v;
}

}  // namespace

TransitionMatrix transition_matrix(const SamplingOperator& op) {
  const auto n = static_cast<Eigen::Index>(op.rank());
  TransitionMatrix tm{Eigen::MatrixXd(n, n), op.nodes()};
  std::vector<double> w(op.rank());
  for (Eigen::Index j = 0; j < n; ++j) {
    op.basis(op.nodes()[static_cast<std::size_t>(j)], w);
    for (Eigen::Index k = 0; k < n; ++k) tm.a(j, k) = w[static_cast<std::size_t>(k)];
  }
  return tm;
}

std::vector<double> power_on_nodes(const TransitionMatrix& tm, std::span<const double> v,
                                   std::size_t m) {
  if (v.size() != tm.nodes.size()) throw InvalidArgument("power_on_nodes: vector has wrong size");
  Eigen::VectorXd x = to_vector(v);
  Eigen::VectorXd y;
  for (std::size_t s = 0; s < m; ++s) {
    y.noalias() = tm.a * x;
    x.swap(y);
  }
  return to_std(x);
}

// ---------------------------------------------------------------------------

IterationEngine::IterationEngine(SamplingOperator op, std::size_t intervals)
    : op_(std::move(op)), tm_(transition_matrix(op_)), intervals_(intervals) {
  if (intervals_ == 0) throw InvalidArgument("IterationEngine: grid needs at least one interval");
  const GridFunction grid = GridFunction::tabulate(0.0, op_.domain_hi(), intervals_, [](double) { return 0.0; });
  xs_ = grid.abscissae();
  phi_.resize(static_cast<Eigen::Index>(xs_.size()), static_cast<Eigen::Index>(op_.rank()));
  std::vector<double> w(op_.rank());
  for (std::size_t i = 0; i < xs_.size(); ++i) {
    op_.basis(xs_[i], w);
    for (std::size_t k = 0; k < w.size(); ++k) {
      phi_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = w[k];
    }
  }
}

GridFunction IterationEngine::lift(std::span<const double> node_values) const {
  if (node_values.size() != op_.rank()) throw InvalidArgument("lift: node vector has wrong size");
  const Eigen::VectorXd y = phi_ * to_vector(node_values);
  return GridFunction(0.0, hi(), to_std(y));
}

GridFunction IterationEngine::apply_power(const FunctionSpec& f, std::size_t m) const {
  if (m == 0) return sample(f, intervals_, hi());
  const auto v = power_on_nodes(tm_, op_.node_values(f), m - 1);
  return lift(v);
}

GridFunction IterationEngine::moment_power(int i, std::size_t m) const {
  return apply_power(FunctionSpec::monomial(i), m);
}

GridFunction apply_power(const SamplingOperator& op, const FunctionSpec& f, std::size_t m,
                         std::size_t intervals) {
  return IterationEngine(op, intervals).apply_power(f, m);
}

// ---------------------------------------------------------------------------

std::string_view to_string(LimitKind kind) {
  switch (kind) {
    case LimitKind::P: return "P";
    case LimitKind::V: return "V";
    case LimitKind::eval0: return "eval0";
    case LimitKind::eval1: return "eval1";
    case LimitKind::general: return "general";
  }
  return "?";
}

LimitInfo converge_limit(const IterationEngine& engine, double tol, int max_squarings) {
  if (!(tol > 0.0)) throw InvalidArgument("converge_limit: tol must be positive");
  const auto& nodes = engine.transition().nodes;
  const Eigen::VectorXd t1 = node_powers(nodes, 1);
  const Eigen::VectorXd t2 = node_powers(nodes, 2);

  Eigen::MatrixXd power = engine.transition().a;
  Eigen::VectorXd m1 = power * t1;
  Eigen::VectorXd m2 = power * t2;
  Eigen::MatrixXd next;
  double gap = std::numeric_limits<double>::infinity();
  std::uint64_t m = 1;
  for (int k = 1; k <= max_squarings; ++k) {
    next.noalias() = power * power;
    power.swap(next);
    m *= 2;
    Eigen::VectorXd n1 = power * t1;
    Eigen::VectorXd n2 = power * t2;
    gap = std::max((n1 - m1).cwiseAbs().maxCoeff(), (n2 - m2).cwiseAbs().maxCoeff());
    // One extra step catches periodic chains, which squaring alone cannot see.
    const auto& a = engine.transition().a;
    gap = std::max({gap, (a * n1 - n1).cwiseAbs().maxCoeff(), (a * n2 - n2).cwiseAbs().maxCoeff()});
    m1.swap(n1);
    m2.swap(n2);
    if (gap <= tol) {
      LimitInfo info{LimitKind::general, engine.lift(to_std(m1)), engine.lift(to_std(m2)), m, gap,
                     std::move(power)};
      info.kind = classify_limit(info.limit_e1, info.limit_e2);
      return info;
    }
  }
  std::ostringstream msg;
  msg << "converge_limit: " << engine.op().name() << " did not converge within " << max_squarings
      << " squarings (last moment gap " << gap << ", tol " << tol << ")";
  throw ConvergenceError(msg.str(), gap);
}

LimitInfo converge_limit(const SamplingOperator& op, double tol, int max_squarings,
                         std::size_t intervals) {
  return converge_limit(IterationEngine(op, intervals), tol, max_squarings);
}

namespace {

double distance_to(const GridFunction& g, double (*fn)(double)) {
  double s = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) s = std::max(s, std::abs(g[i] - fn(g.x(i))));
  return s;
}

double zero(double) { return 0.0; }
double one(double) { return 1.0; }
double ident(double x) { return x; }
double square(double x) { return x * x; }

}  // namespace

LimitKind classify_limit(const GridFunction& limit_e1, const GridFunction& limit_e2, double tol) {
  if (!limit_e1.same_grid(limit_e2)) throw InvalidArgument("classify_limit: mismatched grids");
  auto matches = [&](double (*f1)(double), double (*f2)(double)) {
    return distance_to(limit_e1, f1) <= tol && distance_to(limit_e2, f2) <= tol;
  };
  if (matches(ident, ident)) return LimitKind::P;
  if (matches(square, square)) return LimitKind::V;
  if (matches(zero, zero)) return LimitKind::eval0;
  if (matches(one, one)) return LimitKind::eval1;
  return LimitKind::general;
}

double closed_form_distance(const LimitInfo& limit) {
  auto both = [&](double (*f1)(double), double (*f2)(double)) {
    return std::max(distance_to(limit.limit_e1, f1), distance_to(limit.limit_e2, f2));
  };
  switch (limit.kind) {
    case LimitKind::P: return both(ident, ident);
    case LimitKind::V: return both(square, square);
    case LimitKind::eval0: return both(zero, zero);
    case LimitKind::eval1: return both(one, one);
    case LimitKind::general: break;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double eval_P(const FunctionSpec& f, double x) { return (1.0 - x) * f(0.0) + x * f(1.0); }

double eval_V(const FunctionSpec& f, double x) { return (1.0 - x * x) * f(0.0) + x * x * f(1.0); }

GridFunction limit_values(const IterationEngine& engine, const LimitInfo& limit,
                          const FunctionSpec& f) {
  std::vector<double> v(engine.xs().size());
  const double f0 = f(0.0);
  const double f1 = f(1.0);
  switch (limit.kind) {
    case LimitKind::P:
      for (std::size_t i = 0; i < v.size(); ++i) v[i] = eval_P(f, engine.xs()[i]);
      break;
    case LimitKind::V:
      for (std::size_t i = 0; i < v.size(); ++i) v[i] = eval_V(f, engine.xs()[i]);
      break;
    case LimitKind::eval0: std::fill(v.begin(), v.end(), f0); break;
    case LimitKind::eval1: std::fill(v.begin(), v.end(), f1); break;
    case LimitKind::general: {
      const auto fv = engine.op().node_values(f);
      const Eigen::VectorXd w = limit.limit_matrix * to_vector(fv);
      return engine.lift(to_std(w));
    }
  }
  return GridFunction(0.0, engine.hi(), std::move(v));
}

}  // namespace korovkin
