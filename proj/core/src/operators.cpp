#include "korovkin/operators.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <numeric>
#include <sstream>

#include "korovkin/errors.hpp"

namespace korovkin {

SamplingOperator::SamplingOperator(std::string name, std::vector<double> nodes, Basis basis,
                                   double domain_hi)
    : name_(std::move(name)), nodes_(std::move(nodes)), basis_(std::move(basis)),
      domain_hi_(domain_hi) {
  if (nodes_.empty()) throw InvalidArgument(name_ + ": operator needs at least one node");
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    if (!(nodes_[k] >= 0.0 && nodes_[k] <= 1.0)) {
      throw InvalidArgument(name_ + ": node " + std::to_string(k) + " outside [0,1]");
    }
    if (k > 0 && !(nodes_[k] > nodes_[k - 1])) {
      throw InvalidArgument(name_ + ": nodes must be strictly increasing");
    }
  }
  if (!(domain_hi_ > 0.0 && domain_hi_ <= 1.0)) {
    throw InvalidArgument(name_ + ": domain_hi must lie in (0,1]");
  }
}

std::vector<double> SamplingOperator::basis(double x) const {
  std::vector<double> w(rank());
  basis_(x, w);
  return w;
}

double SamplingOperator::apply(std::span<const double> node_values, double x) const {
  if (node_values.size() != rank()) throw InvalidArgument("apply: node vector has wrong size");
  const auto w = basis(x);
  return std::inner_product(w.begin(), w.end(), node_values.begin(), 0.0);
}

double SamplingOperator::apply(const FunctionSpec& f, double x) const {
  return apply(node_values(f), x);
}

std::vector<double> SamplingOperator::node_values(const FunctionSpec& f) const {
  std::vector<double> v(rank());
  std::transform(nodes_.begin(), nodes_.end(), v.begin(), [&](double t) { return f(t); });
  return v;
}

// ---------------------------------------------------------------------------

void bernstein_weights(unsigned n, double x, std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  if (x <= 0.0) { out[0] = 1.0; return; }
  if (x >= 1.0) { out[n] = 1.0; return; }

  // Start at the mode in log space, then walk outwards with the term ratio.
  const double nn = static_cast<double>(n);
  const unsigned mode = std::min(n, static_cast<unsigned>(std::floor((nn + 1.0) * x)));
  const double km = static_cast<double>(mode);
  const double log_mode = std::lgamma(nn + 1.0) - std::lgamma(km + 1.0) - std::lgamma(nn - km + 1.0) +
                          km * std::log(x) + (nn - km) * std::log1p(-x);
  out[mode] = std::exp(log_mode);
  const double odds = x / (1.0 - x);
  for (unsigned k = mode; k < n; ++k) {
    out[k + 1] = out[k] * (static_cast<double>(n - k) / static_cast<double>(k + 1)) * odds;
  }
  for (unsigned k = mode; k > 0; --k) {
    out[k - 1] = out[k] * (static_cast<double>(k) / static_cast<double>(n - k + 1)) / odds;
  }
  const double total = std::accumulate(out.begin(), out.end(), 0.0);
  for (double& w : out) w /= total;
}

namespace {

std::vector<double> uniform_nodes(unsigned n, double alpha, double beta) {
  std::vector<double> t(n + 1);
  for (unsigned k = 0; k <= n; ++k) {
    t[k] = (static_cast<double>(k) + alpha) / (static_cast<double>(n) + beta);
  }
  return t;
}

std::string fmt_real(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

}  // namespace

SamplingOperator make_bernstein(unsigned n) {
  if (n == 0) throw InvalidArgument("bernstein: n must be >= 1");
  return SamplingOperator("bernstein:" + std::to_string(n), uniform_nodes(n, 0.0, 0.0),
                          [n](double x, std::span<double> out) { bernstein_weights(n, x, out); });
}

SamplingOperator make_stancu(unsigned n, double alpha, double beta) {
  if (n == 0) throw InvalidArgument("stancu: n must be >= 1");
  if (alpha < 0.0) throw InvalidArgument("stancu: alpha must be >= 0");
  if (alpha > beta) throw InvalidArgument("stancu: alpha must be <= beta");
  return SamplingOperator(
      "stancu:" + std::to_string(n) + ":" + fmt_real(alpha) + ":" + fmt_real(beta),
      uniform_nodes(n, alpha, beta),
      [n](double x, std::span<double> out) { bernstein_weights(n, x, out); });
}

double king_abscissa(unsigned n, double x) {
  // Rationalized root of (n-1) r^2 + r - n x^2 = 0; no cancellation near x = 0.
  const double nn = static_cast<double>(n);
  const double r = 2.0 * nn * x * x / (1.0 + std::sqrt(1.0 + 4.0 * nn * (nn - 1.0) * x * x));
  return std::clamp(r, 0.0, 1.0);
}

SamplingOperator make_king(unsigned n) {
  if (n < 2) throw InvalidArgument("king: n must be >= 2");
  return SamplingOperator("king:" + std::to_string(n), uniform_nodes(n, 0.0, 0.0),
                          [n](double x, std::span<double> out) {
                            bernstein_weights(n, king_abscissa(n, x), out);
                          });
}

// ---------------------------------------------------------------------------

std::size_t mkz_truncation(unsigned n, double tail_tol, const MkzOptions& opts) {
  if (n == 0) throw InvalidArgument("mkz: n must be >= 1");
  if (!(tail_tol > 0.0 && tail_tol < 1.0)) throw InvalidArgument("mkz: tail_tol must lie in (0,1)");
  if (!(opts.x_max > 0.0 && opts.x_max < 1.0)) throw InvalidArgument("mkz: x_max must lie in (0,1)");

  // Negative-binomial weights at x_max; the tail is largest at the right end of the window.
  const double nn = static_cast<double>(n);
  const double lx = std::log(opts.x_max);
  const double l1x = (nn + 1.0) * std::log1p(-opts.x_max);
  double mass = 0.0;
  for (std::size_t k = 0; k <= opts.k_max; ++k) {
    const double kk = static_cast<double>(k);
    mass += std::exp(std::lgamma(nn + kk + 1.0) - std::lgamma(kk + 1.0) - std::lgamma(nn + 1.0) +
                     kk * lx + l1x);
    if (1.0 - mass <= tail_tol) return k;
  }
  throw InvalidArgument("mkz: tail weight at x_max = " + fmt_real(opts.x_max) +
                        " stays above tail_tol within k_max = " + std::to_string(opts.k_max) +
                        " terms; lower x_max or raise k_max");
}

SamplingOperator make_mkz(unsigned n, double tail_tol, MkzOptions opts) {
  const std::size_t K = mkz_truncation(n, tail_tol, opts);
  const double nn = static_cast<double>(n);

  std::vector<double> nodes(K + 1);
  auto log_binom = std::make_shared<std::vector<double>>(K + 1);
  for (std::size_t k = 0; k <= K; ++k) {
    const double kk = static_cast<double>(k);
    nodes[k] = kk / (kk + nn);
    (*log_binom)[k] = std::lgamma(nn + kk + 1.0) - std::lgamma(kk + 1.0);
  }

  auto basis = [log_binom, K](double x, std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
    if (x <= 0.0) { out[0] = 1.0; return; }
    if (x >= 1.0) { out[K] = 1.0; return; }  // limit of the renormalized rows as x -> 1
    // The common factor (1-x)^(n+1) cancels under renormalization.
    const double lx = std::log(x);
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k <= K; ++k) {
      out[k] = (*log_binom)[k] + static_cast<double>(k) * lx;
      top = std::max(top, out[k]);
    }
    double total = 0.0;
    for (double& w : out) {
      w = std::exp(w - top);
      total += w;
    }
    for (double& w : out) w /= total;
  };

  return SamplingOperator("mkz:" + std::to_string(n) + ":" + fmt_real(tail_tol) + ":" +
                              fmt_real(opts.x_max),
                          std::move(nodes), std::move(basis), opts.x_max);
}

// ---------------------------------------------------------------------------

SamplingOperator make_matrix_operator(std::vector<double> nodes,
                                      std::vector<std::vector<double>> rows) {
  const std::size_t n = nodes.size();
  if (rows.size() != n) {
    throw InvalidArgument("matrix: expected " + std::to_string(n) + " rows (one per node), got " +
                          std::to_string(rows.size()));
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (rows[j].size() != n) {
      throw InvalidArgument("matrix: row " + std::to_string(j + 1) + " has " +
                            std::to_string(rows[j].size()) + " entries, expected " +
                            std::to_string(n));
    }
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (rows[j][k] < -1e-14) {
        throw InvalidArgument("matrix: positivity violated at row " + std::to_string(j + 1) +
                              ", column " + std::to_string(k + 1));
      }
      sum += rows[j][k];
    }
    if (std::abs(sum - 1.0) > 1e-12) {
      throw InvalidArgument("matrix: row-sum invariant failed at row " + std::to_string(j + 1) +
                            " (sum = " + fmt_real(sum) + ", must be 1 within 1e-12)");
    }
  }

  auto table = std::make_shared<std::vector<std::vector<double>>>(std::move(rows));
  auto xs = std::make_shared<std::vector<double>>(nodes);
  auto basis = [table, xs](double x, std::span<double> out) {
    const auto& t = *xs;
    const auto& a = *table;
    if (x <= t.front()) { std::copy(a.front().begin(), a.front().end(), out.begin()); return; }
    if (x >= t.back()) { std::copy(a.back().begin(), a.back().end(), out.begin()); return; }
    const auto it = std::upper_bound(t.begin(), t.end(), x);
    const std::size_t j = static_cast<std::size_t>(it - t.begin()) - 1;
    const double s = (x - t[j]) / (t[j + 1] - t[j]);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = (1.0 - s) * a[j][k] + s * a[j + 1][k];
  };
  return SamplingOperator("matrix", std::move(nodes), std::move(basis));
}

namespace {

std::vector<double> parse_csv_row(const std::string& line, std::size_t line_no) {
  std::vector<double> row;
  std::size_t pos = 0;
  while (pos <= line.size()) {
    std::size_t comma = line.find(',', pos);
    if (comma == std::string::npos) comma = line.size();
    std::string_view cell(line.data() + pos, comma - pos);
    while (!cell.empty() && std::isspace(static_cast<unsigned char>(cell.front()))) cell.remove_prefix(1);
    while (!cell.empty() && std::isspace(static_cast<unsigned char>(cell.back()))) cell.remove_suffix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size()) {
      throw InvalidArgument("matrix file line " + std::to_string(line_no) + ": bad number '" +
                            std::string(cell) + "'");
    }
    row.push_back(v);
    pos = comma + 1;
  }
  return row;
}

}  // namespace

SamplingOperator load_matrix_operator(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("matrix: cannot open '" + path + "'");
  std::vector<std::vector<double>> data;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    data.push_back(parse_csv_row(line, line_no));
  }
  if (data.empty()) throw InvalidArgument("matrix: '" + path + "' is empty");
  std::vector<double> nodes = std::move(data.front());
  data.erase(data.begin());
  return make_matrix_operator(std::move(nodes), std::move(data));
}

// ---------------------------------------------------------------------------

namespace {

std::vector<std::string_view> split_fields(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const auto c = s.find(':', pos);
    out.push_back(s.substr(pos, c == std::string_view::npos ? std::string_view::npos : c - pos));
    if (c == std::string_view::npos) break;
    pos = c + 1;
  }
  return out;
}

[[noreturn]] void field_error(std::string_view spec, std::size_t field, const std::string& why) {
  throw InvalidArgument("operator spec '" + std::string(spec) + "', field " + std::to_string(field + 1) +
                        ": " + why);
}

unsigned field_uint(std::string_view spec, const std::vector<std::string_view>& f, std::size_t i) {
  unsigned v = 0;
  const auto s = f[i];
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    field_error(spec, i, "expected a non-negative integer, got '" + std::string(s) + "'");
  }
  return v;
}

double field_real(std::string_view spec, const std::vector<std::string_view>& f, std::size_t i) {
  double v = 0.0;
  const auto s = f[i];
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    field_error(spec, i, "expected a real number, got '" + std::string(s) + "'");
  }
  return v;
}

void expect_arity(std::string_view spec, const std::vector<std::string_view>& f, std::size_t lo,
                  std::size_t hi) {
  if (f.size() < lo || f.size() > hi) {
    field_error(spec, std::min(f.size(), hi), "expected " + std::to_string(lo - 1) +
                                                  (lo == hi ? "" : "-" + std::to_string(hi - 1)) +
                                                  " parameters");
  }
}

}  // namespace

SamplingOperator parse_operator(std::string_view spec) {
  if (spec.starts_with("matrix:")) {
    const auto path = spec.substr(7);
    if (path.empty()) field_error(spec, 1, "missing file path");
    return load_matrix_operator(std::string(path));
  }
  const auto f = split_fields(spec);
  const auto tag = f[0];
  if (tag == "bernstein") {
    expect_arity(spec, f, 2, 2);
    return make_bernstein(field_uint(spec, f, 1));
  }
  if (tag == "stancu") {
    expect_arity(spec, f, 4, 4);
    return make_stancu(field_uint(spec, f, 1), field_real(spec, f, 2), field_real(spec, f, 3));
  }
  if (tag == "king") {
    expect_arity(spec, f, 2, 2);
    return make_king(field_uint(spec, f, 1));
  }
  if (tag == "mkz") {
    expect_arity(spec, f, 3, 4);
    MkzOptions opts;
    if (f.size() == 4) opts.x_max = field_real(spec, f, 3);
    return make_mkz(field_uint(spec, f, 1), field_real(spec, f, 2), opts);
  }
  field_error(spec, 0, "unknown operator '" + std::string(tag) + "'");
}

GridFunction moments(const SamplingOperator& op, int i, std::size_t intervals) {
  if (i < 0 || i > 2) throw InvalidArgument("moments: i must be 0, 1 or 2");
  std::vector<double> t(op.rank());
  std::transform(op.nodes().begin(), op.nodes().end(), t.begin(),
                 [i](double s) { return std::pow(s, i); });
  std::vector<double> w(op.rank());
  return GridFunction::tabulate(0.0, op.domain_hi(), intervals, [&](double x) {
    op.basis(x, w);
    return std::inner_product(w.begin(), w.end(), t.begin(), 0.0);
  });
}

std::string_view to_string(SignTag tag) {
  switch (tag) {
    case SignTag::preserves_e1: return "preserves_e1";
    case SignTag::leq_e1: return "leq_e1";
    case SignTag::geq_e1: return "geq_e1";
    case SignTag::mixed: return "mixed";
  }
  return "?";
}

SignClass classify_sign(const SamplingOperator& op, std::size_t probe_intervals) {
  // The iteration visits every node, so the probe covers all of [0,1].
  std::vector<double> w(op.rank());
  std::vector<double> d(probe_intervals + 1);
  std::vector<double> xs(probe_intervals + 1);
  for (std::size_t i = 0; i <= probe_intervals; ++i) {
    const double x = i == probe_intervals ? 1.0 : static_cast<double>(i) / static_cast<double>(probe_intervals);
    op.basis(x, w);
    xs[i] = x;
    d[i] = std::inner_product(w.begin(), w.end(), op.nodes().begin(), 0.0) - x;
  }
  SignClass sc{SignTag::preserves_e1, 0.0, 0.0, std::numeric_limits<double>::quiet_NaN()};
  for (double v : d) {
    sc.max_excess = std::max(sc.max_excess, v);
    sc.max_deficit = std::max(sc.max_deficit, -v);
  }
  const bool above = sc.max_excess > kSignTolerance;
  const bool below = sc.max_deficit > kSignTolerance;
  if (!above && !below) sc.tag = SignTag::preserves_e1;
  else if (!above) sc.tag = SignTag::leq_e1;
  else if (!below) sc.tag = SignTag::geq_e1;
  else {
    sc.tag = SignTag::mixed;
    // First significant sign change; the witness is the smallest |d| in between.
    std::size_t last = 0;
    int last_sign = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (std::abs(d[i]) <= kSignTolerance) continue;
      const int s = d[i] > 0 ? 1 : -1;
      if (last_sign != 0 && s != last_sign) {
        std::size_t best = last;
        for (std::size_t j = last; j <= i; ++j) {
          if (std::abs(d[j]) < std::abs(d[best])) best = j;
        }
        sc.witness = xs[best];
        break;
      }
      last_sign = s;
      last = i;
    }
  }
  return sc;
}

}  // namespace korovkin
