#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "korovkin/gridfn.hpp"

namespace korovkin {

/**
 * Finite-rank positive operator T(f;x) = sum_k phi_k(x) f(t_k).
 *
 * The basis is evaluated analytically at any x in [0,1], so iterates can be
 * evaluated off the node set without interpolation error. `domain_hi` is the
 * right end of the window on which reports for this operator are produced
 * (1 except for truncated series operators).
 */
class SamplingOperator {
 public:
  /// Writes phi_0(x), ..., phi_n(x) into `out` (size == number of nodes).
  using Basis = std::function<void(double x, std::span<double> out)>;

  SamplingOperator(std::string name, std::vector<double> nodes, Basis basis,
                   double domain_hi = 1.0);

  const std::string& name() const noexcept { return name_; }
  const std::vector<double>& nodes() const noexcept { return nodes_; }
  std::size_t rank() const noexcept { return nodes_.size(); }
  double domain_hi() const noexcept { return domain_hi_; }

  void basis(double x, std::span<double> out) const { basis_(x, out); }
  std::vector<double> basis(double x) const;

  /// T(f;x) from the values of f at the nodes.
  double apply(std::span<const double> node_values, double x) const;
  double apply(const FunctionSpec& f, double x) const;

  std::vector<double> node_values(const FunctionSpec& f) const;

 private:
  std::string name_;
  std::vector<double> nodes_;
  Basis basis_;
  double domain_hi_;
};

/// C(n,k) x^k (1-x)^(n-k) for k = 0..n, written into out (size n+1).
void bernstein_weights(unsigned n, double x, std::span<double> out);

SamplingOperator make_bernstein(unsigned n);

/// Nodes (k+alpha)/(n+beta), Bernstein basis. Requires 0 <= alpha <= beta.
SamplingOperator make_stancu(unsigned n, double alpha, double beta);

/// Bernstein basis evaluated at r(x), where (n-1) r^2 + r = n x^2; preserves e0 and e2.
SamplingOperator make_king(unsigned n);

/// King's r(x) for the given n (the operator's first moment).
double king_abscissa(unsigned n, double x);

struct MkzOptions {
  double x_max = 0.95;         ///< right end of the window where the tail bound is enforced
  std::size_t k_max = 10000;   ///< hard cap on the truncation index
};

/**
 * Meyer-Koenig-Zeller operator truncated at the smallest K whose dropped tail
 * weight at x_max is <= tail_tol; rows renormalized so T(e0) = e0 exactly.
 */
SamplingOperator make_mkz(unsigned n, double tail_tol, MkzOptions opts = {});

/// Truncation index used by make_mkz.
std::size_t mkz_truncation(unsigned n, double tail_tol, const MkzOptions& opts);

/**
 * Operator given by its transition matrix rows[j][k] = phi_k(t_j).
 * Off the nodes each phi_k is interpolated linearly in x (constant outside
 * [t_0, t_n]), which keeps the basis positive with unit row sums.
 */
SamplingOperator make_matrix_operator(std::vector<double> nodes,
                                      std::vector<std::vector<double>> rows);

/// CSV: first row nodes, then one row per node.
SamplingOperator load_matrix_operator(const std::string& path);

/**
 * Parses "bernstein:n", "stancu:n:alpha:beta", "king:n",
 * "mkz:n:tail_tol[:x_max]", "matrix:<path>". Error messages give the
 * 1-based field position that failed.
 */
SamplingOperator parse_operator(std::string_view spec);

/// x -> T(e_i; x) on the N+1 grid of [0, domain_hi].
GridFunction moments(const SamplingOperator& op, int i, std::size_t intervals = kDefaultGrid);

enum class SignTag { preserves_e1, leq_e1, geq_e1, mixed };

std::string_view to_string(SignTag tag);

struct SignClass {
  SignTag tag;
  double max_excess;   ///< sup (T(e1;x) - x) on the probe grid
  double max_deficit;  ///< sup (x - T(e1;x))
  double witness;      ///< probe point closest to a sign change (mixed only, else NaN)
};

inline constexpr double kSignTolerance = 1e-10;

/// Classifies T(e1) - e1 on the uniform probe grid of [0,1].
SignClass classify_sign(const SamplingOperator& op, std::size_t probe_intervals = kDefaultGrid);

}  // namespace korovkin
