#include "korovkin/smoothness.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "korovkin/errors.hpp"
#include "korovkin/operators.hpp"

namespace korovkin {

namespace {

void check_resolution(std::size_t n) {
  if (n < 64) throw InvalidArgument("omega: N_omega must be >= 64");
  if (n % 2 != 0) throw InvalidArgument("omega: N_omega must be even");
}

std::size_t step_index(double delta, std::size_t n, std::size_t cap) {
  if (delta < 0.0) throw InvalidArgument("omega: delta must be >= 0");
  const double j = std::floor(delta * static_cast<double>(n) + 1e-9);
  if (!(j < static_cast<double>(cap))) return cap;
  return static_cast<std::size_t>(j);
}

std::vector<double> sample_unit(const FunctionSpec& f, std::size_t n) {
  std::vector<double> v(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    v[i] = f(i == n ? 1.0 : static_cast<double>(i) / static_cast<double>(n));
  }
  return v;
}

// Running max over step sizes of the largest difference at that step.
void tabulate_moduli(const std::vector<double>& v, std::vector<double>& w1, std::vector<double>& w2) {
  const std::size_t n = v.size() - 1;
  w1.assign(n + 1, 0.0);
  w2.assign(n / 2 + 1, 0.0);
  for (std::size_t j = 1; j <= n; ++j) {
    double d = 0.0;
    for (std::size_t i = 0; i + j <= n; ++i) d = std::max(d, std::abs(v[i + j] - v[i]));
    w1[j] = std::max(w1[j - 1], d);
  }
  for (std::size_t j = 1; j <= n / 2; ++j) {
    double d = 0.0;
    for (std::size_t i = j; i + j <= n; ++i) d = std::max(d, std::abs(v[i + j] - 2.0 * v[i] + v[i - j]));
    w2[j] = std::max(w2[j - 1], d);
  }
}

double monomial_modulus(int degree, int order, double delta) {
  if (order == 1) {
    const double d = std::min(delta, 1.0);
    switch (degree) {
      case 0: return 0.0;
      case 1: return d;
      case 2: return 2.0 * d - d * d;
      default: return 1.0 - (1.0 - d) * (1.0 - d) * (1.0 - d);
    }
  }
  const double d = std::min(delta, 0.5);
  switch (degree) {
    case 0:
    case 1: return 0.0;
    case 2: return 2.0 * d * d;
    default: return 6.0 * d * d * (1.0 - d);  // second difference of x^3 peaks at x = 1 - h
  }
}

}  // namespace

double omega(int order, const FunctionSpec& f, double delta, std::size_t n_omega) {
  return Modulus(f, n_omega, ModulusMode::discrete)(order, delta);
}

Modulus::Modulus(const FunctionSpec& f, std::size_t n_omega, ModulusMode mode) : n_(n_omega) {
  check_resolution(n_omega);
  if (mode == ModulusMode::exact_when_known && f.kind() == FunctionKind::monomial) {
    degree_ = f.degree();
    return;
  }
  tabulate_moduli(sample_unit(f, n_omega), w1_, w2_);
}

double Modulus::operator()(int order, double delta) const {
  if (order != 1 && order != 2) throw InvalidArgument("omega: order must be 1 or 2");
  if (delta < 0.0) throw InvalidArgument("omega: delta must be >= 0");
  if (degree_) return monomial_modulus(*degree_, order, delta);
  if (order == 1) return w1_[step_index(delta, n_, n_)];
  return w2_[step_index(delta, n_, n_ / 2)];
}

// ---------------------------------------------------------------------------

LinearFit dense_minimax_line(const std::vector<double>& xs, const std::vector<double>& ys) {
  const std::size_t n = xs.size();
  auto strip = [&](double s, double& lo, double& hi) {
    lo = std::numeric_limits<double>::infinity();
    hi = -lo;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = ys[i] - s * xs[i];
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    return hi - lo;
  };
  // The optimal slope lies between the extreme chord slopes.
  double a = std::numeric_limits<double>::infinity(), b = -a;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double s = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]);
    a = std::min(a, s);
    b = std::max(b, s);
  }
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 0.0, hi = 0.0;
  double c = b - phi * (b - a), d = a + phi * (b - a);
  double fc = strip(c, lo, hi), fd = strip(d, lo, hi);
  for (int it = 0; it < 200 && b - a > 1e-15 * (1.0 + std::abs(a) + std::abs(b)); ++it) {
    if (fc < fd) {
      b = d; d = c; fd = fc;
      c = b - phi * (b - a);
      fc = strip(c, lo, hi);
    } else {
      a = c; c = d; fc = fd;
      d = a + phi * (b - a);
      fd = strip(d, lo, hi);
    }
  }
  LinearFit fit;
  fit.slope = 0.5 * (a + b);
  const double width = strip(fit.slope, lo, hi);
  fit.intercept = 0.5 * (lo + hi);
  fit.deviation = 0.5 * width;
  fit.fallback = true;
  return fit;
}

LinearFit best_linear(const std::vector<double>& xs, const std::vector<double>& ys) {
  const std::size_t n = xs.size();
  if (n < 3 || ys.size() != n) throw InvalidArgument("best_linear: need >= 3 matching samples");
  if (!(xs.front() < xs.back())) throw InvalidArgument("best_linear: requires a < b");

  std::array<std::size_t, 3> ref{0, (n - 1) / 2, n - 1};
  LinearFit fit;
  for (int it = 1; it <= 100; ++it) {
    // Level equations f(r_i) - line(r_i) = (-1)^i E.
    const double x0 = xs[ref[0]], x1 = xs[ref[1]], x2 = xs[ref[2]];
    const double y0 = ys[ref[0]], y1 = ys[ref[1]], y2 = ys[ref[2]];
    const double s = (y2 - y0) / (x2 - x0);
    const double r0 = y0 - s * x0, r1 = y1 - s * x1;
    const double c = 0.5 * (r0 + r1);
    const double level = 0.5 * (r0 - r1);

    std::size_t worst = 0;
    double worst_err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = ys[i] - (s * xs[i] + c);
      if (std::abs(e) > std::abs(worst_err)) { worst_err = e; worst = i; }
    }
    fit = LinearFit{s, c, std::abs(worst_err), it, false};
    if (std::abs(worst_err) <= std::abs(level) * (1.0 + 1e-12) + 1e-15) return fit;

    // Single-point exchange keeping the sign alternation of the reference.
    const double base = level != 0.0 ? (level > 0 ? 1.0 : -1.0) : 1.0;
    const std::array<double, 3> sig{base, -base, base};
    const double sz = worst_err > 0 ? 1.0 : -1.0;
    const std::size_t z = worst;
    if (z < ref[0]) {
      if (sz == sig[0]) ref[0] = z;
      else ref = {z, ref[0], ref[1]};
    } else if (z > ref[2]) {
      if (sz == sig[2]) ref[2] = z;
      else ref = {ref[1], ref[2], z};
    } else if (z < ref[1]) {
      if (sz == sig[0]) ref[0] = z;
      else ref[1] = z;
    } else {
      if (sz == sig[1]) ref[1] = z;
      else ref[2] = z;
    }
    if (ref[0] == ref[1] || ref[1] == ref[2]) break;
  }
  LinearFit dense = dense_minimax_line(xs, ys);
  dense.iterations = fit.iterations;
  return dense;
}

// ---------------------------------------------------------------------------

Extension::Extension(FunctionSpec f, double h) : f_(std::move(f)), h_(h) {
  if (!(h_ > 0.0)) throw InvalidArgument("extend: h must be positive");
  if (h_ >= 0.5) throw InvalidArgument("extend: h must be < 1/2 (extension windows would overlap)");
  left_ = best_linear(f_, 0.0, h_);
  right_ = best_linear(f_, 1.0 - h_, 1.0);
}

double Extension::branch(Piece piece, double x) const {
  switch (piece) {
    case Piece::left: return left_(x);
    case Piece::right: return right_(x);
    case Piece::middle: return f_(std::clamp(x, 0.0, 1.0));
  }
  return 0.0;
}

double Extension::operator()(double x) const {
  if (x < -h_ - 1e-14 || x > 1.0 + h_ + 1e-14) throw InvalidArgument("extension evaluated outside [-h, 1+h]");
  if (x < 0.0) return left_(x);
  if (x > 1.0) return right_(x);
  return f_(x);
}

GridFunction extend(const FunctionSpec& f, double h, std::size_t intervals) {
  const Extension ext(f, h);
  return GridFunction::tabulate(-h, 1.0 + h, intervals, [&](double x) { return ext(x); });
}

// ---------------------------------------------------------------------------

ZhukSmoother::ZhukSmoother(const FunctionSpec& f, double h, int panels)
    : ext_(f, h), panels_(panels), steep_(f.steep_at_zero()), kinks_(f.breakpoints()) {
  if (panels_ < 2) throw InvalidArgument("zhuk: need at least two panels");
  kinks_.push_back(0.0);
  kinks_.push_back(1.0);
  std::sort(kinks_.begin(), kinks_.end());
}

double ZhukSmoother::operator()(double x) const {
  const double h = ext_.h();
  const double a = x - h, b = x + h;

  std::vector<double> cuts{a, x, b};
  for (double k : kinks_) {
    if (k > a && k < b && k != x) cuts.push_back(k);
  }
  std::sort(cuts.begin(), cuts.end());

  double total = 0.0;
  for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
    const double u0 = cuts[p], u1 = cuts[p + 1];
    const double len = u1 - u0;
    if (len <= 0.0) continue;
    const double mid = 0.5 * (u0 + u1);
    const auto piece = mid < 0.0 ? Extension::Piece::left
                       : mid > 1.0 ? Extension::Piece::right
                                   : Extension::Piece::middle;
    int m = static_cast<int>(std::ceil(panels_ * len / h));
    m = std::max(2, m + (m % 2));
    const double step = 1.0 / m;
    // In v = sqrt(u) a square-root singularity near 0 becomes polynomial.
    const bool stretch = steep_ && piece == Extension::Piece::middle;
    const double v0 = std::sqrt(u0), dv = std::sqrt(u1) - v0;
    auto integrand = [&](double s) {
      const double v = v0 + dv * s;
      const double u = stretch ? v * v : u0 + len * s;
      const double jac = stretch ? 2.0 * v * dv : len;
      return (1.0 - std::abs(u - x) / h) * ext_.branch(piece, u) * jac;
    };
    double s = integrand(0.0) + integrand(1.0);
    for (int i = 1; i < m; ++i) s += (i % 2 ? 4.0 : 2.0) * integrand(step * i);
    total += s * step / 3.0;
  }
  return total / h;
}

SmoothedFunction zhuk(const FunctionSpec& f, double h, std::size_t intervals, int panels) {
  if (!(h > 0.0 && h < 0.5)) throw InvalidArgument("zhuk: h must lie in (0, 1/2)");
  const double spacing = 1.0 / static_cast<double>(intervals);
  if (2.0 * h / spacing < 8.0) {
    throw InvalidArgument("zhuk: h too small for the grid (fewer than 8 points across [-h,h])");
  }
  const ZhukSmoother z(f, h, panels);
  GridFunction zf = GridFunction::tabulate(0.0, 1.0, intervals, [&](double x) { return z(x); });
  double d1 = 0.0, d2 = 0.0;
  for (std::size_t i = 0; i + 1 < zf.size(); ++i) d1 = std::max(d1, std::abs(zf[i + 1] - zf[i]) / spacing);
  for (std::size_t i = 1; i + 1 < zf.size(); ++i) {
    d2 = std::max(d2, std::abs(zf[i + 1] - 2.0 * zf[i] + zf[i - 1]) / (spacing * spacing));
  }
  return SmoothedFunction{std::move(zf), h, d1, d2};
}

ZhukReport check_zhuk_bounds(const FunctionSpec& f, double h, unsigned l, std::size_t intervals,
                             std::size_t n_omega) {
  if (l < 1) throw InvalidArgument("check_zhuk_bounds: l must be >= 1");
  const SmoothedFunction sm = zhuk(f, h, intervals);
  const ZhukSmoother z(f, h);
  const Modulus mod(f, n_omega);

  ZhukReport r;
  r.h = h;
  r.l = l;
  r.omega1 = mod.first(h);
  r.omega2 = mod.second(h);
  r.z1 = sm.d1_bound;
  r.z2 = sm.d2_bound;

  // Bernstein coefficients and their forward differences.
  std::vector<double> c(l + 1);
  for (unsigned k = 0; k <= l; ++k) c[k] = z(static_cast<double>(k) / l);
  std::vector<double> d1(l), d2(l > 1 ? l - 1 : 0);
  for (unsigned k = 0; k < l; ++k) d1[k] = c[k + 1] - c[k];
  for (unsigned k = 0; k + 1 < l; ++k) d2[k] = c[k + 2] - 2.0 * c[k + 1] + c[k];

  std::vector<double> w0(l + 1), w1(l), w2(d2.size());
  const double ll = static_cast<double>(l);
  for (std::size_t i = 0; i < sm.zf.size(); ++i) {
    const double x = sm.zf.x(i);
    bernstein_weights(l, x, w0);
    bernstein_weights(l - 1, x, w1);
    if (l > 1) bernstein_weights(l - 2, x, w2);
    double g = 0.0, gp = 0.0, gpp = 0.0;
    for (unsigned k = 0; k <= l; ++k) g += c[k] * w0[k];
    for (unsigned k = 0; k < l; ++k) gp += d1[k] * w1[k];
    for (unsigned k = 0; k + 1 < l; ++k) gpp += d2[k] * w2[k];
    gp *= ll;
    gpp *= ll * (ll - 1.0);
    r.f_minus_g = std::max(r.f_minus_g, std::abs(f(x) - g));
    r.eps = std::max(r.eps, std::abs(g - sm.zf[i]));
    r.g1 = std::max(r.g1, std::abs(gp));
    r.g2 = std::max(r.g2, std::abs(gpp));
  }
  return r;
}

}  // namespace korovkin
