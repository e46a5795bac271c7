#include "korovkin/gridfn.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

#include "korovkin/errors.hpp"

namespace korovkin {

GridFunction::GridFunction(double lo, double hi, std::vector<double> values)
    : lo_(lo), hi_(hi), values_(std::move(values)) {
  if (!(lo_ < hi_)) throw InvalidArgument("GridFunction: requires lo < hi");
  if (values_.size() < 2) throw InvalidArgument("GridFunction: requires at least two samples");
}

GridFunction GridFunction::tabulate(double lo, double hi, std::size_t intervals,
                                    const std::function<double(double)>& fn) {
  if (intervals == 0) throw InvalidArgument("GridFunction: need at least one interval");
  std::vector<double> v(intervals + 1);
  const double n = static_cast<double>(intervals);
  for (std::size_t i = 0; i <= intervals; ++i) {
    const double x = (i == intervals) ? hi : lo + (hi - lo) * (static_cast<double>(i) / n);
    v[i] = fn(x);
  }
  return GridFunction(lo, hi, std::move(v));
}

double GridFunction::x(std::size_t i) const noexcept {
  const std::size_t n = intervals();
  if (i >= n) return hi_;
  return lo_ + (hi_ - lo_) * (static_cast<double>(i) / static_cast<double>(n));
}

std::vector<double> GridFunction::abscissae() const {
  std::vector<double> xs(size());
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = x(i);
  return xs;
}

double GridFunction::eval_interp(double x) const {
  const double slop = 1e-14 * (hi_ - lo_);
  if (x < lo_ - slop || x > hi_ + slop) {
    std::ostringstream msg;
    msg << "eval_interp: x = " << x << " outside [" << lo_ << ", " << hi_ << "]";
    throw InvalidArgument(msg.str());
  }
  const std::size_t n = intervals();
  const double pos = std::clamp((x - lo_) / spacing(), 0.0, static_cast<double>(n));
  std::size_t k = static_cast<std::size_t>(pos);
  if (k >= n) k = n - 1;
  const double t = pos - static_cast<double>(k);
  return (1.0 - t) * values_[k] + t * values_[k + 1];
}

bool GridFunction::same_grid(const GridFunction& other) const noexcept {
  return lo_ == other.lo_ && hi_ == other.hi_ && values_.size() == other.values_.size();
}

double sup_diff(const GridFunction& g1, const GridFunction& g2) {
  if (!g1.same_grid(g2)) throw InvalidArgument("sup_diff: mismatched grids");
  double s = 0.0;
  for (std::size_t i = 0; i < g1.size(); ++i) s = std::max(s, std::abs(g1[i] - g2[i]));
  return s;
}

double sup_norm(const GridFunction& g) {
  double s = 0.0;
  for (double v : g.values()) s = std::max(s, std::abs(v));
  return s;
}

// ---------------------------------------------------------------------------

namespace {

void require_unit(double c, const char* what) {
  if (!(c >= 0.0 && c <= 1.0)) {
    throw InvalidArgument(std::string(what) + ": parameter must lie in [0,1]");
  }
}

}  // namespace

FunctionSpec FunctionSpec::monomial(int degree) {
  if (degree < 0 || degree > 3) throw InvalidArgument("monomial: degree must be in {0,1,2,3}");
  return FunctionSpec(FunctionKind::monomial, degree);
}

FunctionSpec FunctionSpec::abs_shift(double c) {
  require_unit(c, "abs_shift");
  return FunctionSpec(FunctionKind::abs_shift, c);
}

FunctionSpec FunctionSpec::sine_pi() { return FunctionSpec(FunctionKind::sine_pi, 0.0); }
FunctionSpec FunctionSpec::exponential() { return FunctionSpec(FunctionKind::exponential, 0.0); }
FunctionSpec FunctionSpec::sqrt_fn() { return FunctionSpec(FunctionKind::sqrt_fn, 0.0); }

FunctionSpec FunctionSpec::ramp(double c) {
  require_unit(c, "ramp");
  return FunctionSpec(FunctionKind::ramp, c);
}

FunctionSpec FunctionSpec::custom(GridFunction samples) {
  if (samples.lo() != 0.0 || samples.hi() != 1.0) {
    throw InvalidArgument("custom: samples must span exactly [0,1]");
  }
  FunctionSpec f(FunctionKind::custom_samples, 0.0);
  f.samples_ = std::move(samples);
  return f;
}

double FunctionSpec::operator()(double x) const {
  switch (kind_) {
    case FunctionKind::monomial:
      switch (degree()) {
        case 0: return 1.0;
        case 1: return x;
        case 2: return x * x;
        default: return x * x * x;
      }
    case FunctionKind::abs_shift: return std::abs(x - param_);
    case FunctionKind::sine_pi: return std::sin(std::numbers::pi * x);
    case FunctionKind::exponential: return std::exp(x);
    case FunctionKind::sqrt_fn: return std::sqrt(std::max(x, 0.0));
    case FunctionKind::ramp: return std::max(0.0, x - param_);
    case FunctionKind::custom_samples: return samples_->eval_interp(x);
  }
  return 0.0;
}

std::string FunctionSpec::name() const {
  std::ostringstream s;
  s.precision(17);
  switch (kind_) {
    case FunctionKind::monomial: s << 'e' << degree(); break;
    case FunctionKind::abs_shift: s << "abs_shift:" << param_; break;
    case FunctionKind::sine_pi: s << "sine_pi"; break;
    case FunctionKind::exponential: s << "exponential"; break;
    case FunctionKind::sqrt_fn: s << "sqrt"; break;
    case FunctionKind::ramp: s << "ramp:" << param_; break;
    case FunctionKind::custom_samples: s << "custom"; break;
  }
  return s.str();
}

std::optional<DerivativeNorms> FunctionSpec::derivative_norms() const {
  using std::numbers::pi;
  switch (kind_) {
    case FunctionKind::monomial:
      switch (degree()) {
        case 0: return DerivativeNorms{0.0, 0.0};
        case 1: return DerivativeNorms{1.0, 0.0};
        case 2: return DerivativeNorms{2.0, 2.0};
        default: return DerivativeNorms{3.0, 6.0};
      }
    case FunctionKind::sine_pi: return DerivativeNorms{pi, pi * pi};
    case FunctionKind::exponential: return DerivativeNorms{std::numbers::e, std::numbers::e};
    default: return std::nullopt;
  }
}

std::vector<double> FunctionSpec::breakpoints() const {
  switch (kind_) {
    case FunctionKind::abs_shift:
    case FunctionKind::ramp:
      if (param_ > 0.0 && param_ < 1.0) return {param_};
      return {};
    case FunctionKind::custom_samples: {
      auto xs = samples_->abscissae();
      return {xs.begin() + 1, xs.end() - 1};
    }
    default: return {};
  }
}

bool FunctionSpec::is_affine() const noexcept {
  return kind_ == FunctionKind::monomial && degree() <= 1;
}

bool FunctionSpec::steep_at_zero() const noexcept { return kind_ == FunctionKind::sqrt_fn; }

// ---------------------------------------------------------------------------

namespace {

double parse_real(std::string_view s, std::string_view whole) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw InvalidArgument("function spec '" + std::string(whole) + "': bad number '" +
                          std::string(s) + "'");
  }
  return v;
}

}  // namespace

FunctionSpec parse_function(std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view tag = text.substr(0, colon);
  const std::string_view arg = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  const bool has_arg = colon != std::string_view::npos;

  auto need_arg = [&] {
    if (!has_arg) throw InvalidArgument("function spec '" + std::string(text) + "': missing parameter");
    return parse_real(arg, text);
  };
  auto no_arg = [&] {
    if (has_arg) throw InvalidArgument("function spec '" + std::string(text) + "': takes no parameter");
  };

  if (tag.size() == 2 && tag[0] == 'e' && tag[1] >= '0' && tag[1] <= '9') {
    no_arg();
    return FunctionSpec::monomial(tag[1] - '0');
  }
  if (tag == "monomial") {
    const double d = need_arg();
    if (d != std::floor(d)) throw InvalidArgument("monomial: degree must be an integer");
    return FunctionSpec::monomial(static_cast<int>(d));
  }
  if (tag == "abs_shift") return FunctionSpec::abs_shift(need_arg());
  if (tag == "ramp") return FunctionSpec::ramp(need_arg());
  if (tag == "sine_pi") { no_arg(); return FunctionSpec::sine_pi(); }
  if (tag == "exponential") { no_arg(); return FunctionSpec::exponential(); }
  if (tag == "sqrt" || tag == "sqrt_fn") { no_arg(); return FunctionSpec::sqrt_fn(); }
  throw InvalidArgument("unknown function '" + std::string(tag) + "'");
}

GridFunction sample(const FunctionSpec& f, std::size_t intervals) {
  return sample(f, intervals, 1.0);
}

GridFunction sample(const FunctionSpec& f, std::size_t intervals, double hi) {
  if (intervals == 0) throw InvalidArgument("sample: N must be >= 1");
  return GridFunction::tabulate(0.0, hi, intervals, [&](double x) { return f(x); });
}

}  // namespace korovkin
