#include "korovkin_cli/cli.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "korovkin/bounds.hpp"
#include "korovkin/errors.hpp"
#include "korovkin/gridfn.hpp"
#include "korovkin/iterate.hpp"
#include "korovkin/operators.hpp"
#include "korovkin/smoothness.hpp"
#include "suite.hpp"

namespace korovkin::cli {

using nlohmann::json;

std::vector<std::size_t> parse_m_list(std::string_view text) {
  auto number = [&](std::string_view s) {
    std::size_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || p != s.data() + s.size()) {
      throw InvalidArgument("bad iteration count '" + std::string(s) + "' in --m");
    }
    return v;
  };
  std::vector<std::size_t> ms;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    if (comma == std::string_view::npos) comma = text.size();
    std::string_view item = text.substr(start, comma - start);
    if (auto colon = item.find(':'); colon != std::string_view::npos) {
      const std::size_t a = number(item.substr(0, colon));
      const std::size_t b = number(item.substr(colon + 1));
      if (b < a) throw InvalidArgument("empty range '" + std::string(item) + "' in --m");
      for (std::size_t m = a; m <= b; ++m) ms.push_back(m);
    } else {
      ms.push_back(number(item));
    }
    start = comma + 1;
  }
  std::sort(ms.begin(), ms.end());
  ms.erase(std::unique(ms.begin(), ms.end()), ms.end());
  if (ms.empty()) throw InvalidArgument("--m is empty");
  return ms;
}

std::string format_double(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  (void)ec;
  return std::string(buf, p);
}

unsigned thread_budget() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("KOROVKIN_THREADS")) {
    unsigned cap = 0;
    std::string_view s(env);
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), cap);
    if (ec == std::errc{} && p == s.data() + s.size() && cap > 0) n = std::min(n, cap);
  }
  return n;
}

namespace {

bool power_of_two_at_least_64(std::size_t n) { return n >= 64 && (n & (n - 1)) == 0; }

void validate(const ExperimentConfig& cfg) {
  if (!power_of_two_at_least_64(cfg.grid)) {
    throw InvalidArgument("--grid must be a power of two >= 64, got " + std::to_string(cfg.grid));
  }
  if (!power_of_two_at_least_64(cfg.omega_grid)) {
    throw InvalidArgument("--omega-grid must be a power of two >= 64, got " + std::to_string(cfg.omega_grid));
  }
  if (!(cfg.tol > 0.0)) throw InvalidArgument("--tol must be positive");
}

double slack_of(const ExperimentConfig& cfg) {
  return cfg.slack >= 0.0 ? cfg.slack : default_slack(cfg.omega_grid);
}

AnalysisOptions analysis_options(const ExperimentConfig& cfg) {
  AnalysisOptions o;
  o.intervals = cfg.grid;
  o.tol = cfg.tol;
  return o;
}

// Output goes to --out when given, else to the caller's stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : os_(&fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw InvalidArgument("cannot write '" + path + "'");
      os_ = file_.get();
    }
  }
  std::ostream& operator*() { return *os_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* os_;
};

json sign_json(const SignClass& s) {
  json j{{"tag", to_string(s.tag)}, {"max_excess", s.max_excess}, {"max_deficit", s.max_deficit}};
  j["witness"] = std::isnan(s.witness) ? json(nullptr) : json(s.witness);
  return j;
}

// ---------------------------------------------------------------- moments

int cmd_moments(const ExperimentConfig& cfg, std::ostream& out) {
  const SamplingOperator op = parse_operator(cfg.operators.front());
  const SignClass sign = classify_sign(op);
  const GridFunction t0 = moments(op, 0, cfg.grid);
  const GridFunction t1 = moments(op, 1, cfg.grid);
  const GridFunction t2 = moments(op, 2, cfg.grid);

  Sink sink(cfg.out, out);
  std::ostream& os = *sink;
  switch (cfg.format) {
    case Format::csv:
      os << "x,T_e0,T_e1,T_e2\n";
      for (std::size_t i = 0; i < t0.size(); ++i) {
        os << format_double(t0.x(i)) << ',' << format_double(t0[i]) << ',' << format_double(t1[i]) << ','
           << format_double(t2[i]) << '\n';
      }
      break;
    case Format::json: {
      json j{{"version", "v1"}, {"command", "moments"}, {"operator", op.name()}, {"sign", sign_json(sign)}};
      j["xs"] = t0.abscissae();
      j["e0"] = std::vector<double>(t0.values().begin(), t0.values().end());
      j["e1"] = std::vector<double>(t1.values().begin(), t1.values().end());
      j["e2"] = std::vector<double>(t2.values().begin(), t2.values().end());
      os << j.dump(2) << '\n';
      break;
    }
    case Format::table: {
      os << "operator    " << op.name() << "\n";
      os << "sign class  " << to_string(sign.tag) << "\n";
      os << "max excess  " << sign.max_excess << "\nmax deficit " << sign.max_deficit << "\n";
      if (!std::isnan(sign.witness)) os << "witness     " << sign.witness << "\n";
      os << "\n" << std::setw(10) << "x" << std::setw(16) << "T(e0)" << std::setw(16) << "T(e1)"
         << std::setw(16) << "T(e2)" << "\n";
      const std::size_t stride = std::max<std::size_t>(1, cfg.grid / 16);
      for (std::size_t i = 0; i < t0.size(); i += stride) {
        os << std::setw(10) << t0.x(i) << std::setw(16) << t0[i] << std::setw(16) << t1[i] << std::setw(16)
           << t2[i] << "\n";
      }
      break;
    }
  }
  return kPass;
}

// ---------------------------------------------------------------- limit

int cmd_limit(const ExperimentConfig& cfg, std::ostream& out) {
  const SamplingOperator op = parse_operator(cfg.operators.front());
  IterationEngine engine(op, cfg.grid);
  const LimitInfo lim = converge_limit(engine, cfg.tol);
  const double dist = closed_form_distance(lim);

  Sink sink(cfg.out, out);
  std::ostream& os = *sink;
  switch (cfg.format) {
    case Format::csv:
      os << "operator,kind,m_star,residual,closed_form_distance\n"
         << op.name() << ',' << to_string(lim.kind) << ',' << lim.m_star << ',' << format_double(lim.residual)
         << ',' << (std::isnan(dist) ? std::string() : format_double(dist)) << '\n';
      break;
    case Format::json: {
      json j{{"version", "v1"},        {"command", "limit"},  {"operator", op.name()},
             {"kind", to_string(lim.kind)}, {"m_star", lim.m_star}, {"residual", lim.residual}};
      j["closed_form_distance"] = std::isnan(dist) ? json(nullptr) : json(dist);
      j["xs"] = lim.limit_e1.abscissae();
      j["limit_e1"] = std::vector<double>(lim.limit_e1.values().begin(), lim.limit_e1.values().end());
      j["limit_e2"] = std::vector<double>(lim.limit_e2.values().begin(), lim.limit_e2.values().end());
      os << j.dump(2) << '\n';
      break;
    }
    case Format::table:
      os << "operator   " << op.name() << "\n"
         << "kind       " << to_string(lim.kind) << "\n"
         << "m_star     " << lim.m_star << "\n"
         << "residual   " << lim.residual << "\n"
         << "distance   " << (std::isnan(dist) ? std::string("n/a") : format_double(dist)) << "\n";
      break;
  }
  return kPass;
}

// ---------------------------------------------------------------- verify

int cmd_verify(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  const SamplingOperator op = parse_operator(cfg.operators.front());
  const FunctionSpec f = parse_function(cfg.functions.front());
  const OperatorAnalysis an = analyze(op, analysis_options(cfg));
  const Modulus mod(f, cfg.omega_grid);
  const double slack = slack_of(cfg);

  std::vector<BoundReport> reports(cfg.m_list.size());
  std::vector<std::function<void()>> jobs;
  for (std::size_t k = 0; k < cfg.m_list.size(); ++k) {
    jobs.emplace_back([&, k] { reports[k] = verify(an, f, mod, cfg.m_list[k], slack); });
  }
  run_parallel(jobs, thread_budget());

  std::size_t violations = 0;
  for (const auto& r : reports) violations += r.violations.size();

  Sink sink(cfg.out, out);
  std::ostream& os = *sink;
  switch (cfg.format) {
    case Format::csv: {
      os << "x,m,actual,bound,margin,theorem_id\n";
      const std::size_t n = reports.front().xs.size();
      for (std::size_t i = 0; i < n; ++i) {
        for (const auto& r : reports) {
          os << format_double(r.xs[i]) << ',' << r.m << ',' << format_double(r.actual[i]) << ','
             << format_double(r.bound[i]) << ',' << format_double(r.margin[i]) << ',' << to_string(r.estimate)
             << '\n';
        }
      }
      break;
    }
    case Format::json: {
      json j{{"version", "v1"},
             {"command", "verify"},
             {"operator", op.name()},
             {"function", f.name()},
             {"sign", sign_json(an.sign)},
             {"limit", to_string(an.limit.kind)},
             {"slack", slack},
             {"ok", violations == 0}};
      j["reports"] = json::array();
      for (const auto& r : reports) {
        j["reports"].push_back(json{{"m", r.m},
                                    {"theorem_id", to_string(r.estimate)},
                                    {"slack", r.slack},
                                    {"min_margin", r.min_margin()},
                                    {"xs", r.xs},
                                    {"actual", r.actual},
                                    {"bound", r.bound},
                                    {"margin", r.margin},
                                    {"violations", r.violations}});
      }
      os << j.dump(2) << '\n';
      break;
    }
    case Format::table: {
      os << "operator  " << op.name() << "  (" << to_string(an.sign.tag) << ", limit " << to_string(an.limit.kind)
         << ")\nfunction  " << f.name() << "\nslack     " << slack << "\n\n";
      os << std::setw(6) << "m" << "  " << std::left << std::setw(24) << "estimate" << std::right << std::setw(16)
         << "min margin" << std::setw(12) << "at x" << std::setw(12) << "violations" << "\n";
      for (const auto& r : reports) {
        const auto it = std::min_element(r.margin.begin(), r.margin.end());
        const double at = r.xs[static_cast<std::size_t>(it - r.margin.begin())];
        os << std::setw(6) << r.m << "  " << std::left << std::setw(24) << to_string(r.estimate) << std::right
           << std::setw(16) << *it << std::setw(12) << at << std::setw(12) << r.violations.size() << "\n";
      }
      break;
    }
  }

  if (violations > 0) {
    err << "violations: " << violations << "\n" << "x,m,actual,bound,margin,theorem_id\n";
    for (const auto& r : reports) {
      for (std::size_t i : r.violations) {
        err << format_double(r.xs[i]) << ',' << r.m << ',' << format_double(r.actual[i]) << ','
            << format_double(r.bound[i]) << ',' << format_double(r.margin[i]) << ',' << to_string(r.estimate)
            << '\n';
      }
    }
    return kViolation;
  }
  return kPass;
}

Format parse_format(const std::string& s) {
  if (s == "table") return Format::table;
  if (s == "csv") return Format::csv;
  if (s == "json") return Format::json;
  throw InvalidArgument("--format must be table, csv or json");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Iterates of positive linear operators on C[0,1] and their error estimates", "korovkin"};
  app.require_subcommand(1);

  ExperimentConfig cfg;
  std::string m_text;
  std::string format = "table";

  auto add_common = [&](CLI::App* sub, bool with_function, bool with_m) {
    sub->add_option("--operator", cfg.operators, "operator spec, e.g. bernstein:5, stancu:4:0:1, mkz:2:1e-10:0.9");
    if (with_function) sub->add_option("--function", cfg.functions, "e0..e3, abs_shift:c, sine_pi, exponential, sqrt, ramp:c");
    if (with_m) sub->add_option("--m", m_text, "iteration counts: comma list or a:b range");
    sub->add_option("--grid", cfg.grid, "report grid intervals (power of two >= 64)");
    sub->add_option("--omega-grid", cfg.omega_grid, "modulus grid intervals (power of two >= 64)");
    sub->add_option("--tol", cfg.tol, "limit convergence tolerance");
    sub->add_option("--slack", cfg.slack, "violation slack (default 1e-6 + 4/omega-grid)");
    sub->add_option("--format", format, "table, csv or json");
    sub->add_option("--out", cfg.out, "output file (suite: output directory)");
  };

  CLI::App* moments_cmd = app.add_subcommand("moments", "T(e0), T(e1), T(e2) and the sign class of T(e1) - e1");
  CLI::App* verify_cmd = app.add_subcommand("verify", "compare iterate errors against the applicable estimate");
  CLI::App* limit_cmd = app.add_subcommand("limit", "detect and classify the limit of the iterates");
  CLI::App* suite_cmd = app.add_subcommand("suite", "run the full check matrix and write one CSV per family");
  add_common(moments_cmd, false, false);
  add_common(verify_cmd, true, true);
  add_common(limit_cmd, false, false);
  add_common(suite_cmd, true, true);

  try {
    std::vector<std::string> args;
    for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
    app.parse(std::move(args));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kPass;
  } catch (const CLI::ParseError& e) {
    err << "korovkin: " << e.what() << "\n";
    return kUsage;
  }

  try {
    cfg.format = parse_format(format);
    validate(cfg);
    const bool is_suite = suite_cmd->parsed();
    if (!m_text.empty()) cfg.m_list = parse_m_list(m_text);

    if (is_suite) return cmd_suite(cfg, out, err);

    if (cfg.operators.size() != 1) throw InvalidArgument("exactly one --operator is required");
    if (moments_cmd->parsed()) return cmd_moments(cfg, out);
    if (limit_cmd->parsed()) return cmd_limit(cfg, out);

    if (cfg.functions.size() != 1) throw InvalidArgument("exactly one --function is required");
    if (cfg.m_list.empty()) cfg.m_list = parse_m_list("1:20");
    return cmd_verify(cfg, out, err);
  } catch (const ConvergenceError& e) {
    err << "korovkin: " << e.what() << " (residual " << e.residual() << ")\n";
    return kNoConvergence;
  } catch (const HypothesisError& e) {
    err << "korovkin: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "korovkin: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "korovkin: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace korovkin::cli
