#include "suite.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>

#include "korovkin/bounds.hpp"
#include "korovkin/errors.hpp"
#include "korovkin/operators.hpp"
#include "korovkin/smoothness.hpp"

namespace korovkin::cli {

void run_parallel(std::vector<std::function<void()>>& jobs, unsigned threads) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(jobs.size())));
  std::atomic<std::size_t> next{0};
  std::exception_ptr first;
  std::mutex mu;
  auto worker = [&] {
    for (std::size_t i; (i = next++) < jobs.size();) {
      try {
        jobs[i]();
      } catch (...) {
        std::lock_guard lock(mu);
        if (!first) first = std::current_exception();
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (first) std::rethrow_exception(first);
}

namespace {

const std::vector<std::string> kCatalogOperators = {
    "bernstein:2", "bernstein:5", "bernstein:10", "stancu:4:0:1", "stancu:4:1:1",
    "king:2",      "king:4",      "king:10",      "mkz:2:1e-10:0.9",
};
const std::vector<std::string> kCatalogFunctions = {"e0", "e1", "e2", "e3", "abs_shift:0.5", "sine_pi", "sqrt"};
const std::vector<std::size_t> kDefaultM = {1, 2, 4, 8, 16, 32};

struct Family {
  std::string name;
  std::size_t checks = 0;
  std::size_t failed = 0;
  std::size_t skipped = 0;
};

class CsvFile {
 public:
  CsvFile(const std::filesystem::path& path, const std::string& header) : os_(path) {
    if (!os_) throw InvalidArgument("cannot write '" + path.string() + "'");
    os_ << header << '\n';
  }
  template <class... Ts>
  void row(const Ts&... cells) {
    bool first = true;
    ((os_ << (first ? "" : ",") << cell(cells), first = false), ...);
    os_ << '\n';
  }

 private:
  static std::string cell(double v) { return format_double(v); }
  static std::string cell(std::size_t v) { return std::to_string(v); }
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(bool v) { return v ? "1" : "0"; }
  static std::string cell(std::string_view v) { return std::string(v); }
  static std::string cell(const std::string& v) { return v; }
  static std::string cell(const char* v) { return v; }

  std::ofstream os_;
};

}  // namespace

int cmd_suite(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto& op_specs = cfg.operators.empty() ? kCatalogOperators : cfg.operators;
  const auto& fn_specs = cfg.functions.empty() ? kCatalogFunctions : cfg.functions;
  const auto& ms = cfg.m_list.empty() ? kDefaultM : cfg.m_list;
  const double slack = cfg.slack >= 0.0 ? cfg.slack : default_slack(cfg.omega_grid);
  const unsigned threads = thread_budget();

  const std::filesystem::path dir = cfg.out.empty() ? "korovkin_suite" : cfg.out;
  std::filesystem::create_directories(dir);

  std::vector<SamplingOperator> ops;
  for (const auto& s : op_specs) ops.push_back(parse_operator(s));
  std::vector<FunctionSpec> fns;
  for (const auto& s : fn_specs) fns.push_back(parse_function(s));

  // Operators and moduli.
  AnalysisOptions opts;
  opts.intervals = cfg.grid;
  opts.tol = cfg.tol;
  std::vector<std::optional<OperatorAnalysis>> an(ops.size());
  std::vector<std::string> conv_error(ops.size());
  std::vector<std::optional<Modulus>> mods(fns.size());
  {
    std::vector<std::function<void()>> jobs;
    for (std::size_t i = 0; i < ops.size(); ++i) {
      jobs.emplace_back([&, i] {
        try {
          an[i].emplace(analyze(ops[i], opts));
        } catch (const ConvergenceError& e) {
          conv_error[i] = e.what();
        }
      });
    }
    for (std::size_t j = 0; j < fns.size(); ++j) {
      jobs.emplace_back([&, j] { mods[j].emplace(fns[j], cfg.omega_grid); });
    }
    run_parallel(jobs, threads);
  }

  std::vector<Family> families;
  bool converged = true;

  {
    Family fam{"limits"};
    CsvFile csv(dir / "limits.csv", "operator,sign_class,kind,m_star,residual,closed_form_distance,e2_defect");
    for (std::size_t i = 0; i < ops.size(); ++i) {
      ++fam.checks;
      if (!an[i]) {
        ++fam.failed;
        converged = false;
        err << "korovkin: " << ops[i].name() << ": " << conv_error[i] << "\n";
        csv.row(ops[i].name(), "", "no_convergence", "", "", "", "");
        continue;
      }
      const auto& a = *an[i];
      const double d = closed_form_distance(a.limit);
      csv.row(ops[i].name(), to_string(a.sign.tag), to_string(a.limit.kind), static_cast<std::size_t>(a.limit.m_star),
              a.limit.residual, std::isnan(d) ? std::string() : format_double(d), a.e2_defect);
    }
    families.push_back(fam);
  }

  {
    struct Cell {
      std::size_t op, fn, m;
      std::string estimate;
      double min_margin = 0.0, at = 0.0;
      std::size_t violations = 0;
      std::string skipped;
    };
    std::vector<Cell> cells;
    for (std::size_t i = 0; i < ops.size(); ++i) {
      if (!an[i]) continue;
      for (std::size_t j = 0; j < fns.size(); ++j) {
        for (std::size_t m : ms) cells.push_back(Cell{i, j, m, {}, 0.0, 0.0, 0, {}});
      }
    }
    std::vector<std::function<void()>> jobs;
    for (auto& c : cells) {
      jobs.emplace_back([&, pc = &c] {
        try {
          const BoundReport r = verify(*an[pc->op], fns[pc->fn], *mods[pc->fn], pc->m, slack);
          const auto it = std::min_element(r.margin.begin(), r.margin.end());
          pc->estimate = std::string(to_string(r.estimate));
          pc->min_margin = *it;
          pc->at = r.xs[static_cast<std::size_t>(it - r.margin.begin())];
          pc->violations = r.violations.size();
        } catch (const HypothesisError& e) {
          pc->skipped = e.what();
        }
      });
    }
    run_parallel(jobs, threads);

    Family fam{"verify"};
    CsvFile csv(dir / "verify.csv", "operator,function,m,theorem_id,min_margin,at_x,violations,note");
    for (const auto& c : cells) {
      ++fam.checks;
      if (!c.skipped.empty()) {
        ++fam.skipped;
      } else if (c.violations > 0) {
        ++fam.failed;
      }
      csv.row(ops[c.op].name(), fns[c.fn].name(), c.m, c.estimate, c.min_margin, c.at, c.violations, c.skipped);
    }
    families.push_back(fam);
  }

  {
    Family fam{"envelope"};
    CsvFile csv(dir / "envelope.csv", "operator,m,a,lower_violation,upper_violation,upper_gap,ok");
    for (std::size_t i = 0; i < ops.size(); ++i) {
      if (!an[i]) continue;
      if (!an[i]->rate || hypothesis_failure(Estimate::geometric_rate, *an[i]) != "") {
        ++fam.skipped;
        continue;
      }
      for (std::size_t m = 0; m <= 30; ++m) {
        const EnvelopeReport r = moment_envelope(an[i]->engine, *an[i]->rate, m);
        ++fam.checks;
        if (!r.ok()) ++fam.failed;
        csv.row(ops[i].name(), m, r.a, r.lower_violation, r.upper_violation, r.upper_gap, r.ok());
      }
    }
    families.push_back(fam);
  }

  {
    Family fam{"cauchy"};
    CsvFile csv(dir / "cauchy.csv", "operator,g,m,p,form,max_lhs,max_violation,violations");
    const FunctionSpec gs[] = {FunctionSpec::monomial(2), FunctionSpec::sine_pi()};
    for (std::size_t i = 0; i < ops.size(); ++i) {
      if (!an[i]) continue;
      if (an[i]->sign.tag == SignTag::mixed) {
        ++fam.skipped;
        continue;
      }
      const CauchyForm form = cauchy_form_for(an[i]->sign);
      for (const auto& g : gs) {
        for (std::size_t m : {0, 1, 2, 4}) {
          for (std::size_t p : {1, 2, 8}) {
            const CauchyReport r = cauchy_gap(an[i]->engine, g, m, p, form);
            ++fam.checks;
            if (!r.ok()) ++fam.failed;
            csv.row(ops[i].name(), g.name(), m, p, to_string(form), r.max_lhs, r.max_violation, r.violations);
          }
        }
      }
    }
    families.push_back(fam);
  }

  {
    Family fam{"dini"};
    CsvFile csv(dir / "dini.csv", "operator,m,max_decrease,ok");
    for (std::size_t i = 0; i < ops.size(); ++i) {
      if (!an[i]) continue;
      if (!an[i]->at_least_e1()) continue;
      GridFunction prev = an[i]->engine.moment_power(2, 0);
      for (std::size_t m = 1; m <= 20; ++m) {
        GridFunction cur = an[i]->engine.moment_power(2, m);
        double dec = 0.0;
        for (std::size_t k = 0; k < cur.size(); ++k) dec = std::max(dec, prev[k] - cur[k]);
        const bool ok = dec <= 1e-12;
        ++fam.checks;
        if (!ok) ++fam.failed;
        csv.row(ops[i].name(), m, dec, ok);
        prev = std::move(cur);
      }
    }
    families.push_back(fam);
  }

  {
    const FunctionSpec zf[] = {FunctionSpec::monomial(2), FunctionSpec::abs_shift(0.5), FunctionSpec::sine_pi()};
    const double hs[] = {0.05, 0.1, 0.2};
    std::vector<ZhukReport> reps(9);
    std::vector<std::function<void()>> jobs;
    for (std::size_t a = 0; a < 3; ++a) {
      for (std::size_t b = 0; b < 3; ++b) {
        jobs.emplace_back([&, a, b] { reps[3 * a + b] = check_zhuk_bounds(zf[a], hs[b], 400, cfg.grid, cfg.omega_grid); });
      }
    }
    run_parallel(jobs, threads);
    Family fam{"zhuk"};
    CsvFile csv(dir / "zhuk.csv",
                "function,h,l,omega1,omega2,f_minus_g,bound0,eps,g1,bound1,g2,bound2,z1,z2,ok");
    for (std::size_t k = 0; k < reps.size(); ++k) {
      const auto& r = reps[k];
      ++fam.checks;
      if (!r.passes()) ++fam.failed;
      csv.row(zf[k / 3].name(), r.h, static_cast<std::size_t>(r.l), r.omega1, r.omega2, r.f_minus_g, r.bound0(), r.eps,
              r.g1, r.bound1(), r.g2, r.bound2(), r.z1, r.z2, r.passes());
    }
    families.push_back(fam);
  }

  std::size_t failed = 0;
  out << std::left << std::setw(10) << "family" << std::right << std::setw(8) << "checks" << std::setw(8) << "failed"
      << std::setw(9) << "skipped" << "\n";
  for (const auto& f : families) {
    out << std::left << std::setw(10) << f.name << std::right << std::setw(8) << f.checks << std::setw(8) << f.failed
        << std::setw(9) << f.skipped << "\n";
    failed += f.failed;
  }
  out << "reports in " << dir.string() << "\n";
  if (!converged) return kNoConvergence;
  return failed == 0 ? kPass : kViolation;
}

}  // namespace korovkin::cli
