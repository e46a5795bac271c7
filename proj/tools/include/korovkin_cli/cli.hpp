#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace korovkin::cli {

enum ExitCode : int { kPass = 0, kViolation = 1, kUsage = 2, kNoConvergence = 3 };

enum class Format { table, csv, json };

struct ExperimentConfig {
  std::vector<std::string> operators;
  std::vector<std::string> functions;
  std::vector<std::size_t> m_list;
  std::size_t grid = 1024;
  std::size_t omega_grid = 4096;
  double tol = 1e-10;
  double slack = -1.0;  // negative: use the default for omega_grid
  Format format = Format::table;
  std::string out;
};

/// "1,2,4", "1:20" (inclusive) or a mix such as "0,4:6".
std::vector<std::size_t> parse_m_list(std::string_view text);

/// Shortest round-trip text for v with 17 significant digits, '.' separator.
std::string format_double(double v);

/// Number of worker threads: KOROVKIN_THREADS if set, else hardware concurrency.
unsigned thread_budget();

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace korovkin::cli
