#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "korovkin_cli/cli.hpp"

namespace korovkin::cli {

/// Runs the jobs on up to `threads` workers; rethrows the first exception.
void run_parallel(std::vector<std::function<void()>>& jobs, unsigned threads);

int cmd_suite(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace korovkin::cli
