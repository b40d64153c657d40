#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace metricforge::cli {

enum ExitCode : int { kPass = 0, kThresholdFailure = 1, kUsageError = 2, kUnusable = 3 };

// Runs one command line (without the program name). Reports and spaces go to
// the -o path or to `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace metricforge::cli
