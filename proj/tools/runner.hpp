#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace varseq::cli {

enum ExitCode : int { kOk = 0, kInputError = 1, kVerificationFailed = 2 };

struct RunOptions {
  std::optional<std::vector<std::string>> tasks;
  std::optional<int> on_shell_cap;
  unsigned seed = 0;
};

struct RunResult {
  nlohmann::json report;
  std::string summary;
  int exit_code = kOk;
};

/// Runs the problem given as JSON text. Never throws for bad input: input
/// errors become exit code 1 with an error report.
RunResult run_problem(const std::string& text, const RunOptions& options);
RunResult run_file(const std::string& path, const RunOptions& options);

}  // namespace varseq::cli
