#include <iostream>

#include <CLI11.hpp>

#include "runner.hpp"

int main(int argc, char** argv) {
  using namespace varseq::cli;
  CLI::App app{"Finite-order variational calculus on jet spaces"};
  app.require_subcommand(1);

  std::string file;
  std::string format = "json";
  std::vector<std::string> tasks;
  int cap = -1;
  unsigned seed = 0;
  CLI::App* run = app.add_subcommand("run", "Run the tasks of a problem file");
  run->add_option("file", file, "Problem file (JSON)")->required();
  run->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "text"}));
  CLI::Option* tasks_opt = run->add_option("--tasks", tasks, "Override the task list")->delimiter(',');
  CLI::Option* cap_opt = run->add_option("--onshell-cap", cap, "Derivative cap of the on-shell reducer");
  run->add_option("--seed", seed, "Seed of the numeric section samples");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  RunOptions options;
  if (*tasks_opt) options.tasks = tasks;
  if (*cap_opt) options.on_shell_cap = cap;
  options.seed = seed;

  const RunResult result = run_file(file, options);
  if (format == "json") {
    std::cout << result.report.dump(2) << "\n";
    std::cerr << result.summary;
  } else {
    std::cout << result.summary;
  }
  return result.exit_code;
}
