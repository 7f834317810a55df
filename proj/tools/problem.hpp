#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "varseq/fields.hpp"
#include "varseq/forms.hpp"

namespace varseq::cli {

/// Bad problem input: malformed JSON, schema violations, unparsable
/// expressions, dimension mismatches. Location is optional.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what, std::string where = {}, int line = 0, int column = 0)
      : std::runtime_error(what), where_(std::move(where)), line_(line), column_(column) {}

  const std::string& where() const { return where_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  std::string where_;
  int line_;
  int column_;
};

inline const std::vector<std::string> kTaskOrder = {"euler_lagrange", "helmholtz", "symmetry",
                                                    "noether",        "nbh",       "on_shell"};

struct ProblemSpec {
  ContextPtr context;
  std::optional<DiffForm> lagrangian;
  std::optional<DiffForm> source_form;
  std::vector<ProjectableField> fields;
  std::optional<DiffForm> mu;
  std::vector<Section> sections;
  /// Requested tasks in dependency order, without duplicates.
  std::vector<std::string> tasks;
};

/// Highest jet order accepted (VARSEQ_MAX_ORDER, default 6).
int max_order_from_env();

/// Parses and validates a problem document. `task_override`, when given,
/// replaces the file's task list.
ProblemSpec load_problem(const std::string& text, int max_order,
                         const std::optional<std::vector<std::string>>& task_override = std::nullopt);

/// Canonical echo of a problem; loading it again yields the same problem.
nlohmann::json echo_problem(const ProblemSpec& problem);

}  // namespace varseq::cli
