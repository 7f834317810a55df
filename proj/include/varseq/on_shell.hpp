#pragma once

#include <string>
#include <vector>

#include "varseq/forms.hpp"

namespace varseq {

enum class OnShellStatus {
  Vanishes,      // reduces to zero: the expression lies in the differential ideal
  NormalForm,    // reduction terminated with a nonzero normal form
  Inconclusive,  // derivative cap exceeded or generators not in solved form
};

struct OnShellMultiplier {
  int generator = 1;  // index into the generator list (1-based)
  MultiIndex J;
  Expr factor;
};

/// e - sum factor * D_J(E_generator) = reduced, checked exactly.
struct OnShellResult {
  OnShellStatus status = OnShellStatus::Inconclusive;
  Expr reduced;
  std::vector<OnShellMultiplier> certificate;
  std::string note;
};

/// Default derivative cap for order-r problems.
inline int default_on_shell_cap(int r) { return 2 * r + 2; }

/// Reduces e modulo the differential ideal generated by the expressions E
/// and their total derivatives D_J E with |J| <= cap. Each generator must be
/// linear in its leading derivative (orderly ranking) with a nonzero constant
/// coefficient; otherwise the result is Inconclusive.
OnShellResult on_shell_reduce(const Expr& e, const std::vector<Expr>& generators, int cap);

/// Coefficient-wise reduction of a horizontal form.
std::vector<OnShellResult> on_shell_reduce(const DiffForm& rho, const std::vector<Expr>& generators,
                                           int cap);
OnShellStatus combined_status(const std::vector<OnShellResult>& results);

const char* to_string(OnShellStatus status);

}  // namespace varseq
