#include "varseq/on_shell.hpp"

#include <map>

#include "ranking.hpp"
#include "varseq/errors.hpp"

namespace varseq {

namespace {

struct Generator {
  JetVariable lead;
  Rational separant;  // constant coefficient of the leading variable
  Expr rest;
};

}  // namespace

const char* to_string(OnShellStatus status) {
  switch (status) {
    case OnShellStatus::Vanishes:
      return "vanishes";
    case OnShellStatus::NormalForm:
      return "normal_form";
    case OnShellStatus::Inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

OnShellResult on_shell_reduce(const Expr& e, const std::vector<Expr>& generators, int cap) {
  OnShellResult result;
  result.reduced = e;

  std::map<int, Generator> solved;
  for (std::size_t g = 0; g < generators.size(); ++g) {
    const Expr& E = generators[g];
    if (E.is_zero()) continue;
    auto lead = detail::leading_fiber_variable(E);
    Expr c = lead ? E.coefficient(*lead, 1) : Expr();
    if (!lead || E.degree_in(*lead) != 1 || !c.is_constant()) {
      result.note = "generator " + std::to_string(g + 1) + " is not linear in its leading derivative "
                    "with constant coefficient";
      return result;
    }
    solved.emplace(static_cast<int>(g) + 1, Generator{*lead, c.constant_value(), E.coefficient(*lead, 0)});
  }

  std::map<std::pair<int, MultiIndex>, Expr> multipliers;
  std::map<std::pair<int, MultiIndex>, Expr> derived_rest;
  Expr current = e;
  while (true) {
    // Highest-ranked variable that is a derivative of some leading variable.
    std::optional<JetVariable> target;
    int target_generator = 0;
    for (const JetVariable& v : current.variables()) {
      if (!v.is_fiber()) continue;
      if (target && !detail::rank_less(*target, v)) continue;
      for (const auto& [g, gen] : solved) {
        if (gen.lead.index == v.index && v.multi.contains(gen.lead.multi)) {
          target = v;
          target_generator = g;
          break;
        }
      }
    }
    if (!target) break;

    const Generator& gen = solved.at(target_generator);
    const MultiIndex J = target->multi.minus(gen.lead.multi);
    if (J.order() > cap) {
      result.reduced = current;
      result.note = "derivative cap " + std::to_string(cap) + " exceeded";
      return result;
    }
    auto key = std::make_pair(target_generator, J);
    auto it = derived_rest.find(key);
    if (it == derived_rest.end()) it = derived_rest.emplace(key, total_derivative(gen.rest, J)).first;
    const Rational inv = 1 / gen.separant;
    const Expr w = -(it->second * inv);
    const Expr v = Expr::variable(*target);

    // current = sum_k a_k v^k; v - w = D_J E / c.
    Expr multiplier;
    std::vector<Expr> w_powers{Expr(1)};
    const int degree = current.degree_in(*target);
    for (int k = 1; k <= degree; ++k) {
      w_powers.push_back(w_powers.back() * w);
      Expr a_k = current.coefficient(*target, k);
      if (a_k.is_zero()) continue;
      Expr geometric;
      for (int j = 0; j < k; ++j) geometric += v.pow(static_cast<unsigned>(k - 1 - j)) * w_powers[j];
      multiplier += a_k * geometric;
    }
    multipliers[key] += multiplier * inv;
    current = current.substitute(*target, w);
  }

  Expr check = e;
  for (const auto& [key, factor] : multipliers) {
    if (factor.is_zero()) continue;
    check -= factor * total_derivative(generators[key.first - 1], key.second);
    result.certificate.push_back({key.first, key.second, factor});
  }
  if (check != current) throw InternalError("on-shell certificate failed verification");
  result.reduced = current;
  result.status = current.is_zero() ? OnShellStatus::Vanishes : OnShellStatus::NormalForm;
  return result;
}

std::vector<OnShellResult> on_shell_reduce(const DiffForm& rho, const std::vector<Expr>& generators, int cap) {
  std::vector<OnShellResult> out;
  for (const auto& [w, c] : rho.terms()) out.push_back(on_shell_reduce(c, generators, cap));
  return out;
}

OnShellStatus combined_status(const std::vector<OnShellResult>& results) {
  OnShellStatus status = OnShellStatus::Vanishes;
  for (const OnShellResult& r : results) {
    if (r.status == OnShellStatus::Inconclusive) return OnShellStatus::Inconclusive;
    if (r.status == OnShellStatus::NormalForm) status = OnShellStatus::NormalForm;
  }
  return status;
}

}  // namespace varseq
