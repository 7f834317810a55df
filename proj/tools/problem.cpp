#include "problem.hpp"

#include <algorithm>
#include <cstdlib>
#include <regex>
#include <set>

#include "varseq/errors.hpp"
#include "varseq/text.hpp"

namespace varseq::cli {

namespace {

using nlohmann::json;

std::pair<int, int> line_column(const std::string& text, std::size_t offset) {
  int line = 1;
  int column = 1;
  for (std::size_t i = 0; i < std::min(offset, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

const json& require(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw InputError(std::string("missing key '") + key + "'", where);
  return *it;
}

int require_int(const json& obj, const char* key, const std::string& where) {
  const json& v = require(obj, key, where);
  if (!v.is_number_integer()) throw InputError(std::string("'") + key + "' must be an integer", where);
  return v.get<int>();
}

const std::string& require_string(const json& v, const std::string& where) {
  if (!v.is_string()) throw InputError("expected a string", where);
  return v.get_ref<const std::string&>();
}

std::vector<std::string> string_list(const json& v, const std::string& where) {
  if (!v.is_array()) throw InputError("expected an array of strings", where);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(require_string(v[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

template <class F>
auto with_location(const std::string& where, F&& fn) {
  try {
    return fn();
  } catch (const ParseError& e) {
    throw InputError(e.what(), where, e.line(), e.column());
  } catch (const DomainError& e) {
    throw InputError(e.what(), where);
  }
}

Expr expr_at(const std::string& text, const JetContext& ctx, const std::string& where) {
  return with_location(where, [&] { return parse_expr(text, ctx); });
}

DiffForm form_at(const std::string& text, const ContextPtr& ctx, const std::string& where) {
  return with_location(where, [&] { return parse_form(text, ctx); });
}

ContextPtr load_context(const json& doc, int max_order) {
  const json& c = require(doc, "context", "");
  if (!c.is_object()) throw InputError("'context' must be an object", "context");
  const int n = require_int(c, "n", "context");
  const int m = require_int(c, "m", "context");
  const int r = require_int(c, "r", "context");
  if (n < 1 || m < 1 || r < 0) throw InputError("context requires n >= 1, m >= 1, r >= 0", "context");
  if (r > max_order) {
    throw InputError("jet order r = " + std::to_string(r) + " exceeds VARSEQ_MAX_ORDER = " + std::to_string(max_order),
                     "context.r");
  }
  if (n > kMaxBaseDim) throw InputError("base dimension above " + std::to_string(kMaxBaseDim) + " is not supported", "context.n");
  auto defaults = JetContext::make(n, m, r);
  std::vector<std::string> base = defaults->base_names();
  std::vector<std::string> fiber = defaults->fiber_names();
  if (c.contains("base")) base = string_list(c["base"], "context.base");
  if (c.contains("fiber")) fiber = string_list(c["fiber"], "context.fiber");
  if (static_cast<int>(base.size()) != n) {
    throw InputError("expected " + std::to_string(n) + " base names, got " + std::to_string(base.size()), "context.base");
  }
  if (static_cast<int>(fiber.size()) != m) {
    throw InputError("expected " + std::to_string(m) + " fiber names, got " + std::to_string(fiber.size()), "context.fiber");
  }
  static const std::regex identifier("[A-Za-z_][A-Za-z0-9_]*");
  static const std::regex reserved("dx[0-9]+|w[0-9]+|dU[0-9]+");
  auto check_names = [&](const std::vector<std::string>& list, const char* where) {
    for (const auto& name : list) {
      // d<base name> denotes a horizontal differential.
      const bool shadows = name.size() > 1 && name[0] == 'd' && std::count(base.begin(), base.end(), name.substr(1));
      if (!std::regex_match(name, identifier) || std::regex_match(name, reserved) || shadows) {
        throw InputError("invalid or reserved coordinate name '" + name + "'", where);
      }
    }
  };
  check_names(base, "context.base");
  check_names(fiber, "context.fiber");
  return with_location("context", [&] { return JetContext::make(n, m, r, base, fiber); });
}

std::vector<std::string> normalize_tasks(const std::vector<std::string>& requested, const std::string& where) {
  if (requested.empty()) throw InputError("no tasks requested", where);
  std::set<std::string> wanted;
  for (const auto& t : requested) {
    if (std::find(kTaskOrder.begin(), kTaskOrder.end(), t) == kTaskOrder.end()) {
      throw InputError("unknown task '" + t + "'", where);
    }
    wanted.insert(t);
  }
  std::vector<std::string> out;
  for (const auto& t : kTaskOrder) {
    if (wanted.count(t)) out.push_back(t);
  }
  return out;
}

void check_consistency(const ProblemSpec& p) {
  auto needs = [&](const std::string& task, bool ok, const char* what) {
    if (std::find(p.tasks.begin(), p.tasks.end(), task) != p.tasks.end() && !ok) {
      throw InputError("task '" + task + "' requires " + what, "tasks");
    }
  };
  const bool has_fields = !p.fields.empty();
  needs("euler_lagrange", p.lagrangian.has_value(), "a lagrangian");
  needs("helmholtz", p.lagrangian || p.source_form, "a lagrangian or a source_form");
  needs("symmetry", (p.lagrangian || p.source_form) && has_fields, "vector_fields and a lagrangian or source_form");
  needs("noether", p.lagrangian && has_fields, "a lagrangian and vector_fields");
  needs("nbh", p.lagrangian && has_fields, "a lagrangian and vector_fields");
  needs("on_shell", p.lagrangian.has_value(), "a lagrangian");
}

}  // namespace

int max_order_from_env() {
  const char* raw = std::getenv("VARSEQ_MAX_ORDER");
  if (raw == nullptr || *raw == '\0') return 6;
  char* end = nullptr;
  const long v = std::strtol(raw, &end, 10);
  if (*end != '\0' || v < 0 || v > 64) throw InputError(std::string("invalid VARSEQ_MAX_ORDER '") + raw + "'", "environment");
  return static_cast<int>(v);
}

ProblemSpec load_problem(const std::string& text, int max_order,
                         const std::optional<std::vector<std::string>>& task_override) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    auto [line, column] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
    std::string what = e.what();
    if (auto pos = what.find("syntax error"); pos != std::string::npos) what = what.substr(pos);
    throw InputError("invalid JSON: " + what, "", line, column);
  }
  if (!doc.is_object()) throw InputError("problem must be a JSON object");
  static const std::set<std::string> known = {"context", "lagrangian", "source_form", "vector_fields", "mu", "sections", "tasks"};
  for (const auto& [key, value] : doc.items()) {
    if (!known.count(key)) throw InputError("unknown key '" + key + "'");
  }

  ProblemSpec p;
  p.context = load_context(doc, max_order);
  const ContextPtr& ctx = p.context;
  const int n = ctx->n();
  const int m = ctx->m();

  if (doc.contains("lagrangian")) {
    DiffForm L = form_at(require_string(doc["lagrangian"], "lagrangian"), ctx, "lagrangian");
    if (L.degree() != n || L.max_contact_degree() > 0 || L.has_top_covectors()) {
      throw InputError("lagrangian must be a horizontal form of degree n = " + std::to_string(n), "lagrangian");
    }
    p.lagrangian = L;
  }
  if (doc.contains("source_form")) {
    DiffForm eta = form_at(require_string(doc["source_form"], "source_form"), ctx, "source_form");
    if (eta.degree() != n + 1) throw InputError("source_form must have degree n+1 = " + std::to_string(n + 1), "source_form");
    p.source_form = eta;
  }
  if (!p.lagrangian && !p.source_form) throw InputError("one of 'lagrangian' or 'source_form' is required");

  if (doc.contains("vector_fields")) {
    const json& fields = doc["vector_fields"];
    if (!fields.is_array()) throw InputError("'vector_fields' must be an array", "vector_fields");
    for (std::size_t k = 0; k < fields.size(); ++k) {
      const std::string where = "vector_fields[" + std::to_string(k) + "]";
      if (!fields[k].is_object()) throw InputError("a vector field must be an object", where);
      for (const auto& [key, value] : fields[k].items()) {
        if (key != "xi" && key != "Xi") throw InputError("unknown key '" + key + "'", where);
      }
      const auto xi_text = string_list(require(fields[k], "xi", where), where + ".xi");
      const auto Xi_text = string_list(require(fields[k], "Xi", where), where + ".Xi");
      if (static_cast<int>(xi_text.size()) != n) {
        throw InputError("xi needs " + std::to_string(n) + " components, got " + std::to_string(xi_text.size()), where + ".xi");
      }
      if (static_cast<int>(Xi_text.size()) != m) {
        throw InputError("Xi needs " + std::to_string(m) + " components, got " + std::to_string(Xi_text.size()), where + ".Xi");
      }
      std::vector<Expr> xi;
      std::vector<Expr> Xi;
      for (std::size_t i = 0; i < xi_text.size(); ++i) {
        xi.push_back(expr_at(xi_text[i], *ctx, where + ".xi[" + std::to_string(i) + "]"));
      }
      for (std::size_t a = 0; a < Xi_text.size(); ++a) {
        Xi.push_back(expr_at(Xi_text[a], *ctx, where + ".Xi[" + std::to_string(a) + "]"));
      }
      p.fields.push_back(with_location(where, [&] { return ProjectableField(ctx, xi, Xi); }));
    }
  }
  if (doc.contains("mu")) {
    DiffForm mu = form_at(require_string(doc["mu"], "mu"), ctx, "mu");
    if (mu.degree() != n - 1) throw InputError("mu must have degree n-1 = " + std::to_string(n - 1), "mu");
    p.mu = mu;
  }
  if (doc.contains("sections")) {
    const json& sections = doc["sections"];
    if (!sections.is_array()) throw InputError("'sections' must be an array", "sections");
    for (std::size_t k = 0; k < sections.size(); ++k) {
      const std::string where = "sections[" + std::to_string(k) + "]";
      const auto components = string_list(sections[k], where);
      if (static_cast<int>(components.size()) != m) {
        throw InputError("a section needs " + std::to_string(m) + " components, got " + std::to_string(components.size()), where);
      }
      std::vector<Expr> phi;
      for (std::size_t a = 0; a < components.size(); ++a) {
        Expr e = expr_at(components[a], *ctx, where + "[" + std::to_string(a) + "]");
        if (e.has_fiber_variables()) throw InputError("section components may depend on base variables only", where);
        phi.push_back(e);
      }
      p.sections.emplace_back(phi);
    }
  }
  if (task_override) {
    p.tasks = normalize_tasks(*task_override, "--tasks");
  } else {
    p.tasks = normalize_tasks(string_list(require(doc, "tasks", ""), "tasks"), "tasks");
  }
  check_consistency(p);
  return p;
}

nlohmann::json echo_problem(const ProblemSpec& p) {
  const JetContext& ctx = *p.context;
  json out;
  out["context"] = {{"n", ctx.n()}, {"m", ctx.m()}, {"r", ctx.r()}, {"base", ctx.base_names()}, {"fiber", ctx.fiber_names()}};
  if (p.lagrangian) out["lagrangian"] = to_text(*p.lagrangian, true);
  if (p.source_form) out["source_form"] = to_text(*p.source_form, true);
  if (!p.fields.empty()) {
    out["vector_fields"] = json::array();
    for (const ProjectableField& f : p.fields) {
      json xi = json::array();
      json Xi = json::array();
      for (const Expr& e : f.xi()) xi.push_back(to_text(e, ctx));
      for (const Expr& e : f.Xi()) Xi.push_back(to_text(e, ctx));
      out["vector_fields"].push_back({{"xi", xi}, {"Xi", Xi}});
    }
  }
  if (p.mu) out["mu"] = to_text(*p.mu, true);
  if (!p.sections.empty()) {
    out["sections"] = json::array();
    for (const Section& s : p.sections) {
      json c = json::array();
      for (const Expr& e : s.components()) c.push_back(to_text(e, ctx));
      out["sections"].push_back(c);
    }
  }
  out["tasks"] = p.tasks;
  return out;
}

}  // namespace varseq::cli
