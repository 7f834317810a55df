#include "runner.hpp"

#include <chrono>
#include <fstream>
#include <random>
#include <sstream>

#include "problem.hpp"
#include "varseq/errors.hpp"
#include "varseq/text.hpp"
#include "varseq/variational.hpp"

namespace varseq::cli {

namespace {

using nlohmann::json;

constexpr const char* kVersion = "1.0.0";
constexpr int kSamplesPerSection = 5;

json reduction_json(const OnShellResult& r, const JetContext& ctx) {
  json cert = json::array();
  for (const OnShellMultiplier& m : r.certificate) {
    cert.push_back({{"generator", m.generator}, {"derivative", m.J.entries()}, {"factor", to_text(m.factor, ctx)}});
  }
  json out = {{"status", to_string(r.status)}, {"reduced", to_text(r.reduced, ctx)}, {"certificate", cert}};
  if (!r.note.empty()) out["note"] = r.note;
  return out;
}

json form_reduction_json(const DiffForm& rho, const std::vector<OnShellResult>& results) {
  json terms = json::array();
  std::size_t k = 0;
  for (const auto& [w, c] : rho.terms()) {
    std::string basis;
    for (const Covector& cov : w) basis += (basis.empty() ? "" : "^") + to_text(cov);
    json t = reduction_json(results[k++], *rho.context());
    t["basis"] = basis.empty() ? "1" : basis;
    t["coefficient"] = to_text(c, *rho.context());
    terms.push_back(t);
  }
  return {{"status", to_string(combined_status(results))}, {"terms", terms}};
}

std::string field_text(const ProjectableField& f) {
  const JetContext& ctx = *f.context();
  std::string out = "xi = [";
  for (std::size_t i = 0; i < f.xi().size(); ++i) out += (i ? ", " : "") + to_text(f.xi()[i], ctx);
  out += "], Xi = [";
  for (std::size_t a = 0; a < f.Xi().size(); ++a) out += (a ? ", " : "") + to_text(f.Xi()[a], ctx);
  return out + "]";
}

class Session {
 public:
  Session(const ProblemSpec& problem, const RunOptions& options)
      : p_(problem),
        ctx_(*problem.context),
        cap_(options.on_shell_cap.value_or(default_on_shell_cap(problem.context->r()))),
        rng_(options.seed) {
    if (p_.lagrangian) lambda_ = represent(*p_.lagrangian);
  }

  json run(std::ostringstream& summary) {
    json results = json::object();
    json timing = json::object();
    for (const std::string& task : p_.tasks) {
      const auto start = std::chrono::steady_clock::now();
      json r = dispatch(task);
      const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      timing[task] = ms;
      summary << "  " << task << ": " << r.value("summary", std::string()) << "\n";
      results[task] = std::move(r);
    }
    timing_ = timing;
    return results;
  }

  bool verified() const { return verified_; }
  int cap() const { return cap_; }
  const json& warnings() const { return warnings_; }
  const json& timing() const { return timing_; }

 private:
  json dispatch(const std::string& task) {
    if (task == "euler_lagrange") return euler_lagrange_task();
    if (task == "helmholtz") return helmholtz_task();
    if (task == "symmetry") return symmetry_task();
    if (task == "noether") return noether_task();
    if (task == "nbh") return nbh_task();
    return on_shell_task();
  }

  void check(bool ok) { verified_ = verified_ && ok; }
  void warn(const std::string& w) {
    for (const auto& existing : warnings_) {
      if (existing == w) return;
    }
    warnings_.push_back(w);
  }

  const VariationalClass& el() {
    if (!el_) el_ = euler_lagrange(*lambda_);
    return *el_;
  }
  const std::vector<Expr>& generators() {
    if (!generators_) generators_ = source_coefficients(el());
    return *generators_;
  }
  json text_list(const std::vector<Expr>& es) const {
    json out = json::array();
    for (const Expr& e : es) out.push_back(to_text(e, ctx_));
    return out;
  }

  json euler_lagrange_task() {
    const VariationalClass& E = el();
    const VariationalClass H = helmholtz(E);
    const bool ok = H.is_zero();
    check(ok);
    json r = {{"coefficients", text_list(generators())},
              {"source_form", to_text(E.representative)},
              {"momentum", to_text(momentum(*lambda_))},
              {"helmholtz_residual", to_text(H.representative)},
              {"verified", ok}};
    warn("momenta and currents are canonical representatives, defined up to d_H-closed terms");
    std::string s = "E = [";
    for (std::size_t a = 0; a < generators().size(); ++a) s += (a ? ", " : "") + to_text(generators()[a], ctx_);
    r["summary"] = s + "]";
    return r;
  }

  json helmholtz_task() {
    const bool from_source = p_.source_form.has_value();
    const VariationalClass eta = from_source ? represent(*p_.source_form) : el();
    const VariationalClass H = helmholtz(eta);
    const bool variational = H.is_zero();
    // A source built from a Lagrangian must pass.
    const bool ok = from_source || variational;
    check(ok);
    const std::string verdict = variational ? "locally variational" : "not locally variational";
    return {{"input", from_source ? "source_form" : "euler_lagrange"},
            {"source_coefficients", text_list(source_coefficients(eta))},
            {"locally_variational", variational},
            {"verdict", verdict},
            {"helmholtz_class", to_text(H.representative)},
            {"verified", ok},
            {"summary", verdict}};
  }

  json symmetry_task() {
    json fields = json::array();
    int symmetric = 0;
    const bool from_source = p_.source_form.has_value() || !lambda_;
    const VariationalClass eta = from_source ? represent(*p_.source_form) : el();
    const bool variational = helmholtz(eta).is_zero();
    if (!variational) warn("source form is not locally variational; symmetry verdicts refer to L_Xi eta = 0 only");
    for (std::size_t k = 0; k < p_.fields.size(); ++k) {
      const ProjectableField& f = p_.fields[k];
      json r = {{"field", k + 1}, {"vector_field", field_text(f)}};
      const VariationalClass lie_eta = lie_derivative_class(f, eta);
      const bool generalized = lie_eta.is_zero();
      r["lie_derivative_source"] = to_text(lie_eta.representative);
      r["generalized_symmetry"] = generalized;
      if (lambda_) {
        const VariationalClass lie = lie_derivative_class(f, *lambda_);
        r["lie_derivative_lagrangian"] = to_text(lie.representative);
        r["variational_symmetry"] = lie.is_zero();
        r["divergence_symmetry"] = euler_lagrange(lie).is_zero();
        r["naturality_residual"] = to_text(naturality_residual(f, *lambda_).representative);
      }
      r["verified"] = generalized;
      check(generalized);
      symmetric += generalized ? 1 : 0;
      fields.push_back(r);
    }
    return {{"fields", fields},
            {"summary", std::to_string(symmetric) + " of " + std::to_string(p_.fields.size()) +
                            " fields are generalized symmetries"}};
  }

  json noether_task() {
    json fields = json::array();
    for (std::size_t k = 0; k < p_.fields.size(); ++k) {
      const ProjectableField& f = p_.fields[k];
      const DiffForm eps = noether_current(*lambda_, f);
      const VariationalClass lie = lie_derivative_class(f, *lambda_);
      json r = {{"field", k + 1},
                {"vector_field", field_text(f)},
                {"current", to_text(eps)},
                {"noether_identity_residual", to_text(noether_residual(f, *lambda_).representative)},
                {"lie_derivative_lagrangian", to_text(lie.representative)},
                {"variational_symmetry", lie.is_zero()}};
      bool ok = true;
      if (lie.is_zero()) {
        const DiffForm div = horizontal_differential(eps);
        const auto reduced = on_shell_reduce(div, generators(), cap_);
        r["conservation"] = form_reduction_json(div, reduced);
        ok = combined_status(reduced) == OnShellStatus::Vanishes;
      } else {
        warn("field " + std::to_string(k + 1) + " is not a Lagrangian symmetry; its Noether current is not conserved (see nbh)");
      }
      r["verified"] = ok;
      check(ok);
      fields.push_back(r);
    }
    warn("momenta and currents are canonical representatives, defined up to d_H-closed terms");
    std::string s;
    for (const auto& f : fields) s += (s.empty() ? "eps = " : "; eps = ") + f["current"].get<std::string>();
    return {{"fields", fields}, {"summary", s}};
  }

  json mu_json(const MuAnalysis& a) {
    const bool vertical_ok = a.vertical_contraction_residual.is_zero();
    const bool momentum_ok = a.momentum_contraction_residual.is_zero();
    json r = {{"mu", to_text(a.mu)},
              {"lie_derivative_mu", to_text(a.lie_mu)},
              {"modified_lagrangian_invariant", a.modified_invariant},
              {"beta_minus_lie_mu_closed", a.beta_minus_lie_mu_closed},
              {"exact_branch", a.exact_branch},
              {"contraction_checks",
               {{"vertical_contraction", {{"residual", to_text(a.vertical_contraction_residual)}, {"holds", vertical_ok}}},
                {"momentum_contraction", {{"residual", to_text(a.momentum_contraction_residual)}, {"holds", momentum_ok}}}}},
              {"potential_status", a.potential_status}};
    if (a.potential) {
      r["potential"] = to_text(*a.potential);
      json checks = json::array();
      for (const OnShellResult& c : a.potential_check) checks.push_back(reduction_json(c, ctx_));
      r["potential_check"] = {{"status", to_string(combined_status(a.potential_check))}, {"terms", checks}};
    }
    const bool applicable = a.exact_branch && ctx_.n() >= 2;
    const bool ok = !applicable || a.potential_status == "verified on-shell";
    r["verified"] = ok;
    check(ok);
    return r;
  }

  json nbh_task() {
    json fields = json::array();
    int conserved = 0;
    for (std::size_t k = 0; k < p_.fields.size(); ++k) {
      const ProjectableField& f = p_.fields[k];
      json r = {{"field", k + 1}, {"vector_field", field_text(f)}};
      try {
        const NBHReport report = nbh_analysis(*lambda_, f, p_.mu, cap_);
        const DiffForm bh = lie_derivative_class(f, *lambda_).representative - horizontal_differential(report.beta);
        const DiffForm div = horizontal_differential(report.current);
        const bool ok = combined_status(report.conservation) == OnShellStatus::Vanishes;
        r["lie_derivative_lagrangian"] = to_text(report.lie_derivative);
        r["epsilon"] = to_text(report.epsilon);
        r["beta"] = to_text(report.beta);
        r["bessel_hagen_residual"] = to_text(represent(bh).representative);
        r["current"] = to_text(report.current);
        r["conservation"] = form_reduction_json(div, report.conservation);
        r["verified"] = ok;
        check(ok);
        conserved += ok ? 1 : 0;
        if (report.mu) r["mu_analysis"] = mu_json(*report.mu);
      } catch (const PreconditionError& e) {
        r["error"] = e.what();
        r["verified"] = false;
        check(false);
      }
      fields.push_back(r);
    }
    warn("momenta and currents are canonical representatives, defined up to d_H-closed terms");
    return {{"fields", fields},
            {"summary", std::to_string(conserved) + " of " + std::to_string(p_.fields.size()) +
                            " NBH currents conserved on-shell"}};
  }

  json on_shell_task() {
    json currents = json::array();
    std::vector<std::pair<std::size_t, DiffForm>> divergences;
    for (std::size_t k = 0; k < p_.fields.size(); ++k) {
      const ProjectableField& f = p_.fields[k];
      json r = {{"field", k + 1}};
      if (!lie_derivative_class(f, el()).is_zero()) {
        r["skipped"] = "not a generalized symmetry of the Euler-Lagrange form";
        currents.push_back(r);
        continue;
      }
      const DiffForm current = noether_current(*lambda_, f) - bessel_hagen_boundary(*lambda_, f);
      const DiffForm div = horizontal_differential(current);
      const auto reduced = on_shell_reduce(div, generators(), cap_);
      r["current"] = to_text(current);
      r["divergence"] = form_reduction_json(div, reduced);
      const bool ok = combined_status(reduced) == OnShellStatus::Vanishes;
      r["verified"] = ok;
      check(ok);
      currents.push_back(r);
      divergences.emplace_back(k + 1, div);
    }

    json sections = json::array();
    std::uniform_real_distribution<double> coordinate(-1.0, 1.0);
    for (std::size_t s = 0; s < p_.sections.size(); ++s) {
      const Section& phi = p_.sections[s];
      std::vector<Expr> on_section;
      bool critical = true;
      for (const Expr& E : generators()) {
        on_section.push_back(evaluate_on_section(E, phi));
        critical = critical && on_section.back().is_zero();
      }
      json r = {{"section", s + 1}, {"critical", critical}, {"euler_lagrange", text_list(on_section)}};
      json divs = json::array();
      std::vector<Expr> div_values;
      bool ok = true;
      for (const auto& [field, div] : divergences) {
        const Expr value = evaluate_on_section(density(div), phi);
        div_values.push_back(value);
        divs.push_back({{"field", field}, {"value", to_text(value, ctx_)}});
        if (critical) ok = ok && value.is_zero();
      }
      r["current_divergence"] = divs;
      json samples = json::array();
      for (int t = 0; t < kSamplesPerSection; ++t) {
        std::vector<double> point;
        for (int i = 0; i < ctx_.n(); ++i) point.push_back(coordinate(rng_));
        auto at = [&](const JetVariable& v) { return point[static_cast<std::size_t>(v.index) - 1]; };
        json el_values = json::array();
        for (const Expr& e : on_section) el_values.push_back(e.evaluate(at));
        json div_numeric = json::array();
        for (const Expr& e : div_values) div_numeric.push_back(e.evaluate(at));
        samples.push_back({{"point", point}, {"euler_lagrange", el_values}, {"current_divergence", div_numeric}});
      }
      r["samples"] = samples;
      r["verified"] = ok;
      check(ok);
      sections.push_back(r);
    }
    int vanishing = 0;
    for (const auto& c : currents) vanishing += c.value("verified", false) ? 1 : 0;
    return {{"cap", cap_},
            {"generators", text_list(generators())},
            {"currents", currents},
            {"sections", sections},
            {"summary", std::to_string(vanishing) + " current divergences vanish modulo the Euler-Lagrange ideal"}};
  }

  const ProblemSpec& p_;
  const JetContext& ctx_;
  int cap_;
  std::mt19937 rng_;
  std::optional<VariationalClass> lambda_;
  std::optional<VariationalClass> el_;
  std::optional<std::vector<Expr>> generators_;
  bool verified_ = true;
  json warnings_ = json::array();
  json timing_ = json::object();
};

json base_report(const RunOptions& options, int max_order) {
  return {{"tool", "varseq"},
          {"version", kVersion},
          {"options",
           {{"seed", options.seed},
            {"max_order", max_order},
            {"on_shell_cap", options.on_shell_cap ? json(*options.on_shell_cap) : json(nullptr)}}}};
}

RunResult input_error(json report, const InputError& e) {
  json err = {{"message", e.what()}};
  if (!e.where().empty()) err["where"] = e.where();
  if (e.line() > 0) {
    err["line"] = e.line();
    err["column"] = e.column();
  }
  report["status"] = "input_error";
  report["exit_code"] = kInputError;
  report["error"] = err;
  std::string summary = "input error";
  if (!e.where().empty()) summary += " in " + e.where();
  summary += ": " + std::string(e.what());
  if (e.line() > 0 && std::string(e.what()).find("line") == std::string::npos) {
    summary += " (line " + std::to_string(e.line()) + ", column " + std::to_string(e.column()) + ")";
  }
  return {report, summary + "\n", kInputError};
}

}  // namespace

RunResult run_problem(const std::string& text, const RunOptions& options) {
  int max_order = 6;
  json report = base_report(options, max_order);
  try {
    max_order = max_order_from_env();
    report = base_report(options, max_order);
    if (options.on_shell_cap && *options.on_shell_cap < 0) throw InputError("--onshell-cap must be nonnegative", "--onshell-cap");
    const ProblemSpec problem = load_problem(text, max_order, options.tasks);
    report["input"] = echo_problem(problem);

    Session session(problem, options);
    std::ostringstream summary;
    summary << "varseq: n=" << problem.context->n() << " m=" << problem.context->m() << " r=" << problem.context->r()
            << ", tasks: ";
    for (std::size_t k = 0; k < problem.tasks.size(); ++k) summary << (k ? "," : "") << problem.tasks[k];
    summary << "\n";
    json results;
    int code = kOk;
    try {
      results = session.run(summary);
      code = session.verified() ? kOk : kVerificationFailed;
    } catch (const InternalError& e) {
      report["error"] = {{"message", std::string("internal identity check failed: ") + e.what()}};
      summary << "  internal identity check failed: " << e.what() << "\n";
      code = kVerificationFailed;
    } catch (const PreconditionError& e) {
      report["error"] = {{"message", e.what()}};
      summary << "  precondition failed: " << e.what() << "\n";
      code = kVerificationFailed;
    } catch (const DomainError& e) {
      throw InputError(e.what());
    }
    report["options"]["on_shell_cap"] = session.cap();
    report["results"] = results;
    report["warnings"] = session.warnings();
    report["timing_ms"] = session.timing();
    report["status"] = code == kOk ? "ok" : "verification_failed";
    report["exit_code"] = code;
    summary << (code == kOk ? "all verifications passed" : "verification FAILED") << "\n";
    return {report, summary.str(), code};
  } catch (const InputError& e) {
    report.erase("input");
    return input_error(report, e);
  }
}

RunResult run_file(const std::string& path, const RunOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return input_error(base_report(options, 6), InputError("cannot read problem file '" + path + "'"));
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return run_problem(buffer.str(), options);
}

}  // namespace varseq::cli
