#include <gtest/gtest.h>

#include <cstdlib>

#include "runner.hpp"

using namespace varseq::cli;
using nlohmann::json;

namespace {

const char* kOscillator = R"({
  "context": {"n": 1, "m": 1, "r": 1, "base": ["t"], "fiber": ["u"]},
  "lagrangian": "(1/2)*(u[1]^2 - u^2) dt",
  "vector_fields": [{"xi": ["1"], "Xi": ["0"]}],
  "tasks": ["noether", "euler_lagrange"]
})";

struct EnvGuard {
  explicit EnvGuard(const char* value) {
    if (value) {
      setenv("VARSEQ_MAX_ORDER", value, 1);
    } else {
      unsetenv("VARSEQ_MAX_ORDER");
    }
  }
  ~EnvGuard() { unsetenv("VARSEQ_MAX_ORDER"); }
};

}  // namespace

TEST(Cli, OscillatorReport) {
  EnvGuard env(nullptr);
  RunResult r = run_problem(kOscillator, {});
  ASSERT_EQ(r.exit_code, kOk) << r.summary;
  const json& results = r.report["results"];
  EXPECT_EQ(results["euler_lagrange"]["coefficients"], json::array({"-u - u[1,1]"}));
  EXPECT_EQ(results["noether"]["fields"][0]["current"], "(-1/2*u^2 - 1/2*u[1]^2)");
  EXPECT_EQ(results["noether"]["fields"][0]["conservation"]["status"], "vanishes");
  EXPECT_EQ(r.report["input"]["tasks"], json::array({"euler_lagrange", "noether"}));
  EXPECT_EQ(r.report["status"], "ok");
}

TEST(Cli, NegativeHelmholtzVerdictIsNotAFailure) {
  RunResult r = run_problem(R"({"context": {"n": 1, "m": 1, "r": 1},
    "source_form": "u[1] w1[]^dx1", "tasks": ["helmholtz"]})", {});
  EXPECT_EQ(r.exit_code, kOk);
  EXPECT_EQ(r.report["results"]["helmholtz"]["verdict"], "not locally variational");
}

TEST(Cli, InputErrors) {
  EnvGuard env(nullptr);
  auto code = [](const std::string& text, RunOptions o = {}) { return run_problem(text, o).exit_code; };
  EXPECT_EQ(code(R"({"context": {"n": 1, "m": 1, "r": 1}, "lagrangian": "u dx1", "tasks": []})"), kInputError);
  EXPECT_EQ(code(R"({"context": {"n": 1, "m": 1, "r": 1}, "lagrangian": "u dx1", "tasks": ["fly"]})"), kInputError);
  EXPECT_EQ(code(R"({"context": {"n": 1, "m": 1, "r": 1}, "tasks": ["euler_lagrange"]})"), kInputError);
  EXPECT_EQ(code(R"({"context": {"n": 1, "m": 1, "r": 1}, "lagrangian": "u dx1", "tasks": ["noether"]})"), kInputError);
  EXPECT_EQ(code(R"({"context": {"n": 1, "m": 1, "r": 1}, "lagrangian": "u w1[]", "tasks": ["euler_lagrange"]})"),
            kInputError);
  EXPECT_EQ(code(R"({"context": {"n": 1, "m": 2, "r": 1, "fiber": ["u"]}, "lagrangian": "u dx1",
    "tasks": ["euler_lagrange"]})"),
            kInputError);
  EXPECT_EQ(code(R"({"context": {"n": 1, "m": 1, "r": 1}, "lagrangian": "u dx1", "tasks": ["euler_lagrange"],
    "extra": 1})"),
            kInputError);
  RunOptions bad_override;
  bad_override.tasks = std::vector<std::string>{"nope"};
  EXPECT_EQ(code(kOscillator, bad_override), kInputError);
}

TEST(Cli, ReportsJsonLocation) {
  RunResult r = run_problem("{\n  \"context\": {\"n\": 1,,}\n}", {});
  ASSERT_EQ(r.exit_code, kInputError);
  EXPECT_EQ(r.report["error"]["line"], 2);
  EXPECT_EQ(r.report["error"]["column"], 22);
  RunResult e = run_problem(R"({"context": {"n": 1, "m": 1, "r": 1}, "lagrangian": "u[1]^2 + + dx1",
    "tasks": ["euler_lagrange"]})", {});
  ASSERT_EQ(e.exit_code, kInputError);
  EXPECT_EQ(e.report["error"]["where"], "lagrangian");
  EXPECT_EQ(e.report["error"]["column"], 8);  // the "+" joining a function and a 1-form
}

TEST(Cli, MaxOrderFromEnvironment) {
  const char* problem = R"({"context": {"n": 1, "m": 1, "r": 3}, "lagrangian": "u[1,1,1]^2 dx1",
    "tasks": ["euler_lagrange"]})";
  {
    EnvGuard env("2");
    EXPECT_EQ(run_problem(problem, {}).exit_code, kInputError);
  }
  {
    EnvGuard env(nullptr);
    EXPECT_EQ(run_problem(problem, {}).exit_code, kOk);
  }
  {
    EnvGuard env("banana");
    EXPECT_EQ(run_problem(problem, {}).exit_code, kInputError);
  }
}

TEST(Cli, NonSymmetryFailsVerification) {
  RunResult r = run_problem(R"({"context": {"n": 1, "m": 1, "r": 1},
    "lagrangian": "(1/2)*(u[1]^2 - u^2) dx1",
    "vector_fields": [{"xi": ["0"], "Xi": ["u"]}], "tasks": ["nbh"]})", {});
  EXPECT_EQ(r.exit_code, kVerificationFailed);
  EXPECT_EQ(r.report["results"]["nbh"]["fields"][0]["verified"], false);
}

TEST(Cli, OptionsOverrideTasksAndCap) {
  RunOptions o;
  o.tasks = std::vector<std::string>{"euler_lagrange"};
  o.on_shell_cap = 7;
  o.seed = 11;
  RunResult r = run_problem(kOscillator, o);
  ASSERT_EQ(r.exit_code, kOk);
  EXPECT_FALSE(r.report["results"].contains("noether"));
  EXPECT_EQ(r.report["options"]["on_shell_cap"], 7);
  EXPECT_EQ(r.report["options"]["seed"], 11);
}

TEST(Cli, EchoedInputReproducesResults) {
  RunResult first = run_problem(kOscillator, {});
  RunResult second = run_problem(first.report["input"].dump(), {});
  EXPECT_EQ(first.report["results"], second.report["results"]);
  EXPECT_EQ(first.report["input"], second.report["input"]);
}
