// Copyright 2026 The ModelHub Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "modelhub/lp/script.h"
#include "modelhub/lp/simplex.h"
#include "modelhub/lp/vertex_oracle.h"
#include "modelhub/parser/annotation_parser.h"
#include "support/test_data.h"

namespace modelhub::lp {
namespace {

using testing::read_file;
using testing::sample_path;

struct Parsed {
  std::string source;
  ModelManifest manifest;
};

Parsed parse_mhl(std::string source) {
  auto r = parse(source, ParserConfig("#"));
  EXPECT_FALSE(has_errors(r.diagnostics));
  return {std::move(source), std::move(r.manifest)};
}

ScriptTemplate load(const Parsed& p) { return parse_script(p.manifest, p.source); }

// Expects parse_script or instantiate to fail with a message containing
// `needle`, attributed to `component`.
void expect_script_error(const std::string& src, const std::string& component,
                         const std::string& needle,
                         const KernelInputs& inputs = {}) {
  auto p = parse_mhl(src);
  try {
    auto script = load(p);
    instantiate(script, inputs);
    FAIL() << "expected ScriptError containing '" << needle << "'";
  } catch (const ScriptError& err) {
    EXPECT_EQ(err.component(), component) << err.what();
    EXPECT_NE(std::string(err.what()).find(needle), std::string::npos)
        << err.what();
    EXPECT_GT(err.line(), 0u) << err.what();
  }
}

TEST(ParseScriptTest, VariableDeclarationAddsColumnsAndBounds) {
  auto p = parse_mhl("#@ Variable: x\nx = variable(2) >= 0\n");
  auto inst = instantiate(load(p), {});
  ASSERT_EQ(inst.problem.num_variables(), 2u);
  for (const auto& b : inst.problem.bounds) {
    EXPECT_EQ(b.lower, 0.0);
    EXPECT_FALSE(b.upper);
  }
  EXPECT_EQ(inst.problem.names, (std::vector<std::string>{"x[0]", "x[1]"}));
  EXPECT_EQ(inst.blocks.at("x").size, 2u);
}

TEST(ParseScriptTest, ConstraintTranslatesToRow) {
  auto p = parse_mhl(
      "#@ Helper Object: cap\ncap = 1\n"
      "#@ Variable: x\nx = variable(2)\n"
      "#@ Constraint: c\nx[0] + x[1] <= cap\n");
  auto inst = instantiate(load(p), {});
  ASSERT_EQ(inst.problem.num_rows(), 1u);
  const auto& row = inst.problem.rows[0];
  EXPECT_EQ(row.coefficients, (std::vector<double>{1.0, 1.0}));
  EXPECT_EQ(row.relation, Relation::kLessEqual);
  EXPECT_EQ(row.rhs, 1.0);
}

TEST(ParseScriptTest, NonlinearObjectiveNamesComponent) {
  expect_script_error(
      "#@ Variable: x\nx = variable(2)\n#@ Objective: o\nminimize x[0]*x[1]\n",
      "o", "nonlinear");
}

TEST(ParseScriptTest, NonlinearThroughHelper) {
  expect_script_error(
      "#@ Variable: x\nx = variable(2)\n"
      "#@ Helper Object: h\nh = 2 * x[0]\n"
      "#@ Constraint: c\nh * x[1] <= 1\n",
      "c", "nonlinear");
}

TEST(ParseScriptTest, UnknownIdentifier) {
  expect_script_error("#@ Variable: x\nx = variable()\n#@ Constraint: c\nx <= cap\n",
                      "c", "unknown identifier 'cap'");
}

TEST(ParseScriptTest, DimensionMismatch) {
  expect_script_error(
      "#@ Variable: x\nx = variable(3)\n#@ Constraint: c\nx <= [1, 2]\n", "c",
      "dimension mismatch");
}

TEST(ParseScriptTest, DimensionMismatchInHelper) {
  expect_script_error("#@ Helper Object: h\nh = [1, 2] + [1, 2, 3]\n", "h",
                      "dimension mismatch");
}

TEST(ParseScriptTest, StrictInequalityRejected) {
  expect_script_error("#@ Variable: x\nx = variable()\n#@ Constraint: c\nx < 1\n",
                      "c", "strict");
}

TEST(ParseScriptTest, SingleEqualsRejectedInConstraint) {
  expect_script_error("#@ Variable: x\nx = variable()\n#@ Constraint: c\nx = 1\n",
                      "c", "==");
}

TEST(ParseScriptTest, VariableMustDeclareComponentName) {
  expect_script_error("#@ Variable: x\ny = variable(2)\n", "x", "'x'");
}

TEST(ParseScriptTest, OutputNotUsableBeforeSolve) {
  expect_script_error(
      "#@ Variable: x\nx = variable()\n#@ Output Object: t\nt = 2 * x\n"
      "#@ Constraint: c\nx <= t\n",
      "c", "output");
}

TEST(ParseScriptTest, ReservedAndDuplicateNames) {
  expect_script_error("#@ Helper Object: sum\nsum = 1\n", "sum", "reserved");
  expect_script_error("#@ Helper Object: h\nh = 1\ng = 2\n#@ Helper Object: g\ng = 3\n",
                      "g", "more than once");
}

TEST(ParseScriptTest, CyclicHelpers) {
  expect_script_error("#@ Helper Object: a\na = b + 1\n#@ Helper Object: b\nb = 2 * a\n",
                      "a", "cyclic");
}

TEST(ParseScriptTest, SyntaxErrorsCarryLine) {
  auto p = parse_mhl("#@ Variable: x\nx = variable()\n\n#@ Constraint: c\n\nx + <= 1\n");
  try {
    load(p);
    FAIL();
  } catch (const ScriptError& err) {
    EXPECT_EQ(err.component(), "c");
    EXPECT_EQ(err.line(), 6u);
  }
}

TEST(ParseScriptTest, CommentsAndContinuation) {
  auto p = parse_mhl(
      "#@ Variable: x\nx = variable(3)  # three columns\n"
      "#@ Constraint: c\n# a full-line comment\nx <= [1,\n      2,\n      3]\n");
  auto inst = instantiate(load(p), {});
  ASSERT_EQ(inst.problem.num_rows(), 3u);
  EXPECT_EQ(inst.problem.rows[2].rhs, 3.0);
  EXPECT_EQ(inst.problem.rows[2].coefficients, (std::vector<double>{0, 0, 1}));
}

TEST(ParseScriptTest, UnknownSolverParameterWarns) {
  auto p = parse_mhl(
      "#@ Variable: x\nx = variable() >= 0\n#@ Objective: o\nminimize x\n"
      "#@ Problem: p\np = problem(o)\n#@ Solver: s\nmaxiter = 50\nmu = 3\n"
      "#@ Execution: e\ne = solve(p, s)\n");
  auto script = load(p);
  ASSERT_EQ(script.warnings.size(), 1u);
  EXPECT_NE(script.warnings[0].find("'mu'"), std::string::npos);
  auto inst = instantiate(script, {});
  EXPECT_EQ(inst.params.maxiter, 50);
  ASSERT_EQ(inst.executions.size(), 1u);
  EXPECT_EQ(inst.executions[0].solver, "s");
}

TEST(ParseScriptTest, BindingDescribesEveryComponent) {
  auto p = parse_mhl(read_file(sample_path("dcopf.mhl")));
  auto script = load(p);
  ASSERT_EQ(script.binding.size(), p.manifest.components.size());
  for (const auto& c : p.manifest.components) {
    ASSERT_TRUE(script.binding.count(c.name)) << c.name;
  }
  EXPECT_EQ(script.binding.at("feastol").entity, EntityKind::kInput);
  EXPECT_EQ(script.binding.at("case").entity, EntityKind::kInputFile);
  EXPECT_EQ(script.binding.at("P").entity, EntityKind::kVariableBlock);
  EXPECT_EQ(script.binding.at("P_limits").entity, EntityKind::kConstraintRows);
  EXPECT_EQ(script.binding.at("output_obj").entity, EntityKind::kOutput);
  EXPECT_EQ(script.input_defaults().at("feastol"), 1e-8);
}

TEST(InstantiateTest, OverrideFeastol) {
  auto p = parse_mhl(read_file(sample_path("dcopf.mhl")));
  auto script = load(p);
  KernelInputs inputs;
  inputs.files["case"] = read_file(sample_path("ieee14.m"));
  EXPECT_EQ(instantiate(script, inputs).params.feastol, 1e-8);
  inputs.values["feastol"] = 1e-3;
  EXPECT_EQ(instantiate(script, inputs).params.feastol, 1e-3);
}

TEST(InstantiateTest, DefaultsUsedVerbatim) {
  auto p = parse_mhl(
      "#@ Interface Object: lo\nlo = [1, 2.5]\n#@ Variable: x\nx = variable(2) >= lo\n");
  auto inst = instantiate(load(p), {});
  EXPECT_EQ(inst.problem.bounds[0].lower, 1.0);
  EXPECT_EQ(inst.problem.bounds[1].lower, 2.5);
}

TEST(InstantiateTest, MissingInputNamesIt) {
  auto p = parse_mhl(
      "#@ Interface Object: cap\n#@ Variable: x\nx = variable() <= cap\n");
  auto script = load(p);
  try {
    instantiate(script, {});
    FAIL();
  } catch (const ScriptError& err) {
    EXPECT_NE(std::string(err.what()).find("'cap'"), std::string::npos);
  }
  KernelInputs inputs;
  inputs.values["cap"] = 4;
  EXPECT_EQ(instantiate(script, inputs).problem.bounds[0].upper, 4.0);
}

TEST(InstantiateTest, MissingFileNamesIt) {
  auto p = parse_mhl(read_file(sample_path("dcopf.mhl")));
  try {
    instantiate(load(p), {});
    FAIL();
  } catch (const ScriptError& err) {
    EXPECT_EQ(err.component(), "case");
  }
}

TEST(InstantiateTest, TypeMismatch) {
  auto p = parse_mhl(
      "#@ Interface Object: w\nw = [1, 2]\n#@ Variable: x\nx = variable(2)\n"
      "#@ Constraint: c\nx[w] <= 1\n");
  // Fully defaulted models are instantiated once while parsing.
  EXPECT_THROW(load(p), ScriptError);
  KernelInputs text;
  text.values["w"] = "heavy";
  KernelInputs vec;
  vec.values["w"] = nlohmann::json::array({1, 2, 3});
  auto q = parse_mhl(
      "#@ Interface Object: w\nw = [1, 2]\n#@ Variable: x\nx = variable(2)\n"
      "#@ Constraint: c\nx <= w\n");
  auto script2 = load(q);
  EXPECT_NO_THROW(instantiate(script2, {}));
  EXPECT_THROW(instantiate(script2, vec), ScriptError);
  EXPECT_THROW(instantiate(script2, text), ScriptError);
}

TEST(InstantiateTest, RejectsUnknownInputNames) {
  auto p = parse_mhl("#@ Variable: x\nx = variable()\n");
  KernelInputs inputs;
  inputs.values["x"] = 1;
  EXPECT_THROW(instantiate(load(p), inputs), ScriptError);
}

TEST(InstantiateTest, ObjectiveConstantIsOffset) {
  auto p = parse_mhl(
      "#@ Variable: x\nx = variable() >= 1\n#@ Objective: o\nminimize 2 * x + 7\n"
      "#@ Problem: p\np = problem(o)\n");
  auto inst = instantiate(load(p), {});
  EXPECT_EQ(inst.problem.objective, (std::vector<double>{2.0}));
  EXPECT_EQ(inst.objective_offset, 7.0);
  EXPECT_EQ(inst.objective_component, "o");
}

TEST(InstantiateTest, ProblemSelectsObjectiveAndConstraints) {
  auto p = parse_mhl(
      "#@ Variable: x\nx = variable() >= 0\n"
      "#@ Constraint: a\nx <= 4\n#@ Constraint: b\nx <= 2\n"
      "#@ Objective: lo\nminimize x\n#@ Objective: hi\nmaximize x\n"
      "#@ Problem: p\np = problem(hi, a)\n");
  auto inst = instantiate(load(p), {});
  EXPECT_EQ(inst.problem.sense, Sense::kMaximize);
  ASSERT_EQ(inst.problem.num_rows(), 1u);
  EXPECT_EQ(inst.problem.rows[0].rhs, 4.0);
}

TEST(InstantiateTest, SeveralObjectivesNeedSelection) {
  expect_script_error(
      "#@ Variable: x\nx = variable()\n#@ Objective: lo\nminimize x\n"
      "#@ Objective: hi\nmaximize x\n",
      "lo", "select");
}

TEST(InstantiateTest, SecondProblemRejected) {
  expect_script_error(
      "#@ Variable: x\nx = variable()\n#@ Objective: o\nminimize x\n"
      "#@ Problem: p\np = problem(o)\n#@ Problem: q\nq = problem(o)\n",
      "q", "single Problem");
}

TEST(NumericFileTest, ParsesCommentsAndSeparators) {
  auto v = parse_numeric_file("% header\n1 2,3;\n# note\n[4.5 -6e1] +7\n");
  EXPECT_EQ(v, (std::vector<double>{1, 2, 3, 4.5, -60, 7}));
  EXPECT_TRUE(parse_numeric_file("").empty());
  try {
    parse_numeric_file("1\n2\nabc\n");
    FAIL();
  } catch (const ScriptError& err) {
    EXPECT_EQ(err.line(), 3u);
  }
}

TEST(EvaluateOutputsTest, TotalAtProductionOptimum) {
  auto p = parse_mhl(
      "#@ Variable: x\nx = variable(2) >= 0\n"
      "#@ Constraint: c\nx[0] + x[1] <= 4\nx[0] + 3 * x[1] <= 6\n"
      "#@ Objective: o\nmaximize 3 * x[0] + 2 * x[1]\n"
      "#@ Problem: p\np = problem(o, c)\n#@ Execution: e\ne = solve(p)\n"
      "#@ Output Object: total\ntotal = x[0] + x[1]\n"
      "#@ Output File: report\nreport = [objective, x[0]]\n");
  auto script = load(p);
  auto inst = instantiate(script, {});
  auto sol = solve(inst.problem, inst.params);
  ASSERT_TRUE(sol.optimal());
  // Cross-check against the brute-force oracle before trusting outputs.
  ASSERT_NEAR(*oracle_solve(inst.problem).objective, 12.0, 1e-9);
  auto out = evaluate_outputs(script, inst, sol);
  EXPECT_NEAR(out.at("total").get<double>(), 4.0, 1e-9);
  EXPECT_NEAR(out.at("o").get<double>(), 12.0, 1e-9);
  const auto& info = out.at("e");
  EXPECT_EQ(info["status"], "optimal");
  EXPECT_TRUE(info.contains("iterations"));
  EXPECT_TRUE(info.contains("time"));
  EXPECT_EQ(out.at("report"), "12\n4\n");
}

TEST(EvaluateOutputsTest, NoOutputsGivesEmptyMap) {
  auto p = parse_mhl("#@ Variable: x\nx = variable() >= 0\n");
  auto script = load(p);
  auto inst = instantiate(script, {});
  auto out = evaluate_outputs(script, inst, solve(inst.problem));
  EXPECT_TRUE(out.empty());
}

TEST(EvaluateOutputsTest, RejectsNonOptimal) {
  auto p = parse_mhl(
      "#@ Variable: x\nx = variable()\n#@ Constraint: c\nx <= 0\nx >= 1\n");
  auto script = load(p);
  auto inst = instantiate(script, {});
  auto sol = solve(inst.problem);
  ASSERT_EQ(sol.status, SolveStatus::kInfeasible);
  EXPECT_THROW(evaluate_outputs(script, inst, sol), std::logic_error);
}

}  // namespace
}  // namespace modelhub::lp
