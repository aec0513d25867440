// Copyright 2026 The ModelHub Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "modelhub/lp/native_kernel.h"
#include "modelhub/parser/annotation_parser.h"
#include "support/test_data.h"

namespace modelhub::lp {
namespace {

using testing::read_file;
using testing::sample_path;

struct Run {
  KernelOutcome outcome;
  std::vector<std::string> log;
};

Run run(const std::string& source, const KernelInputs& inputs = {}) {
  auto parsed = parse(source, ParserConfig("#"));
  Run r;
  r.outcome = run_native_lp(parsed.manifest, source, inputs,
                            [&r](const std::string& line) { r.log.push_back(line); });
  return r;
}

TEST(NativeKernelTest, ProductionSample) {
  auto r = run(read_file(sample_path("production.mhl")));
  ASSERT_TRUE(r.outcome.success) << r.outcome.error;
  const auto& res = r.outcome.results;
  EXPECT_NEAR(res.at("profit").get<double>(), 12.0, 1e-9);
  EXPECT_NEAR(res.at("total").get<double>(), 4.0, 1e-9);
  EXPECT_NEAR(res.at("x").get<double>(), 4.0, 1e-9);
  EXPECT_NEAR(res.at("y").get<double>(), 0.0, 1e-9);
  EXPECT_EQ(res.at("info").at("status"), "optimal");
  EXPECT_FALSE(r.log.empty());
}

TEST(NativeKernelTest, DcopfSample) {
  KernelInputs inputs;
  inputs.values["feastol"] = 1e-3;
  inputs.files["case"] = read_file(sample_path("ieee14.m"));
  auto r = run(read_file(sample_path("dcopf.mhl")), inputs);
  ASSERT_TRUE(r.outcome.success) << r.outcome.error;
  const auto& res = r.outcome.results;
  // 259 MW served entirely by the two 20 $/MWh units.
  EXPECT_NEAR(res.at("gen_cost_obj").get<double>(), 5180.0, 1e-6);
  EXPECT_NEAR(res.at("output_obj")[0].get<double>(), 5180.0, 1e-6);
  EXPECT_NEAR(res.at("output_obj")[1].get<double>(), 259.0, 1e-6);
  EXPECT_EQ(res.at("dispatch").size(), 5u);
  EXPECT_EQ(res.at("solver").at("feastol"), 1e-3);
  EXPECT_EQ(res.at("solver").at("maxiter"), 100);
  EXPECT_EQ(res.at("info").at("status"), "optimal");
}

TEST(NativeKernelTest, InfeasibleStillSucceedsWithInfoOnly) {
  auto r = run(
      "#@ Variable: x\nx = variable()\n#@ Constraint: c\nx <= 0\nx >= 1\n"
      "#@ Objective: o\nminimize x\n#@ Problem: p\np = problem(o, c)\n"
      "#@ Execution: e\ne = solve(p)\n#@ Output Object: t\nt = x\n");
  ASSERT_TRUE(r.outcome.success);
  EXPECT_EQ(r.outcome.results.at("e").at("status"), "infeasible");
  EXPECT_FALSE(r.outcome.results.contains("t"));
  EXPECT_FALSE(r.outcome.results.contains("o"));
}

TEST(NativeKernelTest, ScriptErrorFailsWithMessageInLog) {
  auto r = run("#@ Variable: x\nx = variable(2)\n#@ Objective: o\nminimize x[0]*x[1]\n");
  EXPECT_FALSE(r.outcome.success);
  EXPECT_TRUE(r.outcome.results.empty());
  EXPECT_NE(r.outcome.error.find("nonlinear"), std::string::npos);
  ASSERT_FALSE(r.log.empty());
  EXPECT_NE(r.log.back().find("nonlinear"), std::string::npos);
}

TEST(NativeKernelTest, MissingFileFails) {
  auto r = run(read_file(sample_path("dcopf.mhl")));
  EXPECT_FALSE(r.outcome.success);
  EXPECT_NE(r.outcome.error.find("case"), std::string::npos);
}

TEST(NativeKernelTest, EachExecutionSolvesWithItsSolver) {
  auto r = run(
      "#@ Variable: x\nx = variable(4) >= 0 <= 1\n#@ Objective: o\nmaximize sum(x)\n"
      "#@ Problem: p\np = problem(o)\n"
      "#@ Solver: tight\nmaxiter = 1\n#@ Execution: first\nfirst = solve(p)\n"
      "#@ Solver: loose\nmaxiter = 100\n#@ Execution: second\nsecond = solve(p, loose)\n");
  ASSERT_TRUE(r.outcome.success) << r.outcome.error;
  EXPECT_EQ(r.outcome.results.at("first").at("status"), "iteration_limit");
  EXPECT_EQ(r.outcome.results.at("second").at("status"), "optimal");
  EXPECT_NEAR(r.outcome.results.at("o").get<double>(), 4.0, 1e-9);
}

}  // namespace
}  // namespace modelhub::lp
