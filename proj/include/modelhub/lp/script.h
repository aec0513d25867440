// Copyright 2026 The ModelHub Authors
// SPDX-License-Identifier: Apache-2.0

// Interpreter for the native-lp model language (".mhl" files).
//
// Each annotated component's span holds statements for its kind, one per
// line (a line continues while a bracket is open; the comment tag starts a
// comment):
//
//   Interface Object   name = 3.5 | name = [1, 2, 3]      (default; optional)
//   Interface File     (no statements; file holds whitespace/comma separated
//                      numbers, '#' and '%' lines are comments)
//   Helper Object      name = <expr>       (one or more assignments)
//   Variable           name = variable([<n>]) [>= <lower>] [<= <upper>]
//                      (no size: a scalar; a size: a vector)
//   Constraint         <expr> (<=|>=|==) <expr>   (vector sides expand
//                      elementwise)
//   Objective          [name =] minimize <expr> | maximize <expr>
//   Problem            [name =] problem(<objective>, <constraint>, ...)
//   Solver             feastol = <expr> / maxiter = <expr>
//   Execution          [name =] solve(<problem> [, <solver>])
//   Output Object      name = <expr>       (evaluated after the solve; may
//                      use `objective`)
//   Output File        name = <expr>       (rendered as text)
//   Function           not interpreted
//
// Expressions: decimal literals, names, [a, b, ...], + - * /, unary minus,
// indexing v[i], parentheses, sum(v), len(v). Arithmetic is elementwise with
// scalar broadcast. Before the solve, products of two variable-dependent
// terms are rejected.

#pragma once

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "modelhub/core/model.h"
#include "modelhub/lp/problem.h"

namespace modelhub::lp {

class ScriptError : public std::runtime_error {
 public:
  ScriptError(std::string component, std::size_t line, std::string message);

  const std::string& component() const { return component_; }
  std::size_t line() const { return line_; }
  const std::string& message() const { return message_; }

 private:
  std::string component_;
  std::size_t line_;
  std::string message_;
};

enum class EntityKind {
  kInput,
  kInputFile,
  kHelper,
  kVariableBlock,
  kConstraintRows,
  kObjective,
  kProblem,
  kSolverParams,
  kExecution,
  kOutput,
  kOutputFile,
  kIgnored,
};

std::string_view entity_name(EntityKind kind);

struct Binding {
  EntityKind entity = EntityKind::kIgnored;
  std::size_t line = 0;  // annotation line of the component
  std::optional<nlohmann::json> default_value;  // kInput only
};

// Component name -> kernel entity.
using ScriptBinding = std::map<std::string, Binding>;

namespace detail {
struct Program;
}  // namespace detail

// A parsed model with unresolved input references.
struct ScriptTemplate {
  ScriptBinding binding;
  std::vector<std::string> warnings;
  std::shared_ptr<const detail::Program> program;

  // Default values of interface objects that declare one.
  std::map<std::string, nlohmann::json> input_defaults() const;
};

// Overrides for interface objects (number or array of numbers) and
// the raw bytes of interface files.
struct KernelInputs {
  std::map<std::string, nlohmann::json> values;
  std::map<std::string, std::string> files;
};

struct ExecutionPlan {
  std::string component;
  std::optional<std::string> solver;  // Solver component providing params
  SolveParams params;
};

struct VariableBlock {
  std::size_t offset = 0;
  std::size_t size = 1;
  bool is_vector = false;
};

// A fully numeric problem plus what is needed to evaluate outputs later.
struct Instance {
  LPProblem problem;
  // Parameters of the last execution (or of the last Solver when the model
  // has no Execution component).
  SolveParams params;
  // One entry per Execution component, in file order.
  std::vector<ExecutionPlan> executions;
  // Solver component -> {"feastol", "maxiter"}.
  std::map<std::string, nlohmann::json> solver_values;
  // Variable name -> columns of the problem.
  std::map<std::string, VariableBlock> blocks;
  std::optional<std::string> objective_component;
  // Constant term of the objective expression (not part of problem).
  double objective_offset = 0.0;
  KernelInputs inputs;
};

// Interprets every component span. Reports syntax errors, unknown
// identifiers, nonlinear terms and (when all inputs have defaults) dimension
// mismatches as ScriptError. Precondition: validate(manifest) has no errors.
ScriptTemplate parse_script(const ModelManifest& manifest,
                            std::string_view source);

// Resolves inputs (defaults overridden by `inputs`), evaluates helpers in
// dependency order and builds the LP. Throws ScriptError on a missing
// required input, cyclic helper dependency, type or dimension mismatch.
Instance instantiate(const ScriptTemplate& script, const KernelInputs& inputs);

// Output values at the optimum: Output Object/File expressions, the
// objective value for the Objective component and solution.info() for every
// Execution component. Throws std::logic_error unless solution is optimal.
std::map<std::string, nlohmann::json> evaluate_outputs(
    const ScriptTemplate& script, const Instance& instance,
    const LPSolution& solution);

// Parses interface-file bytes into numbers.
std::vector<double> parse_numeric_file(std::string_view bytes);

}  // namespace modelhub::lp
