// Copyright 2026 The ModelHub Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace modelhub::lp {

enum class Sense { kMinimize, kMaximize };
enum class Relation { kLessEqual, kGreaterEqual, kEqual };

std::string_view relation_symbol(Relation rel);

struct Row {
  std::vector<double> coefficients;
  Relation relation = Relation::kLessEqual;
  double rhs = 0.0;
};

struct Bounds {
  std::optional<double> lower;
  std::optional<double> upper;
};

//   minimize / maximize  c'x
//   subject to           a_i'x (<=|>=|=) b_i    for every row i
//                        lower_j <= x_j <= upper_j where present
struct LPProblem {
  Sense sense = Sense::kMinimize;
  std::vector<double> objective;
  std::vector<Row> rows;
  std::vector<Bounds> bounds;
  std::vector<std::string> names;

  // Creates n free variables named x0..x{n-1} with a zero objective.
  static LPProblem with_variables(std::size_t n);

  std::size_t num_variables() const { return objective.size(); }
  std::size_t num_rows() const { return rows.size(); }
  std::size_t num_bounds() const;

  LPProblem& add_row(std::vector<double> coefficients, Relation rel,
                     double rhs);

  // Throws std::invalid_argument describing the first broken invariant.
  void check() const;
};

struct SolveParams {
  double feastol = 1e-8;
  int maxiter = 100;

  void check() const;
};

enum class SolveStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

std::string_view status_name(SolveStatus status);

struct LPSolution {
  SolveStatus status = SolveStatus::kIterationLimit;
  std::optional<std::vector<double>> x;
  std::optional<double> objective;
  int iterations = 0;
  double solve_seconds = 0.0;

  bool optimal() const { return status == SolveStatus::kOptimal; }

  // Solver metadata: {"status", "iterations", "time"}.
  nlohmann::json info() const;
};

double objective_value(const LPProblem& problem, const std::vector<double>& x);

// Largest violation over all rows and bounds (0 when feasible).
double max_violation(const LPProblem& problem, const std::vector<double>& x);

}  // namespace modelhub::lp
