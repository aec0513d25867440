// Copyright 2026 The ModelHub Authors
// SPDX-License-Identifier: Apache-2.0

#include "modelhub/lp/problem.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace modelhub::lp {

std::string_view relation_symbol(Relation rel) {
  switch (rel) {
    case Relation::kLessEqual:
      return "<=";
    case Relation::kGreaterEqual:
      return ">=";
    case Relation::kEqual:
      return "==";
  }
  return "?";
}

LPProblem LPProblem::with_variables(std::size_t n) {
  LPProblem p;
  p.objective.assign(n, 0.0);
  p.bounds.assign(n, Bounds{});
  for (std::size_t j = 0; j < n; ++j) p.names.push_back(fmt::format("x{}", j));
  return p;
}

std::size_t LPProblem::num_bounds() const {
  std::size_t count = 0;
  for (const auto& b : bounds) {
    count += b.lower.has_value() + b.upper.has_value();
  }
  return count;
}

LPProblem& LPProblem::add_row(std::vector<double> coefficients, Relation rel,
                              double rhs) {
  rows.push_back({std::move(coefficients), rel, rhs});
  return *this;
}

void LPProblem::check() const {
  const std::size_t n = num_variables();
  if (bounds.size() != n) {
    throw std::invalid_argument(
        fmt::format("bounds has {} entries for {} variables", bounds.size(), n));
  }
  if (!names.empty() && names.size() != n) {
    throw std::invalid_argument(
        fmt::format("names has {} entries for {} variables", names.size(), n));
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].coefficients.size() != n) {
      throw std::invalid_argument(fmt::format(
          "row {} has {} coefficients for {} variables", i,
          rows[i].coefficients.size(), n));
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    const auto& b = bounds[j];
    if (b.lower && b.upper && *b.lower > *b.upper) {
      throw std::invalid_argument(fmt::format(
          "variable {} has lower bound {} above upper bound {}", j, *b.lower,
          *b.upper));
    }
  }
}

void SolveParams::check() const {
  if (!(feastol > 0.0)) {
    throw std::invalid_argument(
        fmt::format("feastol must be positive, got {}", feastol));
  }
  if (maxiter < 1) {
    throw std::invalid_argument(
        fmt::format("maxiter must be at least 1, got {}", maxiter));
  }
}

std::string_view status_name(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal:
      return "optimal";
    case SolveStatus::kInfeasible:
      return "infeasible";
    case SolveStatus::kUnbounded:
      return "unbounded";
    case SolveStatus::kIterationLimit:
      return "iteration_limit";
  }
  return "unknown";
}

nlohmann::json LPSolution::info() const {
  return {{"status", status_name(status)},
          {"iterations", iterations},
          {"time", solve_seconds}};
}

double objective_value(const LPProblem& problem, const std::vector<double>& x) {
  double value = 0.0;
  for (std::size_t j = 0; j < problem.objective.size(); ++j) {
    value += problem.objective[j] * x[j];
  }
  return value;
}

double max_violation(const LPProblem& problem, const std::vector<double>& x) {
  double worst = 0.0;
  for (const auto& row : problem.rows) {
    double lhs = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) lhs += row.coefficients[j] * x[j];
    switch (row.relation) {
      case Relation::kLessEqual:
        worst = std::max(worst, lhs - row.rhs);
        break;
      case Relation::kGreaterEqual:
        worst = std::max(worst, row.rhs - lhs);
        break;
      case Relation::kEqual:
        worst = std::max(worst, std::abs(lhs - row.rhs));
        break;
    }
  }
  for (std::size_t j = 0; j < x.size(); ++j) {
    const auto& b = problem.bounds[j];
    if (b.lower) worst = std::max(worst, *b.lower - x[j]);
    if (b.upper) worst = std::max(worst, x[j] - *b.upper);
  }
  return worst;
}

}  // namespace modelhub::lp
