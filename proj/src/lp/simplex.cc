// Copyright 2026 The ModelHub Authors
// SPDX-License-Identifier: Apache-2.0

#include "modelhub/lp/simplex.h"

#include <chrono>
#include <cmath>
#include <cstddef>
#include <vector>

namespace modelhub::lp {
namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kRatioTieTol = 1e-12;
constexpr double kDropTol = 1e-11;

// How an original variable is expressed through nonnegative columns.
struct VariableMap {
  enum class Kind { kShift, kFlip, kSplit } kind = Kind::kShift;
  std::size_t column = 0;
  double offset = 0.0;  // lower bound (kShift) or upper bound (kFlip)
};

struct StandardRow {
  std::vector<double> a;
  Relation relation;
  double b;
};

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * (cols + 1), 0.0), basis_(rows) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& at(std::size_t i, std::size_t j) { return data_[i * (cols_ + 1) + j]; }
  double at(std::size_t i, std::size_t j) const {
    return data_[i * (cols_ + 1) + j];
  }
  double& rhs(std::size_t i) { return at(i, cols_); }
  double rhs(std::size_t i) const { return at(i, cols_); }

  std::size_t& basic(std::size_t i) { return basis_[i]; }
  std::size_t basic(std::size_t i) const { return basis_[i]; }

  // Pivots on (r, c) and applies the same elimination to `cost`, which has
  // cols() + 1 entries (reduced costs plus the negated objective value).
  void pivot(std::size_t r, std::size_t c, std::vector<double>& cost) {
    const double p = at(r, c);
    for (std::size_t j = 0; j <= cols_; ++j) at(r, j) /= p;
    at(r, c) = 1.0;
    auto eliminate = [&](double* row) {
      const double f = row[c];
      if (f == 0.0) return;
      for (std::size_t j = 0; j <= cols_; ++j) {
        row[j] -= f * at(r, j);
        if (std::abs(row[j]) < kDropTol) row[j] = 0.0;
      }
      row[c] = 0.0;
    };
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i != r) eliminate(&data_[i * (cols_ + 1)]);
    }
    eliminate(cost.data());
    basis_[r] = c;
  }

  void drop_row(std::size_t r) {
    data_.erase(data_.begin() + static_cast<std::ptrdiff_t>(r * (cols_ + 1)),
                data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * (cols_ + 1)));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
    --rows_;
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
  std::vector<std::size_t> basis_;
};

enum class LoopResult { kOptimal, kUnbounded, kIterationLimit };

// Reduced costs for `costs` given the current basis.
std::vector<double> reduced_costs(const Tableau& t,
                                  const std::vector<double>& costs) {
  std::vector<double> row(t.cols() + 1, 0.0);
  for (std::size_t j = 0; j < t.cols(); ++j) row[j] = costs[j];
  for (std::size_t i = 0; i < t.rows(); ++i) {
    const double cb = costs[t.basic(i)];
    if (cb == 0.0) continue;
    for (std::size_t j = 0; j <= t.cols(); ++j) row[j] -= cb * t.at(i, j);
  }
  return row;
}

LoopResult iterate(Tableau& t, std::vector<double>& cost,
                   std::size_t column_limit, int& pivots, int maxiter) {
  for (;;) {
    std::size_t entering = column_limit;
    for (std::size_t j = 0; j < column_limit; ++j) {
      if (cost[j] < -kPivotTol) {
        entering = j;
        break;
      }
    }
    if (entering == column_limit) return LoopResult::kOptimal;

    std::size_t leaving = t.rows();
    double best = 0.0;
    for (std::size_t i = 0; i < t.rows(); ++i) {
      const double a = t.at(i, entering);
      if (a <= kPivotTol) continue;
      const double ratio = t.rhs(i) / a;
      if (leaving == t.rows() || ratio < best - kRatioTieTol) {
        leaving = i;
        best = ratio;
      } else if (ratio <= best + kRatioTieTol &&
                 t.basic(i) < t.basic(leaving)) {
        leaving = i;
      }
    }
    if (leaving == t.rows()) return LoopResult::kUnbounded;
    if (pivots >= maxiter) return LoopResult::kIterationLimit;
    t.pivot(leaving, entering, cost);
    ++pivots;
  }
}

}  // namespace

LPSolution solve(const LPProblem& problem, const SolveParams& params) {
  problem.check();
  params.check();
  const auto started = std::chrono::steady_clock::now();
  LPSolution solution;
  auto finish = [&](SolveStatus status, int pivots) {
    solution.status = status;
    solution.iterations = pivots;
    solution.solve_seconds = std::chrono::duration<double>(
                                 std::chrono::steady_clock::now() - started)
                                 .count();
    return solution;
  };

  const std::size_t n = problem.num_variables();

  // Substitute every variable by nonnegative columns.
  std::vector<VariableMap> maps(n);
  std::vector<StandardRow> rows;
  std::size_t structural = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const auto& b = problem.bounds[j];
    if (b.lower) {
      maps[j] = {VariableMap::Kind::kShift, structural++, *b.lower};
    } else if (b.upper) {
      maps[j] = {VariableMap::Kind::kFlip, structural++, *b.upper};
    } else {
      maps[j] = {VariableMap::Kind::kSplit, structural, 0.0};
      structural += 2;
    }
  }
  auto transform = [&](const std::vector<double>& a, double b, Relation rel) {
    StandardRow row{std::vector<double>(structural, 0.0), rel, b};
    for (std::size_t j = 0; j < n; ++j) {
      const double coef = a[j];
      if (coef == 0.0) continue;
      const auto& m = maps[j];
      switch (m.kind) {
        case VariableMap::Kind::kShift:
          row.a[m.column] += coef;
          row.b -= coef * m.offset;
          break;
        case VariableMap::Kind::kFlip:
          row.a[m.column] -= coef;
          row.b -= coef * m.offset;
          break;
        case VariableMap::Kind::kSplit:
          row.a[m.column] += coef;
          row.a[m.column + 1] -= coef;
          break;
      }
    }
    return row;
  };
  for (const auto& r : problem.rows) {
    rows.push_back(transform(r.coefficients, r.rhs, r.relation));
  }
  for (std::size_t j = 0; j < n; ++j) {
    const auto& b = problem.bounds[j];
    if (b.lower && b.upper) {
      StandardRow row{std::vector<double>(structural, 0.0),
                      Relation::kLessEqual, *b.upper - *b.lower};
      row.a[maps[j].column] = 1.0;
      rows.push_back(std::move(row));
    }
  }
  for (auto& row : rows) {
    if (row.b < 0.0) {
      for (auto& v : row.a) v = -v;
      row.b = -row.b;
      if (row.relation == Relation::kLessEqual) {
        row.relation = Relation::kGreaterEqual;
      } else if (row.relation == Relation::kGreaterEqual) {
        row.relation = Relation::kLessEqual;
      }
    }
  }

  // Columns: structural | slack/surplus | artificial.
  std::size_t slacks = 0;
  std::size_t artificials = 0;
  for (const auto& row : rows) {
    if (row.relation != Relation::kEqual) ++slacks;
    if (row.relation != Relation::kLessEqual) ++artificials;
  }
  const std::size_t art_start = structural + slacks;
  const std::size_t cols = art_start + artificials;
  Tableau t(rows.size(), cols);
  {
    std::size_t next_slack = structural;
    std::size_t next_art = art_start;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& row = rows[i];
      for (std::size_t k = 0; k < structural; ++k) t.at(i, k) = row.a[k];
      t.rhs(i) = row.b;
      switch (row.relation) {
        case Relation::kLessEqual:
          t.at(i, next_slack) = 1.0;
          t.basic(i) = next_slack++;
          break;
        case Relation::kGreaterEqual:
          t.at(i, next_slack++) = -1.0;
          t.at(i, next_art) = 1.0;
          t.basic(i) = next_art++;
          break;
        case Relation::kEqual:
          t.at(i, next_art) = 1.0;
          t.basic(i) = next_art++;
          break;
      }
    }
  }

  int pivots = 0;

  // Phase 1: drive the artificial sum to zero.
  if (artificials > 0) {
    std::vector<double> phase1(cols, 0.0);
    for (std::size_t k = art_start; k < cols; ++k) phase1[k] = 1.0;
    auto cost = reduced_costs(t, phase1);
    auto result = iterate(t, cost, cols, pivots, params.maxiter);
    if (result == LoopResult::kIterationLimit) {
      return finish(SolveStatus::kIterationLimit, pivots);
    }
    // Phase 1 is bounded below by zero, so kUnbounded cannot occur.
    const double infeasibility = -cost[cols];
    if (infeasibility > params.feastol) {
      return finish(SolveStatus::kInfeasible, pivots);
    }
    // Pivot remaining (zero-valued) artificials out of the basis, dropping
    // rows that turn out to be linearly dependent.
    for (std::size_t i = 0; i < t.rows();) {
      if (t.basic(i) < art_start) {
        ++i;
        continue;
      }
      std::size_t col = art_start;
      for (std::size_t k = 0; k < art_start; ++k) {
        if (std::abs(t.at(i, k)) > kPivotTol) {
          col = k;
          break;
        }
      }
      if (col == art_start) {
        t.drop_row(i);
        continue;
      }
      if (pivots >= params.maxiter) {
        return finish(SolveStatus::kIterationLimit, pivots);
      }
      t.rhs(i) = 0.0;
      t.pivot(i, col, cost);
      ++pivots;
      ++i;
    }
  }

  // Phase 2 over structural and slack columns only.
  std::vector<double> phase2(cols, 0.0);
  const double sign = problem.sense == Sense::kMaximize ? -1.0 : 1.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double c = sign * problem.objective[j];
    const auto& m = maps[j];
    switch (m.kind) {
      case VariableMap::Kind::kShift:
        phase2[m.column] += c;
        break;
      case VariableMap::Kind::kFlip:
        phase2[m.column] -= c;
        break;
      case VariableMap::Kind::kSplit:
        phase2[m.column] += c;
        phase2[m.column + 1] -= c;
        break;
    }
  }
  auto cost = reduced_costs(t, phase2);
  auto result = iterate(t, cost, art_start, pivots, params.maxiter);
  if (result == LoopResult::kIterationLimit) {
    return finish(SolveStatus::kIterationLimit, pivots);
  }
  if (result == LoopResult::kUnbounded) {
    return finish(SolveStatus::kUnbounded, pivots);
  }

  std::vector<double> z(cols, 0.0);
  for (std::size_t i = 0; i < t.rows(); ++i) z[t.basic(i)] = t.rhs(i);
  std::vector<double> x(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const auto& m = maps[j];
    switch (m.kind) {
      case VariableMap::Kind::kShift:
        x[j] = m.offset + z[m.column];
        break;
      case VariableMap::Kind::kFlip:
        x[j] = m.offset - z[m.column];
        break;
      case VariableMap::Kind::kSplit:
        x[j] = z[m.column] - z[m.column + 1];
        break;
    }
  }
  solution.objective = objective_value(problem, x);
  solution.x = std::move(x);
  return finish(SolveStatus::kOptimal, pivots);
}

}  // namespace modelhub::lp
