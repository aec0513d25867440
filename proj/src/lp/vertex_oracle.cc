// Copyright 2026 The ModelHub Authors
// SPDX-License-Identifier: Apache-2.0

#include "modelhub/lp/vertex_oracle.h"

#include <cmath>
#include <optional>
#include <vector>

#include <fmt/format.h>

namespace modelhub::lp {
namespace {

constexpr double kRankTol = 1e-9;
constexpr double kFeasTol = 1e-7;

using Vec = std::vector<double>;

struct Halfspace {
  Vec a;
  double b;  // a'x <= b
};

// Row-reduces `m` (each row has `cols` coefficients plus one augmented
// entry) in place and returns the pivot column of every independent row.
std::vector<std::size_t> row_reduce(std::vector<Vec>& m, std::size_t cols) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    std::size_t best = r;
    for (std::size_t i = r + 1; i < m.size(); ++i) {
      if (std::abs(m[i][c]) > std::abs(m[best][c])) best = i;
    }
    if (std::abs(m[best][c]) <= kRankTol) continue;
    std::swap(m[r], m[best]);
    const double p = m[r][c];
    for (auto& v : m[r]) v /= p;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == r || m[i][c] == 0.0) continue;
      const double f = m[i][c];
      for (std::size_t k = 0; k < m[i].size(); ++k) m[i][k] -= f * m[r][k];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

std::size_t rank_of(const std::vector<Halfspace>& hs, std::size_t n) {
  std::vector<Vec> m;
  for (const auto& h : hs) {
    Vec row = h.a;
    row.push_back(0.0);
    m.push_back(std::move(row));
  }
  return row_reduce(m, n).size();
}

bool satisfies(const std::vector<Halfspace>& hs, const Vec& x) {
  for (const auto& h : hs) {
    double lhs = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) lhs += h.a[j] * x[j];
    if (lhs > h.b + kFeasTol * (1.0 + std::abs(h.b))) return false;
  }
  return true;
}

// Calls `visit` with every k-subset of {0..count-1}.
template <typename Visit>
void for_each_subset(std::size_t count, std::size_t k, Visit&& visit) {
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  if (k > count) return;
  for (;;) {
    visit(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == count - k + (i - 1)) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

// Feasible points lying on minimal faces of {x : a'x <= b for all hs}.
std::vector<Vec> minimal_face_points(const std::vector<Halfspace>& hs,
                                     std::size_t n) {
  std::vector<Vec> points;
  const std::size_t r = rank_of(hs, n);
  for_each_subset(hs.size(), r, [&](const std::vector<std::size_t>& subset) {
    std::vector<Vec> m;
    for (std::size_t i : subset) {
      Vec row = hs[i].a;
      row.push_back(hs[i].b);
      m.push_back(std::move(row));
    }
    auto pivots = row_reduce(m, n);
    if (pivots.size() != r) return;
    // Free coordinates are zero; pivot coordinates read off the RHS.
    Vec x(n, 0.0);
    for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = m[i][n];
    if (satisfies(hs, x)) points.push_back(std::move(x));
  });
  return points;
}

}  // namespace

LPSolution oracle_solve(const LPProblem& problem) {
  problem.check();
  const std::size_t n = problem.num_variables();
  if (n > kOracleMaxVariables ||
      problem.num_rows() + problem.num_bounds() > kOracleMaxConstraints) {
    throw InstanceTooLargeError(fmt::format(
        "oracle handles n <= {} and rows + bounds <= {}; got n = {}, {} rows, "
        "{} bounds",
        kOracleMaxVariables, kOracleMaxConstraints, n, problem.num_rows(),
        problem.num_bounds()));
  }

  std::vector<Halfspace> hs;
  for (const auto& row : problem.rows) {
    Vec neg(n);
    for (std::size_t j = 0; j < n; ++j) neg[j] = -row.coefficients[j];
    if (row.relation != Relation::kGreaterEqual) {
      hs.push_back({row.coefficients, row.rhs});
    }
    if (row.relation != Relation::kLessEqual) hs.push_back({neg, -row.rhs});
  }
  for (std::size_t j = 0; j < n; ++j) {
    Vec e(n, 0.0);
    if (problem.bounds[j].upper) {
      e[j] = 1.0;
      hs.push_back({e, *problem.bounds[j].upper});
    }
    if (problem.bounds[j].lower) {
      e[j] = -1.0;
      hs.push_back({e, -*problem.bounds[j].lower});
    }
  }

  LPSolution solution;
  auto points = minimal_face_points(hs, n);
  if (points.empty()) {
    solution.status = SolveStatus::kInfeasible;
    return solution;
  }

  // Minimization direction.
  Vec c = problem.objective;
  if (problem.sense == Sense::kMaximize) {
    for (auto& v : c) v = -v;
  }
  std::vector<Halfspace> recession;
  for (const auto& h : hs) recession.push_back({h.a, 0.0});
  recession.push_back({c, -1.0});
  if (!minimal_face_points(recession, n).empty()) {
    solution.status = SolveStatus::kUnbounded;
    return solution;
  }

  std::optional<std::size_t> best;
  double best_value = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    double value = 0.0;
    for (std::size_t j = 0; j < n; ++j) value += c[j] * points[i][j];
    if (!best || value < best_value) {
      best = i;
      best_value = value;
    }
  }
  solution.status = SolveStatus::kOptimal;
  solution.x = points[*best];
  solution.objective = objective_value(problem, *solution.x);
  return solution;
}

}  // namespace modelhub::lp
