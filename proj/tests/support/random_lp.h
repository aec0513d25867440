// Copyright 2026 The ModelHub Authors
// SPDX-License-Identifier: Apache-2.0

// Small random LPs with integer data, sized for the brute-force oracle.

#pragma once

#include <cstdint>
#include <random>

#include "modelhub/lp/problem.h"

namespace modelhub::testing {

struct RandomLpOptions {
  std::size_t max_variables = 4;
  std::size_t max_rows = 8;
  int coef_min = -5;
  int coef_max = 5;
  std::size_t max_constraints = 12;  // rows + bounds
};

class RandomLpGenerator {
 public:
  explicit RandomLpGenerator(std::uint64_t seed, RandomLpOptions options = {})
      : rng_(seed), options_(options) {}

  lp::LPProblem next() {
    const std::size_t n = uniform(1, options_.max_variables);
    const std::size_t m = uniform(0, options_.max_rows);
    auto p = lp::LPProblem::with_variables(n);
    p.sense = uniform(0, 1) ? lp::Sense::kMaximize : lp::Sense::kMinimize;
    for (auto& c : p.objective) c = coef();
    for (std::size_t i = 0; i < m; ++i) {
      std::vector<double> a(n);
      for (auto& v : a) v = coef();
      // Weighted toward inequalities: 5 <=, 3 >=, 1 ==.
      const std::size_t r = uniform(0, 8);
      const auto rel = r < 5   ? lp::Relation::kLessEqual
                       : r < 8 ? lp::Relation::kGreaterEqual
                               : lp::Relation::kEqual;
      p.add_row(std::move(a), rel, coef());
    }
    for (auto& b : p.bounds) {
      switch (uniform(0, 4)) {
        case 0:
        case 1:
          b.lower = 0.0;
          break;
        case 2:
          break;
        case 3: {
          const double lo = static_cast<double>(uniform_int(-5, 3));
          b.lower = lo;
          b.upper = lo + static_cast<double>(uniform_int(0, 5));
          break;
        }
        default:
          b.upper = coef();
      }
    }
    while (p.num_rows() + p.num_bounds() > options_.max_constraints) {
      p.rows.pop_back();
    }
    return p;
  }

 private:
  std::size_t uniform(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
  }
  int uniform_int(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng_);
  }
  double coef() {
    return static_cast<double>(uniform_int(options_.coef_min, options_.coef_max));
  }

  std::mt19937_64 rng_;
  RandomLpOptions options_;
};

}  // namespace modelhub::testing
