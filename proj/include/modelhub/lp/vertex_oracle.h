// Copyright 2026 The ModelHub Authors
// SPDX-License-Identifier: Apache-2.0

// Brute-force LP solver used as a correctness oracle for the simplex kernel.
// Shares no code with it beyond the LPProblem/LPSolution value types.

#pragma once

#include <stdexcept>

#include "modelhub/lp/problem.h"

namespace modelhub::lp {

class InstanceTooLargeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

inline constexpr std::size_t kOracleMaxVariables = 4;
inline constexpr std::size_t kOracleMaxConstraints = 12;

// Rewrites the problem as A x <= b and enumerates active sets:
//  - feasibility: the polyhedron is nonempty iff some choice of rank(A)
//    linearly independent constraints, held at equality, has a solution that
//    satisfies every constraint (a point on a minimal face);
//  - unboundedness: some recession direction d with A d <= 0 and c'd <= -1
//    exists, decided by the same enumeration on that system;
//  - otherwise the best objective over minimal-face points is optimal.
//
// Throws InstanceTooLargeError when n > 4 or rows + bounds > 12.
LPSolution oracle_solve(const LPProblem& problem);

}  // namespace modelhub::lp
