// Copyright 2026 The ModelHub Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "modelhub/lp/problem.h"

namespace modelhub::lp {

// Dense two-phase primal simplex with Bland's rule for both the entering and
// the leaving variable. Phase 1 minimizes the sum of artificial variables and
// reports infeasibility when that optimum exceeds params.feastol. Every pivot,
// in either phase, counts against params.maxiter.
//
// Precondition: problem.check() and params.check() pass (they are re-checked
// here and throw std::invalid_argument).
LPSolution solve(const LPProblem& problem, const SolveParams& params = {});

}  // namespace modelhub::lp
