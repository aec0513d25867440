// Copyright 2026 The ModelHub Authors
// SPDX-License-Identifier: Apache-2.0

// Executes a JobPayload with the kernel its tag names. Shared by the
// embedded worker and the standalone worker.

#pragma once

#include <nlohmann/json.hpp>

#include "modelhub/backend/protocol.h"
#include "modelhub/lp/native_kernel.h"

namespace modelhub::backend {

struct JobOutcome {
  ExecutionStatus status = ExecutionStatus::kError;
  nlohmann::json results = nlohmann::json::object();
};

// Never throws; kernel failures become status error with the reason logged.
JobOutcome run_job(const JobPayload& job, const lp::LogSink& log);

}  // namespace modelhub::backend
