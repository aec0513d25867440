// Copyright 2026 The ModelHub Authors
// SPDX-License-Identifier: Apache-2.0

#include "modelhub/backend/job_runner.h"

#include <fmt/format.h>

namespace modelhub::backend {

JobOutcome run_job(const JobPayload& job, const lp::LogSink& log) {
  JobOutcome out;
  if (job.kernel_tag != lp::kNativeKernelTag) {
    if (log) log(fmt::format("error: no kernel for tag '{}'", job.kernel_tag));
    return out;
  }
  lp::KernelInputs inputs;
  inputs.values = job.inputs;
  for (const auto& f : job.attached_files) inputs.files[f.name] = f.content;
  lp::KernelOutcome k = lp::run_native_lp(job.manifest, job.source, inputs, log);
  if (k.success) {
    out.status = ExecutionStatus::kSuccess;
    out.results = std::move(k.results);
  }
  return out;
}

}  // namespace modelhub::backend
