// Copyright 2026 The ModelHub Authors
// SPDX-License-Identifier: Apache-2.0

#include "modelhub/backend/embedded_worker.h"

#include <spdlog/spdlog.h>

#include "modelhub/backend/job_runner.h"
#include "modelhub/lp/native_kernel.h"

namespace modelhub::backend {

EmbeddedWorker::EmbeddedWorker(ModelService& service, std::string owner)
    : service_(service), principal_{std::move(owner), TokenClass::kWorker} {
  id_ = service_.register_worker(principal_, {std::string(lp::kNativeKernelTag)})["id"]
            .get<std::string>();
}

EmbeddedWorker::~EmbeddedWorker() { stop(); }

void EmbeddedWorker::start() {
  if (poller_.joinable()) return;
  poller_ = std::thread([this] { poll_loop(); });
  heart_ = std::thread([this] { heartbeat_loop(); });
}

void EmbeddedWorker::stop() {
  stopping_ = true;
  cv_.notify_all();
  if (poller_.joinable()) poller_.join();
  if (heart_.joinable()) heart_.join();
}

void EmbeddedWorker::heartbeat_loop() {
  const auto period = std::max(service_.config().heartbeat_lapse / 3,
                               std::chrono::milliseconds(10));
  std::unique_lock lock(mu_);
  while (!stopping_) {
    cv_.wait_for(lock, period, [this] { return stopping_.load(); });
    if (stopping_) break;
    try {
      service_.heartbeat(principal_, id_);
    } catch (const std::exception& e) {
      spdlog::warn("embedded worker heartbeat: {}", e.what());
    }
  }
}

void EmbeddedWorker::poll_loop() {
  while (!stopping_) {
    std::optional<JobPayload> job;
    try {
      // Short polls keep stop() responsive.
      job = service_.next_job(principal_, id_, std::chrono::milliseconds(500));
    } catch (const std::exception& e) {
      spdlog::error("embedded worker poll: {}", e.what());
      std::unique_lock lock(mu_);
      cv_.wait_for(lock, std::chrono::milliseconds(200),
                   [this] { return stopping_.load(); });
      continue;
    }
    if (!job) continue;
    const std::string& exec_id = job->execution_id;
    auto sink = [&](const std::string& line) {
      try {
        service_.post_log(principal_, exec_id, id_, {line});
      } catch (const std::exception& e) {
        spdlog::warn("embedded worker log: {}", e.what());
      }
    };
    JobOutcome out = run_job(*job, sink);
    try {
      service_.post_result(principal_, exec_id, id_, out.status, out.results);
    } catch (const std::exception& e) {
      spdlog::warn("embedded worker result for {}: {}", exec_id, e.what());
    }
  }
}

}  // namespace modelhub::backend
