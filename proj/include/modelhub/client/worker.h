// Copyright 2026 The ModelHub Authors
// SPDX-License-Identifier: Apache-2.0

// The worker side of the job protocol, plus a ready-made native-lp worker.

#pragma once

#include <atomic>
#include <chrono>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "modelhub/backend/protocol.h"
#include "modelhub/client/client.h"
#include "modelhub/client/transport.h"

namespace modelhub::client {

class WorkerClient {
 public:
  WorkerClient(std::shared_ptr<Transport> transport, std::string token);

  // Registers and remembers the worker id.
  const std::string& register_worker(const std::set<std::string>& kernel_tags);
  const std::string& id() const { return id_; }

  // Long-polls; std::nullopt when no job arrived within `wait`.
  std::optional<backend::JobPayload> next_job(std::chrono::milliseconds wait);
  void heartbeat();
  void post_log(const std::string& execution_id, const std::vector<std::string>& lines);
  // ApiError 409 when the execution is no longer running on this worker.
  nlohmann::json post_result(const std::string& execution_id,
                             backend::ExecutionStatus status,
                             const nlohmann::json& results);

 private:
  ClientSession session_;
  std::string id_;
};

struct WorkerLoopOptions {
  std::chrono::milliseconds poll_wait{30'000};
  std::chrono::milliseconds heartbeat_interval{30'000};
  std::chrono::milliseconds log_flush_interval{1'000};
  std::chrono::milliseconds max_backoff{30'000};
  // Stop after this many jobs; unlimited when empty.
  std::optional<int> max_jobs;
};

// Registers a native-lp worker and serves jobs until `stop` is set. A
// separate thread sends heartbeats. Transport failures back off
// exponentially. Returns the number of jobs completed.
int run_worker_loop(const std::string& base_url, const std::string& token,
                    const std::atomic<bool>& stop, WorkerLoopOptions options = {});

}  // namespace modelhub::client
