// Copyright 2026 The ModelHub Authors
// SPDX-License-Identifier: Apache-2.0

#include "modelhub/client/worker.h"

#include <condition_variable>
#include <mutex>
#include <thread>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "modelhub/backend/job_runner.h"
#include "modelhub/lp/native_kernel.h"

namespace modelhub::client {

using nlohmann::json;

WorkerClient::WorkerClient(std::shared_ptr<Transport> transport, std::string token)
    : session_(std::move(transport), std::move(token)) {}

const std::string& WorkerClient::register_worker(const std::set<std::string>& tags) {
  id_ = session_.post_json("/api/workers/register/", {{"kernel_tags", tags}})
            .at("id")
            .get<std::string>();
  return id_;
}

std::optional<backend::JobPayload> WorkerClient::next_job(std::chrono::milliseconds wait) {
  json job = session_.get(fmt::format("/api/workers/{}/jobs/next/?wait_ms={}",
                                      url_encode(id_), wait.count()));
  if (job.is_null()) return std::nullopt;
  return job.get<backend::JobPayload>();
}

void WorkerClient::heartbeat() {
  session_.post_json(fmt::format("/api/workers/{}/heartbeat/", url_encode(id_)),
                     json::object());
}

void WorkerClient::post_log(const std::string& execution_id,
                            const std::vector<std::string>& lines) {
  session_.post_json(fmt::format("/api/executions/{}/log/", url_encode(execution_id)),
                     {{"worker_id", id_}, {"lines", lines}});
}

json WorkerClient::post_result(const std::string& execution_id,
                               backend::ExecutionStatus status, const json& results) {
  return session_.post_json(
      fmt::format("/api/executions/{}/result/", url_encode(execution_id)),
      {{"worker_id", id_},
       {"status", backend::status_name(status)},
       {"results", results}});
}

namespace {

class Sleeper {
 public:
  explicit Sleeper(const std::atomic<bool>& stop) : stop_(stop) {}
  // Sleeps in short slices so `stop` is noticed quickly.
  void sleep(std::chrono::milliseconds d) {
    const auto until = std::chrono::steady_clock::now() + d;
    while (!stop_ && std::chrono::steady_clock::now() < until) {
      std::this_thread::sleep_for(std::min(d, std::chrono::milliseconds(50)));
    }
  }

 private:
  const std::atomic<bool>& stop_;
};

}  // namespace

int run_worker_loop(const std::string& base_url, const std::string& token,
                    const std::atomic<bool>& stop, WorkerLoopOptions options) {
  Sleeper sleeper(stop);
  WorkerClient worker(make_http_transport(base_url), token);
  auto backoff = std::chrono::milliseconds(250);
  while (!stop) {
    try {
      worker.register_worker({std::string(lp::kNativeKernelTag)});
      break;
    } catch (const TransportError& e) {
      spdlog::warn("worker: backend unreachable ({}); retrying in {} ms", e.what(),
                   backoff.count());
      sleeper.sleep(backoff);
      backoff = std::min(backoff * 2, options.max_backoff);
    }
  }
  if (stop) return 0;
  spdlog::info("worker {} registered", worker.id());

  std::atomic<bool> done{false};
  std::thread heart([&] {
    Sleeper hs(done);
    while (!done && !stop) {
      hs.sleep(options.heartbeat_interval);
      if (done || stop) break;
      try {
        worker.heartbeat();
      } catch (const std::exception& e) {
        spdlog::warn("worker heartbeat: {}", e.what());
      }
    }
  });

  int completed = 0;
  backoff = std::chrono::milliseconds(250);
  while (!stop && (!options.max_jobs || completed < *options.max_jobs)) {
    std::optional<backend::JobPayload> job;
    try {
      job = worker.next_job(options.poll_wait);
      backoff = std::chrono::milliseconds(250);
    } catch (const TransportError& e) {
      spdlog::warn("worker: poll failed ({}); retrying in {} ms", e.what(),
                   backoff.count());
      sleeper.sleep(backoff);
      backoff = std::min(backoff * 2, options.max_backoff);
      continue;
    } catch (const ApiError& e) {
      spdlog::error("worker: poll rejected: {}", e.what());
      sleeper.sleep(backoff);
      backoff = std::min(backoff * 2, options.max_backoff);
      continue;
    }
    if (!job) continue;
    spdlog::info("worker: running execution {}", job->execution_id);

    std::vector<std::string> pending;
    auto last_flush = std::chrono::steady_clock::now();
    auto flush = [&] {
      if (pending.empty()) return;
      try {
        worker.post_log(job->execution_id, pending);
      } catch (const std::exception& e) {
        spdlog::warn("worker: log upload failed: {}", e.what());
      }
      pending.clear();
      last_flush = std::chrono::steady_clock::now();
    };
    auto sink = [&](const std::string& line) {
      pending.push_back(line);
      if (std::chrono::steady_clock::now() - last_flush >= options.log_flush_interval) {
        flush();
      }
    };
    backend::JobOutcome out = backend::run_job(*job, sink);
    flush();
    try {
      worker.post_result(job->execution_id, out.status, out.results);
    } catch (const std::exception& e) {
      spdlog::warn("worker: result for {} rejected: {}", job->execution_id, e.what());
    }
    ++completed;
  }
  done = true;
  heart.join();
  return completed;
}

}  // namespace modelhub::client
