// Copyright 2026 The ModelHub Authors
// SPDX-License-Identifier: Apache-2.0

// Transport-independent backend operations. Every method authorizes its
// caller, validates input and returns the JSON body the REST layer sends;
// failures are ServiceError carrying the HTTP status.

#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <cstdint>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "modelhub/backend/protocol.h"
#include "modelhub/backend/store.h"

namespace modelhub::backend {

struct ServiceConfig {
  std::chrono::milliseconds long_poll{30'000};
  std::chrono::milliseconds heartbeat_lapse{90'000};
  std::chrono::milliseconds reaper_interval{1'000};
  std::size_t max_file_bytes = 16u << 20;
};

class ServiceError : public std::runtime_error {
 public:
  ServiceError(int status, std::string message,
               nlohmann::json detail = nullptr)
      : std::runtime_error(std::move(message)),
        status_(status),
        detail_(std::move(detail)) {}
  int status() const { return status_; }
  const nlohmann::json& detail() const { return detail_; }
  nlohmann::json body() const;

 private:
  int status_;
  nlohmann::json detail_;
};

struct Principal {
  std::string user;
  TokenClass token_class = TokenClass::kUser;
};

struct Upload {
  std::string filename;
  std::string content;
};

struct NewModel {
  Upload file;
  std::optional<std::string> name;
  std::optional<std::string> kernel_tag;
  std::optional<std::string> comment_tag;
};

class ModelService {
 public:
  ModelService(Store& store, ServiceConfig config = {});
  ~ModelService();
  ModelService(const ModelService&) = delete;
  ModelService& operator=(const ModelService&) = delete;

  const ServiceConfig& config() const { return config_; }
  Store& store() { return store_; }

  // Starts the thread that re-queues or fails jobs of lapsed workers.
  void start_reaper();
  // Stops the reaper and releases pending long-polls.
  void shutdown();
  // One reaper pass; returns the number of jobs acted on.
  std::size_t reap_lapsed(std::int64_t now);

  // Returns the raw token; only its hash is stored.
  std::string create_token(const std::string& user, TokenClass cls);
  // Parses "Token <hex>". Throws 401.
  Principal authenticate(const std::optional<std::string>& header);

  // Models (user tokens).
  nlohmann::json create_model(const Principal& p, const NewModel& req);
  nlohmann::json list_models(const Principal& p,
                             const std::optional<std::string>& name);
  nlohmann::json get_model(const Principal& p, const std::string& id);
  void delete_model(const Principal& p, const std::string& id);
  nlohmann::json components(const Principal& p, const std::string& id);
  nlohmann::json recipe(const Principal& p, const std::string& id);
  nlohmann::json set_interface_object(const Principal& p, const std::string& id,
                                      const std::string& name,
                                      const nlohmann::json& value);
  nlohmann::json set_interface_file(const Principal& p, const std::string& id,
                                    const std::string& name,
                                    const Upload& file);
  nlohmann::json run(const Principal& p, const std::string& id);
  nlohmann::json status(const Principal& p, const std::string& id);

  // Executions (user tokens).
  nlohmann::json execution(const Principal& p, const std::string& id);
  nlohmann::json execution_log(const Principal& p, const std::string& id,
                               std::size_t since);
  nlohmann::json execution_results(const Principal& p, const std::string& id);

  // Worker protocol (worker tokens).
  nlohmann::json register_worker(const Principal& p,
                                 const std::set<std::string>& kernel_tags);
  // Blocks up to `wait` (capped by config.long_poll) for a job.
  std::optional<JobPayload> next_job(const Principal& p,
                                     const std::string& worker_id,
                                     std::chrono::milliseconds wait);
  nlohmann::json heartbeat(const Principal& p, const std::string& worker_id);
  nlohmann::json post_log(const Principal& p, const std::string& execution_id,
                          const std::string& worker_id,
                          const std::vector<std::string>& lines);
  nlohmann::json post_result(const Principal& p,
                             const std::string& execution_id,
                             const std::string& worker_id,
                             ExecutionStatus status,
                             const nlohmann::json& results);

 private:
  void require(const Principal& p, TokenClass cls) const;
  ModelRow owned_model(const Principal& p, const std::string& id);
  ExecutionRow owned_execution(const Principal& p, const std::string& id);
  WorkerRow owned_worker(const Principal& p, const std::string& id);
  nlohmann::json model_view(const ModelRow& m);
  JobPayload build_payload(const ExecutionRow& e);
  void notify_jobs();
  void reaper_loop();

  Store& store_;
  ServiceConfig config_;

  std::mutex jobs_mu_;
  std::condition_variable jobs_cv_;
  std::uint64_t jobs_generation_ = 0;
  bool stopping_ = false;
  std::thread reaper_;
};

// Public JSON views.
nlohmann::json interface_value_view(const InterfaceValue& v);
nlohmann::json execution_view(const ExecutionRow& e);

}  // namespace modelhub::backend
