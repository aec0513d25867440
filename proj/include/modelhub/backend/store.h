// Copyright 2026 The ModelHub Authors
// SPDX-License-Identifier: Apache-2.0

// Durable state of the backend: an SQLite database plus content-addressed
// blob files, both under one data directory. Every method is atomic with
// respect to every other (one connection, one mutex); state transitions are
// compare-and-set updates that report whether they applied.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "modelhub/backend/protocol.h"

struct sqlite3;

namespace modelhub::backend {

class StoreError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DuplicateNameError : public StoreError {
 public:
  using StoreError::StoreError;
};

struct TokenRecord {
  std::string user;
  TokenClass token_class = TokenClass::kUser;
  std::int64_t created_at = 0;
};

struct ModelRow {
  std::string id;
  std::string owner;
  std::string name;
  std::string kernel_tag;
  std::string filename;
  std::string source_blob;  // sha256 of the source bytes
  nlohmann::json manifest;
  nlohmann::json diagnostics;  // array
  std::int64_t created_at = 0;
  std::int64_t seq = 0;
};

struct InterfaceValue {
  enum class Kind { kObject, kFile };
  Kind kind = Kind::kObject;
  nlohmann::json value;  // kObject
  std::string blob;      // kFile: sha256 of the bytes
  std::string filename;  // kFile
  std::int64_t size = 0;  // kFile
  std::int64_t updated_at = 0;

  friend bool operator==(const InterfaceValue&, const InterfaceValue&) = default;
};

void to_json(nlohmann::json& j, const InterfaceValue& v);
void from_json(const nlohmann::json& j, InterfaceValue& v);

struct ExecutionRow {
  std::string id;
  std::int64_t seq = 0;
  std::string model_id;
  std::string owner;
  std::string kernel_tag;
  ExecutionStatus status = ExecutionStatus::kCreated;
  std::map<std::string, InterfaceValue> snapshot;
  nlohmann::json results = nlohmann::json::object();
  std::optional<std::string> worker_id;
  int requeues = 0;
  std::int64_t created_at = 0;
  std::optional<std::int64_t> queued_at;
  std::optional<std::int64_t> started_at;
  std::optional<std::int64_t> ended_at;
};

struct WorkerRow {
  std::string id;
  std::string owner;
  std::set<std::string> kernel_tags;
  std::int64_t registered_at = 0;
  std::int64_t last_heartbeat = 0;
  std::optional<std::string> active_job;
};

// A job whose worker stopped heartbeating.
struct LapsedJob {
  std::string execution_id;
  std::string worker_id;
  int requeues = 0;
};

class Store {
 public:
  // Opens (creating if needed) <data_dir>/modelhub.db and <data_dir>/blobs.
  explicit Store(std::filesystem::path data_dir);
  ~Store();
  Store(const Store&) = delete;
  Store& operator=(const Store&) = delete;

  const std::filesystem::path& data_dir() const { return data_dir_; }

  // Tokens, keyed by the sha256 of the token value.
  void add_token(const std::string& token_hash, const TokenRecord& record);
  std::optional<TokenRecord> find_token(const std::string& token_hash);

  // Writes bytes durably (temp file, fsync, rename) and returns their
  // sha256. Idempotent.
  std::string put_blob(std::string_view bytes);
  std::string get_blob(const std::string& sha);

  // Throws DuplicateNameError when (owner, name) exists.
  void insert_model(const ModelRow& row);
  std::optional<ModelRow> find_model(const std::string& id);
  // Newest first; exact name filter when given.
  std::vector<ModelRow> list_models(const std::string& owner,
                                    const std::optional<std::string>& name);
  // Removes the model, its interface values, executions and logs.
  bool delete_model(const std::string& id);

  void set_interface_value(const std::string& model_id, const std::string& name,
                           const InterfaceValue& value);
  std::map<std::string, InterfaceValue> interface_values(
      const std::string& model_id);

  // Inserts with status created, then moves to queued, in one transaction.
  // When `fail_message` is set the execution instead goes created -> error
  // with that log line.
  void insert_execution(const ExecutionRow& row,
                        const std::vector<std::string>& log_lines,
                        const std::optional<std::string>& fail_message);
  std::optional<ExecutionRow> find_execution(const std::string& id);
  std::optional<ExecutionRow> latest_execution(const std::string& model_id);
  std::vector<ExecutionRow> list_executions(const std::string& model_id);

  // Assigns the oldest claimable job (queued, or running without a worker
  // after a re-queue) whose kernel tag the worker serves, moves it to
  // running and marks the worker busy.
  std::optional<std::string> claim_job(const std::string& worker_id,
                                       const std::set<std::string>& tags,
                                       std::int64_t now);

  // running -> success|error, only for the assigned worker. Frees the
  // worker. False when the execution is not running on that worker.
  bool complete_execution(const std::string& id, const std::string& worker_id,
                          ExecutionStatus status, const nlohmann::json& results,
                          std::int64_t now);

  // Appends lines while the execution is queued or running (and, when
  // `worker_id` is set, assigned to that worker). False otherwise.
  bool append_log(const std::string& id, const std::vector<std::string>& lines,
                  const std::optional<std::string>& worker_id, std::int64_t now);
  std::vector<std::string> log_lines(const std::string& id,
                                     std::size_t since = 0);

  void insert_worker(const WorkerRow& row);
  std::optional<WorkerRow> find_worker(const std::string& id);
  void touch_worker(const std::string& id, std::int64_t now);
  bool live_worker_for(const std::string& tag, std::int64_t cutoff);
  std::vector<LapsedJob> lapsed_jobs(std::int64_t cutoff);
  // First lapse: detach the job from the worker so another may claim it.
  bool requeue_job(const LapsedJob& job, const std::string& log_line,
                   std::int64_t now);
  // Second lapse: running -> error.
  bool fail_lapsed_job(const LapsedJob& job, const std::string& log_line,
                       std::int64_t now);

 private:
  class Statement;
  class Transaction;

  void exec(const char* sql);
  ModelRow read_model(Statement& st);
  ExecutionRow read_execution(Statement& st);
  void append_log_locked(const std::string& id,
                         const std::vector<std::string>& lines,
                         std::int64_t now);

  std::filesystem::path data_dir_;
  std::filesystem::path blob_dir_;
  sqlite3* db_ = nullptr;
  std::mutex mu_;
};

}  // namespace modelhub::backend
