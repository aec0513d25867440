// Copyright 2026 The ModelHub Authors
// SPDX-License-Identifier: Apache-2.0

// Programmatic access to a ModelHub server:
//
//   ClientSession hub("http://localhost:8000", token);
//   ModelHandle model = hub.get_model_with_name("DCOPF Model");
//   model.set_interface_object("feastol", 1e-3);
//   model.set_interface_file("case", "ieee14.m");
//   Execution run = model.run();
//
// A session may be shared across threads for reads. Concurrent mutations of
// one model through one handle must be serialized by the caller.

#pragma once

#include <chrono>
#include <filesystem>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "modelhub/client/transport.h"
#include "modelhub/core/model.h"

namespace modelhub::client {

// The server answered with an error status.
class ApiError : public std::runtime_error {
 public:
  ApiError(int status, std::string message, nlohmann::json detail = nullptr);
  int status() const { return status_; }
  const std::string& server_message() const { return server_message_; }
  const nlohmann::json& detail() const { return detail_; }

 private:
  int status_;
  std::string server_message_;
  nlohmann::json detail_;
};

// A model, component, execution or result does not exist.
class NotFoundError : public ApiError {
 public:
  using ApiError::ApiError;
};

// run(wait) gave up before the execution finished.
class TimeoutError : public std::runtime_error {
 public:
  explicit TimeoutError(std::string execution_id);
  const std::string& execution_id() const { return execution_id_; }

 private:
  std::string execution_id_;
};

struct SessionOptions {
  std::chrono::milliseconds poll_interval{500};
  std::chrono::milliseconds timeout{10 * 60 * 1000};
  // Extra attempts for GET requests after a transport failure.
  int get_retries = 3;
  std::chrono::milliseconds retry_backoff{100};
};

struct Execution {
  std::string id;
  std::string model_id;
  std::string status;
  nlohmann::json record;

  bool terminal() const { return status == "success" || status == "error"; }
};

class ModelHandle;

class ClientSession {
 public:
  ClientSession(const std::string& base_url, std::string token,
                SessionOptions options = {});
  ClientSession(std::shared_ptr<Transport> transport, std::string token,
                SessionOptions options = {});

  const SessionOptions& options() const { return options_; }

  // Exact-name lookup; NotFoundError when no model has that name.
  ModelHandle get_model_with_name(const std::string& name);
  ModelHandle get_model(const std::string& id);
  // Uploads a model file. Name defaults to the file's Model annotation.
  ModelHandle new_model(const std::filesystem::path& path,
                        const std::optional<std::string>& name = std::nullopt,
                        const std::optional<std::string>& kernel_tag = std::nullopt);
  ModelHandle new_model_from_source(const std::string& filename,
                                    const std::string& content,
                                    const std::optional<std::string>& name = std::nullopt,
                                    const std::optional<std::string>& kernel_tag = std::nullopt);
  nlohmann::json list_models(const std::optional<std::string>& name = std::nullopt);
  void delete_model(const std::string& id);

  Execution execution(const std::string& id);
  std::string execution_log(const std::string& id);
  // Results of a finished execution; ApiError 409 while it runs.
  nlohmann::json execution_results(const std::string& id);
  // Polls until terminal; TimeoutError after options().timeout.
  Execution wait_for(const std::string& execution_id);

  // Raw JSON calls against the API. `path` is already percent-encoded.
  nlohmann::json get(const std::string& path);
  nlohmann::json post_json(const std::string& path, const nlohmann::json& body);
  nlohmann::json put_json(const std::string& path, const nlohmann::json& body);
  nlohmann::json send_multipart(
      const std::string& method, const std::string& path,
      const std::vector<std::pair<std::string, std::string>>& fields,
      const std::string& file_name, const std::string& file_content);
  void del(const std::string& path);

 private:
  HttpResponse send(HttpRequest request, bool retry);
  nlohmann::json decode(const HttpResponse& response);

  std::shared_ptr<Transport> transport_;
  std::string token_;
  SessionOptions options_;
};

class ModelHandle {
 public:
  ModelHandle(ClientSession& session, nlohmann::json record);

  const std::string& id() const { return id_; }
  const std::string& name() const { return name_; }
  const ModelManifest& manifest() const { return manifest_; }
  const nlohmann::json& record() const { return record_; }
  void refresh();

  void set_interface_object(const std::string& name, const nlohmann::json& value);
  void set_interface_file(const std::string& name, const std::filesystem::path& path);
  void set_interface_file_content(const std::string& name,
                                  const std::string& filename,
                                  const std::string& content);

  // One entry per line.
  std::string show_recipe();
  std::string show_components();
  nlohmann::json recipe();
  nlohmann::json components();

  // wait=true blocks until the execution is terminal.
  Execution run(bool wait = true);
  // Status of the latest execution, "created" when there is none.
  std::string get_status();
  // Log of the latest execution.
  std::string get_execution_log();
  // Results of the latest execution.
  nlohmann::json get_results();
  // One component's value; NotFoundError when absent from the results.
  nlohmann::json get_output(const std::string& component);

 private:
  void adopt(nlohmann::json record);
  std::string latest_execution_id();
  std::string base() const;

  ClientSession* session_;
  std::string id_;
  std::string name_;
  ModelManifest manifest_;
  nlohmann::json record_;
};

}  // namespace modelhub::client
