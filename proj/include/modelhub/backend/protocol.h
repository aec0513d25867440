// Copyright 2026 The ModelHub Authors
// SPDX-License-Identifier: Apache-2.0

// Types shared by the backend, its workers and the client library.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "modelhub/core/model.h"

namespace modelhub::backend {

enum class ExecutionStatus { kCreated, kQueued, kRunning, kSuccess, kError };

std::string_view status_name(ExecutionStatus status);
std::optional<ExecutionStatus> parse_status(std::string_view name);
bool is_terminal(ExecutionStatus status);

enum class TokenClass { kUser, kWorker };

std::string_view token_class_name(TokenClass cls);
std::optional<TokenClass> parse_token_class(std::string_view name);

struct AttachedFile {
  std::string name;      // InterfaceFile component
  std::string filename;  // name of the uploaded file
  std::string content;   // raw bytes
};

// Everything a worker needs to run one execution.
struct JobPayload {
  std::string execution_id;
  std::string model_id;
  std::string model_name;
  std::string kernel_tag;
  std::string source;
  ModelManifest manifest;
  std::map<std::string, nlohmann::json> inputs;  // InterfaceObject values
  std::vector<AttachedFile> attached_files;
};

// Files travel base64-encoded under "content_base64".
void to_json(nlohmann::json& j, const JobPayload& job);
void from_json(const nlohmann::json& j, JobPayload& job);

// Milliseconds since the Unix epoch.
std::int64_t now_ms();
// "2026-10-19T12:34:56.789Z"
std::string format_timestamp(std::int64_t ms);

}  // namespace modelhub::backend
