// Copyright 2026 The ModelHub Authors
// SPDX-License-Identifier: Apache-2.0

#include "modelhub/backend/protocol.h"

#include <chrono>
#include <ctime>

#include <fmt/chrono.h>
#include <fmt/format.h>

#include "modelhub/util/crypto.h"

namespace modelhub::backend {

std::string_view status_name(ExecutionStatus status) {
  switch (status) {
    case ExecutionStatus::kCreated:
      return "created";
    case ExecutionStatus::kQueued:
      return "queued";
    case ExecutionStatus::kRunning:
      return "running";
    case ExecutionStatus::kSuccess:
      return "success";
    case ExecutionStatus::kError:
      return "error";
  }
  return "unknown";
}

std::optional<ExecutionStatus> parse_status(std::string_view name) {
  for (auto s : {ExecutionStatus::kCreated, ExecutionStatus::kQueued,
                 ExecutionStatus::kRunning, ExecutionStatus::kSuccess,
                 ExecutionStatus::kError}) {
    if (status_name(s) == name) return s;
  }
  return std::nullopt;
}

bool is_terminal(ExecutionStatus status) {
  return status == ExecutionStatus::kSuccess ||
         status == ExecutionStatus::kError;
}

std::string_view token_class_name(TokenClass cls) {
  return cls == TokenClass::kWorker ? "worker" : "user";
}

std::optional<TokenClass> parse_token_class(std::string_view name) {
  if (name == "user") return TokenClass::kUser;
  if (name == "worker") return TokenClass::kWorker;
  return std::nullopt;
}

void to_json(nlohmann::json& j, const JobPayload& job) {
  nlohmann::json files = nlohmann::json::array();
  for (const auto& f : job.attached_files) {
    files.push_back({{"name", f.name},
                     {"filename", f.filename},
                     {"content_base64", util::base64_encode(f.content)}});
  }
  j = {{"execution_id", job.execution_id},
       {"model_id", job.model_id},
       {"model_name", job.model_name},
       {"kernel_tag", job.kernel_tag},
       {"source", job.source},
       {"manifest", job.manifest},
       {"inputs", job.inputs},
       {"attached_files", std::move(files)}};
}

void from_json(const nlohmann::json& j, JobPayload& job) {
  job.execution_id = j.at("execution_id").get<std::string>();
  job.model_id = j.value("model_id", "");
  job.model_name = j.value("model_name", "");
  job.kernel_tag = j.at("kernel_tag").get<std::string>();
  job.source = j.at("source").get<std::string>();
  job.manifest = j.at("manifest").get<ModelManifest>();
  job.inputs = j.value("inputs", std::map<std::string, nlohmann::json>{});
  job.attached_files.clear();
  for (const auto& f : j.value("attached_files", nlohmann::json::array())) {
    job.attached_files.push_back(
        {f.at("name").get<std::string>(), f.value("filename", ""),
         util::base64_decode(f.at("content_base64").get<std::string>())});
  }
}

std::int64_t now_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

std::string format_timestamp(std::int64_t ms) {
  const std::time_t secs = static_cast<std::time_t>(ms / 1000);
  return fmt::format("{:%Y-%m-%dT%H:%M:%S}.{:03d}Z", fmt::gmtime(secs),
                     static_cast<int>(ms % 1000));
}

}  // namespace modelhub::backend
