// Copyright 2026 The ModelHub Authors
// SPDX-License-Identifier: Apache-2.0

#include "modelhub/backend/service.h"

#include <algorithm>
#include <filesystem>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "modelhub/core/model.h"
#include "modelhub/lp/native_kernel.h"
#include "modelhub/lp/script.h"
#include "modelhub/parser/annotation_parser.h"
#include "modelhub/util/crypto.h"

namespace modelhub::backend {

using nlohmann::json;

namespace {

constexpr std::size_t kMaxNameLength = 200;
constexpr std::size_t kMaxLogLine = 64 * 1024;

json optional_timestamp(const std::optional<std::int64_t>& ms) {
  return ms ? json(format_timestamp(*ms)) : json(nullptr);
}

bool is_valid_object_value(const json& v) {
  if (v.is_number() || v.is_string()) return true;
  if (!v.is_array()) return false;
  return std::all_of(v.begin(), v.end(), [](const json& x) { return x.is_number(); });
}

std::string default_kernel_tag(const std::string& filename) {
  return std::filesystem::path(filename).extension() == ".mhl"
             ? std::string(lp::kNativeKernelTag)
             : std::string("script");
}

std::string join_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) {
    out += l;
    out += '\n';
  }
  return out;
}

}  // namespace

json ServiceError::body() const {
  json err = {{"code", status_}, {"message", what()}};
  if (!detail_.is_null()) err["detail"] = detail_;
  return {{"error", std::move(err)}};
}

json interface_value_view(const InterfaceValue& v) {
  if (v.kind == InterfaceValue::Kind::kObject) {
    return {{"kind", "object"},
            {"value", v.value},
            {"updated_at", format_timestamp(v.updated_at)}};
  }
  return {{"kind", "file"},
          {"filename", v.filename},
          {"size", v.size},
          {"sha256", v.blob},
          {"updated_at", format_timestamp(v.updated_at)}};
}

json execution_view(const ExecutionRow& e) {
  json snapshot = json::object();
  for (const auto& [name, v] : e.snapshot) snapshot[name] = interface_value_view(v);
  return {{"id", e.id},
          {"model_id", e.model_id},
          {"kernel_tag", e.kernel_tag},
          {"status", status_name(e.status)},
          {"worker_id", e.worker_id ? json(*e.worker_id) : json(nullptr)},
          {"requeues", e.requeues},
          {"created_at", format_timestamp(e.created_at)},
          {"queued_at", optional_timestamp(e.queued_at)},
          {"started_at", optional_timestamp(e.started_at)},
          {"ended_at", optional_timestamp(e.ended_at)},
          {"input_snapshot", std::move(snapshot)}};
}

ModelService::ModelService(Store& store, ServiceConfig config)
    : store_(store), config_(config) {}

ModelService::~ModelService() { shutdown(); }

void ModelService::start_reaper() {
  std::lock_guard lock(jobs_mu_);
  if (reaper_.joinable() || stopping_) return;
  reaper_ = std::thread([this] { reaper_loop(); });
}

void ModelService::shutdown() {
  {
    std::lock_guard lock(jobs_mu_);
    stopping_ = true;
  }
  jobs_cv_.notify_all();
  if (reaper_.joinable()) reaper_.join();
}

void ModelService::notify_jobs() {
  {
    std::lock_guard lock(jobs_mu_);
    ++jobs_generation_;
  }
  jobs_cv_.notify_all();
}

void ModelService::reaper_loop() {
  std::unique_lock lock(jobs_mu_);
  while (!stopping_) {
    jobs_cv_.wait_for(lock, config_.reaper_interval, [this] { return stopping_; });
    if (stopping_) break;
    lock.unlock();
    try {
      reap_lapsed(now_ms());
    } catch (const std::exception& e) {
      spdlog::error("reaper: {}", e.what());
    }
    lock.lock();
  }
}

std::size_t ModelService::reap_lapsed(std::int64_t now) {
  const std::int64_t cutoff = now - config_.heartbeat_lapse.count();
  std::size_t acted = 0;
  bool requeued = false;
  for (const auto& job : store_.lapsed_jobs(cutoff)) {
    if (job.requeues == 0) {
      if (store_.requeue_job(
              job,
              fmt::format("worker {} stopped sending heartbeats; job re-queued",
                          job.worker_id),
              now)) {
        spdlog::warn("execution {}: worker {} lapsed, re-queued", job.execution_id,
                     job.worker_id);
        requeued = true;
        ++acted;
      }
    } else if (store_.fail_lapsed_job(
                   job,
                   fmt::format("worker {} stopped sending heartbeats after a "
                               "re-queue; execution failed",
                               job.worker_id),
                   now)) {
      spdlog::warn("execution {}: worker {} lapsed again, failed",
                   job.execution_id, job.worker_id);
      ++acted;
    }
  }
  if (requeued) notify_jobs();
  return acted;
}

// ---- auth ----------------------------------------------------------------------

std::string ModelService::create_token(const std::string& user, TokenClass cls) {
  if (user.empty()) throw ServiceError(422, "user must not be empty");
  std::string token = util::random_hex(20);
  store_.add_token(util::sha256_hex(token), {user, cls, now_ms()});
  return token;
}

Principal ModelService::authenticate(const std::optional<std::string>& header) {
  constexpr std::string_view kScheme = "Token ";
  if (!header || header->size() <= kScheme.size() ||
      header->compare(0, kScheme.size(), kScheme) != 0) {
    throw ServiceError(401, "missing or malformed Authorization header");
  }
  const std::string token = header->substr(kScheme.size());
  auto rec = store_.find_token(util::sha256_hex(token));
  if (!rec) throw ServiceError(401, "invalid token");
  return {rec->user, rec->token_class};
}

void ModelService::require(const Principal& p, TokenClass cls) const {
  if (p.token_class != cls) {
    throw ServiceError(403, fmt::format("this endpoint requires a {} token",
                                        token_class_name(cls)));
  }
}

ModelRow ModelService::owned_model(const Principal& p, const std::string& id) {
  require(p, TokenClass::kUser);
  auto m = store_.find_model(id);
  if (!m || m->owner != p.user) {
    throw ServiceError(404, fmt::format("model '{}' not found", id));
  }
  return *m;
}

ExecutionRow ModelService::owned_execution(const Principal& p, const std::string& id) {
  require(p, TokenClass::kUser);
  auto e = store_.find_execution(id);
  if (!e || e->owner != p.user) {
    throw ServiceError(404, fmt::format("execution '{}' not found", id));
  }
  return *e;
}

WorkerRow ModelService::owned_worker(const Principal& p, const std::string& id) {
  require(p, TokenClass::kWorker);
  auto w = store_.find_worker(id);
  if (!w || w->owner != p.user) {
    throw ServiceError(404, fmt::format("worker '{}' not found", id));
  }
  return *w;
}

// ---- models ----------------------------------------------------------------------

json ModelService::model_view(const ModelRow& m) {
  json values = json::object();
  for (const auto& [name, v] : store_.interface_values(m.id)) {
    values[name] = interface_value_view(v);
  }
  auto latest = store_.latest_execution(m.id);
  return {{"id", m.id},
          {"name", m.name},
          {"owner", m.owner},
          {"kernel_tag", m.kernel_tag},
          {"filename", m.filename},
          {"source_sha256", m.source_blob},
          {"created_at", format_timestamp(m.created_at)},
          {"manifest", m.manifest},
          {"diagnostics", m.diagnostics},
          {"interface_values", std::move(values)},
          {"status", latest ? status_name(latest->status) : "created"}};
}

json ModelService::create_model(const Principal& p, const NewModel& req) {
  require(p, TokenClass::kUser);
  const Upload& file = req.file;
  if (file.content.size() > config_.max_file_bytes) {
    throw ServiceError(413, fmt::format("file exceeds {} bytes", config_.max_file_bytes));
  }
  std::string tag;
  if (req.comment_tag && !req.comment_tag->empty()) {
    tag = *req.comment_tag;
  } else {
    try {
      tag = detect_comment_tag(file.filename);
    } catch (const UnknownCommentTagError& e) {
      throw ServiceError(422, e.what());
    }
  }

  ParseResult parsed = parse(file.content, ParserConfig(tag));
  std::vector<Diagnostic> diags = parsed.diagnostics;
  for (auto& d : validate(parsed.manifest)) diags.push_back(std::move(d));
  if (has_errors(diags)) {
    throw ServiceError(422, "model source has errors",
                       json{{"diagnostics", diags}});
  }

  std::string kernel_tag = req.kernel_tag && !req.kernel_tag->empty()
                               ? *req.kernel_tag
                               : default_kernel_tag(file.filename);
  std::string name;
  if (req.name && !req.name->empty()) {
    name = *req.name;
  } else if (!parsed.manifest.name.empty()) {
    name = parsed.manifest.name;
  } else {
    name = std::filesystem::path(file.filename).stem().string();
  }
  if (name.empty()) throw ServiceError(422, "model name must not be empty");
  if (name.size() > kMaxNameLength) throw ServiceError(422, "model name is too long");

  std::map<std::string, json> defaults;
  if (kernel_tag == lp::kNativeKernelTag) {
    try {
      defaults = lp::parse_script(parsed.manifest, file.content).input_defaults();
    } catch (const lp::ScriptError& e) {
      diags.push_back({Severity::kWarning, std::nullopt, std::nullopt, e.what()});
    }
  }

  const std::int64_t now = now_ms();
  ModelRow row;
  row.id = util::random_hex(16);
  row.owner = p.user;
  row.name = name;
  row.kernel_tag = kernel_tag;
  row.filename = file.filename;
  row.source_blob = store_.put_blob(file.content);
  row.manifest = parsed.manifest;
  row.diagnostics = diags;
  row.created_at = now;
  try {
    store_.insert_model(row);
  } catch (const DuplicateNameError&) {
    throw ServiceError(409, fmt::format("a model named '{}' already exists", name));
  }
  for (const auto& [input, value] : defaults) {
    const Component* c = parsed.manifest.find(input);
    if (!c || c->kind != ComponentKind::kInterfaceObject) continue;
    InterfaceValue v;
    v.value = value;
    v.updated_at = now;
    store_.set_interface_value(row.id, input, v);
  }
  spdlog::info("model {} '{}' created by {}", row.id, name, p.user);
  return model_view(row);
}

json ModelService::list_models(const Principal& p, const std::optional<std::string>& name) {
  require(p, TokenClass::kUser);
  json out = json::array();
  for (const auto& m : store_.list_models(p.user, name)) {
    auto latest = store_.latest_execution(m.id);
    ModelManifest manifest = m.manifest.get<ModelManifest>();
    out.push_back({{"id", m.id},
                   {"name", m.name},
                   {"kernel_tag", m.kernel_tag},
                   {"description", manifest.description ? json(*manifest.description)
                                                        : json(nullptr)},
                   {"components", manifest.components.size()},
                   {"created_at", format_timestamp(m.created_at)},
                   {"status", latest ? status_name(latest->status) : "created"}});
  }
  return out;
}

json ModelService::get_model(const Principal& p, const std::string& id) {
  return model_view(owned_model(p, id));
}

void ModelService::delete_model(const Principal& p, const std::string& id) {
  owned_model(p, id);
  store_.delete_model(id);
}

json ModelService::components(const Principal& p, const std::string& id) {
  ModelRow m = owned_model(p, id);
  ModelManifest manifest = m.manifest.get<ModelManifest>();
  const std::string source = store_.get_blob(m.source_blob);
  json rows = json::array();
  for (const auto& c : manifest.components) {
    json row = ComponentRow{c.kind, c.name, c.description, c.order};
    row["span"] = c.span;
    row["source"] = c.span.end <= source.size()
                        ? source.substr(c.span.start, c.span.size())
                        : std::string();
    rows.push_back(std::move(row));
  }
  return {{"model_id", m.id},
          {"components", std::move(rows)},
          {"text", render_components(component_listing(manifest))}};
}

json ModelService::recipe(const Principal& p, const std::string& id) {
  ModelRow m = owned_model(p, id);
  Recipe r = build_recipe(m.manifest.get<ModelManifest>());
  json out = r;
  out["model_id"] = m.id;
  out["text"] = render_recipe(r);
  return out;
}

json ModelService::set_interface_object(const Principal& p, const std::string& id,
                                        const std::string& name, const json& value) {
  ModelRow m = owned_model(p, id);
  ModelManifest manifest = m.manifest.get<ModelManifest>();
  const Component* c = manifest.find(name);
  if (!c) throw ServiceError(404, fmt::format("component '{}' not found", name));
  if (c->kind != ComponentKind::kInterfaceObject) {
    throw ServiceError(422, fmt::format("component '{}' is a {}, not an Interface Object",
                                        name, keyword(c->kind)));
  }
  if (!is_valid_object_value(value)) {
    throw ServiceError(422, "value must be a number, a string or an array of numbers");
  }
  InterfaceValue v;
  v.value = value;
  v.updated_at = now_ms();
  store_.set_interface_value(id, name, v);
  return model_view(m);
}

json ModelService::set_interface_file(const Principal& p, const std::string& id,
                                      const std::string& name, const Upload& file) {
  ModelRow m = owned_model(p, id);
  ModelManifest manifest = m.manifest.get<ModelManifest>();
  const Component* c = manifest.find(name);
  if (!c) throw ServiceError(404, fmt::format("component '{}' not found", name));
  if (c->kind != ComponentKind::kInterfaceFile) {
    throw ServiceError(422, fmt::format("component '{}' is a {}, not an Interface File",
                                        name, keyword(c->kind)));
  }
  if (file.content.size() > config_.max_file_bytes) {
    throw ServiceError(413, fmt::format("file exceeds {} bytes", config_.max_file_bytes));
  }
  InterfaceValue v;
  v.kind = InterfaceValue::Kind::kFile;
  v.blob = store_.put_blob(file.content);
  v.filename = file.filename;
  v.size = static_cast<std::int64_t>(file.content.size());
  v.updated_at = now_ms();
  store_.set_interface_value(id, name, v);
  return model_view(m);
}

json ModelService::run(const Principal& p, const std::string& id) {
  ModelRow m = owned_model(p, id);
  Recipe r = build_recipe(m.manifest.get<ModelManifest>());
  auto values = store_.interface_values(id);
  std::vector<std::string> missing;
  for (const auto& in : r.inputs) {
    if (!values.count(in.name)) missing.push_back(in.name);
  }
  if (!missing.empty()) {
    throw ServiceError(409,
                       fmt::format("missing required inputs: {}", fmt::join(missing, ", ")),
                       json{{"missing", missing}});
  }
  std::map<std::string, InterfaceValue> snapshot;
  for (auto& [name, v] : values) {
    if (m.manifest.get<ModelManifest>().find(name)) snapshot.emplace(name, v);
  }

  const std::int64_t now = now_ms();
  ExecutionRow row;
  row.id = util::random_hex(16);
  row.model_id = id;
  row.owner = p.user;
  row.kernel_tag = m.kernel_tag;
  row.snapshot = std::move(snapshot);
  row.created_at = now;

  const bool live =
      store_.live_worker_for(m.kernel_tag, now - config_.heartbeat_lapse.count());
  if (!live) {
    const std::string reason = fmt::format(
        "no live worker serves kernel tag '{}'; execution not dispatched", m.kernel_tag);
    store_.insert_execution(row, {}, reason);
    throw ServiceError(503, reason, json{{"execution_id", row.id}});
  }
  store_.insert_execution(
      row, {fmt::format("queued for kernel tag '{}'", m.kernel_tag)}, std::nullopt);
  notify_jobs();
  return execution_view(*store_.find_execution(row.id));
}

json ModelService::status(const Principal& p, const std::string& id) {
  owned_model(p, id);
  auto latest = store_.latest_execution(id);
  return {{"model_id", id},
          {"status", latest ? status_name(latest->status) : "created"},
          {"execution_id", latest ? json(latest->id) : json(nullptr)}};
}

// ---- executions ------------------------------------------------------------------

json ModelService::execution(const Principal& p, const std::string& id) {
  return execution_view(owned_execution(p, id));
}

json ModelService::execution_log(const Principal& p, const std::string& id,
                                 std::size_t since) {
  ExecutionRow e = owned_execution(p, id);
  auto lines = store_.log_lines(id, since);
  std::string text = join_lines(lines);
  const std::size_t next = since + lines.size();
  return {{"execution_id", id},
          {"status", status_name(e.status)},
          {"lines", std::move(lines)},
          {"next", next},
          {"text", std::move(text)}};
}

json ModelService::execution_results(const Principal& p, const std::string& id) {
  ExecutionRow e = owned_execution(p, id);
  if (!is_terminal(e.status)) {
    throw ServiceError(409, fmt::format("execution is still {}", status_name(e.status)),
                       json{{"status", status_name(e.status)}});
  }
  return {{"execution_id", id}, {"status", status_name(e.status)}, {"results", e.results}};
}

// ---- workers -------------------------------------------------------------------

json ModelService::register_worker(const Principal& p,
                                   const std::set<std::string>& kernel_tags) {
  require(p, TokenClass::kWorker);
  if (kernel_tags.empty() ||
      std::any_of(kernel_tags.begin(), kernel_tags.end(),
                  [](const std::string& t) { return t.empty(); })) {
    throw ServiceError(422, "kernel_tags must be a non-empty list of non-empty strings");
  }
  const std::int64_t now = now_ms();
  WorkerRow w;
  w.id = util::random_hex(8);
  w.owner = p.user;
  w.kernel_tags = kernel_tags;
  w.registered_at = now;
  w.last_heartbeat = now;
  store_.insert_worker(w);
  spdlog::info("worker {} registered for [{}]", w.id, fmt::join(kernel_tags, ", "));
  return {{"id", w.id},
          {"kernel_tags", w.kernel_tags},
          {"registered_at", format_timestamp(now)},
          {"last_heartbeat", format_timestamp(now)},
          {"active_job", nullptr}};
}

JobPayload ModelService::build_payload(const ExecutionRow& e) {
  auto m = store_.find_model(e.model_id);
  if (!m) throw StoreError(fmt::format("model {} vanished", e.model_id));
  JobPayload job;
  job.execution_id = e.id;
  job.model_id = m->id;
  job.model_name = m->name;
  job.kernel_tag = e.kernel_tag;
  job.source = store_.get_blob(m->source_blob);
  job.manifest = m->manifest.get<ModelManifest>();
  for (const auto& [name, v] : e.snapshot) {
    if (v.kind == InterfaceValue::Kind::kObject) {
      job.inputs[name] = v.value;
    } else {
      job.attached_files.push_back({name, v.filename, store_.get_blob(v.blob)});
    }
  }
  return job;
}

std::optional<JobPayload> ModelService::next_job(const Principal& p,
                                                 const std::string& worker_id,
                                                 std::chrono::milliseconds wait) {
  WorkerRow w = owned_worker(p, worker_id);
  wait = std::clamp(wait, std::chrono::milliseconds(0), config_.long_poll);
  const auto deadline = std::chrono::steady_clock::now() + wait;
  while (true) {
    std::uint64_t generation;
    {
      std::lock_guard lock(jobs_mu_);
      if (stopping_) return std::nullopt;
      generation = jobs_generation_;
    }
    const std::int64_t now = now_ms();
    store_.touch_worker(worker_id, now);
    if (auto current = store_.find_worker(worker_id); current && current->active_job) {
      auto e = store_.find_execution(*current->active_job);
      if (e && e->status == ExecutionStatus::kRunning && e->worker_id == worker_id) {
        throw ServiceError(409, "worker already holds a running job",
                           json{{"execution_id", e->id}});
      }
    }
    if (auto id = store_.claim_job(worker_id, w.kernel_tags, now)) {
      auto e = store_.find_execution(*id);
      spdlog::info("execution {} assigned to worker {}", *id, worker_id);
      return build_payload(*e);
    }
    std::unique_lock lock(jobs_mu_);
    if (!jobs_cv_.wait_until(lock, deadline, [&] {
          return stopping_ || jobs_generation_ != generation;
        })) {
      return std::nullopt;
    }
  }
}

json ModelService::heartbeat(const Principal& p, const std::string& worker_id) {
  owned_worker(p, worker_id);
  const std::int64_t now = now_ms();
  store_.touch_worker(worker_id, now);
  auto w = store_.find_worker(worker_id);
  return {{"id", worker_id},
          {"last_heartbeat", format_timestamp(w->last_heartbeat)},
          {"active_job", w->active_job ? json(*w->active_job) : json(nullptr)}};
}

json ModelService::post_log(const Principal& p, const std::string& execution_id,
                            const std::string& worker_id,
                            const std::vector<std::string>& lines) {
  owned_worker(p, worker_id);
  if (!store_.find_execution(execution_id)) {
    throw ServiceError(404, fmt::format("execution '{}' not found", execution_id));
  }
  std::vector<std::string> clean;
  clean.reserve(lines.size());
  for (const auto& l : lines) clean.push_back(l.substr(0, kMaxLogLine));
  const std::int64_t now = now_ms();
  store_.touch_worker(worker_id, now);
  if (!store_.append_log(execution_id, clean, worker_id, now)) {
    throw ServiceError(409, "execution is not running on this worker");
  }
  return {{"execution_id", execution_id}, {"appended", clean.size()}};
}

json ModelService::post_result(const Principal& p, const std::string& execution_id,
                               const std::string& worker_id, ExecutionStatus status,
                               const json& results) {
  owned_worker(p, worker_id);
  if (!is_terminal(status)) throw ServiceError(422, "status must be success or error");
  if (!results.is_object()) throw ServiceError(422, "results must be an object");
  auto e = store_.find_execution(execution_id);
  if (!e) throw ServiceError(404, fmt::format("execution '{}' not found", execution_id));
  const std::int64_t now = now_ms();
  store_.touch_worker(worker_id, now);
  if (!store_.complete_execution(execution_id, worker_id, status, results, now)) {
    e = store_.find_execution(execution_id);
    throw ServiceError(409,
                       fmt::format("execution is {} and not running on this worker",
                                   status_name(e->status)),
                       json{{"status", status_name(e->status)}});
  }
  spdlog::info("execution {} finished: {}", execution_id, status_name(status));
  return execution_view(*store_.find_execution(execution_id));
}

}  // namespace modelhub::backend
