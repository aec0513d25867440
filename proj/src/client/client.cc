// Copyright 2026 The ModelHub Authors
// SPDX-License-Identifier: Apache-2.0

#include "modelhub/client/client.h"

#include <fstream>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "modelhub/util/crypto.h"

namespace modelhub::client {

using nlohmann::json;

namespace {

std::string read_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(fmt::format("cannot read {}", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string quote_header_value(const std::string& v) {
  std::string out;
  for (char c : v) {
    if (c == '"') {
      out += "%22";
    } else if (c == '\r' || c == '\n') {
      out += ' ';
    } else {
      out += c;
    }
  }
  return out;
}

}  // namespace

ApiError::ApiError(int status, std::string message, json detail)
    : std::runtime_error(fmt::format("HTTP {}: {}", status, message)),
      status_(status),
      server_message_(std::move(message)),
      detail_(std::move(detail)) {}

TimeoutError::TimeoutError(std::string execution_id)
    : std::runtime_error(
          fmt::format("execution {} did not finish in time", execution_id)),
      execution_id_(std::move(execution_id)) {}

// ---- session ---------------------------------------------------------------

ClientSession::ClientSession(const std::string& base_url, std::string token,
                             SessionOptions options)
    : ClientSession(make_http_transport(base_url), std::move(token), options) {}

ClientSession::ClientSession(std::shared_ptr<Transport> transport, std::string token,
                             SessionOptions options)
    : transport_(std::move(transport)), token_(std::move(token)), options_(options) {}

HttpResponse ClientSession::send(HttpRequest request, bool retry) {
  request.headers["Authorization"] = "Token " + token_;
  request.headers["Accept"] = "application/json";
  const int attempts = retry ? 1 + std::max(0, options_.get_retries) : 1;
  for (int i = 1;; ++i) {
    try {
      return transport_->send(request);
    } catch (const TransportError&) {
      if (i >= attempts) throw;
      std::this_thread::sleep_for(options_.retry_backoff * i);
    }
  }
}

json ClientSession::decode(const HttpResponse& response) {
  json body = response.body.empty() ? json(nullptr)
                                    : json::parse(response.body, nullptr, false);
  if (response.status >= 200 && response.status < 300) {
    if (body.is_discarded()) {
      throw ApiError(response.status, "response is not valid JSON");
    }
    return body;
  }
  std::string message = fmt::format("request failed with status {}", response.status);
  json detail;
  if (!body.is_discarded() && body.is_object() && body.contains("error")) {
    const json& err = body["error"];
    message = err.value("message", message);
    detail = err.value("detail", json());
  }
  if (response.status == 404) throw NotFoundError(404, message, detail);
  throw ApiError(response.status, message, detail);
}

json ClientSession::get(const std::string& path) {
  return decode(send({"GET", path, {}, "", ""}, true));
}

json ClientSession::post_json(const std::string& path, const json& body) {
  return decode(send({"POST", path, {}, body.dump(), "application/json"}, false));
}

json ClientSession::put_json(const std::string& path, const json& body) {
  return decode(send({"PUT", path, {}, body.dump(), "application/json"}, false));
}

void ClientSession::del(const std::string& path) {
  decode(send({"DELETE", path, {}, "", ""}, false));
}

json ClientSession::send_multipart(
    const std::string& method, const std::string& path,
    const std::vector<std::pair<std::string, std::string>>& fields,
    const std::string& file_name, const std::string& file_content) {
  std::string boundary;
  do {
    boundary = "modelhub-" + util::random_hex(12);
  } while (file_content.find(boundary) != std::string::npos);
  std::string body;
  for (const auto& [k, v] : fields) {
    body += fmt::format("--{}\r\nContent-Disposition: form-data; name=\"{}\"\r\n\r\n{}\r\n",
                        boundary, quote_header_value(k), v);
  }
  body += fmt::format(
      "--{}\r\nContent-Disposition: form-data; name=\"file\"; filename=\"{}\"\r\n"
      "Content-Type: application/octet-stream\r\n\r\n",
      boundary, quote_header_value(file_name));
  body += file_content;
  body += fmt::format("\r\n--{}--\r\n", boundary);
  return decode(send({method, path, {}, std::move(body),
                      "multipart/form-data; boundary=" + boundary},
                     false));
}

ModelHandle ClientSession::get_model_with_name(const std::string& name) {
  json list = list_models(name);
  for (const auto& m : list) {
    if (m.value("name", "") == name) return get_model(m.at("id").get<std::string>());
  }
  throw NotFoundError(404, fmt::format("no model named '{}'", name));
}

ModelHandle ClientSession::get_model(const std::string& id) {
  return ModelHandle(*this, get("/api/models/" + url_encode(id) + "/"));
}

ModelHandle ClientSession::new_model(const std::filesystem::path& path,
                                     const std::optional<std::string>& name,
                                     const std::optional<std::string>& kernel_tag) {
  return new_model_from_source(path.filename().string(), read_binary(path), name,
                               kernel_tag);
}

ModelHandle ClientSession::new_model_from_source(
    const std::string& filename, const std::string& content,
    const std::optional<std::string>& name,
    const std::optional<std::string>& kernel_tag) {
  std::vector<std::pair<std::string, std::string>> fields;
  if (name) fields.emplace_back("name", *name);
  if (kernel_tag) fields.emplace_back("kernel_tag", *kernel_tag);
  return ModelHandle(*this,
                     send_multipart("POST", "/api/models/", fields, filename, content));
}

json ClientSession::list_models(const std::optional<std::string>& name) {
  std::string path = "/api/models/";
  if (name) path += "?name=" + url_encode(*name);
  return get(path);
}

void ClientSession::delete_model(const std::string& id) {
  del("/api/models/" + url_encode(id) + "/");
}

Execution ClientSession::execution(const std::string& id) {
  json rec = get("/api/executions/" + url_encode(id) + "/");
  return {rec.at("id"), rec.at("model_id"), rec.at("status"), rec};
}

std::string ClientSession::execution_log(const std::string& id) {
  return get("/api/executions/" + url_encode(id) + "/log/").at("text");
}

json ClientSession::execution_results(const std::string& id) {
  return get("/api/executions/" + url_encode(id) + "/results/").at("results");
}

Execution ClientSession::wait_for(const std::string& execution_id) {
  const auto deadline = std::chrono::steady_clock::now() + options_.timeout;
  while (true) {
    Execution e = execution(execution_id);
    if (e.terminal()) return e;
    const auto now = std::chrono::steady_clock::now();
    if (now >= deadline) throw TimeoutError(execution_id);
    std::this_thread::sleep_for(std::min<std::chrono::steady_clock::duration>(
        options_.poll_interval, deadline - now));
  }
}

// ---- model handle ----------------------------------------------------------------

ModelHandle::ModelHandle(ClientSession& session, json record) : session_(&session) {
  adopt(std::move(record));
}

void ModelHandle::adopt(json record) {
  id_ = record.at("id").get<std::string>();
  name_ = record.value("name", "");
  manifest_ = record.at("manifest").get<ModelManifest>();
  record_ = std::move(record);
}

std::string ModelHandle::base() const { return "/api/models/" + url_encode(id_) + "/"; }

void ModelHandle::refresh() { adopt(session_->get(base())); }

void ModelHandle::set_interface_object(const std::string& name, const json& value) {
  adopt(session_->put_json(base() + "interface/objects/" + url_encode(name) + "/",
                           {{"value", value}}));
}

void ModelHandle::set_interface_file(const std::string& name,
                                     const std::filesystem::path& path) {
  set_interface_file_content(name, path.filename().string(), read_binary(path));
}

void ModelHandle::set_interface_file_content(const std::string& name,
                                             const std::string& filename,
                                             const std::string& content) {
  adopt(session_->send_multipart("PUT",
                                 base() + "interface/files/" + url_encode(name) + "/",
                                 {}, filename, content));
}

json ModelHandle::recipe() { return session_->get(base() + "recipe/"); }

json ModelHandle::components() { return session_->get(base() + "components/"); }

std::string ModelHandle::show_recipe() { return render_recipe(recipe().get<Recipe>()); }

std::string ModelHandle::show_components() {
  std::vector<ComponentRow> rows;
  const json listing = components();
  for (const auto& c : listing.at("components")) {
    rows.push_back(c.get<ComponentRow>());
  }
  return render_components(rows);
}

Execution ModelHandle::run(bool wait) {
  json rec = session_->post_json(base() + "run/", json::object());
  Execution e{rec.at("id"), rec.at("model_id"), rec.at("status"), rec};
  refresh();
  if (!wait || e.terminal()) return e;
  return session_->wait_for(e.id);
}

std::string ModelHandle::get_status() {
  return session_->get(base() + "status/").at("status");
}

std::string ModelHandle::latest_execution_id() {
  json st = session_->get(base() + "status/");
  if (st.at("execution_id").is_null()) {
    throw NotFoundError(404, fmt::format("model '{}' has no executions", name_));
  }
  return st.at("execution_id");
}

std::string ModelHandle::get_execution_log() {
  return session_->execution_log(latest_execution_id());
}

json ModelHandle::get_results() {
  return session_->execution_results(latest_execution_id());
}

json ModelHandle::get_output(const std::string& component) {
  json results = get_results();
  auto it = results.find(component);
  if (it == results.end()) {
    throw NotFoundError(404, fmt::format("component '{}' has no result", component));
  }
  return *it;
}

}  // namespace modelhub::client
