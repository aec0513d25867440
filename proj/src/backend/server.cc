// Copyright 2026 The ModelHub Authors
// SPDX-License-Identifier: Apache-2.0

#include "modelhub/backend/server.h"

#include <charconv>

#include <fmt/format.h>
#include <httplib.h>
#include <spdlog/spdlog.h>

namespace modelhub::backend {

using nlohmann::json;

namespace {

constexpr const char* kJson = "application/json";

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), kJson);
}

void send_error(httplib::Response& res, const ServiceError& e) {
  send_json(res, e.status(), e.body());
}

std::optional<std::string> header(const httplib::Request& req, const char* name) {
  if (!req.has_header(name)) return std::nullopt;
  return req.get_header_value(name);
}

std::optional<std::string> param(const httplib::Request& req, const char* name) {
  if (!req.has_param(name)) return std::nullopt;
  return req.get_param_value(name);
}

std::size_t size_param(const httplib::Request& req, const char* name,
                       std::size_t fallback) {
  auto v = param(req, name);
  if (!v) return fallback;
  std::size_t out = 0;
  auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
  if (ec != std::errc() || ptr != v->data() + v->size()) {
    throw ServiceError(400, fmt::format("query parameter '{}' must be a "
                                        "non-negative integer", name));
  }
  return out;
}

json parse_body(const httplib::Request& req) {
  json body = json::parse(req.body, nullptr, false);
  if (body.is_discarded() || !body.is_object()) {
    throw ServiceError(400, "request body must be a JSON object");
  }
  return body;
}

template <typename T>
T field(const json& body, const char* key) {
  auto it = body.find(key);
  if (it == body.end()) throw ServiceError(400, fmt::format("missing field '{}'", key));
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw ServiceError(400, fmt::format("field '{}' has the wrong type", key));
  }
}

std::optional<std::string> form_text(const httplib::Request& req, const char* key) {
  if (!req.has_file(key)) return std::nullopt;
  return req.get_file_value(key).content;
}

Upload form_file(const httplib::Request& req) {
  if (!req.is_multipart_form_data() || !req.has_file("file")) {
    throw ServiceError(400, "expected multipart form data with a 'file' part");
  }
  auto f = req.get_file_value("file");
  return {f.filename, f.content};
}

}  // namespace

class HttpServer::Impl {
 public:
  Impl(ModelService& service, ServerOptions options)
      : service_(service) {
    const std::size_t threads = options.threads;
    svr_.new_task_queue = [threads] { return new httplib::ThreadPool(threads); };
    svr_.set_payload_max_length(service_.config().max_file_bytes + (1u << 20));
    svr_.set_keep_alive_max_count(1000);
    svr_.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
      if (!res.body.empty()) return;
      const int status = res.status;
      std::string message = status == 404   ? "no such endpoint"
                            : status == 413 ? "request body too large"
                                            : httplib::status_message(status);
      spdlog::debug("{} {} -> {}", req.method, req.path, status);
      send_json(res, status, ServiceError(status, message).body());
    });
    routes();
  }

  httplib::Server svr_;

 private:
  using Handler = std::function<void(const httplib::Request&, httplib::Response&)>;

  Handler wrap(std::function<void(const httplib::Request&, httplib::Response&,
                                  const Principal&)>
                   fn) {
    return [this, fn = std::move(fn)](const httplib::Request& req,
                                      httplib::Response& res) {
      try {
        Principal p = service_.authenticate(header(req, "Authorization"));
        fn(req, res, p);
      } catch (const ServiceError& e) {
        send_error(res, e);
      } catch (const std::exception& e) {
        spdlog::error("{} {}: {}", req.method, req.path, e.what());
        send_error(res, ServiceError(500, "internal server error"));
      }
    };
  }

  void routes() {
    svr_.Get(R"(/api/health/?)", [](const httplib::Request&, httplib::Response& res) {
      send_json(res, 200, {{"status", "ok"}});
    });

    // Models.
    svr_.Get(R"(/api/models/?)", wrap([this](auto& req, auto& res, auto& p) {
               send_json(res, 200, service_.list_models(p, param(req, "name")));
             }));
    svr_.Post(R"(/api/models/?)", wrap([this](auto& req, auto& res, auto& p) {
                NewModel m;
                m.file = form_file(req);
                m.name = form_text(req, "name");
                m.kernel_tag = form_text(req, "kernel_tag");
                m.comment_tag = form_text(req, "comment_tag");
                send_json(res, 201, service_.create_model(p, m));
              }));
    svr_.Get(R"(/api/models/([^/]+)/?)", wrap([this](auto& req, auto& res, auto& p) {
               send_json(res, 200, service_.get_model(p, req.matches[1]));
             }));
    svr_.Delete(R"(/api/models/([^/]+)/?)", wrap([this](auto& req, auto& res, auto& p) {
                  service_.delete_model(p, req.matches[1]);
                  res.status = 204;
                }));
    svr_.Get(R"(/api/models/([^/]+)/components/?)",
             wrap([this](auto& req, auto& res, auto& p) {
               send_json(res, 200, service_.components(p, req.matches[1]));
             }));
    svr_.Get(R"(/api/models/([^/]+)/recipe/?)",
             wrap([this](auto& req, auto& res, auto& p) {
               send_json(res, 200, service_.recipe(p, req.matches[1]));
             }));
    svr_.Put(R"(/api/models/([^/]+)/interface/objects/([^/]+)/?)",
             wrap([this](auto& req, auto& res, auto& p) {
               json body = parse_body(req);
               if (!body.contains("value")) throw ServiceError(400, "missing field 'value'");
               send_json(res, 200,
                         service_.set_interface_object(p, req.matches[1], req.matches[2],
                                                       body["value"]));
             }));
    svr_.Put(R"(/api/models/([^/]+)/interface/files/([^/]+)/?)",
             wrap([this](auto& req, auto& res, auto& p) {
               send_json(res, 200,
                         service_.set_interface_file(p, req.matches[1], req.matches[2],
                                                     form_file(req)));
             }));
    svr_.Post(R"(/api/models/([^/]+)/run/?)", wrap([this](auto& req, auto& res, auto& p) {
                send_json(res, 201, service_.run(p, req.matches[1]));
              }));
    svr_.Get(R"(/api/models/([^/]+)/status/?)",
             wrap([this](auto& req, auto& res, auto& p) {
               send_json(res, 200, service_.status(p, req.matches[1]));
             }));

    // Executions.
    svr_.Get(R"(/api/executions/([^/]+)/?)", wrap([this](auto& req, auto& res, auto& p) {
               send_json(res, 200, service_.execution(p, req.matches[1]));
             }));
    svr_.Get(R"(/api/executions/([^/]+)/log/?)",
             wrap([this](auto& req, auto& res, auto& p) {
               send_json(res, 200,
                         service_.execution_log(p, req.matches[1],
                                                size_param(req, "since", 0)));
             }));
    svr_.Get(R"(/api/executions/([^/]+)/results/?)",
             wrap([this](auto& req, auto& res, auto& p) {
               send_json(res, 200, service_.execution_results(p, req.matches[1]));
             }));
    svr_.Post(R"(/api/executions/([^/]+)/log/?)",
              wrap([this](auto& req, auto& res, auto& p) {
                json body = parse_body(req);
                send_json(res, 200,
                          service_.post_log(p, req.matches[1],
                                            field<std::string>(body, "worker_id"),
                                            field<std::vector<std::string>>(body, "lines")));
              }));
    svr_.Post(R"(/api/executions/([^/]+)/result/?)",
              wrap([this](auto& req, auto& res, auto& p) {
                json body = parse_body(req);
                auto status = parse_status(field<std::string>(body, "status"));
                if (!status) throw ServiceError(422, "unknown status");
                json results = body.value("results", json::object());
                send_json(res, 200,
                          service_.post_result(p, req.matches[1],
                                               field<std::string>(body, "worker_id"),
                                               *status, results));
              }));

    // Workers.
    svr_.Post(R"(/api/workers/register/?)", wrap([this](auto& req, auto& res, auto& p) {
                json body = parse_body(req);
                send_json(res, 201,
                          service_.register_worker(
                              p, field<std::set<std::string>>(body, "kernel_tags")));
              }));
    svr_.Get(R"(/api/workers/([^/]+)/jobs/next/?)",
             wrap([this](auto& req, auto& res, auto& p) {
               const auto cap = static_cast<std::size_t>(service_.config().long_poll.count());
               auto wait = std::chrono::milliseconds(size_param(req, "wait_ms", cap));
               auto job = service_.next_job(p, req.matches[1], wait);
               if (!job) {
                 res.status = 204;
                 return;
               }
               send_json(res, 200, *job);
             }));
    svr_.Post(R"(/api/workers/([^/]+)/heartbeat/?)",
              wrap([this](auto& req, auto& res, auto& p) {
                send_json(res, 200, service_.heartbeat(p, req.matches[1]));
              }));
  }

  ModelService& service_;
};

HttpServer::HttpServer(ModelService& service, ServerOptions options)
    : impl_(std::make_unique<Impl>(service, options)),
      host_(options.host),
      port_(options.port) {}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind() {
  if (port_ == 0) {
    port_ = impl_->svr_.bind_to_any_port(host_);
    if (port_ <= 0) throw std::runtime_error(fmt::format("cannot bind {}", host_));
  } else if (!impl_->svr_.bind_to_port(host_, port_)) {
    throw std::runtime_error(fmt::format("cannot bind {}:{}", host_, port_));
  }
  return port_;
}

void HttpServer::serve() { impl_->svr_.listen_after_bind(); }

int HttpServer::start() {
  bind();
  thread_ = std::thread([this] { serve(); });
  impl_->svr_.wait_until_ready();
  return port_;
}

void HttpServer::stop() {
  impl_->svr_.stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace modelhub::backend
