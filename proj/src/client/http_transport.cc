// Copyright 2026 The ModelHub Authors
// SPDX-License-Identifier: Apache-2.0

#include <mutex>
#include <regex>
#include <vector>

#include <fmt/format.h>
#include <httplib.h>

#include "modelhub/client/transport.h"

namespace modelhub::client {

namespace {

class HttpTransport : public Transport {
 public:
  HttpTransport(std::string base_url, HttpTransportOptions options)
      : base_url_(std::move(base_url)), options_(options) {}

  HttpResponse send(const HttpRequest& request) override {
    httplib::Request req;
    req.method = request.method;
    req.path = request.target;
    for (const auto& [k, v] : request.headers) req.set_header(k, v);
    req.body = request.body;
    if (!request.content_type.empty()) {
      req.set_header("Content-Type", request.content_type);
    }
    auto client = acquire();
    httplib::Result res = client->send(req);
    if (!res) {
      throw TransportError(fmt::format("{} {}: {}", request.method, request.target,
                                       httplib::to_string(res.error())));
    }
    release(std::move(client));
    return {res->status, res->body};
  }

 private:
  // httplib::Client serves one request at a time; idle clients are pooled
  // so concurrent callers each get their own connection.
  std::unique_ptr<httplib::Client> acquire() {
    {
      std::lock_guard lock(mu_);
      if (!idle_.empty()) {
        auto c = std::move(idle_.back());
        idle_.pop_back();
        return c;
      }
    }
    auto c = std::make_unique<httplib::Client>(base_url_);
    c->set_url_encode(false);
    c->set_keep_alive(true);
    c->set_connection_timeout(options_.connect_timeout);
    c->set_read_timeout(options_.read_timeout);
    c->set_write_timeout(options_.read_timeout);
    return c;
  }

  void release(std::unique_ptr<httplib::Client> c) {
    std::lock_guard lock(mu_);
    if (idle_.size() < 8) idle_.push_back(std::move(c));
  }

  std::string base_url_;
  HttpTransportOptions options_;
  std::mutex mu_;
  std::vector<std::unique_ptr<httplib::Client>> idle_;
};

}  // namespace

std::string url_encode(const std::string& value) {
  return httplib::detail::encode_query_param(value);
}

std::shared_ptr<Transport> make_http_transport(const std::string& base_url,
                                               HttpTransportOptions options) {
  static const std::regex kBase(R"(^http://[^/?#]+/?$)");
  if (!std::regex_match(base_url, kBase)) {
    throw std::invalid_argument(
        fmt::format("base url '{}' must be http://host[:port]", base_url));
  }
  std::string url = base_url;
  if (url.back() == '/') url.pop_back();
  return std::make_shared<HttpTransport>(url, options);
}

}  // namespace modelhub::client
