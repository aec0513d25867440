// Copyright 2026 The ModelHub Authors
// SPDX-License-Identifier: Apache-2.0

// The HTTP exchange the client library is built on, kept behind an
// interface so tests can record, replay or fake it.

#pragma once

#include <chrono>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>

namespace modelhub::client {

struct HttpRequest {
  std::string method;  // GET, POST, PUT, DELETE
  std::string target;  // percent-encoded path plus query, e.g. "/api/models/?name=A%2BB"
  std::map<std::string, std::string> headers;
  std::string body;
  std::string content_type;

  friend bool operator==(const HttpRequest&, const HttpRequest&) = default;
};

struct HttpResponse {
  int status = 0;
  std::string body;

  friend bool operator==(const HttpResponse&, const HttpResponse&) = default;
};

// The request never reached the server or no response came back.
class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Transport {
 public:
  virtual ~Transport() = default;
  // Throws TransportError on connection failure.
  virtual HttpResponse send(const HttpRequest& request) = 0;
};

struct HttpTransportOptions {
  std::chrono::milliseconds connect_timeout{5'000};
  // Longer than the server's 30 s long-poll.
  std::chrono::milliseconds read_timeout{60'000};
};

// Plain HTTP over cpp-httplib. `base_url` is http://host[:port] with no
// path; throws std::invalid_argument otherwise.
std::shared_ptr<Transport> make_http_transport(const std::string& base_url,
                                               HttpTransportOptions options = {});

// Percent-encodes one path segment or query value.
std::string url_encode(const std::string& value);

}  // namespace modelhub::client
