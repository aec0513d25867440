// Copyright 2026 The ModelHub Authors
// SPDX-License-Identifier: Apache-2.0

// REST front end over ModelService.

#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <thread>

#include "modelhub/backend/service.h"

namespace modelhub::backend {

struct ServerOptions {
  std::string host = "127.0.0.1";
  int port = 8000;  // 0 picks a free port
  std::size_t threads = 32;
};

class HttpServer {
 public:
  HttpServer(ModelService& service, ServerOptions options);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Binds the socket and returns the port. Throws on failure.
  int bind();
  // Serves until stop(); call after bind().
  void serve();
  // bind() plus serve() on a background thread; returns the port.
  int start();
  void stop();
  int port() const { return port_; }

 private:
  class Impl;
  std::unique_ptr<Impl> impl_;
  std::string host_;
  int port_ = 0;
  std::thread thread_;
};

}  // namespace modelhub::backend
