// Copyright 2026 The ModelHub Authors
// SPDX-License-Identifier: Apache-2.0

// A native-lp worker living inside the server process. It talks to the
// service directly and runs jobs on its own thread.

#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <mutex>
#include <string>
#include <thread>

#include "modelhub/backend/service.h"

namespace modelhub::backend {

class EmbeddedWorker {
 public:
  // Registers a worker owned by `owner` with tag native-lp.
  EmbeddedWorker(ModelService& service, std::string owner = "embedded");
  ~EmbeddedWorker();
  EmbeddedWorker(const EmbeddedWorker&) = delete;
  EmbeddedWorker& operator=(const EmbeddedWorker&) = delete;

  const std::string& id() const { return id_; }
  void start();
  void stop();

 private:
  void poll_loop();
  void heartbeat_loop();

  ModelService& service_;
  Principal principal_;
  std::string id_;
  std::atomic<bool> stopping_{false};
  std::mutex mu_;
  std::condition_variable cv_;
  std::thread poller_;
  std::thread heart_;
};

}  // namespace modelhub::backend
