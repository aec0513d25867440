// Copyright 2026 The ModelHub Authors
// SPDX-License-Identifier: Apache-2.0

// modelhub: server, token administration, annotation parser and a
// standalone native-lp worker.

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "modelhub/backend/embedded_worker.h"
#include "modelhub/backend/server.h"
#include "modelhub/backend/service.h"
#include "modelhub/backend/store.h"
#include "modelhub/client/worker.h"
#include "modelhub/parser/annotation_parser.h"

namespace {

using namespace modelhub;

std::string env_or(const char* name, std::string fallback) {
  const char* v = std::getenv(name);
  return v && *v ? std::string(v) : fallback;
}

// Blocks SIGINT/SIGTERM in every thread so sigwait() can collect them.
sigset_t block_stop_signals() {
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);
  return set;
}

struct ServeArgs {
  std::string host = "127.0.0.1";
  int port = 8000;
  std::string data_dir = "modelhub-data";
  std::string embedded_worker = "on";
  int threads = 32;
  int long_poll_ms = 30'000;
  int lapse_ms = 90'000;
};

int serve(const ServeArgs& a) {
  sigset_t signals = block_stop_signals();
  backend::Store store(a.data_dir);
  backend::ServiceConfig config;
  config.long_poll = std::chrono::milliseconds(a.long_poll_ms);
  config.heartbeat_lapse = std::chrono::milliseconds(a.lapse_ms);
  backend::ModelService service(store, config);
  service.start_reaper();

  std::optional<backend::EmbeddedWorker> worker;
  if (a.embedded_worker == "on") {
    worker.emplace(service);
    worker->start();
  }
  backend::HttpServer server(service, {a.host, a.port, static_cast<std::size_t>(a.threads)});
  const int port = server.start();
  std::cout << fmt::format("modelhub listening on http://{}:{}", a.host, port)
            << std::endl;
  spdlog::info("data dir {}, embedded worker {}", a.data_dir, a.embedded_worker);

  int sig = 0;
  sigwait(&signals, &sig);
  spdlog::info("signal {}; shutting down", sig);
  service.shutdown();
  server.stop();
  if (worker) worker->stop();
  return 0;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int parse_command(const std::string& path, const std::string& tag_override, bool as_json) {
  const std::string source = read_file(path);
  const std::string tag = tag_override.empty() ? detect_comment_tag(path) : tag_override;
  ParseResult r = parse(source, ParserConfig(tag));
  std::vector<Diagnostic> diags = r.diagnostics;
  for (auto& d : validate(r.manifest)) diags.push_back(std::move(d));
  if (as_json) {
    std::cout << nlohmann::json{{"manifest", r.manifest}, {"diagnostics", diags}}.dump(2)
              << "\n";
  } else {
    if (!r.manifest.name.empty()) std::cout << "Model: " << r.manifest.name << "\n";
    std::cout << render_components(component_listing(r.manifest));
    for (const auto& d : diags) std::cerr << format_diagnostic(d, path) << "\n";
  }
  return has_errors(diags) ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ModelHub server and administration"};
  app.require_subcommand(1);

  ServeArgs serve_args;
  serve_args.port = std::stoi(env_or("MODELHUB_PORT", "8000"));
  serve_args.data_dir = env_or("MODELHUB_DATA_DIR", "modelhub-data");
  auto* serve_cmd = app.add_subcommand("serve", "Run the REST server");
  serve_cmd->add_option("--host", serve_args.host, "Listen address")->capture_default_str();
  serve_cmd->add_option("--port", serve_args.port, "Listen port (0 picks one)")
      ->capture_default_str();
  serve_cmd->add_option("--data-dir", serve_args.data_dir, "Database and blob directory")
      ->capture_default_str();
  serve_cmd->add_option("--embedded-worker", serve_args.embedded_worker,
                        "Run a native-lp worker in-process")
      ->check(CLI::IsMember({"on", "off"}))
      ->capture_default_str();
  serve_cmd->add_option("--threads", serve_args.threads, "HTTP worker threads")
      ->check(CLI::Range(4, 1024))
      ->capture_default_str();
  serve_cmd->add_option("--long-poll-ms", serve_args.long_poll_ms,
                        "Maximum job long-poll")
      ->check(CLI::Range(1, 3'600'000))
      ->capture_default_str();
  serve_cmd->add_option("--heartbeat-lapse-ms", serve_args.lapse_ms,
                        "Heartbeat silence before a job is re-queued")
      ->check(CLI::Range(1, 86'400'000))
      ->capture_default_str();

  auto* token_cmd = app.add_subcommand("token", "Manage API tokens");
  token_cmd->require_subcommand(1);
  auto* token_create = token_cmd->add_subcommand("create", "Create a token and print it");
  std::string token_user;
  bool token_worker = false;
  std::string token_data_dir = serve_args.data_dir;
  token_create->add_option("user", token_user, "Owner of the token")->required();
  token_create->add_flag("--worker", token_worker, "Create a worker token");
  token_create->add_option("--data-dir", token_data_dir, "Database and blob directory")
      ->capture_default_str();

  auto* parse_cmd = app.add_subcommand("parse", "Parse an annotated model file");
  std::string parse_path;
  std::string parse_tag;
  bool parse_json = false;
  parse_cmd->add_option("file", parse_path, "Model file")->required()->check(CLI::ExistingFile);
  parse_cmd->add_option("--comment-tag", parse_tag, "Override the comment tag");
  parse_cmd->add_flag("--json", parse_json, "Print the manifest as JSON");

  auto* worker_cmd = app.add_subcommand("worker", "Run a standalone native-lp worker");
  std::string worker_url = env_or("MODELHUB_URL", "http://127.0.0.1:8000");
  std::string worker_token = env_or("MODELHUB_WORKER_TOKEN", "");
  worker_cmd->add_option("--url", worker_url, "Backend base URL")->capture_default_str();
  worker_cmd->add_option("--token", worker_token, "Worker token");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*serve_cmd) return serve(serve_args);
    if (*token_create) {
      backend::Store store(token_data_dir);
      backend::ModelService service(store);
      std::cout << service.create_token(token_user, token_worker
                                                        ? backend::TokenClass::kWorker
                                                        : backend::TokenClass::kUser)
                << "\n";
      return 0;
    }
    if (*parse_cmd) return parse_command(parse_path, parse_tag, parse_json);
    if (*worker_cmd) {
      if (worker_token.empty()) {
        std::cerr << "worker: --token or MODELHUB_WORKER_TOKEN is required\n";
        return 2;
      }
      static std::atomic<bool> stop{false};
      std::signal(SIGINT, [](int) { stop = true; });
      std::signal(SIGTERM, [](int) { stop = true; });
      client::run_worker_loop(worker_url, worker_token, stop);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
