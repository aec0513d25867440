// Copyright 2026 The ModelHub Authors
// SPDX-License-Identifier: Apache-2.0

// modelhub-client: command-line front end of the client library. Models are
// addressed by name unless --id is given.

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "modelhub/client/client.h"

namespace {

using namespace modelhub::client;

constexpr int kApiFailure = 1;
constexpr int kNotFound = 4;
constexpr int kTimedOut = 3;

std::string env_or(const char* name, std::string fallback) {
  const char* v = std::getenv(name);
  return v && *v ? std::string(v) : fallback;
}

struct Target {
  std::string model;
  bool by_id = false;

  ModelHandle resolve(ClientSession& s) const {
    return by_id ? s.get_model(model) : s.get_model_with_name(model);
  }
};

void add_target(CLI::App* cmd, Target& t) {
  cmd->add_option("model", t.model, "Model name (or id with --id)")->required();
  cmd->add_flag("--id", t.by_id, "Treat the model argument as an id");
}

// Accepts JSON; anything that is not valid JSON is taken as a string.
nlohmann::json parse_value(const std::string& text) {
  auto v = nlohmann::json::parse(text, nullptr, false);
  return v.is_discarded() ? nlohmann::json(text) : v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ModelHub client"};
  app.require_subcommand(1);
  std::string url = env_or("MODELHUB_URL", "http://127.0.0.1:8000");
  std::string token = env_or("MODELHUB_TOKEN", "");
  int poll_ms = 500;
  int timeout_s = 600;
  app.add_option("--url", url, "Server base URL")->capture_default_str();
  app.add_option("--token", token, "API token (default $MODELHUB_TOKEN)");
  app.add_option("--poll-ms", poll_ms, "Status poll interval")->capture_default_str();
  app.add_option("--timeout", timeout_s, "Seconds to wait for a run")->capture_default_str();

  auto* upload = app.add_subcommand("upload", "Upload a model file");
  std::string upload_path;
  std::string upload_name;
  std::string upload_tag;
  upload->add_option("file", upload_path, "Model file")->required()->check(CLI::ExistingFile);
  upload->add_option("--name", upload_name, "Model name");
  upload->add_option("--kernel-tag", upload_tag, "Kernel tag");

  auto* set = app.add_subcommand("set", "Set an interface object or file");
  Target set_target;
  std::string set_name;
  std::string set_value;
  std::string set_file;
  add_target(set, set_target);
  set->add_option("name", set_name, "Interface component")->required();
  auto* value_opt = set->add_option("value", set_value, "JSON value");
  auto* file_opt =
      set->add_option("--file", set_file, "File for an interface file")->check(CLI::ExistingFile);
  value_opt->excludes(file_opt);

  auto* run = app.add_subcommand("run", "Run a model");
  Target run_target;
  bool no_wait = false;
  add_target(run, run_target);
  run->add_flag("--no-wait", no_wait, "Return once queued");

  auto* status = app.add_subcommand("status", "Status of the latest execution");
  Target status_target;
  add_target(status, status_target);

  auto* log = app.add_subcommand("log", "Log of the latest execution");
  Target log_target;
  add_target(log, log_target);

  auto* results = app.add_subcommand("results", "Results of the latest execution");
  Target results_target;
  std::string results_component;
  add_target(results, results_target);
  results->add_option("--component", results_component, "Print one component");

  auto* recipe = app.add_subcommand("recipe", "Show inputs, outputs and solve chain");
  Target recipe_target;
  add_target(recipe, recipe_target);

  auto* components = app.add_subcommand("components", "List model components");
  Target components_target;
  add_target(components, components_target);

  CLI11_PARSE(app, argc, argv);

  if (token.empty()) {
    std::cerr << "error: --token or MODELHUB_TOKEN is required\n";
    return 2;
  }
  try {
    SessionOptions opts;
    opts.poll_interval = std::chrono::milliseconds(poll_ms);
    opts.timeout = std::chrono::seconds(timeout_s);
    ClientSession session(url, token, opts);

    if (*upload) {
      ModelHandle m = session.new_model(
          upload_path, upload_name.empty() ? std::nullopt : std::optional(upload_name),
          upload_tag.empty() ? std::nullopt : std::optional(upload_tag));
      std::cout << m.id() << "\t" << m.name() << "\n";
      for (const auto& d : m.record()["diagnostics"]) {
        std::cerr << format_diagnostic(d.get<modelhub::Diagnostic>(), upload_path) << "\n";
      }
    } else if (*set) {
      ModelHandle m = set_target.resolve(session);
      if (!set_file.empty()) {
        m.set_interface_file(set_name, set_file);
      } else if (*value_opt) {
        m.set_interface_object(set_name, parse_value(set_value));
      } else {
        std::cerr << "error: give a value or --file\n";
        return 2;
      }
    } else if (*run) {
      ModelHandle m = run_target.resolve(session);
      Execution e = m.run(!no_wait);
      std::cout << e.id << "\t" << e.status << "\n";
      if (e.status == "error") return kApiFailure;
    } else if (*status) {
      std::cout << status_target.resolve(session).get_status() << "\n";
    } else if (*log) {
      std::cout << log_target.resolve(session).get_execution_log();
    } else if (*results) {
      ModelHandle m = results_target.resolve(session);
      if (results_component.empty()) {
        std::cout << m.get_results().dump(2) << "\n";
      } else {
        std::cout << m.get_output(results_component).dump() << "\n";
      }
    } else if (*recipe) {
      std::cout << recipe_target.resolve(session).show_recipe();
    } else if (*components) {
      std::cout << components_target.resolve(session).show_components();
    }
  } catch (const TimeoutError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kTimedOut;
  } catch (const NotFoundError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNotFound;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kApiFailure;
  }
  return 0;
}
