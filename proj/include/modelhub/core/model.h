// Copyright 2026 The ModelHub Authors
// SPDX-License-Identifier: Apache-2.0

// Standardized model representation: the component taxonomy, the manifest
// produced by the annotation parser, validation rules and the recipe summary.
// Everything here is an immutable value type; all operations are pure.

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace modelhub {

enum class ComponentKind {
  kModel,
  kDescription,
  kInterfaceObject,
  kInterfaceFile,
  kHelperObject,
  kVariable,
  kFunction,
  kConstraint,
  kObjective,
  kProblem,
  kSolver,
  kExecution,
  kOutputObject,
  kOutputFile,
};

// Canonical annotation keyword, e.g. "Output Object".
std::string_view keyword(ComponentKind kind);

// Serialized identifier, e.g. "OutputObject".
std::string_view kind_name(ComponentKind kind);

std::optional<ComponentKind> kind_from_keyword(std::string_view keyword);
std::optional<ComponentKind> kind_from_name(std::string_view name);

// Model and Description annotations never open a component.
bool opens_component(ComponentKind kind);

bool is_input_kind(ComponentKind kind);
bool is_output_kind(ComponentKind kind);

const std::vector<ComponentKind>& all_kinds();

// Byte range [start, end) into the model source.
struct SourceSpan {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - start; }
  friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

struct Component {
  ComponentKind kind = ComponentKind::kHelperObject;
  std::string name;
  std::optional<std::string> description;
  SourceSpan span;
  std::size_t order = 0;

  friend bool operator==(const Component&, const Component&) = default;
};

struct ModelManifest {
  std::string name;
  std::optional<std::string> description;
  std::string comment_tag;
  std::vector<Component> components;
  std::string source_digest;

  const Component* find(std::string_view component_name) const;

  friend bool operator==(const ModelManifest&, const ModelManifest&) = default;
};

enum class Severity { kError, kWarning };

std::string_view severity_name(Severity severity);

// Shared by the parser (which knows the line) and validation (which knows the
// component).
struct Diagnostic {
  Severity severity = Severity::kError;
  std::optional<std::size_t> line;  // 1-based
  std::optional<std::string> component;
  std::string message;

  bool is_error() const { return severity == Severity::kError; }
  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

bool has_errors(const std::vector<Diagnostic>& diagnostics);

// "file:12: error: message" style rendering.
std::string format_diagnostic(const Diagnostic& diagnostic,
                              std::string_view origin = {});

struct RecipeEntry {
  std::string name;
  ComponentKind kind = ComponentKind::kInterfaceObject;
  std::optional<std::string> description;

  friend bool operator==(const RecipeEntry&, const RecipeEntry&) = default;
};

// What a model needs, what it produces, and how it is solved.
struct Recipe {
  std::vector<RecipeEntry> inputs;
  std::vector<RecipeEntry> outputs;
  std::vector<std::string> solve_chain;

  friend bool operator==(const Recipe&, const Recipe&) = default;
};

struct ComponentRow {
  ComponentKind kind = ComponentKind::kHelperObject;
  std::string name;
  std::optional<std::string> description;
  std::size_t order = 0;

  friend bool operator==(const ComponentRow&, const ComponentRow&) = default;
};

class InvalidModelError : public std::runtime_error {
 public:
  InvalidModelError(std::string message, std::vector<Diagnostic> diagnostics)
      : std::runtime_error(std::move(message)),
        diagnostics_(std::move(diagnostics)) {}

  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

// Empty result iff the model is well-formed enough to run.
std::vector<Diagnostic> validate(const ModelManifest& manifest);

// Throws InvalidModelError when validate() reports errors.
Recipe build_recipe(const ModelManifest& manifest);

std::vector<ComponentRow> component_listing(const ModelManifest& manifest);

// Human-readable renderings used by the CLI and the client library.
std::string render_recipe(const Recipe& recipe);
std::string render_components(const std::vector<ComponentRow>& rows);

void to_json(nlohmann::json& j, ComponentKind kind);
void from_json(const nlohmann::json& j, ComponentKind& kind);
void to_json(nlohmann::json& j, const SourceSpan& span);
void from_json(const nlohmann::json& j, SourceSpan& span);
void to_json(nlohmann::json& j, const Component& component);
void from_json(const nlohmann::json& j, Component& component);
void to_json(nlohmann::json& j, const ModelManifest& manifest);
void from_json(const nlohmann::json& j, ModelManifest& manifest);
void to_json(nlohmann::json& j, const Diagnostic& diagnostic);
void from_json(const nlohmann::json& j, Diagnostic& diagnostic);
void to_json(nlohmann::json& j, const RecipeEntry& entry);
void from_json(const nlohmann::json& j, RecipeEntry& entry);
void to_json(nlohmann::json& j, const Recipe& recipe);
void from_json(const nlohmann::json& j, Recipe& recipe);
void to_json(nlohmann::json& j, const ComponentRow& row);
void from_json(const nlohmann::json& j, ComponentRow& row);

}  // namespace modelhub
