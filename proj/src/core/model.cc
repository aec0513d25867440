// Copyright 2026 The ModelHub Authors
// SPDX-License-Identifier: Apache-2.0

#include "modelhub/core/model.h"

#include <algorithm>
#include <array>
#include <map>
#include <utility>

#include <fmt/format.h>

namespace modelhub {
namespace {

struct KindInfo {
  ComponentKind kind;
  std::string_view keyword;
  std::string_view name;
};

constexpr std::array<KindInfo, 14> kKinds = {{
    {ComponentKind::kModel, "Model", "Model"},
    {ComponentKind::kDescription, "Description", "Description"},
    {ComponentKind::kInterfaceObject, "Interface Object", "InterfaceObject"},
    {ComponentKind::kInterfaceFile, "Interface File", "InterfaceFile"},
    {ComponentKind::kHelperObject, "Helper Object", "HelperObject"},
    {ComponentKind::kVariable, "Variable", "Variable"},
    {ComponentKind::kFunction, "Function", "Function"},
    {ComponentKind::kConstraint, "Constraint", "Constraint"},
    {ComponentKind::kObjective, "Objective", "Objective"},
    {ComponentKind::kProblem, "Problem", "Problem"},
    {ComponentKind::kSolver, "Solver", "Solver"},
    {ComponentKind::kExecution, "Execution", "Execution"},
    {ComponentKind::kOutputObject, "Output Object", "OutputObject"},
    {ComponentKind::kOutputFile, "Output File", "OutputFile"},
}};

const KindInfo& info(ComponentKind kind) {
  return kKinds[static_cast<std::size_t>(kind)];
}

bool any_of_kind(const ModelManifest& m, ComponentKind kind) {
  return std::any_of(m.components.begin(), m.components.end(),
                     [kind](const Component& c) { return c.kind == kind; });
}

}  // namespace

std::string_view keyword(ComponentKind kind) { return info(kind).keyword; }
std::string_view kind_name(ComponentKind kind) { return info(kind).name; }

std::optional<ComponentKind> kind_from_keyword(std::string_view kw) {
  for (const auto& k : kKinds) {
    if (k.keyword == kw) return k.kind;
  }
  return std::nullopt;
}

std::optional<ComponentKind> kind_from_name(std::string_view name) {
  for (const auto& k : kKinds) {
    if (k.name == name) return k.kind;
  }
  return std::nullopt;
}

bool opens_component(ComponentKind kind) {
  return kind != ComponentKind::kModel && kind != ComponentKind::kDescription;
}

bool is_input_kind(ComponentKind kind) {
  return kind == ComponentKind::kInterfaceObject ||
         kind == ComponentKind::kInterfaceFile;
}

bool is_output_kind(ComponentKind kind) {
  return kind == ComponentKind::kOutputObject ||
         kind == ComponentKind::kOutputFile;
}

const std::vector<ComponentKind>& all_kinds() {
  static const std::vector<ComponentKind> kAll = [] {
    std::vector<ComponentKind> v;
    for (const auto& k : kKinds) v.push_back(k.kind);
    return v;
  }();
  return kAll;
}

const Component* ModelManifest::find(std::string_view component_name) const {
  for (const auto& c : components) {
    if (c.name == component_name) return &c;
  }
  return nullptr;
}

std::string_view severity_name(Severity severity) {
  return severity == Severity::kError ? "error" : "warning";
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [](const Diagnostic& d) { return d.is_error(); });
}

std::string format_diagnostic(const Diagnostic& d, std::string_view origin) {
  std::string out;
  if (!origin.empty()) out += fmt::format("{}:", origin);
  if (d.line) out += fmt::format("{}:", *d.line);
  if (!out.empty()) out += ' ';
  out += fmt::format("{}: ", severity_name(d.severity));
  if (d.component) out += fmt::format("[{}] ", *d.component);
  out += d.message;
  return out;
}

std::vector<Diagnostic> validate(const ModelManifest& manifest) {
  std::vector<Diagnostic> out;
  auto error = [&out](std::optional<std::string> component, std::string msg) {
    out.push_back({Severity::kError, std::nullopt, std::move(component),
                   std::move(msg)});
  };
  auto warning = [&out](std::optional<std::string> component, std::string msg) {
    out.push_back({Severity::kWarning, std::nullopt, std::move(component),
                   std::move(msg)});
  };

  if (manifest.components.empty()) {
    warning(std::nullopt, "model has no annotated components");
    return out;
  }

  // One error per duplicated name, reported in order of first appearance.
  std::map<std::string, std::size_t> counts;
  for (const auto& c : manifest.components) ++counts[c.name];
  for (const auto& c : manifest.components) {
    auto it = counts.find(c.name);
    if (it != counts.end() && it->second > 1) {
      error(c.name, fmt::format("component name '{}' is used {} times",
                                c.name, it->second));
      counts.erase(it);
    }
  }

  const bool has_problem = any_of_kind(manifest, ComponentKind::kProblem);
  const bool has_execution = any_of_kind(manifest, ComponentKind::kExecution);
  for (const auto& c : manifest.components) {
    if (c.kind == ComponentKind::kExecution && !has_problem) {
      error(c.name, "Execution present but the model declares no Problem");
    } else if (c.kind == ComponentKind::kObjective && !has_problem) {
      warning(c.name, "Objective present but the model declares no Problem");
    } else if (c.kind == ComponentKind::kSolver && !has_execution) {
      warning(c.name, "Solver present but the model declares no Execution");
    }
  }
  return out;
}

Recipe build_recipe(const ModelManifest& manifest) {
  auto diagnostics = validate(manifest);
  if (has_errors(diagnostics)) {
    throw InvalidModelError("model has validation errors", diagnostics);
  }
  Recipe recipe;
  for (const auto& c : manifest.components) {
    if (is_input_kind(c.kind)) {
      recipe.inputs.push_back({c.name, c.kind, c.description});
    } else if (is_output_kind(c.kind)) {
      recipe.outputs.push_back({c.name, c.kind, c.description});
    } else if (c.kind == ComponentKind::kProblem ||
               c.kind == ComponentKind::kSolver ||
               c.kind == ComponentKind::kExecution) {
      recipe.solve_chain.push_back(c.name);
    }
  }
  return recipe;
}

std::vector<ComponentRow> component_listing(const ModelManifest& manifest) {
  std::vector<ComponentRow> rows;
  rows.reserve(manifest.components.size());
  for (const auto& c : manifest.components) {
    rows.push_back({c.kind, c.name, c.description, c.order});
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const auto& a, const auto& b) { return a.order < b.order; });
  return rows;
}

std::string render_recipe(const Recipe& recipe) {
  auto entries = [](const std::vector<RecipeEntry>& list) {
    std::string out;
    if (list.empty()) return std::string("  (none)\n");
    for (const auto& e : list) {
      out += fmt::format("  {:<16} {}", kind_name(e.kind), e.name);
      if (e.description) out += fmt::format("  {}", *e.description);
      out += '\n';
    }
    return out;
  };
  std::string out = "Inputs:\n" + entries(recipe.inputs);
  out += "Outputs:\n" + entries(recipe.outputs);
  out += "Solve chain: ";
  out += recipe.solve_chain.empty()
             ? std::string("(none)")
             : fmt::format("{}", fmt::join(recipe.solve_chain, " -> "));
  out += '\n';
  return out;
}

std::string render_components(const std::vector<ComponentRow>& rows) {
  std::string out;
  for (const auto& r : rows) {
    out += fmt::format("{:<16} {:<20} {}\n", kind_name(r.kind), r.name,
                       r.description.value_or(""));
  }
  return out;
}

// ---- JSON ----------------------------------------------------------------

namespace {

nlohmann::json optional_string(const std::optional<std::string>& s) {
  return s ? nlohmann::json(*s) : nlohmann::json(nullptr);
}

std::optional<std::string> read_optional_string(const nlohmann::json& j,
                                                const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<std::string>();
}

}  // namespace

void to_json(nlohmann::json& j, ComponentKind kind) {
  j = std::string(kind_name(kind));
}

void from_json(const nlohmann::json& j, ComponentKind& kind) {
  auto parsed = kind_from_name(j.get<std::string>());
  if (!parsed) {
    throw std::invalid_argument("unknown component kind: " +
                                j.get<std::string>());
  }
  kind = *parsed;
}

void to_json(nlohmann::json& j, const SourceSpan& span) {
  j = {{"start", span.start}, {"end", span.end}};
}

void from_json(const nlohmann::json& j, SourceSpan& span) {
  span.start = j.at("start").get<std::size_t>();
  span.end = j.at("end").get<std::size_t>();
}

void to_json(nlohmann::json& j, const Component& c) {
  j = {{"kind", c.kind},
       {"name", c.name},
       {"description", optional_string(c.description)},
       {"span", c.span},
       {"order", c.order}};
}

void from_json(const nlohmann::json& j, Component& c) {
  c.kind = j.at("kind").get<ComponentKind>();
  c.name = j.at("name").get<std::string>();
  c.description = read_optional_string(j, "description");
  c.span = j.at("span").get<SourceSpan>();
  c.order = j.at("order").get<std::size_t>();
}

void to_json(nlohmann::json& j, const ModelManifest& m) {
  j = {{"name", m.name},
       {"description", optional_string(m.description)},
       {"comment_tag", m.comment_tag},
       {"source_digest", m.source_digest},
       {"components", m.components}};
}

void from_json(const nlohmann::json& j, ModelManifest& m) {
  m.name = j.at("name").get<std::string>();
  m.description = read_optional_string(j, "description");
  m.comment_tag = j.at("comment_tag").get<std::string>();
  m.source_digest = j.at("source_digest").get<std::string>();
  m.components = j.at("components").get<std::vector<Component>>();
}

void to_json(nlohmann::json& j, const Diagnostic& d) {
  j = {{"severity", severity_name(d.severity)},
       {"line", d.line ? nlohmann::json(*d.line) : nlohmann::json(nullptr)},
       {"component", optional_string(d.component)},
       {"message", d.message}};
}

void from_json(const nlohmann::json& j, Diagnostic& d) {
  d.severity = j.at("severity").get<std::string>() == "error"
                   ? Severity::kError
                   : Severity::kWarning;
  auto line = j.find("line");
  d.line = (line == j.end() || line->is_null())
               ? std::nullopt
               : std::optional<std::size_t>(line->get<std::size_t>());
  d.component = read_optional_string(j, "component");
  d.message = j.at("message").get<std::string>();
}

void to_json(nlohmann::json& j, const RecipeEntry& e) {
  j = {{"name", e.name},
       {"kind", e.kind},
       {"description", optional_string(e.description)}};
}

void from_json(const nlohmann::json& j, RecipeEntry& e) {
  e.name = j.at("name").get<std::string>();
  e.kind = j.at("kind").get<ComponentKind>();
  e.description = read_optional_string(j, "description");
}

void to_json(nlohmann::json& j, const Recipe& r) {
  j = {{"inputs", r.inputs},
       {"outputs", r.outputs},
       {"solve_chain", r.solve_chain}};
}

void from_json(const nlohmann::json& j, Recipe& r) {
  r.inputs = j.at("inputs").get<std::vector<RecipeEntry>>();
  r.outputs = j.at("outputs").get<std::vector<RecipeEntry>>();
  r.solve_chain = j.at("solve_chain").get<std::vector<std::string>>();
}

void to_json(nlohmann::json& j, const ComponentRow& r) {
  j = {{"kind", r.kind},
       {"name", r.name},
       {"description", optional_string(r.description)},
       {"order", r.order}};
}

void from_json(const nlohmann::json& j, ComponentRow& r) {
  r.kind = j.at("kind").get<ComponentKind>();
  r.name = j.at("name").get<std::string>();
  r.description = read_optional_string(j, "description");
  r.order = j.at("order").get<std::size_t>();
}

}  // namespace modelhub
