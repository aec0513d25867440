// Copyright 2026 The ModelHub Authors
// SPDX-License-Identifier: Apache-2.0

#include "modelhub/parser/annotation_parser.h"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <map>
#include <optional>

#include <fmt/format.h>

#include "modelhub/util/crypto.h"

namespace modelhub {
namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && (is_space(s.front()) || s.front() == '\n')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (is_space(s.back()) || s.back() == '\n')) {
    s.remove_suffix(1);
  }
  return s;
}

std::string collapse_spaces(std::string_view s) {
  std::string out;
  bool pending = false;
  for (char c : s) {
    if (is_space(c)) {
      pending = true;
      continue;
    }
    if (pending && !out.empty()) out += ' ';
    pending = false;
    out += c;
  }
  return out;
}

struct Line {
  std::size_t start;  // offset of first byte
  std::size_t end;    // offset one past the newline (or EOF)
  std::string_view text;  // without the newline
};

std::vector<Line> split_lines(std::string_view source) {
  std::vector<Line> lines;
  std::size_t pos = 0;
  while (pos < source.size()) {
    std::size_t nl = source.find('\n', pos);
    std::size_t end = nl == std::string_view::npos ? source.size() : nl + 1;
    std::size_t text_end = nl == std::string_view::npos ? source.size() : nl;
    lines.push_back({pos, end, source.substr(pos, text_end - pos)});
    pos = end;
  }
  return lines;
}

// Result of matching one line against the annotation grammar.
struct Annotation {
  std::string keyword;
  std::string value;
};

enum class LineClass { kCode, kAnnotation, kMalformed };

LineClass classify(std::string_view text, std::string_view tag,
                   Annotation& out) {
  std::size_t i = 0;
  while (i < text.size() && is_space(text[i])) ++i;
  if (text.substr(i, tag.size()) != tag) return LineClass::kCode;
  i += tag.size();
  if (i >= text.size() || text[i] != '@') return LineClass::kCode;
  ++i;
  std::string_view rest = text.substr(i);
  std::size_t colon = rest.find(':');
  if (colon == std::string_view::npos) return LineClass::kMalformed;
  out.keyword = collapse_spaces(trim(rest.substr(0, colon)));
  out.value = std::string(trim(rest.substr(colon + 1)));
  return LineClass::kAnnotation;
}

enum class Target { kNone, kModel, kComponent, kInvalid };

}  // namespace

ParserConfig::ParserConfig(std::string comment_tag)
    : ParserConfig(std::move(comment_tag),
                   std::set<ComponentKind>(all_kinds().begin(),
                                           all_kinds().end())) {}

ParserConfig::ParserConfig(std::string comment_tag,
                           std::set<ComponentKind> known_kinds)
    : comment_tag_(std::move(comment_tag)), known_kinds_(std::move(known_kinds)) {
  if (comment_tag_.empty()) {
    throw std::invalid_argument("comment tag must not be empty");
  }
  if (std::any_of(comment_tag_.begin(), comment_tag_.end(),
                  [](unsigned char c) { return std::isspace(c); })) {
    throw std::invalid_argument("comment tag must not contain whitespace");
  }
}

ParseResult parse(std::string_view source, const ParserConfig& config) {
  ParseResult result;
  ModelManifest& manifest = result.manifest;
  manifest.comment_tag = config.comment_tag();
  manifest.source_digest = util::sha256_hex(source);

  auto diag = [&result](Severity severity, std::size_t line,
                        std::optional<std::string> component,
                        std::string message) {
    result.diagnostics.push_back(
        {severity, line, std::move(component), std::move(message)});
  };

  std::optional<std::size_t> open;  // index into manifest.components
  Target target = Target::kNone;
  std::size_t invalid_line = 0;
  std::optional<std::size_t> model_line;

  auto close_open = [&](std::size_t at) {
    if (open) manifest.components[*open].span.end = at;
    open.reset();
  };

  const auto lines = split_lines(source);
  for (std::size_t idx = 0; idx < lines.size(); ++idx) {
    const Line& line = lines[idx];
    const std::size_t lineno = idx + 1;
    Annotation ann;
    LineClass cls = classify(line.text, config.comment_tag(), ann);
    if (cls == LineClass::kCode) continue;
    if (cls == LineClass::kMalformed) {
      diag(Severity::kWarning, lineno, std::nullopt,
           fmt::format("annotation marker '{}@' without 'Keyword:'; "
                       "line treated as code",
                       config.comment_tag()));
      continue;
    }

    auto kind = kind_from_keyword(ann.keyword);
    if (!kind || !config.knows(*kind)) {
      diag(Severity::kWarning, lineno, std::nullopt,
           fmt::format("unknown annotation keyword '{}'; line treated as code",
                       ann.keyword));
      continue;
    }

    switch (*kind) {
      case ComponentKind::kModel:
        close_open(line.start);
        if (model_line) {
          diag(Severity::kWarning, lineno, std::nullopt,
               fmt::format("model name redefined (first set on line {})",
                           *model_line));
        }
        if (ann.value.empty()) {
          diag(Severity::kWarning, lineno, std::nullopt, "empty model name");
        }
        manifest.name = ann.value;
        model_line = lineno;
        target = Target::kModel;
        break;

      case ComponentKind::kDescription: {
        auto append = [&ann](std::optional<std::string>& desc) {
          if (ann.value.empty()) return;
          desc = desc ? *desc + " " + ann.value : ann.value;
        };
        switch (target) {
          case Target::kComponent:
            append(manifest.components.back().description);
            break;
          case Target::kModel:
            append(manifest.description);
            break;
          case Target::kInvalid:
            diag(Severity::kWarning, lineno, std::nullopt,
                 fmt::format("description ignored: it follows the invalid "
                             "annotation on line {}",
                             invalid_line));
            break;
          case Target::kNone:
            diag(Severity::kError, lineno, std::nullopt,
                 "Description with no preceding component");
            break;
        }
        break;
      }

      default:
        close_open(line.start);
        if (ann.value.empty()) {
          diag(Severity::kError, lineno, std::nullopt,
               fmt::format("{} annotation with empty component name",
                           keyword(*kind)));
          target = Target::kInvalid;
          invalid_line = lineno;
          break;
        }
        Component c;
        c.kind = *kind;
        c.name = ann.value;
        c.span = {line.start, line.start};
        c.order = manifest.components.size();
        manifest.components.push_back(std::move(c));
        open = manifest.components.size() - 1;
        target = Target::kComponent;
        break;
    }
  }
  close_open(source.size());
  return result;
}

std::string reassemble(const ModelManifest& manifest, std::string_view source) {
  std::string out;
  out.reserve(source.size());
  std::size_t cursor = 0;
  for (const auto& c : manifest.components) {
    if (c.span.start > c.span.end || c.span.end > source.size()) {
      throw SpanError(fmt::format("span [{}, {}) of '{}' is out of bounds",
                                  c.span.start, c.span.end, c.name));
    }
    if (c.span.start < cursor) {
      throw SpanError(fmt::format("span of '{}' overlaps the previous span",
                                  c.name));
    }
    out.append(source.substr(cursor, c.span.start - cursor));
    out.append(source.substr(c.span.start, c.span.size()));
    cursor = c.span.end;
  }
  out.append(source.substr(cursor));
  return out;
}

std::string detect_comment_tag(std::string_view filename) {
  static const std::map<std::string, std::string> kTags = {
      {".py", "#"},  {".pyw", "#"}, {".jl", "#"},  {".r", "#"},
      {".mhl", "#"}, {".mod", "#"}, {".run", "#"}, {".sh", "#"},
      {".rb", "#"},  {".pl", "#"},  {".m", "%"},   {".mzn", "%"},
      {".gms", "*"},
  };
  std::string ext =
      std::filesystem::path(std::string(filename)).extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  auto it = kTags.find(ext);
  if (it == kTags.end()) throw UnknownCommentTagError(std::string(filename));
  return it->second;
}

}  // namespace modelhub
