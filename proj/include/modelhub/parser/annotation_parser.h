// Copyright 2026 The ModelHub Authors
// SPDX-License-Identifier: Apache-2.0

// Annotation grammar, for a comment tag T:
//
//   annotation := ^ WS* T "@" WS* keyword WS* ":" WS* value EOL
//
// An opener annotation (any component keyword) starts a component whose span
// runs up to the next opener or Model line. Description lines attach to the
// most recent opener. Everything before the first opener is preamble.

#pragma once

#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "modelhub/core/model.h"

namespace modelhub {

class ParserConfig {
 public:
  // Recognizes every keyword. Throws std::invalid_argument when the tag is
  // empty or contains whitespace.
  explicit ParserConfig(std::string comment_tag);
  ParserConfig(std::string comment_tag, std::set<ComponentKind> known_kinds);

  const std::string& comment_tag() const { return comment_tag_; }
  const std::set<ComponentKind>& known_kinds() const { return known_kinds_; }
  bool knows(ComponentKind kind) const { return known_kinds_.contains(kind); }

 private:
  std::string comment_tag_;
  std::set<ComponentKind> known_kinds_;
};

struct ParseResult {
  ModelManifest manifest;
  std::vector<Diagnostic> diagnostics;
};

// Never throws on malformed annotations; problems become diagnostics.
ParseResult parse(std::string_view source, const ParserConfig& config);

class SpanError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Rebuilds the source from component spans and the gaps between them.
// Throws SpanError when spans are out of bounds, overlapping or unordered.
std::string reassemble(const ModelManifest& manifest, std::string_view source);

class UnknownCommentTagError : public std::invalid_argument {
 public:
  explicit UnknownCommentTagError(const std::string& filename)
      : std::invalid_argument(
            "kernel tag unknown for '" + filename +
            "'; caller must supply ParserConfig explicitly") {}
};

// Maps a file extension to its comment leader: "#" for hash-comment
// languages, "%" for .m, "*" for .gms.
std::string detect_comment_tag(std::string_view filename);

}  // namespace modelhub
