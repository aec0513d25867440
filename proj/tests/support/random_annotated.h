// Copyright 2026 The ModelHub Authors
// SPDX-License-Identifier: Apache-2.0

// Random annotated source files with well-formed structure, plus the line
// bookkeeping needed to delete single annotations from them.

#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "modelhub/core/model.h"

namespace modelhub::testing {

struct GeneratedLine {
  enum class Role { kCode, kOpener, kModel, kDescription, kNoise };
  Role role = Role::kCode;
  std::string text;  // including its line terminator
};

struct GeneratedFile {
  std::string tag;
  std::vector<GeneratedLine> lines;
  std::size_t components = 0;

  std::string text() const {
    std::string out;
    for (const auto& l : lines) out += l.text;
    return out;
  }

  // Text with lines [first, last) removed.
  std::string without(std::size_t first, std::size_t last) const {
    std::string out;
    for (std::size_t i = 0; i < lines.size(); ++i) {
      if (i < first || i >= last) out += lines[i].text;
    }
    return out;
  }

  // Line range covering the opener at `i` and the Description lines
  // directly attached to it.
  std::size_t attached_end(std::size_t i) const {
    std::size_t j = i + 1;
    while (j < lines.size() &&
           lines[j].role == GeneratedLine::Role::kDescription) {
      ++j;
    }
    return j;
  }
};

class AnnotatedFileGenerator {
 public:
  explicit AnnotatedFileGenerator(std::uint64_t seed) : rng_(seed) {}

  GeneratedFile next() {
    GeneratedFile f;
    static const char* kTags[] = {"#", "%", "*", "//", "--"};
    f.tag = kTags[pick(0, 4)];
    eol_ = pick(0, 5) == 0 ? "\r\n" : "\n";
    used_names_.clear();

    const std::size_t preamble = pick(0, 3);
    for (std::size_t i = 0; i < preamble; ++i) code(f);
    bool target = false;  // a component or Model line is open
    if (pick(0, 2) == 0) {
      add(f, GeneratedLine::Role::kModel, annotation(f.tag, "Model", words()));
      target = true;
    }
    const std::size_t count = pick(0, 12);
    for (std::size_t k = 0; k < count; ++k) {
      if (target && pick(0, 3) == 0) {
        const std::size_t n = pick(1, 2);
        for (std::size_t d = 0; d < n; ++d) {
          add(f, GeneratedLine::Role::kDescription,
              annotation(f.tag, "Description", words()));
        }
      }
      const std::size_t body = pick(0, 4);
      for (std::size_t i = 0; i < body; ++i) code(f);
      if (pick(0, 9) == 0) {
        add(f, GeneratedLine::Role::kNoise,
            annotation(f.tag, pick(0, 1) ? "Widget" : "Outputobject", "w"));
      }
      const ComponentKind kind = opener_kind();
      add(f, GeneratedLine::Role::kOpener,
          annotation(f.tag, std::string(keyword(kind)), fresh_name()));
      ++f.components;
      target = true;
    }
    if (target && pick(0, 2) == 0) {
      add(f, GeneratedLine::Role::kDescription,
          annotation(f.tag, "Description", words()));
    }
    const std::size_t tail = pick(0, 3);
    for (std::size_t i = 0; i < tail; ++i) code(f);
    // Sometimes drop the final line terminator.
    if (!f.lines.empty() && pick(0, 4) == 0) {
      auto& last = f.lines.back().text;
      while (!last.empty() && (last.back() == '\n' || last.back() == '\r')) {
        last.pop_back();
      }
    }
    return f;
  }

 private:
  std::size_t pick(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
  }

  std::string spaces(std::size_t max) {
    static const char* kWs[] = {"", " ", "  ", "\t", " \t "};
    return kWs[pick(0, std::min<std::size_t>(max, 4))];
  }

  void add(GeneratedFile& f, GeneratedLine::Role role, std::string text) {
    f.lines.push_back({role, std::move(text) + eol_});
  }

  std::string annotation(const std::string& tag, std::string kw,
                         const std::string& value) {
    // Optionally widen the space inside multi-word keywords.
    if (auto sp = kw.find(' '); sp != std::string::npos && pick(0, 3) == 0) {
      kw.replace(sp, 1, "  ");
    }
    return spaces(2) + tag + "@" + spaces(4) + kw + spaces(2) + ":" +
           spaces(4) + value + spaces(1);
  }

  std::string words() {
    static const char* kWords[] = {"Generator", "power", "limits", "cost",
                                   "x:y", "a@b", "#@", "100%", "tolerance"};
    std::string out;
    const std::size_t n = pick(1, 4);
    for (std::size_t i = 0; i < n; ++i) {
      if (i) out += ' ';
      out += kWords[pick(0, 8)];
    }
    return out;
  }

  std::string fresh_name() {
    for (;;) {
      std::string name = "c" + std::to_string(pick(0, 9999));
      if (pick(0, 4) == 0) name += " block";
      if (used_names_.insert(name).second) return name;
    }
  }

  ComponentKind opener_kind() {
    std::vector<ComponentKind> kinds;
    for (ComponentKind k : all_kinds()) {
      if (opens_component(k)) kinds.push_back(k);
    }
    return kinds[pick(0, kinds.size() - 1)];
  }

  void code(GeneratedFile& f) {
    static const char* kCode[] = {
        "x = 1",
        "",
        "    P.extend([P[i] >= lo, P[i] <= hi])",
        "s = \"#@ Constraint: inside_a_string\"",
        "y = x @ z  # matrix product",
        "\t",
        "for gen in network.generators:",
        "label: value",
    };
    std::string line = kCode[pick(0, 7)];
    if (pick(0, 5) == 0) line = f.tag + " plain comment";
    if (pick(0, 7) == 0) line = "x = 2 " + f.tag + "@ Constraint: trailing";
    add(f, GeneratedLine::Role::kCode, line);
  }

  std::mt19937_64 rng_;
  std::string eol_ = "\n";
  std::set<std::string> used_names_;
};

}  // namespace modelhub::testing
