// Copyright 2026 The ModelHub Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include "modelhub/parser/annotation_parser.h"
#include "support/random_annotated.h"
#include "support/test_data.h"

namespace modelhub {
namespace {

using testing::data_path;
using testing::read_file;
using testing::sample_path;

std::size_t errors_in(const std::vector<Diagnostic>& ds) {
  return static_cast<std::size_t>(
      std::count_if(ds.begin(), ds.end(), [](const Diagnostic& d) {
        return d.is_error();
      }));
}

TEST(ParserConfigTest, RejectsBadTags) {
  EXPECT_THROW(ParserConfig(""), std::invalid_argument);
  EXPECT_THROW(ParserConfig("# "), std::invalid_argument);
  EXPECT_NO_THROW(ParserConfig("//"));
}

TEST(ParseTest, ConstraintWithDescription) {
  const std::string src =
      "#@ Constraint: P_limits\n#@ Description: Generator active power "
      "limits\nP_limits = []";
  auto r = parse(src, ParserConfig("#"));
  EXPECT_TRUE(r.diagnostics.empty());
  ASSERT_EQ(r.manifest.components.size(), 1u);
  const auto& c = r.manifest.components[0];
  EXPECT_EQ(c.kind, ComponentKind::kConstraint);
  EXPECT_EQ(c.name, "P_limits");
  EXPECT_EQ(c.description, "Generator active power limits");
  EXPECT_EQ(c.span.start, 0u);
  EXPECT_EQ(c.span.end, src.size());
}

TEST(ParseTest, EmptySource) {
  auto r = parse("", ParserConfig("#"));
  EXPECT_TRUE(r.manifest.components.empty());
  EXPECT_EQ(errors_in(r.diagnostics), 0u);
  EXPECT_EQ(reassemble(r.manifest, ""), "");
}

TEST(ParseTest, UnknownKeywordWarns) {
  auto r = parse("#@ Widget: w", ParserConfig("#"));
  EXPECT_TRUE(r.manifest.components.empty());
  ASSERT_EQ(r.diagnostics.size(), 1u);
  EXPECT_EQ(r.diagnostics[0].severity, Severity::kWarning);
  EXPECT_NE(r.diagnostics[0].message.find("Widget"), std::string::npos);
  EXPECT_EQ(r.diagnostics[0].line, 1u);
}

TEST(ParseTest, KeywordsAreCaseSensitive) {
  auto r = parse("#@ constraint: c\n", ParserConfig("#"));
  EXPECT_TRUE(r.manifest.components.empty());
  EXPECT_EQ(r.diagnostics.size(), 1u);
}

TEST(ParseTest, DescriptionWithoutComponentIsError) {
  auto r = parse("x = 1\n#@ Description: orphan\n", ParserConfig("#"));
  ASSERT_EQ(errors_in(r.diagnostics), 1u);
  EXPECT_EQ(r.diagnostics[0].line, 2u);
}

TEST(ParseTest, EmptyNameIsErrorButParsingContinues) {
  auto r = parse("#@ Variable:   \n#@ Objective: o\nminimize x\n",
                 ParserConfig("#"));
  EXPECT_EQ(errors_in(r.diagnostics), 1u);
  ASSERT_EQ(r.manifest.components.size(), 1u);
  EXPECT_EQ(r.manifest.components[0].name, "o");
}

TEST(ParseTest, KnownKindsRestrictKeywords) {
  ParserConfig config("#", {ComponentKind::kConstraint});
  auto r = parse("#@ Objective: o\n#@ Constraint: c\n", config);
  ASSERT_EQ(r.manifest.components.size(), 1u);
  EXPECT_EQ(r.manifest.components[0].name, "c");
  EXPECT_EQ(r.diagnostics.size(), 1u);
}

TEST(ParseTest, DcopfExtractExtract) {
  const std::string src = read_file(data_path("dcopf_extract.py"));
  auto r = parse(src, ParserConfig(detect_comment_tag("dcopf_extract.py")));
  EXPECT_TRUE(r.diagnostics.empty());
  const std::vector<ComponentKind> kinds = {
      ComponentKind::kConstraint, ComponentKind::kObjective,
      ComponentKind::kProblem,    ComponentKind::kSolver,
      ComponentKind::kExecution,  ComponentKind::kOutputObject};
  ASSERT_EQ(r.manifest.components.size(), kinds.size());
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    EXPECT_EQ(r.manifest.components[i].kind, kinds[i]);
    EXPECT_EQ(r.manifest.components[i].order, i);
  }
  EXPECT_EQ(r.manifest.components[0].description,
            "Generator active power limits");
  EXPECT_EQ(reassemble(r.manifest, src), src);
  EXPECT_FALSE(has_errors(validate(r.manifest)));
}

// Manifests frozen from an independent regex-based reading of the grammar
// (tools/oracles/annotation_oracle.py).
TEST(ParseTest, MatchesFrozenOracleManifests) {
  const auto expected =
      nlohmann::json::parse(read_file(data_path("expected_manifests.json")));
  const std::map<std::string, std::filesystem::path> files = {
      {"dcopf_extract.py", data_path("dcopf_extract.py")},
      {"dcopf.mhl", sample_path("dcopf.mhl")},
      {"production.mhl", sample_path("production.mhl")},
      {"edge.py", data_path("parser_cases/edge.py")},
      {"crlf.py", data_path("parser_cases/crlf.py")},
      {"tagged.m", data_path("parser_cases/tagged.m")},
      {"errors.py", data_path("parser_cases/errors.py")},
  };
  ASSERT_EQ(expected.size(), files.size());
  for (const auto& [name, path] : files) {
    SCOPED_TRACE(name);
    const std::string src = read_file(path);
    auto r = parse(src, ParserConfig(detect_comment_tag(name)));
    const auto& want = expected.at(name);
    EXPECT_EQ(nlohmann::json(r.manifest), want.at("manifest"));
    std::vector<std::size_t> error_lines;
    for (const auto& d : r.diagnostics) {
      if (d.is_error()) error_lines.push_back(*d.line);
    }
    EXPECT_EQ(nlohmann::json(error_lines), want.at("error_lines"));
    EXPECT_EQ(reassemble(r.manifest, src), src);
  }
}

TEST(ParseTest, EdgeCaseWarnings) {
  const std::string src = read_file(data_path("parser_cases/edge.py"));
  auto r = parse(src, ParserConfig("#"));
  // Widget, missing colon, description after the invalid opener.
  std::size_t warnings = 0;
  for (const auto& d : r.diagnostics) warnings += !d.is_error();
  EXPECT_EQ(warnings, 3u);
  EXPECT_EQ(r.manifest.name, "Edge Cases");
  EXPECT_EQ(r.manifest.description, "first part second part");
}

TEST(ReassembleTest, RejectsBadSpans) {
  auto r = parse("#@ Constraint: c\nx <= 1\n", ParserConfig("#"));
  ModelManifest m = r.manifest;
  m.components[0].span.end = 100;
  EXPECT_THROW(reassemble(m, "#@ Constraint: c\nx <= 1\n"), SpanError);
  auto two = parse("#@ Constraint: a\n#@ Constraint: b\n", ParserConfig("#"));
  m = two.manifest;
  m.components[1].span.start = 0;
  EXPECT_THROW(reassemble(m, "#@ Constraint: a\n#@ Constraint: b\n"),
               SpanError);
}

TEST(DetectCommentTagTest, Table) {
  EXPECT_EQ(detect_comment_tag("dcopf.py"), "#");
  EXPECT_EQ(detect_comment_tag("model.mhl"), "#");
  EXPECT_EQ(detect_comment_tag("/tmp/dir.v2/model.jl"), "#");
  EXPECT_EQ(detect_comment_tag("case.m"), "%");
  EXPECT_EQ(detect_comment_tag("CASE.M"), "%");
  EXPECT_EQ(detect_comment_tag("trnsport.gms"), "*");
  EXPECT_THROW(detect_comment_tag("model.xyz"), UnknownCommentTagError);
  EXPECT_THROW(detect_comment_tag("Makefile"), UnknownCommentTagError);
}

// Every line is in exactly one of: preamble/gap, a component span.
// Spans are disjoint, ordered and start on an annotation line.
void check_structure(const ModelManifest& m, std::string_view src) {
  std::size_t cursor = 0;
  for (std::size_t i = 0; i < m.components.size(); ++i) {
    const auto& c = m.components[i];
    ASSERT_EQ(c.order, i);
    ASSERT_LE(cursor, c.span.start);
    ASSERT_LE(c.span.start, c.span.end);
    ASSERT_LE(c.span.end, src.size());
    ASSERT_TRUE(c.span.start == 0 || src[c.span.start - 1] == '\n');
    ASSERT_TRUE(c.span.end == src.size() || src[c.span.end - 1] == '\n');
    cursor = c.span.end;
  }
}

TEST(ParsePropertyTest, RandomFilesRoundTripAndDegradeToWarnings) {
  testing::AnnotatedFileGenerator gen(7);
  for (int iter = 0; iter < 1000; ++iter) {
    const auto file = gen.next();
    const std::string src = file.text();
    SCOPED_TRACE(::testing::Message() << "iteration " << iter << "\n" << src);
    const ParserConfig config(file.tag);
    auto r = parse(src, config);
    ASSERT_EQ(errors_in(r.diagnostics), 0u);
    ASSERT_EQ(r.manifest.components.size(), file.components);
    ASSERT_EQ(reassemble(r.manifest, src), src);
    check_structure(r.manifest, src);
    ASSERT_EQ(parse(src, config).manifest, r.manifest);

    for (std::size_t i = 0; i < file.lines.size(); ++i) {
      using Role = testing::GeneratedLine::Role;
      const Role role = file.lines[i].role;
      if (role == Role::kCode) continue;
      auto alone = parse(file.without(i, i + 1), config);
      if (role == Role::kDescription || role == Role::kNoise) {
        ASSERT_EQ(errors_in(alone.diagnostics), 0u) << "removed line " << i;
      }
      const std::size_t end =
          role == Role::kNoise ? i + 1 : file.attached_end(i);
      auto removed = parse(file.without(i, end), config);
      ASSERT_EQ(errors_in(removed.diagnostics), 0u) << "removed line " << i;
    }
  }
}

}  // namespace
}  // namespace modelhub
