// Copyright 2026 The ModelHub Authors
// SPDX-License-Identifier: Apache-2.0

// Internal representation of a parsed native-lp program.

#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "modelhub/core/model.h"
#include "modelhub/lp/problem.h"
#include "modelhub/lp/script.h"

namespace modelhub::lp::detail {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Op { kNumber, kName, kNeg, kAdd, kSub, kMul, kDiv, kIndex, kVector, kCall };

  Op op = Op::kNumber;
  double number = 0.0;
  std::string name;  // kName, kCall
  std::vector<ExprPtr> args;
  std::size_t line = 0;
};

struct Assignment {
  std::string target;
  ExprPtr value;
  std::size_t line = 0;
};

struct VariableDecl {
  std::string target;
  ExprPtr size;   // null for a scalar variable
  ExprPtr lower;  // may be null
  ExprPtr upper;  // may be null
  std::size_t line = 0;
};

struct RelationStmt {
  ExprPtr lhs;
  Relation relation = Relation::kLessEqual;
  ExprPtr rhs;
  std::size_t line = 0;
};

struct ObjectiveStmt {
  Sense sense = Sense::kMinimize;
  ExprPtr expr;
  std::size_t line = 0;
};

struct ParamStmt {
  std::string key;
  ExprPtr value;
  std::size_t line = 0;
};

// problem(...) or solve(...) argument list of component names.
struct RefStmt {
  std::vector<std::string> refs;
  std::size_t line = 0;
};

struct Entity {
  std::string component;
  ComponentKind kind = ComponentKind::kHelperObject;
  EntityKind entity = EntityKind::kIgnored;
  std::size_t line = 0;

  std::vector<Assignment> assignments;
  std::optional<VariableDecl> variable;
  std::vector<RelationStmt> relations;
  std::optional<ObjectiveStmt> objective;
  std::vector<ParamStmt> params;
  std::optional<RefStmt> refs;
};

enum class SymbolKind { kInput, kInputFile, kHelper, kVariable, kOutput };

struct Symbol {
  SymbolKind kind = SymbolKind::kHelper;
  std::size_t entity = 0;      // index into Program::entities
  std::size_t assignment = 0;  // index into Entity::assignments, if any
};

struct Program {
  std::string comment_tag;
  std::vector<Entity> entities;  // file order
  std::map<std::string, Symbol> symbols;
  std::map<std::string, std::size_t> entity_index;  // component -> entity
};

inline constexpr const char* kReservedWords[] = {
    "minimize", "maximize", "variable", "problem", "solve",
    "objective", "sum",     "len"};

}  // namespace modelhub::lp::detail
