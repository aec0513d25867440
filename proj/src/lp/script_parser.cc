// Copyright 2026 The ModelHub Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>

#include <fmt/format.h>

#include "script_ast.h"

namespace modelhub::lp {

using detail::Assignment;
using detail::Entity;
using detail::Expr;
using detail::ExprPtr;
using detail::Program;
using detail::Symbol;
using detail::SymbolKind;

ScriptError::ScriptError(std::string component, std::size_t line,
                         std::string message)
    : std::runtime_error(
          component.empty()
              ? fmt::format("line {}: {}", line, message)
              : fmt::format("component '{}' (line {}): {}", component, line,
                            message)),
      component_(std::move(component)),
      line_(line),
      message_(std::move(message)) {}

std::string_view entity_name(EntityKind kind) {
  switch (kind) {
    case EntityKind::kInput:
      return "input";
    case EntityKind::kInputFile:
      return "input file";
    case EntityKind::kHelper:
      return "helper";
    case EntityKind::kVariableBlock:
      return "variable block";
    case EntityKind::kConstraintRows:
      return "constraint rows";
    case EntityKind::kObjective:
      return "objective";
    case EntityKind::kProblem:
      return "problem";
    case EntityKind::kSolverParams:
      return "solver parameters";
    case EntityKind::kExecution:
      return "execution";
    case EntityKind::kOutput:
      return "output";
    case EntityKind::kOutputFile:
      return "output file";
    case EntityKind::kIgnored:
      return "ignored";
  }
  return "?";
}

std::map<std::string, nlohmann::json> ScriptTemplate::input_defaults() const {
  std::map<std::string, nlohmann::json> out;
  for (const auto& [name, b] : binding) {
    if (b.default_value) out.emplace(name, *b.default_value);
  }
  return out;
}

namespace {

struct Token {
  enum class Kind { kNumber, kIdent, kOp, kNewline, kEnd };
  Kind kind = Kind::kEnd;
  std::string text;
  double number = 0.0;
  std::size_t line = 0;
};

bool is_reserved(std::string_view name) {
  return std::any_of(std::begin(detail::kReservedWords),
                     std::end(detail::kReservedWords),
                     [name](const char* w) { return name == w; });
}

std::vector<Token> lex(std::string_view text, std::size_t first_line,
                       std::string_view comment_tag,
                       const std::string& component) {
  std::vector<Token> out;
  std::size_t line = first_line;
  int depth = 0;
  std::size_t i = 0;
  auto push = [&out](Token t) { out.push_back(std::move(t)); };
  while (i < text.size()) {
    const char c = text[i];
    if (c == '\n') {
      if (depth == 0 && !out.empty() && out.back().kind != Token::Kind::kNewline) {
        push({Token::Kind::kNewline, "\\n", 0.0, line});
      }
      ++line;
      ++i;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      continue;
    }
    if (text.substr(i, comment_tag.size()) == comment_tag) {
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && i + 1 < text.size() &&
         std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      if (j < text.size() && text[j] == '.') {
        ++j;
        while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      }
      if (j < text.size() && (text[j] == 'e' || text[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < text.size() && (text[k] == '+' || text[k] == '-')) ++k;
        if (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k]))) {
          j = k;
          while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
        }
      }
      std::string literal(text.substr(i, j - i));
      double value = 0.0;
      auto [ptr, ec] =
          std::from_chars(literal.data(), literal.data() + literal.size(), value);
      if (ec != std::errc() || ptr != literal.data() + literal.size()) {
        throw ScriptError(component, line,
                          fmt::format("invalid number '{}'", literal));
      }
      push({Token::Kind::kNumber, literal, value, line});
      i = j;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) ||
                                 text[j] == '_')) {
        ++j;
      }
      push({Token::Kind::kIdent, std::string(text.substr(i, j - i)), 0.0, line});
      i = j;
      continue;
    }
    static constexpr std::string_view kTwoChar[] = {"<=", ">=", "=="};
    bool matched = false;
    for (auto op : kTwoChar) {
      if (text.substr(i, 2) == op) {
        push({Token::Kind::kOp, std::string(op), 0.0, line});
        i += 2;
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (std::string_view("+-*/=()[],<>").find(c) != std::string_view::npos) {
      if (c == '(' || c == '[') ++depth;
      if (c == ')' || c == ']') {
        if (--depth < 0) {
          throw ScriptError(component, line,
                            fmt::format("unbalanced '{}'", c));
        }
      }
      push({Token::Kind::kOp, std::string(1, c), 0.0, line});
      ++i;
      continue;
    }
    throw ScriptError(component, line,
                      fmt::format("unexpected character '{}'", c));
  }
  if (depth != 0) {
    throw ScriptError(component, line, "unclosed bracket at end of span");
  }
  if (!out.empty() && out.back().kind != Token::Kind::kNewline) {
    push({Token::Kind::kNewline, "\\n", 0.0, line});
  }
  return out;
}

// Tokens of one statement (without the trailing newline).
using Statement = std::vector<Token>;

std::vector<Statement> split_statements(const std::vector<Token>& tokens) {
  std::vector<Statement> out;
  Statement current;
  for (const auto& t : tokens) {
    if (t.kind == Token::Kind::kNewline) {
      if (!current.empty()) out.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(t);
    }
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

class StatementParser {
 public:
  StatementParser(const Statement& tokens, const std::string& component)
      : tokens_(tokens), component_(component) {}

  std::size_t line() const { return tokens_.front().line; }
  bool done() const { return pos_ >= tokens_.size(); }

  bool peek_op(std::string_view op, std::size_t ahead = 0) const {
    return pos_ + ahead < tokens_.size() &&
           tokens_[pos_ + ahead].kind == Token::Kind::kOp &&
           tokens_[pos_ + ahead].text == op;
  }

  bool peek_ident(std::string_view name = {}, std::size_t ahead = 0) const {
    if (pos_ + ahead >= tokens_.size()) return false;
    const auto& t = tokens_[pos_ + ahead];
    return t.kind == Token::Kind::kIdent && (name.empty() || t.text == name);
  }

  bool accept_op(std::string_view op) {
    if (!peek_op(op)) return false;
    ++pos_;
    return true;
  }

  void expect_op(std::string_view op) {
    if (!accept_op(op)) fail(fmt::format("expected '{}'", op));
  }

  std::string expect_ident() {
    if (!peek_ident()) fail("expected a name");
    return tokens_[pos_++].text;
  }

  void expect_end() {
    if (!done()) fail(fmt::format("unexpected '{}'", tokens_[pos_].text));
  }

  // `name =` prefix, consumed when present.
  std::optional<std::string> accept_target() {
    if (peek_ident() && peek_op("=", 1)) {
      std::string name = tokens_[pos_].text;
      pos_ += 2;
      return name;
    }
    return std::nullopt;
  }

  std::optional<Relation> accept_relation() {
    if (accept_op("<=")) return Relation::kLessEqual;
    if (accept_op(">=")) return Relation::kGreaterEqual;
    if (accept_op("==")) return Relation::kEqual;
    if (peek_op("<") || peek_op(">")) {
      fail("strict inequalities are not supported; use <= or >=");
    }
    if (peek_op("=")) fail("use '==' for equality constraints");
    return std::nullopt;
  }

  ExprPtr expr() {
    ExprPtr lhs = term();
    for (;;) {
      const std::size_t ln = current_line();
      if (accept_op("+")) {
        lhs = binary(Expr::Op::kAdd, lhs, term(), ln);
      } else if (accept_op("-")) {
        lhs = binary(Expr::Op::kSub, lhs, term(), ln);
      } else {
        return lhs;
      }
    }
  }

  std::vector<std::string> name_list() {
    std::vector<std::string> names;
    expect_op("(");
    if (!accept_op(")")) {
      do {
        names.push_back(expect_ident());
      } while (accept_op(","));
      expect_op(")");
    }
    return names;
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw ScriptError(component_, current_line(), message);
  }

 private:
  std::size_t current_line() const {
    if (tokens_.empty()) return 0;
    return pos_ < tokens_.size() ? tokens_[pos_].line : tokens_.back().line;
  }

  static ExprPtr binary(Expr::Op op, ExprPtr a, ExprPtr b, std::size_t line) {
    auto e = std::make_shared<Expr>();
    e->op = op;
    e->args = {std::move(a), std::move(b)};
    e->line = line;
    return e;
  }

  ExprPtr term() {
    ExprPtr lhs = unary();
    for (;;) {
      const std::size_t ln = current_line();
      if (accept_op("*")) {
        lhs = binary(Expr::Op::kMul, lhs, unary(), ln);
      } else if (accept_op("/")) {
        lhs = binary(Expr::Op::kDiv, lhs, unary(), ln);
      } else {
        return lhs;
      }
    }
  }

  ExprPtr unary() {
    const std::size_t ln = current_line();
    if (accept_op("-")) {
      auto e = std::make_shared<Expr>();
      e->op = Expr::Op::kNeg;
      e->args = {unary()};
      e->line = ln;
      return e;
    }
    if (accept_op("+")) return unary();
    return postfix();
  }

  ExprPtr postfix() {
    ExprPtr base = primary();
    while (peek_op("[")) {
      const std::size_t ln = current_line();
      ++pos_;
      ExprPtr index = expr();
      expect_op("]");
      base = binary(Expr::Op::kIndex, base, index, ln);
    }
    return base;
  }

  ExprPtr primary() {
    if (done()) fail("expected an expression");
    const Token& t = tokens_[pos_];
    auto e = std::make_shared<Expr>();
    e->line = t.line;
    if (t.kind == Token::Kind::kNumber) {
      ++pos_;
      e->op = Expr::Op::kNumber;
      e->number = t.number;
      return e;
    }
    if (t.kind == Token::Kind::kIdent) {
      ++pos_;
      e->name = t.text;
      if (accept_op("(")) {
        e->op = Expr::Op::kCall;
        if (!accept_op(")")) {
          do {
            e->args.push_back(expr());
          } while (accept_op(","));
          expect_op(")");
        }
        return e;
      }
      e->op = Expr::Op::kName;
      return e;
    }
    if (accept_op("(")) {
      ExprPtr inner = expr();
      expect_op(")");
      return inner;
    }
    if (accept_op("[")) {
      e->op = Expr::Op::kVector;
      if (!accept_op("]")) {
        do {
          e->args.push_back(expr());
        } while (accept_op(","));
        expect_op("]");
      }
      return e;
    }
    fail(fmt::format("unexpected '{}'", t.text));
  }

  const Statement& tokens_;
  const std::string& component_;
  std::size_t pos_ = 0;
};

bool is_literal(const Expr& e) {
  switch (e.op) {
    case Expr::Op::kNumber:
      return true;
    case Expr::Op::kNeg:
      return e.args[0]->op == Expr::Op::kNumber;
    case Expr::Op::kVector:
      return std::all_of(e.args.begin(), e.args.end(),
                         [](const ExprPtr& a) {
                           return a->op != Expr::Op::kVector && is_literal(*a);
                         });
    default:
      return false;
  }
}

nlohmann::json literal_value(const Expr& e) {
  switch (e.op) {
    case Expr::Op::kNumber:
      return e.number;
    case Expr::Op::kNeg:
      return -e.args[0]->number;
    default: {
      nlohmann::json arr = nlohmann::json::array();
      for (const auto& a : e.args) arr.push_back(literal_value(*a));
      return arr;
    }
  }
}

EntityKind entity_for(ComponentKind kind) {
  switch (kind) {
    case ComponentKind::kInterfaceObject:
      return EntityKind::kInput;
    case ComponentKind::kInterfaceFile:
      return EntityKind::kInputFile;
    case ComponentKind::kHelperObject:
      return EntityKind::kHelper;
    case ComponentKind::kVariable:
      return EntityKind::kVariableBlock;
    case ComponentKind::kConstraint:
      return EntityKind::kConstraintRows;
    case ComponentKind::kObjective:
      return EntityKind::kObjective;
    case ComponentKind::kProblem:
      return EntityKind::kProblem;
    case ComponentKind::kSolver:
      return EntityKind::kSolverParams;
    case ComponentKind::kExecution:
      return EntityKind::kExecution;
    case ComponentKind::kOutputObject:
      return EntityKind::kOutput;
    case ComponentKind::kOutputFile:
      return EntityKind::kOutputFile;
    default:
      return EntityKind::kIgnored;
  }
}

void parse_statement(Entity& entity, const Statement& stmt,
                     std::vector<std::string>& warnings) {
  StatementParser p(stmt, entity.component);
  const std::size_t line = p.line();
  switch (entity.kind) {
    case ComponentKind::kInterfaceObject: {
      if (!entity.assignments.empty()) {
        p.fail("an Interface Object span declares a single default value");
      }
      std::string target = p.expect_ident();
      p.expect_op("=");
      ExprPtr value = p.expr();
      p.expect_end();
      if (target != entity.component) {
        p.fail(fmt::format("expected a default for '{}', found '{}'",
                           entity.component, target));
      }
      if (!is_literal(*value)) {
        p.fail("interface object defaults must be a number or a list of "
               "numbers");
      }
      entity.assignments.push_back({target, value, line});
      break;
    }
    case ComponentKind::kInterfaceFile:
      p.fail("Interface File spans take no statements; the uploaded file "
             "provides the value");
    case ComponentKind::kHelperObject:
    case ComponentKind::kOutputObject:
    case ComponentKind::kOutputFile: {
      std::string target = p.expect_ident();
      p.expect_op("=");
      ExprPtr value = p.expr();
      p.expect_end();
      entity.assignments.push_back({target, value, line});
      break;
    }
    case ComponentKind::kVariable: {
      if (entity.variable) p.fail("a Variable span declares a single block");
      detail::VariableDecl decl;
      decl.target = p.expect_ident();
      decl.line = line;
      p.expect_op("=");
      if (!p.peek_ident("variable")) p.fail("expected variable([<size>])");
      p.expect_ident();
      p.expect_op("(");
      if (!p.accept_op(")")) {
        decl.size = p.expr();
        p.expect_op(")");
      }
      while (!p.done()) {
        auto rel = p.accept_relation();
        if (rel == Relation::kGreaterEqual && !decl.lower) {
          decl.lower = p.expr();
        } else if (rel == Relation::kLessEqual && !decl.upper) {
          decl.upper = p.expr();
        } else {
          p.fail("expected at most one '>= lower' and one '<= upper'");
        }
      }
      if (decl.target != entity.component) {
        p.fail(fmt::format("expected declaration of '{}', found '{}'",
                           entity.component, decl.target));
      }
      entity.variable = std::move(decl);
      break;
    }
    case ComponentKind::kConstraint: {
      detail::RelationStmt rel;
      rel.line = line;
      rel.lhs = p.expr();
      auto r = p.accept_relation();
      if (!r) p.fail("expected a relation (<=, >= or ==)");
      rel.relation = *r;
      rel.rhs = p.expr();
      p.expect_end();
      entity.relations.push_back(std::move(rel));
      break;
    }
    case ComponentKind::kObjective: {
      if (entity.objective) p.fail("an Objective span holds one objective");
      p.accept_target();
      detail::ObjectiveStmt obj;
      obj.line = line;
      if (p.peek_ident("minimize")) {
        obj.sense = Sense::kMinimize;
      } else if (p.peek_ident("maximize")) {
        obj.sense = Sense::kMaximize;
      } else {
        p.fail("expected 'minimize <expr>' or 'maximize <expr>'");
      }
      p.expect_ident();
      obj.expr = p.expr();
      p.expect_end();
      entity.objective = std::move(obj);
      break;
    }
    case ComponentKind::kProblem:
    case ComponentKind::kExecution: {
      const char* fn =
          entity.kind == ComponentKind::kProblem ? "problem" : "solve";
      if (entity.refs) p.fail(fmt::format("expected a single {}(...)", fn));
      p.accept_target();
      if (!p.peek_ident(fn)) p.fail(fmt::format("expected {}(...)", fn));
      p.expect_ident();
      detail::RefStmt refs{p.name_list(), line};
      p.expect_end();
      entity.refs = std::move(refs);
      break;
    }
    case ComponentKind::kSolver: {
      std::string key = p.expect_ident();
      p.expect_op("=");
      ExprPtr value = p.expr();
      p.expect_end();
      if (key != "feastol" && key != "maxiter") {
        warnings.push_back(fmt::format(
            "solver '{}' line {}: parameter '{}' is not used by native-lp "
            "(known: feastol, maxiter)",
            entity.component, line, key));
        break;
      }
      entity.params.push_back({key, value, line});
      break;
    }
    default:
      break;
  }
}

std::size_t line_of_offset(std::string_view source, std::size_t offset) {
  return 1 + static_cast<std::size_t>(
                 std::count(source.begin(),
                            source.begin() + static_cast<std::ptrdiff_t>(offset),
                            '\n'));
}

// Static name resolution and linearity analysis.
class Checker {
 public:
  explicit Checker(const Program& program) : program_(program) {}

  void run() {
    for (const auto& e : program_.entities) {
      switch (e.kind) {
        case ComponentKind::kHelperObject:
          for (std::size_t i = 0; i < e.assignments.size(); ++i) {
            helper_degree(e.assignments[i].target);
          }
          break;
        case ComponentKind::kVariable:
          if (e.variable->size) {
            require_constant(e, *e.variable->size, "variable size");
          }
          if (e.variable->lower) require_constant(e, *e.variable->lower, "bound");
          if (e.variable->upper) require_constant(e, *e.variable->upper, "bound");
          break;
        case ComponentKind::kConstraint:
          for (const auto& r : e.relations) {
            degree(e, *r.lhs, false);
            degree(e, *r.rhs, false);
          }
          break;
        case ComponentKind::kObjective:
          degree(e, *e.objective->expr, false);
          break;
        case ComponentKind::kSolver:
          for (const auto& p : e.params) require_constant(e, *p.value, p.key);
          break;
        case ComponentKind::kOutputObject:
        case ComponentKind::kOutputFile:
          for (const auto& a : e.assignments) degree(e, *a.value, true);
          break;
        default:
          break;
      }
    }
  }

 private:
  void require_constant(const Entity& e, const Expr& expr, std::string_view what) {
    if (degree(e, expr, false) > 0) {
      throw ScriptError(e.component, expr.line,
                        fmt::format("{} must not depend on variables", what));
    }
  }

  int helper_degree(const std::string& name) {
    if (auto it = degrees_.find(name); it != degrees_.end()) return it->second;
    const Symbol& sym = program_.symbols.at(name);
    const Entity& e = program_.entities[sym.entity];
    if (std::find(stack_.begin(), stack_.end(), name) != stack_.end()) {
      std::string cycle;
      for (const auto& s : stack_) cycle += s + " -> ";
      throw ScriptError(e.component, e.assignments[sym.assignment].line,
                        "cyclic helper dependency: " + cycle + name);
    }
    stack_.push_back(name);
    int d = degree(e, *e.assignments[sym.assignment].value, false);
    stack_.pop_back();
    degrees_[name] = d;
    return d;
  }

  // 0 = constant, 1 = affine in the variables. Post-solve expressions may
  // reference outputs and `objective` and are not degree-limited.
  int degree(const Entity& ctx, const Expr& e, bool post_solve) {
    switch (e.op) {
      case Expr::Op::kNumber:
        return 0;
      case Expr::Op::kName: {
        if (e.name == "objective") {
          if (!post_solve) {
            throw ScriptError(ctx.component, e.line,
                              "'objective' is only available in outputs");
          }
          return 0;
        }
        auto it = program_.symbols.find(e.name);
        if (it == program_.symbols.end()) {
          throw ScriptError(ctx.component, e.line,
                            fmt::format("unknown identifier '{}'", e.name));
        }
        switch (it->second.kind) {
          case SymbolKind::kInput:
          case SymbolKind::kInputFile:
            return 0;
          case SymbolKind::kVariable:
            return post_solve ? 0 : 1;
          case SymbolKind::kHelper:
            return post_solve ? 0 : helper_degree(e.name);
          case SymbolKind::kOutput:
            if (!post_solve) {
              throw ScriptError(
                  ctx.component, e.line,
                  fmt::format("'{}' is an output and only available after "
                              "the solve",
                              e.name));
            }
            return 0;
        }
        return 0;
      }
      case Expr::Op::kNeg:
        return degree(ctx, *e.args[0], post_solve);
      case Expr::Op::kAdd:
      case Expr::Op::kSub:
        return std::max(degree(ctx, *e.args[0], post_solve),
                        degree(ctx, *e.args[1], post_solve));
      case Expr::Op::kMul: {
        int d = degree(ctx, *e.args[0], post_solve) +
                degree(ctx, *e.args[1], post_solve);
        if (d > 1) {
          throw ScriptError(ctx.component, e.line,
                            "nonlinear term: product of two variable "
                            "expressions");
        }
        return d;
      }
      case Expr::Op::kDiv: {
        int num = degree(ctx, *e.args[0], post_solve);
        if (degree(ctx, *e.args[1], post_solve) > 0) {
          throw ScriptError(ctx.component, e.line,
                            "nonlinear term: division by a variable "
                            "expression");
        }
        return num;
      }
      case Expr::Op::kIndex: {
        if (degree(ctx, *e.args[1], post_solve) > 0) {
          throw ScriptError(ctx.component, e.line,
                            "index must not depend on variables");
        }
        return degree(ctx, *e.args[0], post_solve);
      }
      case Expr::Op::kVector: {
        int d = 0;
        for (const auto& a : e.args) d = std::max(d, degree(ctx, *a, post_solve));
        return d;
      }
      case Expr::Op::kCall: {
        if (e.name != "sum" && e.name != "len") {
          throw ScriptError(ctx.component, e.line,
                            fmt::format("unknown function '{}'", e.name));
        }
        if (e.args.size() != 1) {
          throw ScriptError(ctx.component, e.line,
                            fmt::format("{}() takes one argument", e.name));
        }
        int d = degree(ctx, *e.args[0], post_solve);
        return e.name == "len" ? 0 : d;
      }
    }
    return 0;
  }

  const Program& program_;
  std::map<std::string, int> degrees_;
  std::vector<std::string> stack_;
};

void define(Program& program, const std::string& name, Symbol symbol,
            std::size_t line) {
  const Entity& e = program.entities[symbol.entity];
  if (is_reserved(name)) {
    throw ScriptError(e.component, line,
                      fmt::format("'{}' is a reserved word", name));
  }
  if (!program.symbols.emplace(name, symbol).second) {
    throw ScriptError(e.component, line,
                      fmt::format("'{}' is defined more than once", name));
  }
}

const Entity& entity_named(const Program& program, const Entity& ctx,
                           const std::string& name, ComponentKind want,
                           std::size_t line) {
  auto it = program.entity_index.find(name);
  if (it == program.entity_index.end() ||
      program.entities[it->second].kind != want) {
    throw ScriptError(ctx.component, line,
                      fmt::format("'{}' is not a {} component", name,
                                  keyword(want)));
  }
  return program.entities[it->second];
}

}  // namespace

ScriptTemplate parse_script(const ModelManifest& manifest,
                            std::string_view source) {
  auto program = std::make_shared<Program>();
  program->comment_tag = manifest.comment_tag.empty() ? "#" : manifest.comment_tag;
  ScriptTemplate script;

  for (const auto& c : manifest.components) {
    if (c.span.end > source.size() || c.span.start > c.span.end) {
      throw ScriptError(c.name, 0, "component span is outside the source");
    }
    Entity entity;
    entity.component = c.name;
    entity.kind = c.kind;
    entity.entity = entity_for(c.kind);
    entity.line = line_of_offset(source, c.span.start);
    if (entity.entity != EntityKind::kIgnored) {
      auto tokens = lex(source.substr(c.span.start, c.span.size()), entity.line,
                        program->comment_tag, c.name);
      for (const auto& stmt : split_statements(tokens)) {
        parse_statement(entity, stmt, script.warnings);
      }
    }
    if (c.kind == ComponentKind::kFunction) {
      script.warnings.push_back(fmt::format(
          "function '{}' is listed but not interpreted by native-lp", c.name));
    }
    program->entity_index[c.name] = program->entities.size();
    program->entities.push_back(std::move(entity));
  }

  // Symbols and per-kind completeness.
  for (std::size_t idx = 0; idx < program->entities.size(); ++idx) {
    const Entity& e = program->entities[idx];
    switch (e.kind) {
      case ComponentKind::kInterfaceObject:
        define(*program, e.component, {SymbolKind::kInput, idx, 0}, e.line);
        break;
      case ComponentKind::kInterfaceFile:
        define(*program, e.component, {SymbolKind::kInputFile, idx, 0}, e.line);
        break;
      case ComponentKind::kVariable:
        if (!e.variable) {
          throw ScriptError(e.component, e.line,
                            fmt::format("expected '{} = variable([<size>])'",
                                        e.component));
        }
        define(*program, e.component, {SymbolKind::kVariable, idx, 0},
               e.variable->line);
        break;
      case ComponentKind::kHelperObject:
      case ComponentKind::kOutputObject:
      case ComponentKind::kOutputFile: {
        const SymbolKind kind = e.kind == ComponentKind::kHelperObject
                                    ? SymbolKind::kHelper
                                    : SymbolKind::kOutput;
        bool defines_self = false;
        for (std::size_t a = 0; a < e.assignments.size(); ++a) {
          define(*program, e.assignments[a].target, {kind, idx, a},
                 e.assignments[a].line);
          defines_self |= e.assignments[a].target == e.component;
        }
        if (!defines_self) {
          throw ScriptError(e.component, e.line,
                            fmt::format("span does not assign '{}'",
                                        e.component));
        }
        break;
      }
      case ComponentKind::kObjective:
        if (!e.objective) {
          throw ScriptError(e.component, e.line,
                            "expected 'minimize <expr>' or 'maximize <expr>'");
        }
        break;
      default:
        break;
    }
  }

  // Cross-component references.
  std::size_t problems = 0;
  std::size_t objectives = 0;
  bool problem_selects = false;
  for (const auto& e : program->entities) {
    if (e.kind == ComponentKind::kObjective) ++objectives;
    if (e.kind == ComponentKind::kProblem) {
      if (++problems > 1) {
        throw ScriptError(e.component, e.line,
                          "native-lp solves a single Problem per model");
      }
      if (e.refs) {
        const auto& refs = e.refs->refs;
        if (refs.empty()) {
          throw ScriptError(e.component, e.refs->line,
                            "problem(...) needs an Objective component");
        }
        entity_named(*program, e, refs[0], ComponentKind::kObjective,
                     e.refs->line);
        for (std::size_t i = 1; i < refs.size(); ++i) {
          entity_named(*program, e, refs[i], ComponentKind::kConstraint,
                       e.refs->line);
        }
        problem_selects = true;
      }
    }
    if (e.kind == ComponentKind::kExecution && e.refs) {
      const auto& refs = e.refs->refs;
      if (refs.empty() || refs.size() > 2) {
        throw ScriptError(e.component, e.refs->line,
                          "expected solve(<problem> [, <solver>])");
      }
      entity_named(*program, e, refs[0], ComponentKind::kProblem, e.refs->line);
      if (refs.size() == 2) {
        entity_named(*program, e, refs[1], ComponentKind::kSolver, e.refs->line);
      }
    }
  }
  if (objectives > 1 && !problem_selects) {
    for (const auto& e : program->entities) {
      if (e.kind == ComponentKind::kObjective) {
        throw ScriptError(e.component, e.line,
                          "several Objective components; select one with "
                          "problem(<objective>, ...)");
      }
    }
  }

  Checker(*program).run();

  bool fully_defaulted = true;
  for (const auto& e : program->entities) {
    Binding b;
    b.entity = e.entity;
    b.line = e.line;
    if (e.kind == ComponentKind::kInterfaceObject) {
      if (e.assignments.empty()) {
        fully_defaulted = false;
      } else {
        b.default_value = literal_value(*e.assignments.front().value);
      }
    }
    if (e.kind == ComponentKind::kInterfaceFile) fully_defaulted = false;
    script.binding.emplace(e.component, std::move(b));
  }
  script.program = std::move(program);

  // Surface dimension errors early when the defaults make that possible.
  if (fully_defaulted) instantiate(script, {});
  return script;
}

}  // namespace modelhub::lp
