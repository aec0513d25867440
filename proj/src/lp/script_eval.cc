// Copyright 2026 The ModelHub Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <stdexcept>

#include <fmt/format.h>

#include "script_ast.h"

namespace modelhub::lp {

using detail::Entity;
using detail::Expr;
using detail::Program;
using detail::SymbolKind;

namespace {

constexpr double kIntegralTol = 1e-9;

// constant + sum(coef * x[col])
struct Affine {
  std::map<std::size_t, double> terms;
  double constant = 0.0;

  bool is_constant() const { return terms.empty(); }

  Affine& add(const Affine& o, double scale) {
    constant += scale * o.constant;
    for (const auto& [col, coef] : o.terms) {
      double& t = terms[col];
      t += scale * coef;
      if (t == 0.0) terms.erase(col);
    }
    return *this;
  }

  Affine& scale(double f) {
    constant *= f;
    if (f == 0.0) {
      terms.clear();
    } else {
      for (auto& [col, coef] : terms) coef *= f;
    }
    return *this;
  }
};

struct Value {
  bool is_vector = false;
  std::vector<Affine> items;

  static Value scalar(Affine a) { return {false, {std::move(a)}}; }
  static Value number(double v) {
    Affine a;
    a.constant = v;
    return scalar(std::move(a));
  }

  std::size_t size() const { return items.size(); }

  bool is_constant() const {
    return std::all_of(items.begin(), items.end(),
                       [](const Affine& a) { return a.is_constant(); });
  }

  std::string shape() const {
    return is_vector ? fmt::format("vector of length {}", items.size())
                     : "scalar";
  }
};

enum class Mode { kPreSolve, kPostSolve };

class Evaluator {
 public:
  Evaluator(const Program& program, Mode mode, const KernelInputs& inputs)
      : program_(program), mode_(mode), inputs_(inputs) {}

  void set_block(const std::string& name, Value v) {
    cache_[name] = std::move(v);
  }
  void set_objective(double v) { objective_ = v; }

  Value lookup(const std::string& name, const Entity& ctx, std::size_t line) {
    if (auto it = cache_.find(name); it != cache_.end()) return it->second;
    if (name == "objective") {
      if (!objective_) {
        throw ScriptError(ctx.component, line,
                          "'objective' is only available in outputs");
      }
      return Value::number(*objective_);
    }
    auto sit = program_.symbols.find(name);
    if (sit == program_.symbols.end()) {
      throw ScriptError(ctx.component, line,
                        fmt::format("unknown identifier '{}'", name));
    }
    const auto& sym = sit->second;
    const Entity& owner = program_.entities[sym.entity];
    if (std::find(stack_.begin(), stack_.end(), name) != stack_.end()) {
      std::string cycle;
      for (const auto& s : stack_) cycle += s + " -> ";
      throw ScriptError(owner.component, line,
                        "cyclic helper dependency: " + cycle + name);
    }
    stack_.push_back(name);
    Value v;
    switch (sym.kind) {
      case SymbolKind::kInput:
        v = input_value(owner);
        break;
      case SymbolKind::kInputFile:
        v = file_value(owner);
        break;
      case SymbolKind::kVariable:
        throw ScriptError(owner.component, line,
                          fmt::format("variable '{}' is not allocated", name));
      case SymbolKind::kHelper:
        v = eval(owner, *owner.assignments[sym.assignment].value);
        break;
      case SymbolKind::kOutput:
        if (mode_ != Mode::kPostSolve) {
          throw ScriptError(ctx.component, line,
                            fmt::format("'{}' is an output and only available "
                                        "after the solve",
                                        name));
        }
        v = eval(owner, *owner.assignments[sym.assignment].value);
        break;
    }
    stack_.pop_back();
    cache_[name] = v;
    return v;
  }

  Value eval(const Entity& ctx, const Expr& e) {
    switch (e.op) {
      case Expr::Op::kNumber:
        return Value::number(e.number);
      case Expr::Op::kName:
        return lookup(e.name, ctx, e.line);
      case Expr::Op::kNeg: {
        Value v = eval(ctx, *e.args[0]);
        for (auto& a : v.items) a.scale(-1.0);
        return v;
      }
      case Expr::Op::kAdd:
      case Expr::Op::kSub: {
        const double s = e.op == Expr::Op::kAdd ? 1.0 : -1.0;
        return combine(ctx, e, eval(ctx, *e.args[0]), eval(ctx, *e.args[1]),
                       [s](const Affine& a, const Affine& b) {
                         Affine r = a;
                         r.add(b, s);
                         return r;
                       });
      }
      case Expr::Op::kMul:
        return combine(ctx, e, eval(ctx, *e.args[0]), eval(ctx, *e.args[1]),
                       [&](const Affine& a, const Affine& b) {
                         if (!a.is_constant() && !b.is_constant()) {
                           throw ScriptError(ctx.component, e.line,
                                             "nonlinear term: product of two "
                                             "variable expressions");
                         }
                         Affine r = a.is_constant() ? b : a;
                         r.scale(a.is_constant() ? a.constant : b.constant);
                         return r;
                       });
      case Expr::Op::kDiv:
        return combine(ctx, e, eval(ctx, *e.args[0]), eval(ctx, *e.args[1]),
                       [&](const Affine& a, const Affine& b) {
                         if (!b.is_constant()) {
                           throw ScriptError(ctx.component, e.line,
                                             "nonlinear term: division by a "
                                             "variable expression");
                         }
                         if (b.constant == 0.0) {
                           throw ScriptError(ctx.component, e.line,
                                             "division by zero");
                         }
                         Affine r = a;
                         r.scale(1.0 / b.constant);
                         return r;
                       });
      case Expr::Op::kIndex: {
        Value base = eval(ctx, *e.args[0]);
        if (!base.is_vector) {
          throw ScriptError(ctx.component, e.line, "cannot index a scalar");
        }
        const double raw = scalar_constant(ctx, eval(ctx, *e.args[1]), e.line,
                                           "index");
        const auto idx = integral(ctx, raw, e.line, "index");
        if (idx < 0 || static_cast<std::size_t>(idx) >= base.size()) {
          throw ScriptError(ctx.component, e.line,
                            fmt::format("index {} out of range for vector of "
                                        "length {}",
                                        idx, base.size()));
        }
        return Value::scalar(base.items[static_cast<std::size_t>(idx)]);
      }
      case Expr::Op::kVector: {
        Value v;
        v.is_vector = true;
        for (const auto& a : e.args) {
          Value item = eval(ctx, *a);
          if (item.is_vector) {
            throw ScriptError(ctx.component, a->line,
                              "vector literals hold scalars only");
          }
          v.items.push_back(std::move(item.items.front()));
        }
        return v;
      }
      case Expr::Op::kCall: {
        Value arg = eval(ctx, *e.args.at(0));
        if (e.name == "len") {
          return Value::number(
              static_cast<double>(arg.is_vector ? arg.size() : 1));
        }
        Affine total;
        for (const auto& a : arg.items) total.add(a, 1.0);
        return Value::scalar(std::move(total));
      }
    }
    throw ScriptError(ctx.component, e.line, "unsupported expression");
  }

  // A scalar (or length-1 vector) with no variable terms.
  double scalar_constant(const Entity& ctx, const Value& v, std::size_t line,
                         std::string_view what) {
    if (v.size() != 1) {
      throw ScriptError(ctx.component, line,
                        fmt::format("{} must be a scalar, got a {}", what,
                                    v.shape()));
    }
    if (!v.items.front().is_constant()) {
      throw ScriptError(ctx.component, line,
                        fmt::format("{} must not depend on variables", what));
    }
    return v.items.front().constant;
  }

  long long integral(const Entity& ctx, double v, std::size_t line,
                     std::string_view what) {
    const double r = std::round(v);
    if (!std::isfinite(v) || std::abs(v - r) > kIntegralTol) {
      throw ScriptError(ctx.component, line,
                        fmt::format("{} must be an integer, got {}", what, v));
    }
    return static_cast<long long>(r);
  }

 private:
  template <typename Fn>
  Value combine(const Entity& ctx, const Expr& e, const Value& a,
                const Value& b, Fn&& fn) {
    if (a.is_vector && b.is_vector && a.size() != b.size()) {
      throw ScriptError(ctx.component, e.line,
                        fmt::format("dimension mismatch: vector of length {} "
                                    "and vector of length {}",
                                    a.size(), b.size()));
    }
    Value out;
    out.is_vector = a.is_vector || b.is_vector;
    const std::size_t n = std::max(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
      out.items.push_back(fn(a.items[a.is_vector ? i : 0],
                             b.items[b.is_vector ? i : 0]));
    }
    return out;
  }

  Value input_value(const Entity& owner) {
    const nlohmann::json* json = nullptr;
    if (auto it = inputs_.values.find(owner.component);
        it != inputs_.values.end()) {
      json = &it->second;
    }
    nlohmann::json fallback;
    if (!json && !owner.assignments.empty()) {
      // Defaults are literals; evaluate them as such.
      return eval(owner, *owner.assignments.front().value);
    }
    if (!json) {
      throw ScriptError(owner.component, owner.line,
                        fmt::format("missing value for interface object '{}'",
                                    owner.component));
    }
    auto number = [&](const nlohmann::json& j) {
      if (!j.is_number()) {
        throw ScriptError(owner.component, owner.line,
                          fmt::format("type mismatch for '{}': expected a "
                                      "number or a list of numbers, got {}",
                                      owner.component, j.dump()));
      }
      return j.get<double>();
    };
    if (json->is_array()) {
      Value v;
      v.is_vector = true;
      for (const auto& item : *json) {
        Affine a;
        a.constant = number(item);
        v.items.push_back(std::move(a));
      }
      return v;
    }
    return Value::number(number(*json));
  }

  Value file_value(const Entity& owner) {
    auto it = inputs_.files.find(owner.component);
    if (it == inputs_.files.end()) {
      throw ScriptError(owner.component, owner.line,
                        fmt::format("missing file for interface file '{}'",
                                    owner.component));
    }
    std::vector<double> numbers;
    try {
      numbers = parse_numeric_file(it->second);
    } catch (const ScriptError& err) {
      throw ScriptError(owner.component, err.line(), err.message());
    }
    Value v;
    v.is_vector = true;
    for (double d : numbers) {
      Affine a;
      a.constant = d;
      v.items.push_back(std::move(a));
    }
    return v;
  }

  const Program& program_;
  Mode mode_;
  const KernelInputs& inputs_;
  std::map<std::string, Value> cache_;
  std::vector<std::string> stack_;
  std::optional<double> objective_;
};

const Entity* find_entity(const Program& program, const std::string& name) {
  auto it = program.entity_index.find(name);
  return it == program.entity_index.end() ? nullptr
                                          : &program.entities[it->second];
}

// The Objective and Constraint entities the single LP is built from.
struct Selection {
  const Entity* objective = nullptr;
  std::vector<const Entity*> constraints;
};

Selection select(const Program& program) {
  Selection s;
  for (const auto& e : program.entities) {
    if (e.kind == ComponentKind::kProblem && e.refs) {
      s.objective = find_entity(program, e.refs->refs.front());
      for (std::size_t i = 1; i < e.refs->refs.size(); ++i) {
        s.constraints.push_back(find_entity(program, e.refs->refs[i]));
      }
      return s;
    }
  }
  for (const auto& e : program.entities) {
    if (e.kind == ComponentKind::kObjective) s.objective = &e;
    if (e.kind == ComponentKind::kConstraint) s.constraints.push_back(&e);
  }
  return s;
}

nlohmann::json to_json(const Value& v) {
  if (!v.is_vector) return v.items.front().constant;
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& a : v.items) arr.push_back(a.constant);
  return arr;
}

void check_inputs(const Program& program, const KernelInputs& inputs) {
  for (const auto& [name, value] : inputs.values) {
    const Entity* e = find_entity(program, name);
    if (!e || e->kind != ComponentKind::kInterfaceObject) {
      throw ScriptError(name, 0,
                        fmt::format("'{}' is not an interface object", name));
    }
  }
  for (const auto& [name, bytes] : inputs.files) {
    const Entity* e = find_entity(program, name);
    if (!e || e->kind != ComponentKind::kInterfaceFile) {
      throw ScriptError(name, 0,
                        fmt::format("'{}' is not an interface file", name));
    }
  }
}

}  // namespace

Instance instantiate(const ScriptTemplate& script, const KernelInputs& inputs) {
  if (!script.program) throw std::logic_error("script has no program");
  const Program& program = *script.program;
  check_inputs(program, inputs);

  Instance inst;
  inst.inputs = inputs;
  Evaluator ev(program, Mode::kPreSolve, inputs);

  // Every input is resolved so that missing values are reported even when
  // unused.
  for (const auto& e : program.entities) {
    if (e.kind == ComponentKind::kInterfaceObject ||
        e.kind == ComponentKind::kInterfaceFile) {
      ev.lookup(e.component, e, e.line);
    }
  }

  // Variable blocks in file order.
  LPProblem& lp = inst.problem;
  for (const auto& e : program.entities) {
    if (e.kind != ComponentKind::kVariable) continue;
    const auto& decl = *e.variable;
    long long n = 1;
    if (decl.size) {
      const double raw = ev.scalar_constant(e, ev.eval(e, *decl.size),
                                            decl.line, "variable size");
      n = ev.integral(e, raw, decl.line, "variable size");
    }
    if (n < 1) {
      throw ScriptError(e.component, decl.line,
                        fmt::format("variable size must be at least 1, got {}",
                                    n));
    }
    const std::size_t size = static_cast<std::size_t>(n);
    auto bound = [&](const detail::ExprPtr& expr) {
      std::vector<std::optional<double>> out(size);
      if (!expr) return out;
      Value v = ev.eval(e, *expr);
      if (!v.is_constant()) {
        throw ScriptError(e.component, decl.line,
                          "bound must not depend on variables");
      }
      if (!decl.size && v.is_vector) {
        throw ScriptError(e.component, decl.line,
                          "bound of a scalar variable must be a scalar");
      }
      if (v.is_vector && v.size() != size) {
        throw ScriptError(e.component, decl.line,
                          fmt::format("dimension mismatch: bound has length "
                                      "{}, variable has length {}",
                                      v.size(), size));
      }
      for (std::size_t i = 0; i < size; ++i) {
        out[i] = v.items[v.is_vector ? i : 0].constant;
      }
      return out;
    };
    auto lower = bound(decl.lower);
    auto upper = bound(decl.upper);

    const std::size_t offset = lp.num_variables();
    Value block;
    block.is_vector = static_cast<bool>(decl.size);
    for (std::size_t i = 0; i < size; ++i) {
      lp.objective.push_back(0.0);
      lp.bounds.push_back({lower[i], upper[i]});
      lp.names.push_back(!decl.size ? e.component
                                   : fmt::format("{}[{}]", e.component, i));
      Affine a;
      a.terms[offset + i] = 1.0;
      block.items.push_back(std::move(a));
    }
    inst.blocks[e.component] = {offset, size, block.is_vector};
    ev.set_block(e.component, std::move(block));
  }
  const std::size_t n = lp.num_variables();

  // Helpers are evaluated eagerly to surface errors before the solve.
  for (const auto& e : program.entities) {
    if (e.kind != ComponentKind::kHelperObject) continue;
    for (const auto& a : e.assignments) ev.lookup(a.target, e, a.line);
  }

  const Selection sel = select(program);
  for (const Entity* c : sel.constraints) {
    for (const auto& rel : c->relations) {
      Value lhs = ev.eval(*c, *rel.lhs);
      Value rhs = ev.eval(*c, *rel.rhs);
      if (lhs.is_vector && rhs.is_vector && lhs.size() != rhs.size()) {
        throw ScriptError(c->component, rel.line,
                          fmt::format("dimension mismatch: vector of length "
                                      "{} {} vector of length {}",
                                      lhs.size(), relation_symbol(rel.relation),
                                      rhs.size()));
      }
      const std::size_t m = std::max(lhs.size(), rhs.size());
      for (std::size_t i = 0; i < m; ++i) {
        Affine diff = lhs.items[lhs.is_vector ? i : 0];
        diff.add(rhs.items[rhs.is_vector ? i : 0], -1.0);
        std::vector<double> coefficients(n, 0.0);
        for (const auto& [col, coef] : diff.terms) coefficients[col] = coef;
        lp.add_row(std::move(coefficients), rel.relation, -diff.constant);
      }
    }
  }

  if (sel.objective) {
    const auto& obj = *sel.objective->objective;
    Value v = ev.eval(*sel.objective, *obj.expr);
    if (v.size() != 1) {
      throw ScriptError(sel.objective->component, obj.line,
                        fmt::format("objective must be a scalar, got a {}; "
                                    "use sum(...)",
                                    v.shape()));
    }
    lp.sense = obj.sense;
    for (const auto& [col, coef] : v.items.front().terms) {
      lp.objective[col] = coef;
    }
    inst.objective_offset = v.items.front().constant;
    inst.objective_component = sel.objective->component;
  }

  // Solver parameters and one plan per Execution.
  std::map<std::string, SolveParams> solver_params;
  std::optional<std::string> last_solver;
  std::optional<SolveParams> params;
  for (const auto& e : program.entities) {
    if (e.kind == ComponentKind::kSolver) {
      SolveParams p;
      for (const auto& param : e.params) {
        const double v =
            ev.scalar_constant(e, ev.eval(e, *param.value), param.line, param.key);
        if (param.key == "maxiter") {
          const long long it = ev.integral(e, v, param.line, "maxiter");
          if (it < 1 || it > 100'000'000) {
            throw ScriptError(e.component, param.line,
                              fmt::format("maxiter must be in [1, 1e8], got {}",
                                          it));
          }
          p.maxiter = static_cast<int>(it);
        } else {
          if (!(v > 0.0) || !std::isfinite(v)) {
            throw ScriptError(e.component, param.line,
                              fmt::format("feastol must be positive, got {}",
                                          v));
          }
          p.feastol = v;
        }
      }
      solver_params[e.component] = p;
      inst.solver_values[e.component] = {{"feastol", p.feastol},
                                         {"maxiter", p.maxiter}};
      last_solver = e.component;
      params = p;
    }
    if (e.kind == ComponentKind::kExecution) {
      ExecutionPlan plan;
      plan.component = e.component;
      if (e.refs && e.refs->refs.size() == 2) {
        plan.solver = e.refs->refs[1];
      } else {
        plan.solver = last_solver;
      }
      if (plan.solver) plan.params = solver_params.at(*plan.solver);
      params = plan.params;
      inst.executions.push_back(std::move(plan));
    }
  }
  if (!inst.executions.empty()) params = inst.executions.back().params;
  if (params) inst.params = *params;

  lp.check();
  return inst;
}

std::map<std::string, nlohmann::json> evaluate_outputs(
    const ScriptTemplate& script, const Instance& instance,
    const LPSolution& solution) {
  if (!solution.optimal() || !solution.x) {
    throw std::logic_error("outputs are only defined at an optimal solution");
  }
  const Program& program = *script.program;
  const auto& x = *solution.x;
  Evaluator ev(program, Mode::kPostSolve, instance.inputs);
  for (const auto& [name, block] : instance.blocks) {
    Value v;
    v.is_vector = block.is_vector;
    for (std::size_t i = 0; i < block.size; ++i) {
      Affine a;
      a.constant = x.at(block.offset + i);
      v.items.push_back(std::move(a));
    }
    ev.set_block(name, std::move(v));
  }
  const double objective =
      solution.objective.value_or(0.0) + instance.objective_offset;
  ev.set_objective(objective);

  std::map<std::string, nlohmann::json> out;
  for (const auto& e : program.entities) {
    switch (e.kind) {
      case ComponentKind::kObjective:
        if (instance.objective_component == e.component) {
          out[e.component] = objective;
        } else {
          Value v = ev.eval(e, *e.objective->expr);
          out[e.component] = to_json(v);
        }
        break;
      case ComponentKind::kExecution:
        out[e.component] = solution.info();
        break;
      case ComponentKind::kOutputObject: {
        Value v = ev.lookup(e.component, e, e.line);
        out[e.component] = to_json(v);
        break;
      }
      case ComponentKind::kOutputFile: {
        Value v = ev.lookup(e.component, e, e.line);
        std::string text;
        for (const auto& a : v.items) text += fmt::format("{}\n", a.constant);
        out[e.component] = text;
        break;
      }
      default:
        break;
    }
  }
  return out;
}

std::vector<double> parse_numeric_file(std::string_view bytes) {
  std::vector<double> out;
  std::size_t line = 1;
  std::size_t i = 0;
  auto is_sep = [](char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == ',' || c == ';' ||
           c == '[' || c == ']';
  };
  while (i < bytes.size()) {
    const char c = bytes[i];
    if (c == '\n') {
      ++line;
      ++i;
    } else if (is_sep(c)) {
      ++i;
    } else if (c == '#' || c == '%') {
      while (i < bytes.size() && bytes[i] != '\n') ++i;
    } else {
      std::size_t j = i;
      while (j < bytes.size() && bytes[j] != '\n' && !is_sep(bytes[j]) &&
             bytes[j] != '#' && bytes[j] != '%') {
        ++j;
      }
      std::string_view word = bytes.substr(i, j - i);
      // from_chars rejects a leading '+'.
      std::string_view digits = word;
      if (!digits.empty() && digits.front() == '+') digits.remove_prefix(1);
      double value = 0.0;
      auto [ptr, ec] =
          std::from_chars(digits.data(), digits.data() + digits.size(), value);
      if (digits.empty() || ec != std::errc() ||
          ptr != digits.data() + digits.size() || !std::isfinite(value)) {
        throw ScriptError("", line,
                          fmt::format("invalid number '{}'", word));
      }
      out.push_back(value);
      i = j;
    }
  }
  return out;
}

}  // namespace modelhub::lp
