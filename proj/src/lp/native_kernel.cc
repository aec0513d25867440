// Copyright 2026 The ModelHub Authors
// SPDX-License-Identifier: Apache-2.0

#include "modelhub/lp/native_kernel.h"

#include <map>

#include <fmt/format.h>

#include "modelhub/lp/simplex.h"

namespace modelhub::lp {

namespace {

// Rounding leaves -0.0 in solutions; report it as 0.
void clear_negative_zero(nlohmann::json& j) {
  if (j.is_number_float() && j.get<double>() == 0.0) {
    j = 0.0;
  } else if (j.is_structured()) {
    for (auto& child : j) clear_negative_zero(child);
  }
}

}  // namespace

KernelOutcome run_native_lp(const ModelManifest& manifest,
                            std::string_view source,
                            const KernelInputs& inputs, const LogSink& log) {
  auto emit = [&log](const std::string& line) {
    if (log) log(line);
  };
  KernelOutcome outcome;
  try {
    emit(fmt::format("native-lp: model '{}' with {} components",
                     manifest.name, manifest.components.size()));
    ScriptTemplate script = parse_script(manifest, source);
    for (const auto& w : script.warnings) emit("warning: " + w);
    Instance inst = instantiate(script, inputs);
    emit(fmt::format("problem: {} variables, {} rows, {} bounds",
                     inst.problem.num_variables(), inst.problem.num_rows(),
                     inst.problem.num_bounds()));

    for (const auto& [name, values] : inst.solver_values) {
      outcome.results[name] = values;
    }
    // evaluate_outputs reports the current solve for every Execution; each
    // one keeps its own info instead.
    std::map<std::string, nlohmann::json> infos;
    if (inst.executions.empty()) {
      emit("no Execution component; nothing to solve");
    }
    for (const auto& plan : inst.executions) {
      emit(fmt::format("execution '{}': solver {}, feastol={}, maxiter={}",
                       plan.component, plan.solver.value_or("(defaults)"),
                       plan.params.feastol, plan.params.maxiter));
      LPSolution sol = solve(inst.problem, plan.params);
      emit(fmt::format("execution '{}': status {} after {} iterations",
                       plan.component, status_name(sol.status),
                       sol.iterations));
      if (sol.optimal()) {
        for (auto& [name, value] : evaluate_outputs(script, inst, sol)) {
          outcome.results[name] = std::move(value);
        }
        for (const auto& [name, block] : inst.blocks) {
          if (!block.is_vector) {
            outcome.results[name] = sol.x->at(block.offset);
            continue;
          }
          nlohmann::json arr = nlohmann::json::array();
          for (std::size_t i = 0; i < block.size; ++i) {
            arr.push_back(sol.x->at(block.offset + i));
          }
          outcome.results[name] = std::move(arr);
        }
        emit(fmt::format("objective = {}",
                         *sol.objective + inst.objective_offset));
      }
      infos[plan.component] = sol.info();
    }
    for (auto& [name, info] : infos) outcome.results[name] = std::move(info);
    clear_negative_zero(outcome.results);
    outcome.success = true;
  } catch (const ScriptError& err) {
    outcome.error = err.what();
  } catch (const std::exception& err) {
    outcome.error = fmt::format("internal error: {}", err.what());
  }
  if (!outcome.success) {
    outcome.results = nlohmann::json::object();
    emit("error: " + outcome.error);
  }
  return outcome;
}

}  // namespace modelhub::lp
