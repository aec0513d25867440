// Copyright 2026 The ModelHub Authors
// SPDX-License-Identifier: Apache-2.0

// Runs a native-lp model end to end: parse the spans, bind inputs, solve
// once per Execution component and collect per-component results.

#pragma once

#include <functional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "modelhub/core/model.h"
#include "modelhub/lp/script.h"

namespace modelhub::lp {

inline constexpr std::string_view kNativeKernelTag = "native-lp";

using LogSink = std::function<void(const std::string& line)>;

struct KernelOutcome {
  bool success = false;
  // Component name -> value. Objective and Output Object/File values are
  // present only when the last solve is optimal; Execution components map to
  // solver info, Variable components to their optimal values and Solver
  // components to the parameters in effect.
  nlohmann::json results = nlohmann::json::object();
  std::string error;  // set when !success
};

// Never throws for model errors; they are reported through `error` and the
// log sink.
KernelOutcome run_native_lp(const ModelManifest& manifest,
                            std::string_view source,
                            const KernelInputs& inputs,
                            const LogSink& log = {});

}  // namespace modelhub::lp
