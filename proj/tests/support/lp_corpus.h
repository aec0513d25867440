// Copyright 2026 The ModelHub Authors
// SPDX-License-Identifier: Apache-2.0

// Loads tests/data/lp_corpus.json: LPs with statuses and objectives frozen
// from SciPy's HiGHS solver (tools/oracles/gen_lp_corpus.py).

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "modelhub/lp/problem.h"
#include "support/test_data.h"

namespace modelhub::testing {

struct CorpusCase {
  lp::LPProblem problem;
  std::string status;
  std::optional<double> objective;
};

inline std::vector<CorpusCase> load_lp_corpus() {
  const auto doc = nlohmann::json::parse(read_file(data_path("lp_corpus.json")));
  std::vector<CorpusCase> out;
  for (const auto& c : doc.at("cases")) {
    const auto& cost = c.at("c");
    auto p = lp::LPProblem::with_variables(cost.size());
    p.sense = c.at("sense") == "max" ? lp::Sense::kMaximize : lp::Sense::kMinimize;
    p.objective = cost.get<std::vector<double>>();
    for (const auto& r : c.at("rows")) {
      const std::string rel = r.at("rel");
      p.add_row(r.at("a").get<std::vector<double>>(),
                rel == "<="   ? lp::Relation::kLessEqual
                : rel == ">=" ? lp::Relation::kGreaterEqual
                              : lp::Relation::kEqual,
                r.at("b").get<double>());
    }
    for (std::size_t j = 0; j < cost.size(); ++j) {
      const auto& b = c.at("bounds")[j];
      if (!b[0].is_null()) p.bounds[j].lower = b[0].get<double>();
      if (!b[1].is_null()) p.bounds[j].upper = b[1].get<double>();
    }
    CorpusCase cc{std::move(p), c.at("expected").at("status"), std::nullopt};
    if (const auto& obj = c.at("expected").at("objective"); !obj.is_null()) {
      cc.objective = obj.get<double>();
    }
    out.push_back(std::move(cc));
  }
  return out;
}

}  // namespace modelhub::testing
