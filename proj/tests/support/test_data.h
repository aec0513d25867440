// Copyright 2026 The ModelHub Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace modelhub::testing {

inline std::filesystem::path data_path(const std::string& name) {
  return std::filesystem::path(MODELHUB_TEST_DATA_DIR) / name;
}

inline std::filesystem::path sample_path(const std::string& name) {
  return std::filesystem::path(MODELHUB_SAMPLES_DIR) / name;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace modelhub::testing
