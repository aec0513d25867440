// Copyright 2026 The ModelHub Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace modelhub::util {

// Lowercase hex SHA-256 of `data`.
std::string sha256_hex(std::string_view data);

// `num_bytes` bytes from the OS CSPRNG, hex encoded (2 * num_bytes chars).
std::string random_hex(std::size_t num_bytes);

// Compares without early exit on the first differing byte.
bool constant_time_equal(std::string_view a, std::string_view b);

std::string base64_encode(std::string_view data);

// Throws std::invalid_argument on malformed input.
std::string base64_decode(std::string_view encoded);

}  // namespace modelhub::util
