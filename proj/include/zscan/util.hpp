// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the zscan authors

#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace zscan {

// Whole file as a string. Throws Errc::Io with kind "FileNotReadable".
std::string read_file(const std::string& path);

// Writes via a temp file in the same directory followed by an atomic
// rename, so readers never observe a partial file. Throws Errc::Io.
void write_file_atomic(const std::string& path, std::string_view content);

// Shortest decimal form that round-trips the exact double value.
std::string format_double(double v);

std::uint64_t fnv1a64(std::string_view s) noexcept;

std::string hex64(std::uint64_t v);

} // namespace zscan
