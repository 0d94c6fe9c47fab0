// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the zscan authors

#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace zscan {

// Coarse error category. Mirrored one-to-one by the C API status codes, so
// keep the list in sync with zs_status in zscan.h.
enum class Errc {
    InvalidArgument,
    Config,
    Io,
    Parse,
    Numeric,
    NonConvergence,
};

// Exception carrying a category plus a stable machine-readable kind
// ("NearOpenCircuit", "MalformedHeader", ...). Tests and callers match on
// kind(); the what() string is for humans and may change wording.
class Error : public std::runtime_error {
public:
    Error(Errc code, std::string kind, const std::string& message)
        : std::runtime_error(kind + ": " + message),
          code_(code),
          kind_(std::move(kind)) {}

    Errc code() const noexcept { return code_; }
    const std::string& kind() const noexcept { return kind_; }

private:
    Errc code_;
    std::string kind_;
};

[[noreturn]] inline void raise(Errc code, std::string kind, const std::string& message) {
    throw Error(code, std::move(kind), message);
}

} // namespace zscan
