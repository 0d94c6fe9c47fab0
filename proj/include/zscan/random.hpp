// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the zscan authors

#pragma once

#include <cstdint>
#include <string_view>

namespace zscan {

// splitmix64 generator. Chosen over <random> engines because its output is
// fixed by the algorithm alone, which keeps seeded synthesis and training
// byte-reproducible across standard libraries and platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next_u64() noexcept;

    // Uniform in [0, 1) with 53 bits of precision.
    double uniform01() noexcept;

    double uniform(double lo, double hi) noexcept;

    // Standard normal via Box-Muller. No caching: one draw consumes exactly
    // two uniforms, so the stream position is a pure function of call count.
    double normal() noexcept;

    // Unbiased integer in [0, n). n must be nonzero.
    std::uint64_t below(std::uint64_t n) noexcept;

private:
    std::uint64_t state_;
};

// Child seed from a root seed, a stream tag and up to two indices.
// Every randomized stage derives its own stream this way, so stages stay
// independently reproducible no matter how many draws the others consume.
std::uint64_t derive_seed(std::uint64_t root, std::string_view tag,
                          std::uint64_t a = 0, std::uint64_t b = 0) noexcept;

} // namespace zscan
