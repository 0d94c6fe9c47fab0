// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the zscan authors

#include "zscan/random.hpp"

#include <cmath>

namespace zscan {

namespace {

// splitmix64 finalizer (Vigna). Also used as the mixing step of derive_seed.
std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

} // namespace

std::uint64_t Rng::next_u64() noexcept {
    state_ += 0x9e3779b97f4a7c15ull;
    return mix64(state_);
}

double Rng::uniform01() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) noexcept {
    return lo + (hi - lo) * uniform01();
}

double Rng::normal() noexcept {
    double u1 = uniform01();
    double u2 = uniform01();
    if (u1 < 0x1.0p-1000) u1 = 0x1.0p-1000;
    constexpr double two_pi = 6.283185307179586476925286766559;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

std::uint64_t Rng::below(std::uint64_t n) noexcept {
    // Rejection sampling over the largest multiple of n.
    const std::uint64_t limit = ~0ull - ~0ull % n;
    std::uint64_t x;
    do {
        x = next_u64();
    } while (x >= limit);
    return x % n;
}

std::uint64_t derive_seed(std::uint64_t root, std::string_view tag,
                          std::uint64_t a, std::uint64_t b) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : tag) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    std::uint64_t s = mix64(root ^ h);
    s = mix64(s ^ mix64(a ^ 0x9e3779b97f4a7c15ull));
    s = mix64(s ^ mix64(b ^ 0x3c6ef372fe94f82aull));
    return s;
}

} // namespace zscan
