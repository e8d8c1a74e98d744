// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 WindTunnel Contributors

#pragma once

#include <cstdint>
#include <string_view>

namespace windtunnel {

std::uint64_t fnv1a64(std::string_view bytes) noexcept;

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Deterministic hash of (seed, bytes); independent of any iteration order.
std::uint64_t keyed_hash(std::uint64_t seed, std::string_view bytes) noexcept;

/// Maps a 64-bit hash to a double uniformly in [0, 1) using the top 53 bits.
inline double unit_interval(std::uint64_t h) noexcept {
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

/// Seed for one pipeline stage, derived from the run seed and the stage name.
inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view stage) noexcept {
    return keyed_hash(seed, stage);
}

} // namespace windtunnel
