#pragma once

#include <cstdint>
#include <random>

namespace hdboot {

using Engine = std::mt19937_64;

/// One round of the SplitMix64 finalizer.
[[nodiscard]] std::uint64_t splitmix64(std::uint64_t x) noexcept;

/**
 * Seed of the independent stream number `index` under `master`.
 *
 * stream_seed(m, i) = splitmix64(m ^ splitmix64(i + 0x9E3779B97F4A7C15)).
 * Every replicate (bootstrap draw, Monte Carlo replication) owns the stream
 * named by its index, so results do not depend on scheduling.
 */
[[nodiscard]] std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index) noexcept;

[[nodiscard]] inline Engine make_engine(std::uint64_t master, std::uint64_t index) {
    return Engine(stream_seed(master, index));
}

} // namespace hdboot
