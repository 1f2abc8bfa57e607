/**
 * @file
 * @brief Portable seeded draws.
 *
 * The standard distributions are implementation-defined, so generated traces
 * would differ between standard libraries. These helpers only rely on the
 * exactly specified output of std::mt19937_64.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <utility>
#include <vector>

namespace flowminer {

using Rng = std::mt19937_64;

/// Uniform integer in [0, bound). @p bound must be positive.
[[nodiscard]] inline std::size_t uniform_index(Rng &rng, std::size_t bound) {
    const std::uint64_t n = bound;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x = rng();
    while (x >= limit) {
        x = rng();
    }
    return static_cast<std::size_t>(x % n);
}

template <typename T>
void shuffle(std::vector<T> &items, Rng &rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        std::swap(items[i - 1], items[uniform_index(rng, i)]);
    }
}

}  // namespace flowminer
