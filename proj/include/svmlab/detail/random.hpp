#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

// std::mt19937_64 output is fixed by the standard but the std distributions
// are implementation-defined, so draws that must reproduce across platforms
// go through these helpers.
namespace svmlab::detail {

using Engine = std::mt19937_64;

/// Uniform integer in [0, bound), by rejection.
inline std::uint64_t uniform_index(Engine& engine, std::uint64_t bound) {
    const std::uint64_t limit = Engine::max() - (Engine::max() % bound + 1) % bound;
    std::uint64_t draw = engine();
    while (draw > limit) {
        draw = engine();
    }
    return draw % bound;
}

/// Uniform real in [lo, hi) from the top 53 bits of one draw.
inline double uniform_real(Engine& engine, double lo, double hi) {
    const double unit = static_cast<double>(engine() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * unit;
}

/// Fisher-Yates shuffle.
template <class T>
void shuffle(Engine& engine, std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(uniform_index(engine, i));
        std::swap(items[i - 1], items[j]);
    }
}

} // namespace svmlab::detail
