// stats.hpp
// Construction/visit instrumentation policies shared by the trie implementations.
//
// Every trie is parameterized by a Stats policy. `no_stats` compiles to
// nothing; `counting_stats` bumps process-wide counters and is only meaningful
// single-threaded.

#pragma once

#include <cstdint>

namespace ptrie {

struct no_stats {
    static constexpr bool enabled = false;
    static void constructed(unsigned /*words*/) noexcept {}
    static void visited() noexcept {}
};

struct counter_snapshot {
    std::uint64_t nodes = 0;
    std::uint64_t words = 0;
    std::uint64_t visits = 0;
};

/// Words are node fields plus one header word, as a boxed-constructor runtime
/// would lay them out: a child pointer, a value and an optional value each
/// take one word.
struct counting_stats {
    static constexpr bool enabled = true;
    using snapshot = counter_snapshot;

    static void constructed(unsigned words) noexcept
    {
        totals_.nodes += 1;
        totals_.words += words;
    }
    static void visited() noexcept { totals_.visits += 1; }

    static snapshot read() noexcept { return totals_; }
    static void reset() noexcept { totals_ = {}; }

private:
    inline static snapshot totals_{};
};

/// Result of walking a live tree.
struct census {
    std::uint64_t nodes = 0;
    std::uint64_t words = 0;
    /// Slots able to hold a value (present or not).
    std::uint64_t value_slots = 0;
    /// Slots actually holding a value.
    std::uint64_t values = 0;
};

} // namespace ptrie
