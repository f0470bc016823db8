// Shared helpers for the unit tests.
#pragma once

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "ptrie/oracle.hpp"
#include "ptrie/positive.hpp"

namespace support {

using ptrie::positive;

/// Mix of small integers and long sparse keys.
inline positive random_key(std::mt19937_64& rng)
{
    switch (rng() % 3) {
    case 0: return positive::from_integer(1 + rng() % 64);
    case 1: return positive::from_integer(1 + rng() % 4096);
    default: {
        std::uint64_t limbs[2] = {rng(), rng() >> (rng() % 64)};
        if (limbs[1] == 0) limbs[1] = 1;
        return positive::from_limbs(limbs);
    }
    }
}

template <class V = int>
ptrie::binding_list<V> random_bindings(std::mt19937_64& rng, std::size_t n)
{
    ptrie::map_oracle<V> o;
    for (std::size_t i = 0; i < n; ++i) o = o.set(random_key(rng), static_cast<V>(rng() % 1000));
    return o.elements();
}

template <class M, class V>
M build(const ptrie::binding_list<V>& bs)
{
    M m;
    for (const auto& [k, v] : bs) m = m.set(k, v);
    return m;
}

/// Same bindings, shuffled order, with decoy writes that are later undone.
template <class M, class V>
M build_scrambled(const ptrie::binding_list<V>& bs, std::mt19937_64& rng)
{
    auto order = bs;
    std::shuffle(order.begin(), order.end(), rng);
    M m;
    std::vector<positive> decoys;
    for (const auto& [k, v] : order) {
        if (rng() % 3 == 0) m = m.set(k, v + 17); // overwritten below
        if (rng() % 4 == 0) {
            auto d = random_key(rng);
            if (!std::any_of(bs.begin(), bs.end(), [&](const auto& b) { return b.first == d; })) {
                m = m.set(d, 0);
                decoys.push_back(d);
            }
        }
        m = m.set(k, v);
        if (!decoys.empty() && rng() % 2 == 0) {
            m = m.remove(decoys.back());
            decoys.pop_back();
        }
    }
    for (const auto& d : decoys) m = m.remove(d);
    return m;
}

inline std::optional<int> keep_even(int v)
{
    if (v % 2 == 0) return v;
    return std::nullopt;
}

inline std::optional<int> left_biased(std::optional<int> a, std::optional<int> b) { return a ? a : b; }

} // namespace support
