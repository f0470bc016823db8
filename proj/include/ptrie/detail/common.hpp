#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <type_traits>
#include <utility>
#include <vector>

#include "ptrie/positive.hpp"

namespace ptrie {

template <class V>
using binding = std::pair<positive, V>;

template <class V>
using binding_list = std::vector<binding<V>>;

namespace detail {

template <class T>
struct optional_value;
template <class T>
struct optional_value<std::optional<T>> {
    using type = T;
};

/// W such that F : const A& -> std::optional<W>.
template <class F, class A>
using filter_result_t = typename optional_value<std::remove_cvref_t<std::invoke_result_t<F&, const A&>>>::type;

/// C such that F : (const optional<A>&, const optional<B>&) -> std::optional<C>.
template <class F, class A, class B>
using combine_result_t = typename optional_value<
    std::remove_cvref_t<std::invoke_result_t<F&, const std::optional<A>&, const std::optional<B>&>>>::type;

/// Root-to-node bit path maintained during a traversal; key() materializes the
/// positive naming the current node.
class path_buffer {
public:
    void push(bool bit)
    {
        if (depth_ % 64 == 0) limbs_.push_back(0);
        if (bit) limbs_.back() |= std::uint64_t{1} << (depth_ % 64);
        ++depth_;
    }

    void pop()
    {
        --depth_;
        if (depth_ % 64 == 0) limbs_.pop_back();
        else limbs_.back() &= ~(std::uint64_t{1} << (depth_ % 64));
    }

    /// Step i of the path becomes bit i of the key, with the xH bit above.
    positive key() const
    {
        key_.assign(limbs_.begin(), limbs_.end());
        if (depth_ % 64 == 0) key_.push_back(1);
        else key_.back() |= std::uint64_t{1} << (depth_ % 64);
        return positive::from_limbs(key_);
    }

private:
    std::vector<std::uint64_t> limbs_;
    mutable std::vector<std::uint64_t> key_;
    std::size_t depth_ = 0;
};

/// Trie traversal order is not numeric order, so collected bindings are
/// sorted once at the end.
template <class V>
void sort_by_key(binding_list<V>& out)
{
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
}

} // namespace detail
} // namespace ptrie
