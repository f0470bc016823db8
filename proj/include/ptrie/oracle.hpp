// oracle.hpp
// Reference finite map: a sorted association list searched linearly.
// Slow on purpose; its only job is to be obviously right.

#pragma once

#include <functional>
#include <optional>
#include <utility>

#include "ptrie/detail/common.hpp"
#include "ptrie/positive.hpp"

namespace ptrie {

template <class V>
class map_oracle {
public:
    using mapped_type = V;

    map_oracle() = default;

    /// Bindings must already be strictly increasing by key.
    static map_oracle from_sorted(binding_list<V> bindings)
    {
        map_oracle m;
        m.bindings_ = std::move(bindings);
        return m;
    }

    const V* find(const positive& k) const
    {
        for (const auto& [key, v] : bindings_)
            if (key == k) return &v;
        return nullptr;
    }

    std::optional<V> get(const positive& k) const
    {
        const V* v = find(k);
        return v ? std::optional<V>(*v) : std::nullopt;
    }

    map_oracle set(const positive& k, const V& v) const
    {
        map_oracle out;
        out.bindings_.reserve(bindings_.size() + 1);
        bool placed = false;
        for (const auto& b : bindings_) {
            if (!placed && k <= b.first) {
                out.bindings_.emplace_back(k, v);
                placed = true;
                if (k == b.first) continue;
            }
            out.bindings_.push_back(b);
        }
        if (!placed) out.bindings_.emplace_back(k, v);
        return out;
    }

    map_oracle remove(const positive& k) const
    {
        map_oracle out;
        for (const auto& b : bindings_)
            if (b.first != k) out.bindings_.push_back(b);
        return out;
    }

    const binding_list<V>& elements() const { return bindings_; }

    std::size_t size() const { return bindings_.size(); }

    template <class F>
    map_oracle<detail::filter_result_t<F, V>> map_filter(F&& f) const
    {
        using W = detail::filter_result_t<F, V>;
        binding_list<W> out;
        for (const auto& [k, v] : bindings_)
            if (auto w = std::invoke(f, v)) out.emplace_back(k, std::move(*w));
        return map_oracle<W>::from_sorted(std::move(out));
    }

    /// Evaluates f pointwise over the union of both key sets.
    template <class B, class F>
    map_oracle<detail::combine_result_t<F, V, B>> combine(const map_oracle<B>& other, F&& f) const
    {
        using C = detail::combine_result_t<F, V, B>;
        binding_list<C> out;
        const auto& a = bindings_;
        const auto& b = other.elements();
        std::size_t i = 0, j = 0;
        while (i < a.size() || j < b.size()) {
            std::optional<C> r;
            positive k;
            if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
                k = a[i].first;
                r = std::invoke(f, std::optional<V>(a[i++].second), std::optional<B>());
            } else if (i == a.size() || b[j].first < a[i].first) {
                k = b[j].first;
                r = std::invoke(f, std::optional<V>(), std::optional<B>(b[j++].second));
            } else {
                k = a[i].first;
                r = std::invoke(f, std::optional<V>(a[i++].second), std::optional<B>(b[j++].second));
            }
            if (r) out.emplace_back(std::move(k), std::move(*r));
        }
        return map_oracle<C>::from_sorted(std::move(out));
    }

    bool structurally_equal(const map_oracle& other) const { return bindings_ == other.bindings_; }

    friend bool operator==(const map_oracle& a, const map_oracle& b) { return a.structurally_equal(b); }

private:
    binding_list<V> bindings_;
};

} // namespace ptrie
