// canonical.hpp
// Canonical binary tries.
//
// A nonempty trie node comes in seven forms named by which of (left, value,
// right) are present: Node001, Node010, Node011, Node100, Node101, Node110,
// Node111. There is no all-absent form, so every nonempty node holds at least
// one binding, and a tree is either Empty or Nodes(t) for a nonempty t.
// Consequently each finite binding set has exactly one representation and
// structural equality coincides with extensional equality.
//
// Each form has its own layout; operations dispatch on the form at run time
// and on the presence bits at compile time, so every per-form case is a
// separate instantiation rather than a runtime test of an optional slot.

#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string_view>
#include <type_traits>
#include <utility>

#include "ptrie/detail/common.hpp"
#include "ptrie/positive.hpp"
#include "ptrie/stats.hpp"

namespace ptrie::canonical {

template <class V, class Stats = no_stats>
class nonempty;
template <class V, class Stats = no_stats>
class tree;

namespace detail {

/// Placeholder occupying an absent slot; takes no space.
struct none {
    friend bool operator==(none, none) { return true; }
};

template <bool Present, class T>
using slot_t = std::conditional_t<Present, T, none>;

// Presence bits of a form: left = 4, value = 2, right = 1.
struct node_base {
    std::uint8_t form;
};

template <class V, class S, bool L, bool M, bool R>
struct layout;

} // namespace detail

/// A nonempty canonical trie (one of the seven node forms). Never null.
template <class V, class Stats>
class nonempty {
public:
    using mapped_type = V;

    static constexpr std::uint8_t left_bit = 4;
    static constexpr std::uint8_t value_bit = 2;
    static constexpr std::uint8_t right_bit = 1;

    static nonempty node001(nonempty r) { return make<false, false, true>({}, {}, std::move(r)); }
    static nonempty node010(V x) { return make<false, true, false>({}, std::move(x), {}); }
    static nonempty node011(V x, nonempty r) { return make<false, true, true>({}, std::move(x), std::move(r)); }
    static nonempty node100(nonempty l) { return make<true, false, false>(std::move(l), {}, {}); }
    static nonempty node101(nonempty l, nonempty r) { return make<true, false, true>(std::move(l), {}, std::move(r)); }
    static nonempty node110(nonempty l, V x) { return make<true, true, false>(std::move(l), std::move(x), {}); }
    static nonempty node111(nonempty l, V x, nonempty r)
    {
        return make<true, true, true>(std::move(l), std::move(x), std::move(r));
    }

    /// The single-branch trie binding exactly k -> x.
    static nonempty set0(const positive& k, const V& x) { return set0_at(k, 0, x); }

    /// Presence digits as an integer: 1 = Node001 ... 7 = Node111.
    std::uint8_t form() const { return node_->form; }

    std::string_view form_name() const
    {
        static constexpr std::string_view names[] = {"", "Node001", "Node010", "Node011",
                                                     "Node100", "Node101", "Node110", "Node111"};
        return names[form()];
    }

    const nonempty* left() const
    {
        return visit([](const auto& n) -> const nonempty* {
            if constexpr (std::remove_cvref_t<decltype(n)>::has_left) return &n.left;
            else return nullptr;
        });
    }

    const V* value() const
    {
        return visit([](const auto& n) -> const V* {
            if constexpr (std::remove_cvref_t<decltype(n)>::has_value) return &n.value;
            else return nullptr;
        });
    }

    const nonempty* right() const
    {
        return visit([](const auto& n) -> const nonempty* {
            if constexpr (std::remove_cvref_t<decltype(n)>::has_right) return &n.right;
            else return nullptr;
        });
    }

    const V* find(const positive& k) const
    {
        const nonempty* t = this;
        for (std::size_t d = 0; t; ++d) {
            switch (k.at(d)) {
            case step::xH: return t->value();
            case step::xO: t = t->left(); break;
            case step::xI: t = t->right(); break;
            }
        }
        return nullptr;
    }

    /// Binds k -> x, upgrading the node form where a slot was absent.
    nonempty set(const positive& k, const V& x) const { return set_at(k, 0, x); }

    template <class Eq = std::equal_to<>>
    bool structurally_equal(const nonempty& other, Eq eq = {}) const
    {
        if (node_ == other.node_) return true;
        if (form() != other.form()) return false;
        return visit([&](const auto& a) {
            using N = std::remove_cvref_t<decltype(a)>;
            const auto& b = static_cast<const N&>(*other.node_);
            if constexpr (N::has_value)
                if (!eq(a.value, b.value)) return false;
            if constexpr (N::has_left)
                if (!a.left.structurally_equal(b.left, eq)) return false;
            if constexpr (N::has_right)
                if (!a.right.structurally_equal(b.right, eq)) return false;
            return true;
        });
    }

    /// Calls fn with the node's concrete layout.
    template <class Fn>
    decltype(auto) visit(Fn&& fn) const
    {
        switch (form()) {
        case 1: return fn(as<false, false, true>());
        case 2: return fn(as<false, true, false>());
        case 3: return fn(as<false, true, true>());
        case 4: return fn(as<true, false, false>());
        case 5: return fn(as<true, false, true>());
        case 6: return fn(as<true, true, false>());
        default: return fn(as<true, true, true>());
        }
    }

private:
    template <class, class>
    friend class nonempty;
    template <class, class>
    friend class tree;
    template <class, class, bool, bool, bool>
    friend struct detail::layout;

    nonempty() = default;
    explicit nonempty(std::shared_ptr<const detail::node_base> n) : node_(std::move(n)) {}

    template <bool L, bool M, bool R>
    const detail::layout<V, Stats, L, M, R>& as() const
    {
        return static_cast<const detail::layout<V, Stats, L, M, R>&>(*node_);
    }

    template <bool L, bool M, bool R>
    static nonempty make(detail::slot_t<L, nonempty> l, detail::slot_t<M, V> x, detail::slot_t<R, nonempty> r)
    {
        static_assert(L || M || R, "no all-absent node form");
        Stats::constructed(1 + unsigned{L} + unsigned{M} + unsigned{R});
        return nonempty(
            std::make_shared<const detail::layout<V, Stats, L, M, R>>(std::move(l), std::move(x), std::move(r)));
    }

    static nonempty set0_at(const positive& k, std::size_t d, const V& x)
    {
        switch (k.at(d)) {
        case step::xH: return node010(x);
        case step::xO: return node100(set0_at(k, d + 1, x));
        case step::xI: return node001(set0_at(k, d + 1, x));
        }
        return node010(x);
    }

    nonempty set_at(const positive& k, std::size_t d, const V& x) const
    {
        return visit([&](const auto& n) -> nonempty {
            using N = std::remove_cvref_t<decltype(n)>;
            switch (k.at(d)) {
            case step::xH: return make<N::has_left, true, N::has_right>(n.left, x, n.right);
            case step::xO:
                if constexpr (N::has_left)
                    return make<true, N::has_value, N::has_right>(n.left.set_at(k, d + 1, x), n.value, n.right);
                else
                    return make<true, N::has_value, N::has_right>(set0_at(k, d + 1, x), n.value, n.right);
            case step::xI:
                if constexpr (N::has_right)
                    return make<N::has_left, N::has_value, true>(n.left, n.value, n.right.set_at(k, d + 1, x));
                else
                    return make<N::has_left, N::has_value, true>(n.left, n.value, set0_at(k, d + 1, x));
            }
            return *this;
        });
    }

    tree<V, Stats> remove_at(const positive& k, std::size_t d) const;

    template <class F>
    tree<ptrie::detail::filter_result_t<F, V>, Stats> map_filter(F& f) const;

    template <class B, class F>
    tree<ptrie::detail::combine_result_t<F, V, B>, Stats> combine(const nonempty<B, Stats>& other, F& f) const;

    void collect(ptrie::detail::path_buffer& path, binding_list<V>& out) const
    {
        Stats::visited();
        visit([&](const auto& n) {
            using N = std::remove_cvref_t<decltype(n)>;
            if constexpr (N::has_value) out.emplace_back(path.key(), n.value);
            if constexpr (N::has_left) {
                path.push(false);
                n.left.collect(path, out);
                path.pop();
            }
            if constexpr (N::has_right) {
                path.push(true);
                n.right.collect(path, out);
                path.pop();
            }
        });
    }

    void count(ptrie::census& c) const
    {
        visit([&](const auto& n) {
            using N = std::remove_cvref_t<decltype(n)>;
            c.nodes += 1;
            c.words += N::words;
            c.value_slots += N::has_value;
            c.values += N::has_value;
            if constexpr (N::has_left) n.left.count(c);
            if constexpr (N::has_right) n.right.count(c);
        });
    }

    std::shared_ptr<const detail::node_base> node_;
};

namespace detail {

template <class V, class S, bool L, bool M, bool R>
struct layout : node_base {
    static constexpr bool has_left = L;
    static constexpr bool has_value = M;
    static constexpr bool has_right = R;
    static constexpr unsigned words = 1 + unsigned{L} + unsigned{M} + unsigned{R};

    layout(slot_t<L, nonempty<V, S>> l, slot_t<M, V> x, slot_t<R, nonempty<V, S>> r)
        : node_base{static_cast<std::uint8_t>((L ? 4 : 0) | (M ? 2 : 0) | (R ? 1 : 0))},
          left(std::move(l)),
          value(std::move(x)),
          right(std::move(r))
    {
    }

    [[no_unique_address]] slot_t<L, nonempty<V, S>> left;
    [[no_unique_address]] slot_t<M, V> value;
    [[no_unique_address]] slot_t<R, nonempty<V, S>> right;
};

} // namespace detail

/// A canonical trie: Empty, or Nodes(t) for a nonempty t.
template <class V, class Stats>
class tree {
public:
    using mapped_type = V;
    using stats_type = Stats;
    using nonempty_type = nonempty<V, Stats>;

    /// The two-case view of a tree: Empty, or a node with possibly empty
    /// sides and an optional value. Views produced by view() are never
    /// trivially empty.
    struct node_view {
        tree left;
        std::optional<V> value;
        tree right;
    };
    using view_case = std::optional<node_view>;

    /// Empty.
    tree() = default;

    /// Nodes(t).
    static tree nodes(nonempty_type t) { return tree(std::move(t)); }

    bool empty() const { return !ne_.node_; }

    /// Precondition: !empty().
    const nonempty_type& root() const { return ne_; }

    /// The unique tree with sub-maps l, r and middle binding o.
    static tree node(tree l, std::optional<V> o, tree r)
    {
        using N = nonempty_type;
        unsigned bits = (l.empty() ? 0u : 4u) | (o ? 2u : 0u) | (r.empty() ? 0u : 1u);
        switch (bits) {
        case 0: return {};
        case 1: return nodes(N::template make<false, false, true>({}, {}, std::move(r.ne_)));
        case 2: return nodes(N::template make<false, true, false>({}, std::move(*o), {}));
        case 3: return nodes(N::template make<false, true, true>({}, std::move(*o), std::move(r.ne_)));
        case 4: return nodes(N::template make<true, false, false>(std::move(l.ne_), {}, {}));
        case 5: return nodes(N::template make<true, false, true>(std::move(l.ne_), {}, std::move(r.ne_)));
        case 6: return nodes(N::template make<true, true, false>(std::move(l.ne_), std::move(*o), {}));
        default: return nodes(N::template make<true, true, true>(std::move(l.ne_), std::move(*o), std::move(r.ne_)));
        }
    }

    /// Inverse of node() on trees that are not Empty.
    view_case view() const
    {
        if (empty()) return std::nullopt;
        return ne_.visit([](const auto& n) {
            using N = std::remove_cvref_t<decltype(n)>;
            node_view out;
            if constexpr (N::has_left) out.left = tree(n.left);
            if constexpr (N::has_value) out.value = n.value;
            if constexpr (N::has_right) out.right = tree(n.right);
            return view_case(std::move(out));
        });
    }

    const V* find(const positive& k) const { return empty() ? nullptr : ne_.find(k); }

    std::optional<V> get(const positive& k) const
    {
        const V* v = find(k);
        return v ? std::optional<V>(*v) : std::nullopt;
    }

    tree set(const positive& k, const V& x) const
    {
        if (empty()) return nodes(nonempty_type::set0(k, x));
        return nodes(ne_.set(k, x));
    }

    /// Unchanged (same root) when k is unbound.
    tree remove(const positive& k) const { return empty() ? *this : ne_.remove_at(k, 0); }

    binding_list<V> elements() const
    {
        binding_list<V> out;
        if (empty()) return out;
        ptrie::detail::path_buffer path;
        ne_.collect(path, out);
        ptrie::detail::sort_by_key(out);
        return out;
    }

    template <class F>
    tree<ptrie::detail::filter_result_t<F, V>, Stats> map_filter(F&& f) const
    {
        if (empty()) return {};
        return ne_.map_filter(f);
    }

    /// get(i, result) = f(get(i, *this), get(i, other)); requires f(None, None) = None.
    /// Once one side runs out, the other is finished by a one-sided map_filter.
    template <class B, class F>
    tree<ptrie::detail::combine_result_t<F, V, B>, Stats> combine(const tree<B, Stats>& other, F&& f) const
    {
        if (empty()) {
            if (other.empty()) return {};
            auto only_right = [&f](const B& b) { return std::invoke(f, std::optional<V>(), std::optional<B>(b)); };
            return other.ne_.map_filter(only_right);
        }
        if (other.empty()) {
            auto only_left = [&f](const V& a) { return std::invoke(f, std::optional<V>(a), std::optional<B>()); };
            return ne_.map_filter(only_left);
        }
        return ne_.combine(other.ne_, f);
    }

    ptrie::census census() const
    {
        ptrie::census c;
        if (!empty()) ne_.count(c);
        return c;
    }

    /// Same root node object (structure shared, not just equal).
    bool shares_root(const tree& other) const { return ne_.node_ == other.ne_.node_; }

    template <class Eq = std::equal_to<>>
    bool structurally_equal(const tree& other, Eq eq = {}) const
    {
        if (empty() || other.empty()) return empty() == other.empty();
        return ne_.structurally_equal(other.ne_, eq);
    }

    friend bool operator==(const tree& a, const tree& b) { return a.structurally_equal(b); }

private:
    template <class, class>
    friend class nonempty;
    template <class, class>
    friend class tree;

    explicit tree(nonempty_type t) : ne_(std::move(t)) {}

    nonempty_type ne_;
};

template <class V, class Stats>
tree<V, Stats> nonempty<V, Stats>::remove_at(const positive& k, std::size_t d) const
{
    using T = tree<V, Stats>;
    return visit([&](const auto& n) -> T {
        using N = std::remove_cvref_t<decltype(n)>;
        auto side = [](const auto& s) {
            if constexpr (std::is_same_v<std::remove_cvref_t<decltype(s)>, nonempty>) return T(s);
            else return T();
        };
        auto mid = [](const auto& v) {
            if constexpr (std::is_same_v<std::remove_cvref_t<decltype(v)>, V>) return std::optional<V>(v);
            else return std::optional<V>();
        };
        switch (k.at(d)) {
        case step::xH:
            if constexpr (N::has_value) return T::node(side(n.left), std::nullopt, side(n.right));
            else return T(*this);
        case step::xO:
            if constexpr (N::has_left) {
                T l = n.left.remove_at(k, d + 1);
                if (l.ne_.node_ == n.left.node_) return T(*this);
                return T::node(std::move(l), mid(n.value), side(n.right));
            } else {
                return T(*this);
            }
        case step::xI:
            if constexpr (N::has_right) {
                T r = n.right.remove_at(k, d + 1);
                if (r.ne_.node_ == n.right.node_) return T(*this);
                return T::node(side(n.left), mid(n.value), std::move(r));
            } else {
                return T(*this);
            }
        }
        return T(*this);
    });
}

template <class V, class Stats>
template <class F>
tree<ptrie::detail::filter_result_t<F, V>, Stats> nonempty<V, Stats>::map_filter(F& f) const
{
    using W = ptrie::detail::filter_result_t<F, V>;
    using T = tree<W, Stats>;
    return visit([&](const auto& n) -> T {
        using N = std::remove_cvref_t<decltype(n)>;
        T l, r;
        std::optional<W> o;
        if constexpr (N::has_left) l = n.left.map_filter(f);
        if constexpr (N::has_value) o = std::invoke(f, n.value);
        if constexpr (N::has_right) r = n.right.map_filter(f);
        return T::node(std::move(l), std::move(o), std::move(r));
    });
}

template <class V, class Stats>
template <class B, class F>
tree<ptrie::detail::combine_result_t<F, V, B>, Stats> nonempty<V, Stats>::combine(const nonempty<B, Stats>& other,
                                                                                   F& f) const
{
    using C = ptrie::detail::combine_result_t<F, V, B>;
    using T = tree<C, Stats>;
    auto only_left = [&f](const V& a) { return std::invoke(f, std::optional<V>(a), std::optional<B>()); };
    auto only_right = [&f](const B& b) { return std::invoke(f, std::optional<V>(), std::optional<B>(b)); };

    // 7 x 7 forms: two subtrees recurse in parallel, a lone subtree is
    // finished one-sidedly, two absent subtrees give Empty.
    return visit([&](const auto& n1) -> T {
        using N1 = std::remove_cvref_t<decltype(n1)>;
        return other.visit([&](const auto& n2) -> T {
            using N2 = std::remove_cvref_t<decltype(n2)>;
            T l, r;
            std::optional<C> o;
            if constexpr (N1::has_left && N2::has_left) l = n1.left.combine(n2.left, f);
            else if constexpr (N1::has_left) l = n1.left.map_filter(only_left);
            else if constexpr (N2::has_left) l = n2.left.map_filter(only_right);

            if constexpr (N1::has_value && N2::has_value)
                o = std::invoke(f, std::optional<V>(n1.value), std::optional<B>(n2.value));
            else if constexpr (N1::has_value)
                o = std::invoke(f, std::optional<V>(n1.value), std::optional<B>());
            else if constexpr (N2::has_value)
                o = std::invoke(f, std::optional<V>(), std::optional<B>(n2.value));

            if constexpr (N1::has_right && N2::has_right) r = n1.right.combine(n2.right, f);
            else if constexpr (N1::has_right) r = n1.right.map_filter(only_left);
            else if constexpr (N2::has_right) r = n2.right.map_filter(only_right);
            return T::node(std::move(l), std::move(o), std::move(r));
        });
    });
}

} // namespace ptrie::canonical
