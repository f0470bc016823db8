// original.hpp
// Two-form binary tries: Leaf, or Node(left, optional value, right).
//
// Nothing in the type rules out an empty Node(Leaf, None, Leaf), so two trees
// with the same bindings may differ structurally. The operations here never
// produce such nodes; `make_node` exists so callers can.

#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <utility>

#include "ptrie/detail/common.hpp"
#include "ptrie/positive.hpp"
#include "ptrie/stats.hpp"

namespace ptrie::original {

template <class V, class Stats = no_stats>
class tree {
    struct node;

public:
    using mapped_type = V;
    using stats_type = Stats;

    static constexpr unsigned node_words = 4;

    /// Leaf.
    tree() = default;

    /// Node(l, o, r) exactly as given, even when trivially empty.
    static tree make_node(tree l, std::optional<V> o, tree r)
    {
        Stats::constructed(node_words);
        return tree(std::make_shared<const node>(std::move(l), std::move(o), std::move(r)));
    }

    /// Leaf when (l, o, r) is (Leaf, None, Leaf), Node(l, o, r) otherwise.
    static tree node_smart(tree l, std::optional<V> o, tree r)
    {
        if (l.is_leaf() && !o && r.is_leaf()) return tree();
        return make_node(std::move(l), std::move(o), std::move(r));
    }

    bool is_leaf() const { return !root_; }

    // Node accessors; precondition !is_leaf().
    const tree& left() const { return root_->left; }
    const std::optional<V>& value() const { return root_->value; }
    const tree& right() const { return root_->right; }

    const V* find(const positive& k) const
    {
        const node* n = root_.get();
        for (std::size_t d = 0; n; ++d) {
            switch (k.at(d)) {
            case step::xH: return n->value ? &*n->value : nullptr;
            case step::xO: n = n->left.root_.get(); break;
            case step::xI: n = n->right.root_.get(); break;
            }
        }
        return nullptr;
    }

    std::optional<V> get(const positive& k) const
    {
        const V* v = find(k);
        return v ? std::optional<V>(*v) : std::nullopt;
    }

    tree set(const positive& k, const V& v) const { return set_at(k, 0, v); }

    /// Unchanged (same root) when k is unbound.
    tree remove(const positive& k) const { return remove_at(k, 0); }

    binding_list<V> elements() const
    {
        binding_list<V> out;
        detail::path_buffer path;
        collect(path, out);
        detail::sort_by_key(out);
        return out;
    }

    template <class F>
    tree<detail::filter_result_t<F, V>, Stats> map_filter(F&& f) const
    {
        using W = detail::filter_result_t<F, V>;
        if (is_leaf()) return {};
        std::optional<W> o;
        if (root_->value) o = std::invoke(f, *root_->value);
        auto l = root_->left.map_filter(f);
        auto r = root_->right.map_filter(f);
        return tree<W, Stats>::node_smart(std::move(l), std::move(o), std::move(r));
    }

    /// get(i, result) = f(get(i, *this), get(i, other)); requires f(None, None) = None.
    template <class B, class F>
    tree<detail::combine_result_t<F, V, B>, Stats> combine(const tree<B, Stats>& other, F&& f) const
    {
        using C = detail::combine_result_t<F, V, B>;
        if (is_leaf())
            return other.map_filter([&f](const B& b) { return std::invoke(f, std::optional<V>(), std::optional<B>(b)); });
        if (other.is_leaf())
            return map_filter([&f](const V& a) { return std::invoke(f, std::optional<V>(a), std::optional<B>()); });
        auto l = root_->left.combine(other.left(), f);
        std::optional<C> o = std::invoke(f, root_->value, other.value());
        auto r = root_->right.combine(other.right(), f);
        return tree<C, Stats>::node_smart(std::move(l), std::move(o), std::move(r));
    }

    /// No subtree is Node(Leaf, None, Leaf).
    bool well_formed() const
    {
        if (is_leaf()) return true;
        if (left().is_leaf() && !value() && right().is_leaf()) return false;
        return left().well_formed() && right().well_formed();
    }

    ptrie::census census() const
    {
        ptrie::census c;
        count(c);
        return c;
    }

    /// Same root node object (structure shared, not just equal).
    bool shares_root(const tree& other) const { return root_ == other.root_; }

    template <class Eq = std::equal_to<>>
    bool structurally_equal(const tree& other, Eq eq = {}) const
    {
        if (root_ == other.root_) return true;
        if (is_leaf() || other.is_leaf()) return false;
        if (value().has_value() != other.value().has_value()) return false;
        if (value() && !eq(*value(), *other.value())) return false;
        return left().structurally_equal(other.left(), eq) && right().structurally_equal(other.right(), eq);
    }

    friend bool operator==(const tree& a, const tree& b) { return a.structurally_equal(b); }

private:
    template <class, class>
    friend class tree;

    struct node {
        node(tree l, std::optional<V> o, tree r) : left(std::move(l)), value(std::move(o)), right(std::move(r)) {}
        tree left;
        std::optional<V> value;
        tree right;
    };

    explicit tree(std::shared_ptr<const node> n) : root_(std::move(n)) {}

    tree set_at(const positive& k, std::size_t d, const V& v) const
    {
        // A Leaf behaves as Node(Leaf, None, Leaf) here, which is what makes
        // the chain created below a Leaf well formed.
        tree l, r;
        std::optional<V> o;
        if (root_) {
            l = root_->left;
            o = root_->value;
            r = root_->right;
        }
        switch (k.at(d)) {
        case step::xH: return make_node(std::move(l), v, std::move(r));
        case step::xO: return make_node(l.set_at(k, d + 1, v), std::move(o), std::move(r));
        case step::xI: return make_node(std::move(l), std::move(o), r.set_at(k, d + 1, v));
        }
        return *this;
    }

    tree remove_at(const positive& k, std::size_t d) const
    {
        if (is_leaf()) return *this;
        switch (k.at(d)) {
        case step::xH:
            if (!value()) return *this;
            return node_smart(left(), std::nullopt, right());
        case step::xO: {
            tree l = left().remove_at(k, d + 1);
            if (l.root_ == left().root_) return *this;
            return node_smart(std::move(l), value(), right());
        }
        case step::xI: {
            tree r = right().remove_at(k, d + 1);
            if (r.root_ == right().root_) return *this;
            return node_smart(left(), value(), std::move(r));
        }
        }
        return *this;
    }

    void collect(detail::path_buffer& path, binding_list<V>& out) const
    {
        if (is_leaf()) return;
        Stats::visited();
        if (value()) out.emplace_back(path.key(), *value());
        path.push(false);
        left().collect(path, out);
        path.pop();
        path.push(true);
        right().collect(path, out);
        path.pop();
    }

    void count(ptrie::census& c) const
    {
        if (is_leaf()) return;
        c.nodes += 1;
        c.words += node_words;
        c.value_slots += 1;
        c.values += value() ? 1 : 0;
        left().count(c);
        right().count(c);
    }

    std::shared_ptr<const node> root_;
};

} // namespace ptrie::original
