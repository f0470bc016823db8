// node01.hpp
// Binary tries whose node form records payload presence: Leaf, Node0(l, r),
// Node1(l, x, r). Same semantics as original::tree without the option slot on
// value-less nodes. Not extensional either.

#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <utility>

#include "ptrie/detail/common.hpp"
#include "ptrie/positive.hpp"
#include "ptrie/stats.hpp"

namespace ptrie::node01 {

template <class V, class Stats = no_stats>
class tree {
    struct node0;
    struct node1;

public:
    using mapped_type = V;
    using stats_type = Stats;

    static constexpr unsigned node0_words = 3;
    static constexpr unsigned node1_words = 4;

    tree() = default;

    static tree make_node0(tree l, tree r)
    {
        Stats::constructed(node0_words);
        return tree(std::make_shared<const node0>(std::move(l), std::move(r)));
    }

    static tree make_node1(tree l, V x, tree r)
    {
        Stats::constructed(node1_words);
        return tree(std::make_shared<const node1>(std::move(l), std::move(x), std::move(r)));
    }

    /// Leaf for (Leaf, None, Leaf); otherwise Node0 or Node1 by presence of o.
    static tree node_smart(tree l, std::optional<V> o, tree r)
    {
        if (o) return make_node1(std::move(l), std::move(*o), std::move(r));
        if (l.is_leaf() && r.is_leaf()) return tree();
        return make_node0(std::move(l), std::move(r));
    }

    bool is_leaf() const { return !root_; }
    bool has_value() const { return root_ && root_->has_value; }

    const tree& left() const { return root_->left; }
    const tree& right() const { return root_->right; }
    /// Precondition: has_value().
    const V& payload() const { return static_cast<const node1*>(root_.get())->value; }
    std::optional<V> value() const { return has_value() ? std::optional<V>(payload()) : std::nullopt; }

    const V* find(const positive& k) const
    {
        const tree* t = this;
        for (std::size_t d = 0; !t->is_leaf(); ++d) {
            switch (k.at(d)) {
            case step::xH: return t->has_value() ? &t->payload() : nullptr;
            case step::xO: t = &t->left(); break;
            case step::xI: t = &t->right(); break;
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
        if (has_value()) o = std::invoke(f, payload());
        auto l = left().map_filter(f);
        auto r = right().map_filter(f);
        return tree<W, Stats>::node_smart(std::move(l), std::move(o), std::move(r));
    }

    template <class B, class F>
    tree<detail::combine_result_t<F, V, B>, Stats> combine(const tree<B, Stats>& other, F&& f) const
    {
        using C = detail::combine_result_t<F, V, B>;
        if (is_leaf())
            return other.map_filter([&f](const B& b) { return std::invoke(f, std::optional<V>(), std::optional<B>(b)); });
        if (other.is_leaf())
            return map_filter([&f](const V& a) { return std::invoke(f, std::optional<V>(a), std::optional<B>()); });
        auto l = left().combine(other.left(), f);
        std::optional<C> o = std::invoke(f, value(), other.value());
        auto r = right().combine(other.right(), f);
        return tree<C, Stats>::node_smart(std::move(l), std::move(o), std::move(r));
    }

    /// No subtree is Node0(Leaf, Leaf).
    bool well_formed() const
    {
        if (is_leaf()) return true;
        if (!has_value() && left().is_leaf() && right().is_leaf()) return false;
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
        if (has_value() != other.has_value()) return false;
        if (has_value() && !eq(payload(), other.payload())) return false;
        return left().structurally_equal(other.left(), eq) && right().structurally_equal(other.right(), eq);
    }

    friend bool operator==(const tree& a, const tree& b) { return a.structurally_equal(b); }

private:
    template <class, class>
    friend class tree;

    struct node0 {
        node0(tree l, tree r, bool v = false) : left(std::move(l)), right(std::move(r)), has_value(v) {}
        tree left;
        tree right;
        bool has_value;
    };

    struct node1 : node0 {
        node1(tree l, V x, tree r) : node0(std::move(l), std::move(r), true), value(std::move(x)) {}
        V value;
    };

    explicit tree(std::shared_ptr<const node0> n) : root_(std::move(n)) {}

    tree set_at(const positive& k, std::size_t d, const V& v) const
    {
        tree l, r;
        if (root_) {
            l = root_->left;
            r = root_->right;
        }
        switch (k.at(d)) {
        case step::xH: return make_node1(std::move(l), v, std::move(r));
        case step::xO: return rebuild(l.set_at(k, d + 1, v), std::move(r));
        case step::xI: return rebuild(std::move(l), r.set_at(k, d + 1, v));
        }
        return *this;
    }

    // Same form as this node (Leaf counts as Node0), new children.
    tree rebuild(tree l, tree r) const
    {
        if (has_value()) return make_node1(std::move(l), payload(), std::move(r));
        return make_node0(std::move(l), std::move(r));
    }

    tree remove_at(const positive& k, std::size_t d) const
    {
        if (is_leaf()) return *this;
        switch (k.at(d)) {
        case step::xH:
            if (!has_value()) return *this;
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
        if (has_value()) out.emplace_back(path.key(), payload());
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
        c.words += has_value() ? node1_words : node0_words;
        c.value_slots += has_value() ? 1 : 0;
        c.values += has_value() ? 1 : 0;
        left().count(c);
        right().count(c);
    }

    std::shared_ptr<const node0> root_;
};

} // namespace ptrie::node01
