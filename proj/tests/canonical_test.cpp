#include <gtest/gtest.h>

#include <string>

#include "ptrie/canonical.hpp"
#include "ptrie/mapkit.hpp"
#include "support.hpp"

using ptrie::positive;
using tree = ptrie::canonical::tree<int>;
using ne = tree::nonempty_type;

namespace {

positive P(std::uint64_t n) { return positive::from_integer(n); }

tree random_tree(std::mt19937_64& rng, std::size_t max_size = 30)
{
    return support::build<tree>(support::random_bindings(rng, rng() % (max_size + 1)));
}

std::optional<int> random_option(std::mt19937_64& rng)
{
    if (rng() % 2) return static_cast<int>(rng() % 100);
    return std::nullopt;
}

} // namespace

TEST(Canonical, EmptyTree)
{
    tree t;
    EXPECT_TRUE(t.empty());
    EXPECT_FALSE(t.get(P(1)));
    EXPECT_TRUE(t.structurally_equal(tree()));
    EXPECT_TRUE(t.elements().empty());
    EXPECT_FALSE(t.view().has_value());
}

TEST(Canonical, GetReadsTheNodeForm)
{
    EXPECT_EQ(tree::nodes(ne::node010(4)).get(P(1)), 4);
    auto lr = ne::node101(ne::node010(1), ne::node010(2));
    EXPECT_FALSE(tree::nodes(lr).get(P(1)));
    EXPECT_EQ(tree::nodes(lr).get(P(2)), 1);
    EXPECT_EQ(tree::nodes(lr).get(P(3)), 2);

    ptrie::canonical::tree<std::string> s;
    EXPECT_EQ(s.set(P(6), "w").get(P(6)), "w");
}

TEST(Canonical, Set0BuildsASingleBranch)
{
    EXPECT_EQ(ne::set0(P(1), 7).form_name(), "Node010");
    auto two = ne::set0(P(2), 7); // xO xH
    EXPECT_EQ(two.form_name(), "Node100");
    EXPECT_EQ(two.left()->form_name(), "Node010");
    EXPECT_TRUE(tree::nodes(two).structurally_equal(tree::nodes(ne::node100(ne::node010(7)))));

    ptrie::binding_list<int> want{{P(13), 5}};
    EXPECT_EQ(tree::nodes(ne::set0(P(13), 5)).elements(), want);
}

TEST(Canonical, SetUpgradesTheForm)
{
    auto l = ne::node010(1), r = ne::node010(3);
    auto t = tree::nodes(ne::node101(l, r)).set(P(1), 2);
    EXPECT_TRUE(t.structurally_equal(tree::nodes(ne::node111(l, 2, r))));
    EXPECT_EQ(t.root().form_name(), "Node111");
    EXPECT_TRUE(t.root().left()->structurally_equal(l));

    EXPECT_TRUE(tree().set(P(1), 1).set(P(1), 2).structurally_equal(tree().set(P(1), 2)));
}

TEST(Canonical, NodeSmartConstructor)
{
    EXPECT_TRUE(tree::node({}, std::nullopt, {}).empty());
    auto r = tree::nodes(ne::node010(9));
    auto t = tree::node({}, 5, r);
    EXPECT_TRUE(t.structurally_equal(tree::nodes(ne::node011(5, r.root()))));

    // All eight presence combinations.
    auto l = tree::nodes(ne::node010(1));
    const char* names[] = {"", "Node001", "Node010", "Node011", "Node100", "Node101", "Node110", "Node111"};
    for (unsigned bits = 1; bits < 8; ++bits) {
        auto n = tree::node(bits & 4 ? l : tree(), bits & 2 ? std::optional<int>(2) : std::nullopt,
                            bits & 1 ? r : tree());
        ASSERT_FALSE(n.empty());
        EXPECT_EQ(n.root().form(), bits);
        EXPECT_EQ(n.root().form_name(), names[bits]);
    }
}

TEST(Canonical, ViewExamples)
{
    EXPECT_FALSE(tree().view());
    auto l = ne::node010(1);
    auto v = tree::nodes(ne::node110(l, 8)).view();
    ASSERT_TRUE(v);
    EXPECT_TRUE(v->left.structurally_equal(tree::nodes(l)));
    EXPECT_EQ(v->value, 8);
    EXPECT_TRUE(v->right.empty());
}

TEST(Canonical, ViewIsNeverTriviallyEmpty)
{
    std::mt19937_64 rng(21);
    for (int i = 0; i < 1000; ++i) {
        auto t = random_tree(rng);
        auto v = t.view();
        ASSERT_EQ(v.has_value(), !t.empty());
        if (v) EXPECT_TRUE(!v->left.empty() || v->value || !v->right.empty());
    }
}

TEST(Canonical, ViewAndNodeRoundTrip)
{
    std::mt19937_64 rng(22);
    for (int i = 0; i < 1000; ++i) {
        auto l = random_tree(rng), r = random_tree(rng);
        auto o = random_option(rng);
        auto v = tree::node(l, o, r).view();
        if (l.empty() && !o && r.empty()) {
            EXPECT_FALSE(v);
        } else {
            ASSERT_TRUE(v);
            EXPECT_TRUE(v->left.structurally_equal(l));
            EXPECT_EQ(v->value, o);
            EXPECT_TRUE(v->right.structurally_equal(r));
        }

        auto m = random_tree(rng);
        if (auto mv = m.view()) EXPECT_TRUE(tree::node(mv->left, mv->value, mv->right).structurally_equal(m));
    }
}

TEST(Canonical, SetOverViewEquations)
{
    std::mt19937_64 rng(23);
    for (int i = 0; i < 1000; ++i) {
        auto l = random_tree(rng), r = random_tree(rng);
        auto o = random_option(rng);
        auto q = support::random_key(rng);
        int v = static_cast<int>(rng() % 100);
        auto n = tree::node(l, o, r);
        auto xO = positive::xO(q), xI = positive::xI(q);
        const tree E;

        EXPECT_TRUE(E.set(positive::xH(), v).structurally_equal(tree::node(E, v, E)));
        EXPECT_TRUE(E.set(xO, v).structurally_equal(tree::node(E.set(q, v), std::nullopt, E)));
        EXPECT_TRUE(E.set(xI, v).structurally_equal(tree::node(E, std::nullopt, E.set(q, v))));
        EXPECT_TRUE(n.set(positive::xH(), v).structurally_equal(tree::node(l, v, r)));
        EXPECT_TRUE(n.set(xO, v).structurally_equal(tree::node(l.set(q, v), o, r)));
        EXPECT_TRUE(n.set(xI, v).structurally_equal(tree::node(l, o, r.set(q, v))));
    }
}

TEST(Canonical, RemoveExamples)
{
    EXPECT_TRUE(tree().set(P(1), 1).remove(P(1)).empty());
    EXPECT_TRUE(tree().remove(P(9)).empty());
    auto m = tree().set(P(2), 0).set(P(3), 0).remove(P(3));
    EXPECT_TRUE(m.structurally_equal(tree().set(P(2), 0)));
}

TEST(Canonical, RemovingAnAbsentKeySharesTheTree)
{
    std::mt19937_64 rng(24);
    for (int i = 0; i < 200; ++i) {
        auto bs = support::random_bindings(rng, 1 + rng() % 20);
        auto m = support::build<tree>(bs);
        auto k = support::random_key(rng);
        if (m.get(k)) continue;
        EXPECT_TRUE(m.remove(k).shares_root(m));
    }
}

TEST(Canonical, MapFilterExamples)
{
    std::mt19937_64 rng(25);
    auto m = random_tree(rng, 60);
    EXPECT_TRUE(m.map_filter([](int) -> std::optional<int> { return std::nullopt; }).empty());

    auto single = tree::nodes(ne::node010(3)).map_filter([](int v) -> std::optional<int> { return v * 10; });
    EXPECT_TRUE(single.structurally_equal(tree::nodes(ne::node010(30))));

    for (int i = 0; i < 200; ++i) {
        auto bs = support::random_bindings(rng, rng() % 60);
        auto got = support::build<tree>(bs).map_filter(support::keep_even);
        auto want = ptrie::map_oracle<int>::from_sorted(bs).map_filter(support::keep_even);
        EXPECT_EQ(got.elements(), want.elements());
        EXPECT_TRUE(got.structurally_equal(support::build<tree>(want.elements())));
    }
}

TEST(Canonical, CombineMatchesOracleAndIsCanonical)
{
    EXPECT_TRUE(tree().combine(tree(), support::left_biased).empty());
    std::mt19937_64 rng(26);
    auto diff = [](std::optional<int> a, std::optional<int> b) -> std::optional<int> {
        if (a && b) return *a == *b ? std::nullopt : std::optional<int>(*a - *b);
        return a ? a : b;
    };
    for (int i = 0; i < 300; ++i) {
        auto a = support::random_bindings(rng, i % 3 ? 100 : rng() % 10);
        auto b = support::random_bindings(rng, i % 5 ? 100 : rng() % 10);
        auto oa = ptrie::map_oracle<int>::from_sorted(a), ob = ptrie::map_oracle<int>::from_sorted(b);
        auto ta = support::build<tree>(a), tb = support::build<tree>(b);
        for (auto f : {+support::left_biased, +diff}) {
            auto want = oa.combine(ob, f).elements();
            auto got = ta.combine(tb, f);
            EXPECT_EQ(got.elements(), want);
            EXPECT_TRUE(got.structurally_equal(support::build<tree>(want)));
        }
    }
}

TEST(Canonical, CombineWithEmpty)
{
    std::mt19937_64 rng(27);
    auto m = random_tree(rng, 80);
    EXPECT_TRUE(m.combine(tree(), support::left_biased).structurally_equal(m));
    EXPECT_TRUE(tree().combine(m, support::left_biased).structurally_equal(m));
}

TEST(Canonical, ElementsOfOneToSeven)
{
    tree m;
    for (std::uint64_t k = 1; k <= 7; ++k) m = m.set(P(k), static_cast<int>(k));
    auto e = m.elements();
    ASSERT_EQ(e.size(), 7u);
    for (std::uint64_t k = 1; k <= 7; ++k) EXPECT_EQ(e[k - 1], (ptrie::binding<int>{P(k), static_cast<int>(k)}));
    EXPECT_EQ(m.census().nodes, 7u);
}

TEST(Canonical, SingleStringKeyUsesItsPathLength)
{
    auto m = tree().set(ptrie::encode_string("a"), 1);
    EXPECT_EQ(m.census().nodes, 9u);
}

TEST(Canonical, StructuralEqualityIsExtensional)
{
    std::mt19937_64 rng(28);
    for (int i = 0; i < 500; ++i) {
        auto bs = support::random_bindings(rng, 50);
        auto a = support::build<tree>(bs);
        auto b = support::build_scrambled<tree>(bs, rng);
        ASSERT_TRUE(a.structurally_equal(b));
        ASSERT_TRUE(a == b);
        if (!bs.empty()) {
            auto k = bs[rng() % bs.size()].first;
            EXPECT_FALSE(a.structurally_equal(a.set(k, *a.get(k) + 1)));
        }
    }
}

TEST(Canonical, ExtensionalAgreementImpliesStructuralEquality)
{
    std::mt19937_64 rng(29);
    for (int i = 0; i < 300; ++i) {
        auto bs = support::random_bindings(rng, 20);
        auto a = support::build_scrambled<tree>(bs, rng);
        auto b = support::build_scrambled<tree>(bs, rng);
        if (!bs.empty() && rng() % 2) b = b.set(bs.front().first, bs.front().second + 1);
        bool agree = true;
        for (const auto& [k, v] : bs) agree = agree && a.get(k) == b.get(k);
        for (int probe = 0; probe < 100; ++probe) {
            auto k = support::random_key(rng);
            agree = agree && a.get(k) == b.get(k);
        }
        EXPECT_EQ(agree, a.structurally_equal(b));
    }
}

TEST(Canonical, ElementsVisitsEachNodeOnce)
{
    using counted = ptrie::canonical::tree<int, ptrie::counting_stats>;
    for (std::uint64_t n : {128u, 512u, 2048u}) {
        counted m;
        for (std::uint64_t k = 1; k <= n; ++k) m = m.set(P(k), 0);
        ptrie::counting_stats::reset();
        auto e = m.elements();
        EXPECT_EQ(e.size(), n);
        EXPECT_EQ(ptrie::counting_stats::read().visits, m.census().nodes);
    }
}

TEST(Canonical, DifferentialScript)
{
    ptrie::mapkit::script_options opt;
    opt.steps = 10000;
    auto rep = ptrie::mapkit::run_differential<ptrie::canonical::tree<ptrie::mapkit::script_value>>(
        ptrie::mapkit::generate_script(5, opt));
    EXPECT_TRUE(rep.passed()) << rep.detail;
}
