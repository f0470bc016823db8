#include <gtest/gtest.h>

#include "ptrie/canonical.hpp"
#include "ptrie/mapkit.hpp"
#include "ptrie/node01.hpp"
#include "ptrie/oracle.hpp"
#include "ptrie/original.hpp"

namespace mk = ptrie::mapkit;
using ptrie::positive;
using mk::script_value;

namespace {

positive P(std::uint64_t n) { return positive::from_integer(n); }

/// Canonical map whose set silently ignores `lost`.
class lossy_map {
public:
    using mapped_type = script_value;
    using inner = ptrie::canonical::tree<script_value>;

    lossy_map() = default;
    explicit lossy_map(inner t) : t_(std::move(t)) {}

    static inline positive lost = positive::from_integer(6);

    std::optional<script_value> get(const positive& k) const { return t_.get(k); }
    lossy_map set(const positive& k, script_value v) const { return k == lost ? *this : lossy_map(t_.set(k, v)); }
    lossy_map remove(const positive& k) const { return lossy_map(t_.remove(k)); }
    ptrie::binding_list<script_value> elements() const { return t_.elements(); }
    bool structurally_equal(const lossy_map& o) const { return t_.structurally_equal(o.t_); }
    lossy_map map_filter(const mk::filter_table& f) const { return lossy_map(t_.map_filter(f)); }
    lossy_map combine(const lossy_map& o, const mk::combine_table& f) const { return lossy_map(t_.combine(o.t_, f)); }

private:
    inner t_;
};

static_assert(mk::scriptable_map<lossy_map>);
static_assert(mk::scriptable_map<ptrie::original::tree<script_value>>);
static_assert(mk::scriptable_map<ptrie::node01::tree<script_value>>);
static_assert(mk::scriptable_map<ptrie::canonical::tree<script_value>>);
static_assert(mk::scriptable_map<ptrie::map_oracle<script_value>>);

template <class M>
class MapLaws : public ::testing::Test {};

using implementations =
    ::testing::Types<ptrie::map_oracle<script_value>, ptrie::original::tree<script_value>,
                     ptrie::node01::tree<script_value>, ptrie::canonical::tree<script_value>>;
TYPED_TEST_SUITE(MapLaws, implementations);

} // namespace

TYPED_TEST(MapLaws, GetEmpty)
{
    std::vector<positive> keys;
    for (std::uint64_t k = 1; k <= 1000; ++k) keys.push_back(P(k));
    mk::key_source src(3);
    for (int i = 0; i < 1000; ++i) keys.push_back(src());
    auto rep = mk::check_get_empty<TypeParam>(keys);
    EXPECT_EQ(rep.trials, keys.size());
    EXPECT_TRUE(rep.passed()) << rep.detail;
}

TYPED_TEST(MapLaws, GetSetSame)
{
    std::vector<mk::set_sample> one{{P(7), 42, {}}};
    EXPECT_TRUE(mk::check_get_set_same<TypeParam>(one).passed());
    auto rep = mk::check_get_set_same<TypeParam>(mk::random_set_samples(1, 2000));
    EXPECT_EQ(rep.trials, 2000u);
    EXPECT_TRUE(rep.passed()) << rep.detail;
}

TYPED_TEST(MapLaws, GetSetOther)
{
    std::vector<mk::set_other_sample> one{{P(2), P(3), 1, {}}};
    EXPECT_TRUE(mk::check_get_set_other<TypeParam>(one).passed());
    auto rep = mk::check_get_set_other<TypeParam>(mk::random_set_other_samples(2, 2000));
    EXPECT_TRUE(rep.passed()) << rep.detail;
}

TYPED_TEST(MapLaws, MapFilter)
{
    auto rep = mk::check_map_filter<TypeParam>(mk::random_filter_samples(3, 1000));
    EXPECT_TRUE(rep.passed()) << rep.detail;
}

TYPED_TEST(MapLaws, Combine)
{
    std::vector<mk::combine_sample> empty_pair{{{}, {}, {P(1), P(2)}}};
    EXPECT_TRUE(mk::check_combine<TypeParam>(mk::combine_table::left_biased_union(), empty_pair).passed());
    TypeParam e;
    EXPECT_TRUE(e.combine(e, mk::combine_table::left_biased_union()).elements().empty());

    auto samples = mk::random_combine_samples(4, 1000);
    EXPECT_TRUE(mk::check_combine<TypeParam>(mk::combine_table::left_biased_union(), samples).passed());
    for (unsigned id = 0; id < mk::combine_table::count; id += 5) {
        auto rep = mk::check_combine<TypeParam>(mk::combine_table::from_id(id),
                                                std::span(samples).first(50));
        EXPECT_TRUE(rep.passed()) << "table " << id << ": " << rep.detail;
    }
}

TYPED_TEST(MapLaws, Differential)
{
    EXPECT_TRUE(mk::run_differential<TypeParam>(mk::operation_script{}).passed());
    mk::script_options opt;
    opt.steps = 3000;
    auto rep = mk::run_differential<TypeParam>(mk::generate_script(99, opt));
    EXPECT_TRUE(rep.passed()) << rep.detail;
}

TEST(Mapkit, SetOtherRejectsIdenticalKeys)
{
    std::vector<mk::set_other_sample> bad{{P(4), P(4), 1, {}}};
    EXPECT_THROW(mk::check_get_set_other<ptrie::canonical::tree<script_value>>(bad), mk::precondition_error);
}

TEST(Mapkit, CombineRejectsPresentOnAbsent)
{
    auto f = [](std::optional<script_value> a, std::optional<script_value>) -> std::optional<script_value> {
        return a ? *a : 0;
    };
    std::vector<mk::combine_sample> samples(1);
    EXPECT_THROW(mk::check_combine<ptrie::canonical::tree<script_value>>(f, samples), mk::precondition_error);
}

TEST(Mapkit, CombineTableIds)
{
    for (unsigned id = 0; id < mk::combine_table::count; ++id) EXPECT_EQ(mk::combine_table::from_id(id).id(), id);
    EXPECT_THROW(mk::combine_table::from_id(mk::combine_table::count), mk::precondition_error);
    EXPECT_THROW(mk::filter_table::from_id(mk::filter_table::count), mk::precondition_error);
    auto u = mk::combine_table::left_biased_union();
    EXPECT_EQ(u(1, 2), 1);
    EXPECT_EQ(u(std::nullopt, 2), 2);
    EXPECT_EQ(u(std::nullopt, std::nullopt), std::nullopt);
}

TEST(Mapkit, LawFailuresCarryAReplayableScript)
{
    auto samples = mk::random_set_samples(8, 200);
    samples.push_back({lossy_map::lost, 5, {}});
    auto rep = mk::check_get_set_same<lossy_map>(samples);
    ASSERT_FALSE(rep.passed());
    ASSERT_TRUE(rep.first_failure);
    auto text = mk::to_text(*rep.first_failure);
    EXPECT_NE(text.find("SET 6 5"), std::string::npos);
    EXPECT_EQ(mk::parse_script(text), *rep.first_failure);
}

TEST(Mapkit, FaultInjectionObservedAtTheNextGet)
{
    mk::operation_script script;
    script.steps = {mk::script_step::set(P(5), 1), mk::script_step::set(P(6), 2), mk::script_step::get(P(5)),
                    mk::script_step::set(P(9), 3), mk::script_step::get(P(6)), mk::script_step::get(P(9))};

    mk::differential_options observe;
    observe.check_every_step = false;
    observe.shrink = false;
    auto rep = mk::run_differential<lossy_map>(script, observe);
    ASSERT_FALSE(rep.passed());
    EXPECT_EQ(rep.failing_step, 4u);

    mk::differential_options strict;
    strict.shrink = false;
    EXPECT_EQ(mk::run_differential<lossy_map>(script, strict).failing_step, 1u);
}

TEST(Mapkit, ShrinkFindsAMinimalScript)
{
    mk::script_options opt;
    opt.steps = 2000;
    opt.sparse_fraction = 0;
    auto script = mk::generate_script(31, opt);
    script.steps.push_back(mk::script_step::set(lossy_map::lost, 1));
    script.steps.push_back(mk::script_step::get(lossy_map::lost));

    auto rep = mk::run_differential<lossy_map>(script);
    ASSERT_FALSE(rep.passed());
    ASSERT_TRUE(rep.first_failure);
    const auto& small = rep.first_failure->steps;
    EXPECT_LE(small.size(), 2u);
    EXPECT_TRUE(mk::run_differential<ptrie::canonical::tree<script_value>>(*rep.first_failure).passed());
    EXPECT_FALSE(mk::run_differential<lossy_map>(*rep.first_failure).passed());
}

TEST(Mapkit, ScriptTextRoundTrip)
{
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        mk::script_options opt;
        opt.steps = 1 + seed * 7 % 300;
        opt.operands = seed % 4;
        auto script = mk::generate_script(seed, opt);
        auto back = mk::parse_script(mk::to_text(script));
        ASSERT_EQ(back, script) << "seed " << seed;
        EXPECT_EQ(mk::to_text(back), mk::to_text(script));
    }
}

TEST(Mapkit, ParseErrors)
{
    EXPECT_THROW(mk::parse_script("SET 0 1\n"), std::invalid_argument);
    EXPECT_THROW(mk::parse_script("SET 3\n"), std::invalid_argument);
    EXPECT_THROW(mk::parse_script("JUMP 3\n"), std::invalid_argument);
    EXPECT_THROW(mk::parse_script("FILTER 99\n"), std::invalid_argument);
    EXPECT_THROW(mk::parse_script("COMBINE 1 0\n"), std::invalid_argument);
    EXPECT_THROW(mk::parse_script("OPERAND 0\nGET 1\nEND\n"), std::invalid_argument);
    EXPECT_THROW(mk::parse_script("OPERAND 0\nSET 1 1\n"), std::invalid_argument);
    try {
        mk::parse_script("SET 1 1\nGET x\n");
        FAIL();
    } catch (const std::invalid_argument& e) {
        EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
    }
    auto ok = mk::parse_script("# comment\n\nSET 18446744073709551617 -4\nGET 2\n");
    ASSERT_EQ(ok.steps.size(), 2u);
    EXPECT_EQ(ok.steps[0].key.to_string(), "18446744073709551617");
    EXPECT_EQ(ok.steps[0].value, -4);
}

TEST(Mapkit, ReplayMatchesOracle)
{
    mk::script_options opt;
    opt.steps = 1500;
    auto script = mk::generate_script(17, opt);
    auto want = mk::replay<ptrie::map_oracle<script_value>>(script).elements();
    EXPECT_EQ(mk::replay<ptrie::original::tree<script_value>>(script).elements(), want);
    EXPECT_EQ(mk::replay<ptrie::canonical::tree<script_value>>(script).elements(), want);
}

TEST(Mapkit, GeneratorIsDeterministic)
{
    EXPECT_EQ(mk::generate_script(4), mk::generate_script(4));
    EXPECT_NE(mk::generate_script(4), mk::generate_script(5));
}
