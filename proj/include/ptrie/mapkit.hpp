// mapkit.hpp
// The finite-map interface shared by every implementation, the function
// tables used by map_filter/combine scripts, operation scripts with their
// text format, algebraic law checkers and a differential driver against
// map_oracle.

#pragma once

#include <concepts>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ptrie/detail/common.hpp"
#include "ptrie/oracle.hpp"
#include "ptrie/positive.hpp"

namespace ptrie::mapkit {

template <class M>
concept finite_map = std::default_initializable<M> &&
    requires(const M& m, const positive& k, const typename M::mapped_type& v) {
        { m.get(k) } -> std::same_as<std::optional<typename M::mapped_type>>;
        { m.set(k, v) } -> std::same_as<M>;
        { m.remove(k) } -> std::same_as<M>;
        { m.elements() } -> std::convertible_to<binding_list<typename M::mapped_type>>;
        { m.structurally_equal(m) } -> std::same_as<bool>;
    };

/// A law or script precondition was violated by the caller.
class precondition_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

using script_value = std::int64_t;

// ---------------------------------------------------------------------------
// Function tables

/// map_filter functions addressable by a small integer id.
struct filter_table {
    enum class rule : std::uint8_t { identity, drop_all, keep_even, keep_odd, negate, flip_bits, keep_nonneg };
    static constexpr unsigned count = 7;

    rule r = rule::identity;

    static filter_table from_id(unsigned id)
    {
        if (id >= count) throw precondition_error("filter table id out of range: " + std::to_string(id));
        return {static_cast<rule>(id)};
    }
    unsigned id() const { return static_cast<unsigned>(r); }

    std::optional<script_value> operator()(const script_value& v) const
    {
        switch (r) {
        case rule::identity: return v;
        case rule::drop_all: return std::nullopt;
        case rule::keep_even: return v % 2 == 0 ? std::optional(v) : std::nullopt;
        case rule::keep_odd: return v % 2 != 0 ? std::optional(v) : std::nullopt;
        case rule::negate: return -v;
        case rule::flip_bits: return v ^ 0x2a;
        case rule::keep_nonneg: return v >= 0 ? std::optional(v) : std::nullopt;
        }
        return std::nullopt;
    }
};

/// A combining function given as a decision table over the presence of each
/// argument. There is no row for (absent, absent), so f(None, None) = None
/// holds by construction.
struct combine_table {
    enum class one_sided : std::uint8_t { drop, keep, negate, flip_bits };
    enum class both_sides : std::uint8_t { drop, left, right, min, max, xor_values };
    static constexpr unsigned one_sided_count = 4;
    static constexpr unsigned both_count = 6;
    static constexpr unsigned count = one_sided_count * one_sided_count * both_count;

    one_sided left_only = one_sided::keep;
    one_sided right_only = one_sided::keep;
    both_sides both = both_sides::left;

    static combine_table left_biased_union() { return {one_sided::keep, one_sided::keep, both_sides::left}; }
    static combine_table intersection_left() { return {one_sided::drop, one_sided::drop, both_sides::left}; }

    static combine_table from_id(unsigned id)
    {
        if (id >= count) throw precondition_error("combine table id out of range: " + std::to_string(id));
        combine_table t;
        t.both = static_cast<both_sides>(id % both_count);
        id /= both_count;
        t.right_only = static_cast<one_sided>(id % one_sided_count);
        t.left_only = static_cast<one_sided>(id / one_sided_count);
        return t;
    }

    unsigned id() const
    {
        return (static_cast<unsigned>(left_only) * one_sided_count + static_cast<unsigned>(right_only)) * both_count +
               static_cast<unsigned>(both);
    }

    std::optional<script_value> operator()(const std::optional<script_value>& a,
                                           const std::optional<script_value>& b) const
    {
        if (a && b) {
            switch (both) {
            case both_sides::drop: return std::nullopt;
            case both_sides::left: return *a;
            case both_sides::right: return *b;
            case both_sides::min: return std::min(*a, *b);
            case both_sides::max: return std::max(*a, *b);
            case both_sides::xor_values: return *a ^ *b;
            }
        }
        if (a) return apply(left_only, *a);
        if (b) return apply(right_only, *b);
        return std::nullopt;
    }

private:
    static std::optional<script_value> apply(one_sided rule, script_value v)
    {
        switch (rule) {
        case one_sided::drop: return std::nullopt;
        case one_sided::keep: return v;
        case one_sided::negate: return -v;
        case one_sided::flip_bits: return v ^ 0x2a;
        }
        return std::nullopt;
    }
};

/// Throws precondition_error unless f(None, None) = None.
template <class V, class F>
void require_absent_on_absent(const F& f)
{
    if (std::invoke(f, std::optional<V>(), std::optional<V>()).has_value())
        throw precondition_error("combining function must map (absent, absent) to absent");
}

/// A map usable by operation scripts: finite_map over script_value that
/// accepts the function tables.
template <class M>
concept scriptable_map = finite_map<M> && std::same_as<typename M::mapped_type, script_value> &&
    requires(const M& m, const filter_table& f, const combine_table& g) {
        { m.map_filter(f) } -> std::same_as<M>;
        { m.combine(m, g) } -> std::same_as<M>;
    };

// ---------------------------------------------------------------------------
// Operation scripts

struct script_step {
    enum class kind : std::uint8_t { set, remove, get, elements, filter, combine };

    kind op = kind::elements;
    positive key;
    script_value value = 0;
    /// filter_table / combine_table id.
    unsigned table = 0;
    /// Index into operation_script::operands for combine.
    unsigned operand = 0;

    static script_step set(positive k, script_value v) { return {kind::set, std::move(k), v, 0, 0}; }
    static script_step remove(positive k) { return {kind::remove, std::move(k), 0, 0, 0}; }
    static script_step get(positive k) { return {kind::get, std::move(k), 0, 0, 0}; }
    static script_step elements() { return {kind::elements, positive(), 0, 0, 0}; }
    static script_step filter(unsigned id) { return {kind::filter, positive(), 0, id, 0}; }
    static script_step combine(unsigned id, unsigned operand) { return {kind::combine, positive(), 0, id, operand}; }

    friend bool operator==(const script_step&, const script_step&) = default;
};

using step_list = std::vector<script_step>;

/// Replaying a script depends only on its steps and operands; the seed
/// records how it was generated.
struct operation_script {
    std::uint64_t seed = 0;
    step_list steps;
    /// Second operands for combine steps, each built by replaying its steps
    /// (set/remove only) from the empty map.
    std::vector<step_list> operands;

    friend bool operator==(const operation_script&, const operation_script&) = default;
};

/// One step per line: SET k v, DEL k, GET k, ELEMS, FILTER id, COMBINE id operand.
/// Operands are written as OPERAND n ... END blocks after the main steps.
inline void write_steps(std::ostream& os, const step_list& steps)
{
    for (const auto& s : steps) {
        switch (s.op) {
        case script_step::kind::set: os << "SET " << s.key.to_string() << ' ' << s.value << '\n'; break;
        case script_step::kind::remove: os << "DEL " << s.key.to_string() << '\n'; break;
        case script_step::kind::get: os << "GET " << s.key.to_string() << '\n'; break;
        case script_step::kind::elements: os << "ELEMS\n"; break;
        case script_step::kind::filter: os << "FILTER " << s.table << '\n'; break;
        case script_step::kind::combine: os << "COMBINE " << s.table << ' ' << s.operand << '\n'; break;
        }
    }
}

inline std::string to_text(const operation_script& script)
{
    std::ostringstream os;
    os << "SEED " << script.seed << '\n';
    write_steps(os, script.steps);
    for (std::size_t i = 0; i < script.operands.size(); ++i) {
        os << "OPERAND " << i << '\n';
        write_steps(os, script.operands[i]);
        os << "END\n";
    }
    return os.str();
}

/// Parses the text format. Blank lines and lines starting with '#' are skipped.
inline operation_script parse_script(std::string_view text)
{
    operation_script out;
    step_list* target = &out.steps;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    auto fail = [&](const std::string& why) -> void {
        throw std::invalid_argument("script line " + std::to_string(line_no) + ": " + why);
    };
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string word;
        if (!(ls >> word) || word[0] == '#') continue;
        auto next = [&](const char* what) {
            std::string tok;
            if (!(ls >> tok)) fail(std::string("missing ") + what);
            return tok;
        };
        auto number = [&](const char* what) -> long long {
            std::string tok = next(what);
            try {
                std::size_t used = 0;
                long long v = std::stoll(tok, &used);
                if (used != tok.size()) fail(std::string("bad ") + what + ": " + tok);
                return v;
            } catch (const std::logic_error&) {
                fail(std::string("bad ") + what + ": " + tok);
            }
            return 0;
        };
        auto key = [&] {
            try {
                return positive::parse(next("key"));
            } catch (const std::domain_error& e) {
                fail(e.what());
            } catch (const std::invalid_argument& e) {
                fail(e.what());
            }
            return positive();
        };
        auto index = [&](const char* what) {
            long long v = number(what);
            if (v < 0) fail(std::string("negative ") + what);
            return static_cast<unsigned>(v);
        };

        if (word == "SEED") {
            out.seed = static_cast<std::uint64_t>(std::stoull(next("seed")));
        } else if (word == "SET") {
            auto k = key();
            target->push_back(script_step::set(std::move(k), number("value")));
        } else if (word == "DEL") {
            target->push_back(script_step::remove(key()));
        } else if (word == "GET") {
            target->push_back(script_step::get(key()));
        } else if (word == "ELEMS") {
            target->push_back(script_step::elements());
        } else if (word == "FILTER") {
            unsigned id = index("table id");
            if (id >= filter_table::count) fail("filter table id out of range");
            target->push_back(script_step::filter(id));
        } else if (word == "COMBINE") {
            unsigned id = index("table id");
            if (id >= combine_table::count) fail("combine table id out of range");
            target->push_back(script_step::combine(id, index("operand")));
        } else if (word == "OPERAND") {
            if (target != &out.steps) fail("nested OPERAND");
            unsigned n = index("operand index");
            if (n != out.operands.size()) fail("operands must be numbered consecutively from 0");
            out.operands.emplace_back();
            target = &out.operands.back();
        } else if (word == "END") {
            if (target == &out.steps) fail("END without OPERAND");
            target = &out.steps;
        } else {
            fail("unknown step: " + word);
        }
        std::string extra;
        if (ls >> extra) fail("trailing input: " + extra);
    }
    if (target != &out.steps) throw std::invalid_argument("script: unterminated OPERAND block");
    for (const auto& s : out.steps)
        if (s.op == script_step::kind::combine && s.operand >= out.operands.size())
            throw std::invalid_argument("script: COMBINE refers to missing operand " + std::to_string(s.operand));
    for (const auto& ops : out.operands)
        for (const auto& s : ops)
            if (s.op != script_step::kind::set && s.op != script_step::kind::remove)
                throw std::invalid_argument("script: operands may only contain SET and DEL");
    return out;
}

// ---------------------------------------------------------------------------
// Random generation

/// Keys mix a dense population (uniform over 1..2^11) with a sparse one
/// (encoded random lowercase words of 1..6 letters).
class key_source {
public:
    explicit key_source(std::uint64_t seed, double sparse_fraction = 0.5)
        : rng_(seed), sparse_fraction_(sparse_fraction) {}

    positive operator()()
    {
        if (std::uniform_real_distribution<double>(0, 1)(rng_) < sparse_fraction_) return encode_string(word());
        return positive::from_integer(std::uniform_int_distribution<std::uint64_t>(1, 2048)(rng_));
    }

    std::string word()
    {
        std::string w(std::uniform_int_distribution<std::size_t>(1, 6)(rng_), 'a');
        for (auto& c : w) c = static_cast<char>('a' + std::uniform_int_distribution<int>(0, 25)(rng_));
        return w;
    }

    std::mt19937_64& rng() { return rng_; }

private:
    std::mt19937_64 rng_;
    double sparse_fraction_;
};

struct script_options {
    std::size_t steps = 1000;
    /// When nonzero, keys come from a fixed pool of this many keys drawn from
    /// key_source, which keeps maps small enough to compare at every step.
    std::size_t key_pool = 0;
    std::size_t operands = 4;
    std::size_t operand_steps = 40;
    double sparse_fraction = 0.5;
};

inline operation_script generate_script(std::uint64_t seed, const script_options& opt = {})
{
    operation_script script;
    script.seed = seed;
    key_source keys(seed, opt.sparse_fraction);
    auto& rng = keys.rng();
    std::vector<positive> pool;
    for (std::size_t i = 0; i < opt.key_pool; ++i) pool.push_back(keys());
    // Keys known to have been set; lets removes and gets hit bound keys.
    std::vector<positive> touched;
    auto draw = [&] {
        if (!pool.empty()) return pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)];
        return keys();
    };
    auto draw_touched = [&] {
        if (touched.empty() || rng() % 10 < 3) return draw();
        return touched[std::uniform_int_distribution<std::size_t>(0, touched.size() - 1)(rng)];
    };
    auto value = [&] { return std::uniform_int_distribution<script_value>(-1000, 1000)(rng); };

    for (std::size_t i = 0; i < opt.operands; ++i) {
        step_list ops;
        for (std::size_t s = 0; s < opt.operand_steps; ++s) {
            positive k = draw();
            if (rng() % 5 == 0) ops.push_back(script_step::remove(k));
            else ops.push_back(script_step::set(k, value()));
        }
        script.operands.push_back(std::move(ops));
    }

    for (std::size_t s = 0; s < opt.steps; ++s) {
        unsigned roll = static_cast<unsigned>(rng() % 100);
        if (roll < 38) {
            positive k = draw();
            touched.push_back(k);
            if (touched.size() > 4096) touched.erase(touched.begin(), touched.begin() + 2048);
            script.steps.push_back(script_step::set(std::move(k), value()));
        } else if (roll < 62) {
            script.steps.push_back(script_step::remove(draw_touched()));
        } else if (roll < 88) {
            script.steps.push_back(script_step::get(draw_touched()));
        } else if (roll < 92) {
            script.steps.push_back(script_step::elements());
        } else if (roll < 96) {
            auto id = static_cast<unsigned>(rng() % filter_table::count);
            // drop_all mostly becomes identity, so maps get a chance to grow.
            if (id == static_cast<unsigned>(filter_table::rule::drop_all) && rng() % 4 != 0)
                id = static_cast<unsigned>(filter_table::rule::identity);
            script.steps.push_back(script_step::filter(id));
        } else if (!script.operands.empty()) {
            unsigned id = static_cast<unsigned>(rng() % combine_table::count);
            unsigned operand = static_cast<unsigned>(rng() % script.operands.size());
            script.steps.push_back(script_step::combine(id, operand));
        }
    }
    return script;
}

// ---------------------------------------------------------------------------
// Replay

/// Builds a map by applying set/remove steps from the empty map; other
/// steps in `steps` are ignored.
template <class M>
M build(const step_list& steps, M m = M{})
{
    for (const auto& s : steps) {
        if (s.op == script_step::kind::set) m = m.set(s.key, s.value);
        else if (s.op == script_step::kind::remove) m = m.remove(s.key);
    }
    return m;
}

/// Replays every mutating step of a script (sets, removes, filters, combines).
template <class M>
M replay(const operation_script& script)
{
    std::vector<M> operands;
    for (const auto& ops : script.operands) operands.push_back(build<M>(ops));
    M m;
    for (const auto& s : script.steps) {
        switch (s.op) {
        case script_step::kind::set: m = m.set(s.key, s.value); break;
        case script_step::kind::remove: m = m.remove(s.key); break;
        case script_step::kind::filter: m = m.map_filter(filter_table::from_id(s.table)); break;
        case script_step::kind::combine: m = m.combine(operands.at(s.operand), combine_table::from_id(s.table)); break;
        default: break;
        }
    }
    return m;
}

// ---------------------------------------------------------------------------
// Reports

struct law_report {
    std::string law;
    std::size_t trials = 0;
    std::size_t failures = 0;
    /// A replayable script reproducing the first failure; present iff failures > 0.
    std::optional<operation_script> first_failure;
    /// Step index of the first divergence within first_failure (differential runs).
    std::optional<std::size_t> failing_step;
    std::string detail;

    bool passed() const { return failures == 0; }

    void record_failure(operation_script script, std::string why, std::optional<std::size_t> step = std::nullopt)
    {
        if (failures++ == 0) {
            first_failure = std::move(script);
            failing_step = step;
            detail = std::move(why);
        }
    }
};

inline std::string describe(const std::optional<script_value>& v)
{
    return v ? std::to_string(*v) : std::string("absent");
}

// ---------------------------------------------------------------------------
// Law checkers

struct set_sample {
    positive key;
    script_value value = 0;
    /// Steps building the map the law is applied to.
    step_list map;
};

struct set_other_sample {
    positive probe;
    positive key;
    script_value value = 0;
    step_list map;
};

struct filter_sample {
    unsigned table = 0;
    step_list map;
    std::vector<positive> probes;
};

struct combine_sample {
    step_list left;
    step_list right;
    std::vector<positive> probes;
};

/// gempty: get i empty = None.
template <finite_map M>
law_report check_get_empty(std::span<const positive> keys)
{
    law_report rep{"get_empty"};
    const M empty{};
    for (const auto& k : keys) {
        ++rep.trials;
        if (auto v = empty.get(k))
            rep.record_failure({0, {script_step::get(k)}, {}}, "get " + k.to_string() + " on empty = " + describe(v));
    }
    return rep;
}

/// gss: get i (set i x m) = Some x.
template <finite_map M>
law_report check_get_set_same(std::span<const set_sample> samples)
{
    law_report rep{"get_set_same"};
    for (const auto& s : samples) {
        ++rep.trials;
        M m = build<M>(s.map);
        auto got = m.set(s.key, s.value).get(s.key);
        if (got != std::optional<script_value>(s.value)) {
            step_list steps = s.map;
            steps.push_back(script_step::set(s.key, s.value));
            steps.push_back(script_step::get(s.key));
            rep.record_failure({0, std::move(steps), {}},
                               "get " + s.key.to_string() + " after set = " + describe(got) + ", expected " +
                                   std::to_string(s.value));
        }
    }
    return rep;
}

/// gso: i != j -> get i (set j x m) = get i m. A sample with i = j is a
/// caller error.
template <finite_map M>
law_report check_get_set_other(std::span<const set_other_sample> samples)
{
    for (const auto& s : samples)
        if (s.probe == s.key)
            throw precondition_error("get_set_other sample with identical keys " + s.key.to_string());
    law_report rep{"get_set_other"};
    for (const auto& s : samples) {
        ++rep.trials;
        M m = build<M>(s.map);
        auto before = m.get(s.probe);
        auto after = m.set(s.key, s.value).get(s.probe);
        if (before != after) {
            step_list steps = s.map;
            steps.push_back(script_step::get(s.probe));
            steps.push_back(script_step::set(s.key, s.value));
            steps.push_back(script_step::get(s.probe));
            rep.record_failure({0, std::move(steps), {}},
                               "get " + s.probe.to_string() + " changed from " + describe(before) + " to " +
                                   describe(after) + " by set " + s.key.to_string());
        }
    }
    return rep;
}

/// get i (map_filter f m) = (get i m) >>= f.
template <scriptable_map M>
law_report check_map_filter(std::span<const filter_sample> samples)
{
    law_report rep{"map_filter"};
    for (const auto& s : samples) {
        ++rep.trials;
        auto f = filter_table::from_id(s.table);
        M m = build<M>(s.map);
        M out = m.map_filter(f);
        for (const auto& k : s.probes) {
            auto in = m.get(k);
            std::optional<script_value> expected = in ? f(*in) : std::nullopt;
            auto got = out.get(k);
            if (got != expected) {
                step_list steps = s.map;
                steps.push_back(script_step::filter(s.table));
                steps.push_back(script_step::get(k));
                rep.record_failure({0, std::move(steps), {}},
                                   "map_filter " + std::to_string(s.table) + " at " + k.to_string() + " = " +
                                       describe(got) + ", expected " + describe(expected));
                break;
            }
        }
    }
    return rep;
}

/// gcombine: get i (combine f m1 m2) = f (get i m1) (get i m2), checked at
/// every key bound in either map and at each sample's extra probes.
template <finite_map M, class F>
law_report check_combine(const F& f, std::span<const combine_sample> samples)
{
    require_absent_on_absent<typename M::mapped_type>(f);
    law_report rep{"combine"};
    for (const auto& s : samples) {
        ++rep.trials;
        M a = build<M>(s.left);
        M b = build<M>(s.right);
        M c = a.combine(b, f);
        std::vector<positive> probes = s.probes;
        for (const auto& [k, v] : a.elements()) probes.push_back(k);
        for (const auto& [k, v] : b.elements()) probes.push_back(k);
        for (const auto& k : probes) {
            auto expected = std::invoke(f, a.get(k), b.get(k));
            auto got = c.get(k);
            if (got != expected) {
                operation_script script{0, s.left, {s.right}};
                if constexpr (std::is_same_v<F, combine_table>)
                    script.steps.push_back(script_step::combine(f.id(), 0));
                script.steps.push_back(script_step::get(k));
                rep.record_failure(std::move(script), "combine at " + k.to_string() + " = " + describe(got) +
                                                          ", expected " + describe(expected));
                break;
            }
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Sample generators for the law checkers

inline std::vector<set_sample> random_set_samples(std::uint64_t seed, std::size_t n, std::size_t map_steps = 24)
{
    key_source keys(seed);
    std::vector<set_sample> out;
    for (std::size_t i = 0; i < n; ++i) {
        set_sample s{keys(), static_cast<script_value>(keys.rng()() % 2001) - 1000, {}};
        std::size_t len = keys.rng()() % (map_steps + 1);
        for (std::size_t j = 0; j < len; ++j) {
            // Occasionally pre-bind the sampled key so overwrites are covered.
            positive k = keys.rng()() % 8 == 0 ? s.key : keys();
            if (keys.rng()() % 6 == 0) s.map.push_back(script_step::remove(std::move(k)));
            else s.map.push_back(script_step::set(std::move(k), static_cast<script_value>(j)));
        }
        out.push_back(std::move(s));
    }
    return out;
}

inline std::vector<set_other_sample> random_set_other_samples(std::uint64_t seed, std::size_t n,
                                                              std::size_t map_steps = 24)
{
    auto base = random_set_samples(seed, n, map_steps);
    key_source keys(seed ^ 0x9e3779b97f4a7c15ull);
    std::vector<set_other_sample> out;
    for (auto& s : base) {
        positive probe;
        // Probes are often bound keys or near neighbours of the set key.
        switch (keys.rng()() % 3) {
        case 0: probe = keys(); break;
        case 1: probe = s.map.empty() ? keys() : s.map[keys.rng()() % s.map.size()].key; break;
        default: probe = keys.rng()() % 2 ? positive::xO(s.key) : s.key.is_one() ? keys() : s.key.tail(); break;
        }
        if (probe == s.key) probe = positive::xI(s.key);
        out.push_back({std::move(probe), std::move(s.key), s.value, std::move(s.map)});
    }
    return out;
}

inline std::vector<filter_sample> random_filter_samples(std::uint64_t seed, std::size_t n, std::size_t map_steps = 32)
{
    auto base = random_set_samples(seed, n, map_steps);
    key_source keys(seed + 1);
    std::vector<filter_sample> out;
    for (auto& s : base) {
        filter_sample f{static_cast<unsigned>(keys.rng()() % filter_table::count), std::move(s.map), {}};
        for (const auto& st : f.map) f.probes.push_back(st.key);
        for (int i = 0; i < 4; ++i) f.probes.push_back(keys());
        out.push_back(std::move(f));
    }
    return out;
}

inline std::vector<combine_sample> random_combine_samples(std::uint64_t seed, std::size_t n,
                                                          std::size_t map_steps = 32)
{
    auto lefts = random_set_samples(seed, n, map_steps);
    auto rights = random_set_samples(seed ^ 0x5bd1e995u, n, map_steps);
    key_source keys(seed + 7);
    std::vector<combine_sample> out;
    for (std::size_t i = 0; i < n; ++i) {
        combine_sample c{std::move(lefts[i].map), std::move(rights[i].map), {}};
        // Share some keys between the operands so the both-present row fires.
        if (!c.left.empty() && keys.rng()() % 2)
            c.right.push_back(script_step::set(c.left[keys.rng()() % c.left.size()].key, 7));
        for (int j = 0; j < 4; ++j) c.probes.push_back(keys());
        out.push_back(std::move(c));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Differential driver

struct differential_options {
    /// Compare full element lists after every step; otherwise only Get and
    /// Elements steps and the final map are observed.
    bool check_every_step = true;
    /// Keep a snapshot every this many steps and re-check all snapshots at the
    /// end to detect mutation of earlier versions. 0 disables.
    std::size_t snapshot_every = 97;
    /// Bisect a failing script to a locally minimal one.
    bool shrink = true;
};

namespace detail {

template <class M>
std::optional<std::pair<std::size_t, std::string>> first_divergence(const operation_script& script,
                                                                    const differential_options& opt)
{
    using oracle = map_oracle<script_value>;
    auto same = [](const binding_list<script_value>& a, const binding_list<script_value>& b) { return a == b; };
    auto check_sorted = [](const binding_list<script_value>& e) {
        for (std::size_t i = 1; i < e.size(); ++i)
            if (!(e[i - 1].first < e[i].first)) return false;
        return true;
    };

    std::vector<M> operands;
    std::vector<oracle> oracle_operands;
    for (const auto& ops : script.operands) {
        operands.push_back(build<M>(ops));
        oracle_operands.push_back(build<oracle>(ops));
    }
    M m;
    oracle o;
    std::vector<std::pair<M, oracle>> snapshots;

    for (std::size_t i = 0; i < script.steps.size(); ++i) {
        const auto& s = script.steps[i];
        switch (s.op) {
        case script_step::kind::set:
            m = m.set(s.key, s.value);
            o = o.set(s.key, s.value);
            break;
        case script_step::kind::remove:
            m = m.remove(s.key);
            o = o.remove(s.key);
            break;
        case script_step::kind::get: {
            auto got = m.get(s.key);
            auto want = o.get(s.key);
            if (got != want)
                return std::pair{i, "GET " + s.key.to_string() + " = " + describe(got) + ", oracle " + describe(want)};
            break;
        }
        case script_step::kind::elements:
            if (!same(m.elements(), o.elements())) return std::pair{i, std::string("ELEMS differs from oracle")};
            break;
        case script_step::kind::filter: {
            auto f = filter_table::from_id(s.table);
            m = m.map_filter(f);
            o = o.map_filter(f);
            break;
        }
        case script_step::kind::combine: {
            if (s.operand >= operands.size()) throw precondition_error("COMBINE refers to a missing operand");
            auto f = combine_table::from_id(s.table);
            m = m.combine(operands[s.operand], f);
            o = o.combine(oracle_operands[s.operand], f);
            break;
        }
        }
        if (opt.check_every_step) {
            auto e = m.elements();
            if (!check_sorted(e)) return std::pair{i, std::string("elements not strictly increasing")};
            if (!same(e, o.elements())) return std::pair{i, std::string("elements differ from oracle")};
        }
        if (opt.snapshot_every && i % opt.snapshot_every == 0) snapshots.emplace_back(m, o);
    }
    if (!same(m.elements(), o.elements()))
        return std::pair{script.steps.size(), std::string("final elements differ from oracle")};
    for (const auto& [sm, so] : snapshots)
        if (!same(sm.elements(), so.elements()))
            return std::pair{script.steps.size(), std::string("an earlier map version was modified")};
    return std::nullopt;
}

} // namespace detail

/// Removes chunks of steps while the script keeps failing.
template <scriptable_map M>
operation_script shrink(operation_script script, const differential_options& opt = {})
{
    auto fails = [&](const operation_script& s) { return detail::first_divergence<M>(s, opt).has_value(); };
    if (!fails(script)) return script;
    // Nothing after the first divergence matters.
    if (auto d = detail::first_divergence<M>(script, opt); d && d->first < script.steps.size())
        script.steps.resize(d->first + 1);
    std::size_t chunk = std::max<std::size_t>(script.steps.size() / 2, 1);
    while (!script.steps.empty()) {
        bool removed_any = false;
        for (std::size_t start = 0; start < script.steps.size();) {
            operation_script trial = script;
            auto first = trial.steps.begin() + static_cast<std::ptrdiff_t>(start);
            auto last = trial.steps.begin() + static_cast<std::ptrdiff_t>(std::min(start + chunk, trial.steps.size()));
            trial.steps.erase(first, last);
            if (fails(trial)) {
                script = std::move(trial);
                removed_any = true;
            } else {
                start += chunk;
            }
        }
        if (chunk > 1) chunk /= 2;
        else if (!removed_any) break;
    }
    return script;
}

/// Replays a script against M and the oracle side by side; reports the
/// first divergence.
template <scriptable_map M>
law_report run_differential(const operation_script& script, const differential_options& opt = {})
{
    law_report rep{"differential"};
    rep.trials = script.steps.size();
    if (auto d = detail::first_divergence<M>(script, opt)) {
        operation_script failing = opt.shrink ? shrink<M>(script, opt) : script;
        std::optional<std::size_t> step = d->first;
        if (opt.shrink) {
            auto again = detail::first_divergence<M>(failing, opt);
            step = again ? std::optional(again->first) : std::nullopt;
        }
        rep.record_failure(std::move(failing), d->second, step);
    }
    return rep;
}

} // namespace ptrie::mapkit
