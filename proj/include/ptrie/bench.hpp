// bench.hpp
// Benchmark workloads (Dense, Sparse, Repeated, Dict) over the trie
// implementations, with node-allocation counting and a table/CSV reporter.
//
// Every workload is run once instrumented (counting_stats) to collect
// allocation and live-node figures, then repeatedly uninstrumented
// (no_stats) for timing. Each run checks its own results and throws
// correctness_failure before any figure is reported.

#pragma once

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "ptrie/canonical.hpp"
#include "ptrie/node01.hpp"
#include "ptrie/original.hpp"
#include "ptrie/positive.hpp"
#include "ptrie/stats.hpp"
#include "ptrie/string_dict.hpp"

namespace ptrie::bench {

class correctness_failure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class impl { original, node01, canonical, baseline };
enum class workload { dense, sparse, repeated, dict };

inline std::string_view name(impl i)
{
    switch (i) {
    case impl::original: return "original";
    case impl::node01: return "node01";
    case impl::canonical: return "canonical";
    case impl::baseline: return "baseline";
    }
    return "?";
}

inline std::string_view name(workload w)
{
    switch (w) {
    case workload::dense: return "dense";
    case workload::sparse: return "sparse";
    case workload::repeated: return "repeated";
    case workload::dict: return "dict";
    }
    return "?";
}

inline constexpr std::uint64_t default_seed = 24657;
inline constexpr std::size_t max_word_length = 18;

/// count distinct lowercase words from a 64-bit LCG (multiplier
/// 6364136223846793005, increment 1442695040888963407). Each draw is the
/// upper 32 bits of the advanced state; a word has 1 + draw % 18 letters,
/// each 'a' + draw % 26. Repeated words are drawn again.
inline std::vector<std::string> gen_words(std::uint64_t seed, std::size_t count)
{
    if (count == 0) throw std::invalid_argument("gen_words: count must be >= 1");
    std::uint64_t state = seed;
    auto draw = [&state] {
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        return state >> 32;
    };
    std::vector<std::string> out;
    std::unordered_set<std::string> seen;
    out.reserve(count);
    while (out.size() < count) {
        std::string w(1 + draw() % max_word_length, 'a');
        for (auto& c : w) c = static_cast<char>('a' + draw() % 26);
        if (seen.insert(w).second) out.push_back(std::move(w));
    }
    return out;
}

/// One word per line; blank lines are skipped, duplicates dropped. Words
/// must be ASCII and 1..18 bytes long.
inline std::vector<std::string> load_words(std::istream& in)
{
    std::vector<std::string> out;
    std::unordered_set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.size() > max_word_length)
            throw std::invalid_argument("words file line " + std::to_string(line_no) + ": word longer than 18 bytes");
        for (unsigned char c : line)
            if (c >= 0x80) throw std::invalid_argument("words file line " + std::to_string(line_no) + ": not ASCII");
        if (seen.insert(line).second) out.push_back(line);
    }
    if (out.empty()) throw std::invalid_argument("words file contains no words");
    return out;
}

inline std::vector<std::string> load_words(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open words file: " + path);
    return load_words(in);
}

struct bench_report {
    impl implementation = impl::original;
    workload kind = workload::dense;
    /// Mean seconds per repetition.
    double wall_seconds = 0;
    std::vector<double> repetition_seconds;
    std::size_t repetitions = 0;
    // Instrumented figures; absent for the baseline.
    std::optional<std::uint64_t> nodes_allocated;
    std::optional<std::uint64_t> words_allocated;
    std::optional<std::uint64_t> live_nodes;
    std::optional<std::uint64_t> live_words;
    std::optional<std::uint64_t> live_values;
    std::size_t bindings = 0;
};

struct timing_options {
    double min_total_seconds = 1.0;
    std::size_t max_repetitions = 10;
};

/// Precomputed inputs so that timed regions contain only map operations
/// (plus string encoding for the dict workload).
struct workload_input {
    workload kind = workload::dense;
    std::vector<positive> keys;
    std::vector<std::string> words;
    std::size_t iterations = 0;
    /// Live-node ceiling for the repeated workload.
    std::uint64_t node_bound = 0;

    static workload_input dense(std::size_t n)
    {
        if (n == 0) throw std::invalid_argument("dense: n must be >= 1");
        workload_input in{workload::dense};
        for (std::uint64_t k = 1; k <= n; ++k) in.keys.push_back(positive::from_integer(k));
        return in;
    }

    static workload_input sparse(std::vector<std::string> words)
    {
        require_distinct(words);
        workload_input in{workload::sparse};
        for (const auto& w : words) in.keys.push_back(encode_string(w));
        in.words = std::move(words);
        return in;
    }

    static workload_input repeated(std::size_t key_count, std::size_t iterations)
    {
        if (key_count == 0 || iterations == 0) throw std::invalid_argument("repeated: counts must be >= 1");
        workload_input in{workload::repeated};
        canonical::tree<int> minimal;
        for (std::uint64_t k = 1; k <= key_count; ++k) {
            in.keys.push_back(positive::from_integer(k));
            minimal = minimal.set(in.keys.back(), 0);
        }
        in.iterations = iterations;
        in.node_bound = minimal.census().nodes;
        return in;
    }

    static workload_input dict(std::vector<std::string> words)
    {
        require_distinct(words);
        workload_input in{workload::dict};
        in.words = std::move(words);
        return in;
    }

private:
    static void require_distinct(const std::vector<std::string>& words)
    {
        if (words.empty()) throw std::invalid_argument("word list is empty");
        std::unordered_set<std::string_view> seen;
        for (const auto& w : words)
            if (!seen.insert(w).second) throw std::invalid_argument("duplicate word: " + w);
    }
};

using bench_value = std::int64_t;

namespace detail {

template <class T>
inline void keep_alive(const T& value)
{
    asm volatile("" : : "g"(&value) : "memory");
}

/// Runs the workload once on trie type M and returns the final map.
template <class M>
M execute_trie(const workload_input& in)
{
    M m;
    switch (in.kind) {
    case workload::dense:
    case workload::sparse:
        for (std::size_t i = 0; i < in.keys.size(); ++i) m = m.set(in.keys[i], static_cast<bench_value>(i));
        for (std::size_t i = 0; i < in.keys.size(); ++i) {
            const bench_value* v = m.find(in.keys[i]);
            if (!v || *v != static_cast<bench_value>(i))
                throw correctness_failure(std::string(name(in.kind)) + ": lookup of key " + in.keys[i].to_string() +
                                          " failed");
        }
        break;
    case workload::repeated: {
        std::size_t n = in.keys.size();
        for (std::size_t i = 0; i < in.iterations; ++i) m = m.set(in.keys[i % n], static_cast<bench_value>(i));
        auto c = m.census();
        if (c.nodes > in.node_bound)
            throw correctness_failure("repeated: " + std::to_string(c.nodes) + " live nodes exceed the bound of " +
                                      std::to_string(in.node_bound));
        for (std::size_t j = 0; j < n && j < in.iterations; ++j)
            if (!m.find(in.keys[j])) throw correctness_failure("repeated: key " + in.keys[j].to_string() + " missing");
        break;
    }
    case workload::dict: break;
    }
    return m;
}

template <class M>
dict<M> execute_dict(const workload_input& in)
{
    dict<M> d;
    for (std::size_t i = 0; i < in.words.size(); ++i) d = d.set(in.words[i], static_cast<bench_value>(i));
    for (std::size_t i = 0; i < in.words.size(); ++i) {
        const bench_value* v = d.find(in.words[i]);
        if (!v || *v != static_cast<bench_value>(i))
            throw correctness_failure("dict: lookup of \"" + in.words[i] + "\" failed");
    }
    return d;
}

inline std::size_t execute_baseline(const workload_input& in)
{
    if (in.kind == workload::dict) {
        std::map<std::string, bench_value> m;
        for (std::size_t i = 0; i < in.words.size(); ++i) m.insert_or_assign(in.words[i], static_cast<bench_value>(i));
        for (std::size_t i = 0; i < in.words.size(); ++i) {
            auto it = m.find(in.words[i]);
            if (it == m.end() || it->second != static_cast<bench_value>(i))
                throw correctness_failure("dict baseline: lookup of \"" + in.words[i] + "\" failed");
        }
        return m.size();
    }
    std::map<positive, bench_value> m;
    if (in.kind == workload::repeated) {
        for (std::size_t i = 0; i < in.iterations; ++i)
            m.insert_or_assign(in.keys[i % in.keys.size()], static_cast<bench_value>(i));
        if (m.size() != std::min(in.keys.size(), in.iterations)) throw correctness_failure("repeated baseline: size");
        return m.size();
    }
    for (std::size_t i = 0; i < in.keys.size(); ++i) m.insert_or_assign(in.keys[i], static_cast<bench_value>(i));
    for (std::size_t i = 0; i < in.keys.size(); ++i) {
        auto it = m.find(in.keys[i]);
        if (it == m.end() || it->second != static_cast<bench_value>(i))
            throw correctness_failure(std::string(name(in.kind)) + " baseline: lookup failed");
    }
    return m.size();
}

template <class Fn>
void time_runs(bench_report& rep, const timing_options& opt, Fn&& once)
{
    double total = 0;
    std::size_t max_reps = std::max<std::size_t>(opt.max_repetitions, 1);
    while (rep.repetition_seconds.size() < max_reps) {
        auto t0 = std::chrono::steady_clock::now();
        once();
        auto t1 = std::chrono::steady_clock::now();
        double s = std::chrono::duration<double>(t1 - t0).count();
        rep.repetition_seconds.push_back(s);
        total += s;
        if (total >= opt.min_total_seconds) break;
    }
    rep.repetitions = rep.repetition_seconds.size();
    rep.wall_seconds = total / static_cast<double>(rep.repetitions);
}

template <template <class, class> class Tree>
bench_report measure_trie(impl which, const workload_input& in, const timing_options& opt)
{
    bench_report rep{which, in.kind};
    counting_stats::reset();
    ptrie::census live;
    if (in.kind == workload::dict) {
        auto d = execute_dict<Tree<bench_value, counting_stats>>(in);
        live = d.backing().census();
    } else {
        auto m = execute_trie<Tree<bench_value, counting_stats>>(in);
        live = m.census();
    }
    auto counted = counting_stats::read();
    rep.nodes_allocated = counted.nodes;
    rep.words_allocated = counted.words;
    rep.live_nodes = live.nodes;
    rep.live_words = live.words;
    rep.live_values = live.values;
    rep.bindings = live.values;

    time_runs(rep, opt, [&] {
        if (in.kind == workload::dict) {
            auto d = execute_dict<Tree<bench_value, no_stats>>(in);
            keep_alive(d);
        } else {
            auto m = execute_trie<Tree<bench_value, no_stats>>(in);
            keep_alive(m);
        }
    });
    return rep;
}

} // namespace detail

inline bench_report run(impl which, const workload_input& in, const timing_options& opt = {})
{
    switch (which) {
    case impl::original: return detail::measure_trie<original::tree>(which, in, opt);
    case impl::node01: return detail::measure_trie<node01::tree>(which, in, opt);
    case impl::canonical: return detail::measure_trie<canonical::tree>(which, in, opt);
    case impl::baseline: break;
    }
    bench_report rep{which, in.kind};
    // The baseline gets the same correctness run before timing.
    rep.bindings = detail::execute_baseline(in);
    detail::time_runs(rep, opt, [&] {
        auto n = detail::execute_baseline(in);
        detail::keep_alive(n);
    });
    return rep;
}

/// Inserts keys 1..n in order, then looks every key up.
inline bench_report run_dense(impl which, std::size_t n, const timing_options& opt = {})
{
    return run(which, workload_input::dense(n), opt);
}

/// Inserts the encoded words, then looks every one up.
inline bench_report run_sparse(impl which, std::vector<std::string> words, const timing_options& opt = {})
{
    return run(which, workload_input::sparse(std::move(words)), opt);
}

/// `iterations` sets cycling through keys 1..key_count.
inline bench_report run_repeated(impl which, std::size_t key_count, std::size_t iterations,
                                 const timing_options& opt = {})
{
    return run(which, workload_input::repeated(key_count, iterations), opt);
}

/// The dict workload; the baseline is std::map keyed by the raw strings.
inline bench_report run_dict(impl which, std::vector<std::string> words, const timing_options& opt = {})
{
    return run(which, workload_input::dict(std::move(words)), opt);
}

// ---------------------------------------------------------------------------
// Reporting

enum class report_format { table, csv };

namespace detail {

struct metric {
    std::string_view csv_name;
    std::string_view label;
    std::optional<double> (*get)(const bench_report&);
};

inline std::optional<double> as_double(const std::optional<std::uint64_t>& v)
{
    return v ? std::optional<double>(static_cast<double>(*v)) : std::nullopt;
}

inline const std::vector<metric>& metrics()
{
    static const std::vector<metric> all = {
        {"time_s", "Time in s", [](const bench_report& r) { return std::optional<double>(r.wall_seconds); }},
        {"allocated_nodes", "Allocated nodes", [](const bench_report& r) { return as_double(r.nodes_allocated); }},
        {"allocated_words", "Allocated words", [](const bench_report& r) { return as_double(r.words_allocated); }},
        {"live_nodes", "Live nodes", [](const bench_report& r) { return as_double(r.live_nodes); }},
        {"live_words", "Live words", [](const bench_report& r) { return as_double(r.live_words); }},
    };
    return all;
}

inline std::string format_number(std::optional<double> v, bool scientific)
{
    if (!v) return "NA";
    std::ostringstream os;
    if (scientific) os << std::scientific << std::setprecision(2) << *v;
    else os << std::setprecision(10) << *v;
    return os.str();
}

inline std::optional<double> relative(const std::vector<bench_report>& reports, const bench_report& r, const metric& m)
{
    auto value = m.get(r);
    if (!value) return std::nullopt;
    for (const auto& o : reports)
        if (o.kind == r.kind && o.implementation == impl::original) {
            auto base = m.get(o);
            if (!base || *base == 0) return std::nullopt;
            return *value / *base;
        }
    return std::nullopt;
}

} // namespace detail

inline constexpr std::string_view csv_header = "impl,workload,metric,value,relative_to_original";

/// Table: one section per workload, implementations as columns, each metric
/// followed by its value relative to Original (= 100%). CSV: one row per
/// (impl, workload, metric); relative_to_original is a ratio.
inline std::string report(report_format format, const std::vector<bench_report>& reports,
                          const std::vector<std::string>& notes = {})
{
    std::ostringstream os;
    if (format == report_format::csv) {
        os << csv_header << '\n';
        for (const auto& r : reports)
            for (const auto& m : detail::metrics())
                os << name(r.implementation) << ',' << name(r.kind) << ',' << m.csv_name << ','
                   << detail::format_number(m.get(r), false) << ','
                   << detail::format_number(detail::relative(reports, r, m), false) << '\n';
        return os.str();
    }

    for (const auto& n : notes) os << "# " << n << '\n';
    constexpr int label_width = 26;
    constexpr int column_width = 12;
    std::vector<impl> columns;
    std::vector<workload> sections;
    for (const auto& r : reports) {
        if (std::find(columns.begin(), columns.end(), r.implementation) == columns.end())
            columns.push_back(r.implementation);
        if (std::find(sections.begin(), sections.end(), r.kind) == sections.end()) sections.push_back(r.kind);
    }
    os << std::left << std::setw(label_width) << "Implementation";
    for (auto c : columns) os << std::right << std::setw(column_width) << name(c);
    os << '\n';
    for (auto w : sections) {
        os << "--- " << name(w) << " ---\n";
        auto cell = [&](impl c) -> const bench_report* {
            for (const auto& r : reports)
                if (r.kind == w && r.implementation == c) return &r;
            return nullptr;
        };
        for (const auto& m : detail::metrics()) {
            os << std::left << std::setw(label_width) << m.label;
            for (auto c : columns) {
                const bench_report* r = cell(c);
                os << std::right << std::setw(column_width)
                   << (r ? detail::format_number(m.get(*r), m.csv_name == "time_s") : std::string("-"));
            }
            os << '\n';
            std::string rel_label(m.label);
            rel_label[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(rel_label[0])));
            if (m.csv_name == "time_s") rel_label = "time";
            os << std::left << std::setw(label_width) << ("Relative " + rel_label);
            for (auto c : columns) {
                const bench_report* r = cell(c);
                std::string text = "-";
                if (r) {
                    auto rel = detail::relative(reports, *r, m);
                    if (rel) {
                        std::ostringstream p;
                        p << std::fixed << std::setprecision(0) << *rel * 100 << '%';
                        text = p.str();
                    } else {
                        text = "NA";
                    }
                }
                os << std::right << std::setw(column_width) << text;
            }
            os << '\n';
        }
    }
    return os.str();
}

} // namespace ptrie::bench
