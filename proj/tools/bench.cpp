// ptrie-bench: runs the Dense, Sparse, Repeated and Dict workloads and prints
// a time/allocation table or CSV.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "ptrie/bench.hpp"

namespace bench = ptrie::bench;

int main(int argc, char** argv)
{
    CLI::App app{"Benchmark the positive-keyed trie implementations"};

    std::string workload = "all", implementation = "all", format = "table", words_file, out_path;
    std::uint64_t seed = bench::default_seed;
    std::size_t dense_n = 2048, sparse_count = 5064, repeated_keys = 7, repeated_iters = 1'000'000;
    bench::timing_options timing;

    app.add_option("--workload", workload, "dense, sparse, repeated, dict or all")
        ->check(CLI::IsMember({"dense", "sparse", "repeated", "dict", "all"}));
    app.add_option("--impl", implementation, "original, node01, canonical, baseline or all")
        ->check(CLI::IsMember({"original", "node01", "canonical", "baseline", "all"}));
    app.add_option("--seed", seed, "Word generator seed")->capture_default_str();
    app.add_option("--dense-n", dense_n, "Keys 1..n for the dense workload")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--sparse-count", sparse_count, "Generated words for sparse and dict")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    app.add_option("--repeated-keys", repeated_keys, "Keys cycled by the repeated workload")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    app.add_option("--repeated-iters", repeated_iters, "Insertions in the repeated workload")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    app.add_option("--words-file", words_file, "One word per line; replaces the generated corpus")
        ->check(CLI::ExistingFile);
    app.add_option("--min-seconds", timing.min_total_seconds, "Stop repeating once this much time has accumulated")
        ->capture_default_str();
    app.add_option("--max-reps", timing.max_repetitions, "Upper bound on timed repetitions")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    app.add_option("--format", format, "table or csv")->check(CLI::IsMember({"table", "csv"}));
    app.add_option("--out", out_path, "Write the report here instead of stdout");
    CLI11_PARSE(app, argc, argv);

    std::vector<bench::workload> workloads;
    for (auto w : {bench::workload::dense, bench::workload::sparse, bench::workload::repeated, bench::workload::dict})
        if (workload == "all" || workload == bench::name(w)) workloads.push_back(w);
    std::vector<bench::impl> impls;
    for (auto i : {bench::impl::original, bench::impl::node01, bench::impl::canonical, bench::impl::baseline})
        if (implementation == "all" || implementation == bench::name(i)) impls.push_back(i);

    std::vector<std::string> notes;
    std::vector<bench::bench_report> reports;
    try {
        std::vector<std::string> words;
        if (!words_file.empty()) {
            words = bench::load_words(words_file);
            notes.push_back("corpus: " + std::to_string(words.size()) + " words from " + words_file);
        } else {
            words = bench::gen_words(seed, sparse_count);
            notes.push_back("corpus: " + std::to_string(words.size()) + " generated words, seed " +
                            std::to_string(seed) + " (mean length near 9.5 letters)");
        }
        for (auto w : workloads) {
            bench::workload_input in;
            switch (w) {
            case bench::workload::dense: in = bench::workload_input::dense(dense_n); break;
            case bench::workload::sparse: in = bench::workload_input::sparse(words); break;
            case bench::workload::repeated:
                in = bench::workload_input::repeated(repeated_keys, repeated_iters);
                break;
            case bench::workload::dict: in = bench::workload_input::dict(words); break;
            }
            for (auto i : impls) {
                std::cerr << "running " << bench::name(w) << " / " << bench::name(i) << '\n';
                reports.push_back(bench::run(i, in, timing));
            }
        }
    } catch (const bench::correctness_failure& e) {
        std::cerr << "correctness failure: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }

    auto text = bench::report(format == "csv" ? bench::report_format::csv : bench::report_format::table, reports,
                              notes);
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path);
        if (!(out << text)) {
            std::cerr << "cannot write " << out_path << '\n';
            return 1;
        }
    }
    return 0;
}
