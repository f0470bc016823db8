// ptrie-replay: runs an operation script against an implementation and the
// reference map, or generates a random script.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ptrie/canonical.hpp"
#include "ptrie/mapkit.hpp"
#include "ptrie/node01.hpp"
#include "ptrie/original.hpp"

namespace mk = ptrie::mapkit;

namespace {

template <class M>
mk::law_report check(const mk::operation_script& script, const mk::differential_options& opt)
{
    return mk::run_differential<M>(script, opt);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Replay or generate operation scripts"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "Replay a script against an implementation and the oracle");
    std::string path, implementation = "canonical";
    bool observe = false, no_shrink = false;
    run->add_option("script", path, "Script file, or - for stdin")->required();
    run->add_option("--impl", implementation, "original, node01 or canonical")
        ->check(CLI::IsMember({"original", "node01", "canonical"}));
    run->add_flag("--observe", observe, "Compare only at GET and ELEMS steps");
    run->add_flag("--no-shrink", no_shrink, "Report the failing script unshrunk");

    auto* gen = app.add_subcommand("generate", "Write a random script to stdout");
    std::uint64_t seed = 1;
    mk::script_options opt;
    gen->add_option("--seed", seed)->capture_default_str();
    gen->add_option("--steps", opt.steps)->capture_default_str();
    gen->add_option("--key-pool", opt.key_pool, "0 draws fresh keys every time")->capture_default_str();
    gen->add_option("--operands", opt.operands)->capture_default_str();
    gen->add_option("--sparse-fraction", opt.sparse_fraction)->capture_default_str()->check(CLI::Range(0.0, 1.0));

    CLI11_PARSE(app, argc, argv);

    if (*gen) {
        std::cout << mk::to_text(mk::generate_script(seed, opt));
        return 0;
    }

    mk::operation_script script;
    try {
        std::stringstream text;
        if (path == "-") {
            text << std::cin.rdbuf();
        } else {
            std::ifstream in(path);
            if (!in) throw std::runtime_error("cannot open " + path);
            text << in.rdbuf();
        }
        script = mk::parse_script(text.str());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }

    mk::differential_options dopt;
    dopt.check_every_step = !observe;
    dopt.shrink = !no_shrink;
    mk::law_report rep;
    if (implementation == "original") rep = check<ptrie::original::tree<mk::script_value>>(script, dopt);
    else if (implementation == "node01") rep = check<ptrie::node01::tree<mk::script_value>>(script, dopt);
    else rep = check<ptrie::canonical::tree<mk::script_value>>(script, dopt);

    if (rep.passed()) {
        std::cout << "ok: " << script.steps.size() << " steps agree with the oracle\n";
        return 0;
    }
    std::cout << "divergence: " << rep.detail << '\n';
    if (rep.failing_step) std::cout << "at step " << *rep.failing_step << " of the script below\n";
    std::cout << mk::to_text(*rep.first_failure);
    return 3;
}
