// fixpt: run scenario files and seeded property suites.
//
// exit status: 0 all checks hold, 1 a property check failed, 2 bad input

#include "fixpt/fixtures.hpp"
#include "fixpt/scenario.hpp"
#include "fixpt/verify.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

enum Exit { kOk = 0, kPropertyFailure = 1, kInputError = 2 };

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw fixpt::scenario::ScenarioError(path + ": cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_text(const std::string& text, const std::string& format) {
    auto rep = fixpt::scenario::run(fixpt::scenario::parse_scenario(text));
    std::cout << (format == "json" ? fixpt::scenario::format_json(rep) : fixpt::scenario::format_human(rep));
    return rep.ok() ? kOk : kPropertyFailure;
}

int run_verify(const std::string& target, std::size_t trials, std::uint64_t seed, const std::string& format) {
    const auto& names = fixpt::verify::suite_names();
    std::vector<std::string> suites;
    if (target == "all")
        suites = names;
    else if (std::find(names.begin(), names.end(), target) != names.end())
        suites = {target};
    else if (std::ifstream(target))
        // a scenario file whose checks must hold
        return run_text(read_file(target), format);
    else
        throw std::invalid_argument("\"" + target + "\" is neither a suite (" + [&] {
            std::string s = "all";
            for (const auto& n : names)
                s += ", " + n;
            return s;
        }() + ") nor a readable scenario file");

    bool ok = true;
    nlohmann::json all = nlohmann::json::array();
    for (const auto& s : suites) {
        auto r = fixpt::verify::run_suite(s, trials, seed);
        ok &= r.ok();
        if (format == "json") {
            all.push_back(r.to_json());
            continue;
        }
        std::cout << (r.ok() ? "PASS " : "FAIL ") << s << ": " << r.trials << " cases, " << r.failures
                  << " failures";
        if (!r.stats.empty())
            std::cout << "  " << r.stats.dump();
        std::cout << "\n";
        if (!r.ok())
            std::cout << "  counterexample: " << r.counterexample.dump() << "\n";
    }
    if (format == "json")
        std::cout << all.dump(2) << "\n";
    return ok ? kOk : kPropertyFailure;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Nielsen and Reidemeister fixed point invariants"};
    app.require_subcommand(1);
    std::string format = "human";
    app.add_option("--format", format, "output format")
        ->check(CLI::IsMember({"human", "json"}))
        ->capture_default_str();

    std::string file;
    auto* run = app.add_subcommand("run", "evaluate a scenario file");
    run->add_option("file", file, "scenario JSON")->required();

    std::string target;
    std::size_t trials = 200;
    std::uint64_t seed = 1;
    auto* verify = app.add_subcommand("verify", "run a property suite (or all) or check a scenario file");
    verify->add_option("target", target, "suite name, \"all\", or scenario file")->required();
    verify->add_option("--trials", trials, "random cases per suite")->capture_default_str();
    verify->add_option("--seed", seed, "mt19937_64 seed")->capture_default_str();

    auto* fixtures = app.add_subcommand("fixtures", "built-in scenarios");
    fixtures->require_subcommand(1);
    auto* list = fixtures->add_subcommand("list", "list built-in scenarios");
    std::string fixture;
    auto* frun = fixtures->add_subcommand("run", "evaluate a built-in scenario");
    frun->add_option("name", fixture)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kInputError;
    }

    try {
        if (*run)
            return run_text(read_file(file), format);
        if (*verify)
            return run_verify(target, trials, seed, format);
        if (*list) {
            for (const auto& f : fixpt::fixtures::all())
                std::cout << f.name << "  " << f.summary << "\n";
            return kOk;
        }
        const auto* f = fixpt::fixtures::find(fixture);
        if (!f) {
            std::cerr << "error: no fixture named \"" << fixture << "\" (see `fixpt fixtures list`)\n";
            return kInputError;
        }
        return run_text(f->json, format);
    } catch (const std::invalid_argument& e) { // schema, model and malformed-input errors
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    }
}
