#include <iostream>

#include "CLI11.hpp"
#include "ucplab/harness/suites.hpp"

using namespace ucplab::harness;

int main(int argc, char** argv) {
    CLI::App app{"Numerical experiments on weak unique continuation for perturbed Dirac-type operators"};
    app.require_subcommand(1);

    auto* list = app.add_subcommand("list", "List suites, their criteria and every config key with its default");

    std::string suite, config_path, out_dir;
    std::uint64_t seed = 0;
    unsigned jobs = 1;
    auto* run = app.add_subcommand("run", "Run one suite and write report.json and <suite>.csv");
    run->add_option("--suite", suite, "Suite name (see `list`)");
    run->add_option("--config", config_path, "TOML-style config file");
    auto* seed_opt = run->add_option("--seed", seed, "Seed of the counter-based generator");
    auto* out_opt = run->add_option("--out", out_dir, "Output directory");
    auto* jobs_opt = run->add_option("--jobs", jobs, "Concurrent sweep points")->check(CLI::PositiveNumber);
    run->footer("Config keys:\n" + list_suites_text());

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_code::ok : exit_code::parse_error;
    }

    if (list->parsed()) {
        std::cout << list_suites_text();
        return exit_code::ok;
    }

    ConfigFile file;
    try {
        if (!config_path.empty()) file = load_config_file(config_path);
    } catch (const ParseError& e) {
        std::cerr << "error: " << config_path << ": " << e.what() << "\n";
        return exit_code::parse_error;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code::io_error;
    }
    if (*seed_opt) file.top["seed"] = static_cast<std::int64_t>(seed);
    if (*out_opt) file.top["out"] = out_dir;
    if (*jobs_opt) file.top["jobs"] = static_cast<std::int64_t>(jobs);
    return run_experiment(file, suite, std::cout, std::cerr);
}
