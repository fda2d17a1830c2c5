#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ucplab/harness/suites.hpp"

using namespace ucplab::harness;

TEST_CASE("config text parsing") {
    const auto f = parse_config_text(R"(# experiment
suite = "carleman"   # trailing comment
seed = 7
[carleman]
T = 0.2
R_grid = [10, 1e2, 1000.5]
)");
    CHECK(std::get<std::string>(f.top.at("suite")) == "carleman");
    CHECK(std::get<std::int64_t>(f.top.at("seed")) == 7);
    CHECK(std::get<double>(f.sections.at("carleman").at("T")) == 0.2);
    CHECK(std::get<std::vector<double>>(f.sections.at("carleman").at("R_grid")) == std::vector<double>{10, 100, 1000.5});

    const auto cfg = resolve_config(f, "");
    CHECK(cfg.suite == "carleman");
    CHECK(cfg.seed == 7);
    CHECK(cfg.real("T") == 0.2);
    CHECK(cfg.count("samples") == 20);
    CHECK(cfg.list("R_grid").size() == 3);
}

TEST_CASE("config errors are parse errors") {
    CHECK_THROWS_AS(parse_config_text("T 0.1"), ParseError);
    CHECK_THROWS_AS(parse_config_text("[nope]\n"), ParseError);
    CHECK_THROWS_AS(parse_config_text("a = \"open"), ParseError);
    CHECK_THROWS_AS(parse_config_text("a = [1, x]"), ParseError);
    CHECK_THROWS_AS(parse_config_text("a = 1\na = 2"), ParseError);
    CHECK_THROWS_AS(resolve_config(parse_config_text("[decay]\nnodes = 0.5\n"), "decay"), ParseError);
    CHECK_THROWS_AS(resolve_config(parse_config_text("[decay]\nbogus = 1\n"), "decay"), ParseError);
    CHECK_THROWS_AS(resolve_config(parse_config_text("jobs = 0\n"), "decay"), ParseError);
    CHECK_THROWS_AS(resolve_config(parse_config_text(""), ""), ParseError);
    CHECK_THROWS_AS(resolve_config(parse_config_text(""), "unknown"), ParseError);
    CHECK_THROWS_AS(load_config_file("/nonexistent/ucplab.toml"), IoError);
}

TEST_CASE("sections for other suites are validated but not applied") {
    const auto cfg = resolve_config(parse_config_text("[decay]\nT = 0.3\n[carleman]\nT = 0.2\n"), "decay");
    CHECK(cfg.real("T") == 0.3);
}

TEST_CASE("six suites are listed with every key") {
    CHECK(suite_catalogue().size() == 6);
    const auto text = list_suites_text();
    for (const auto& s : suite_catalogue()) {
        CHECK(text.find(s.name + ":") != std::string::npos);
        for (const auto& k : s.keys) CHECK(text.find("    " + k.key + " = ") != std::string::npos);
    }
    for (const auto& k : common_keys()) CHECK(text.find("  " + k.key + " = ") != std::string::npos);
}

TEST_CASE("cells round-trip doubles") {
    for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 12345.678}) CHECK(std::stod(cell(v)) == v);
    CHECK(cell(std::numeric_limits<double>::infinity()) == "inf");
}

TEST_CASE("counterexample suite with defaults") {
    const auto cfg = ExperimentConfig::defaults("counterexample");
    const auto r = run_suite(cfg);
    REQUIRE(r.criteria.size() == 1);
    CHECK(r.criteria[0].status == Status::pass);
    const auto json = report_json(cfg, r);
    CHECK(json.find("\"inner_product\": 1.0000000000") != std::string::npos);
    CHECK(r.passed());
}

TEST_CASE("single-point R grid gives inconclusive Carleman rows") {
    auto cfg = ExperimentConfig::defaults("carleman");
    cfg.values["R_grid"] = std::vector<double>{5.0};
    cfg.values["appendix_samples"] = std::int64_t{2};
    const auto r = run_suite(cfg);
    CHECK(r.criteria[0].status == Status::inconclusive);
    CHECK(r.criteria[1].status == Status::inconclusive);
    for (const auto& row : r.table.rows) CHECK(row.back() == "inconclusive");
    CHECK(r.passed());
}

TEST_CASE("run_experiment writes outputs and maps failures to exit codes") {
    const auto dir = std::filesystem::temp_directory_path() / "ucplab_harness_test";
    std::filesystem::remove_all(dir);
    ConfigFile f;
    f.top["out"] = dir.string();
    std::ostringstream out, err;
    CHECK(run_experiment(f, "counterexample", out, err) == exit_code::ok);
    CHECK(std::filesystem::exists(dir / "report.json"));
    CHECK(std::filesystem::exists(dir / "counterexample.csv"));
    CHECK(out.str().find("criterion 5 pass") != std::string::npos);

    std::ifstream first(dir / "report.json");
    const std::string a((std::istreambuf_iterator<char>(first)), {});
    CHECK(run_experiment(f, "counterexample", out, err) == exit_code::ok);
    std::ifstream second(dir / "report.json");
    const std::string b((std::istreambuf_iterator<char>(second)), {});
    CHECK(a == b);

    CHECK(run_experiment(f, "no-such-suite", out, err) == exit_code::parse_error);
    ConfigFile bad;
    bad.top["out"] = (dir / "report.json" / "sub").string();
    CHECK(run_experiment(bad, "counterexample", out, err) == exit_code::io_error);
}
