#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "ucplab/harness/config.hpp"

namespace ucplab::harness {

enum class Status { pass, fail, inconclusive };
const char* to_string(Status s);

using MetricValue = std::variant<bool, std::int64_t, double, std::string>;

struct Metric {
    std::string name;
    MetricValue value;
};

struct CriterionResult {
    CriterionResult() = default;
    CriterionResult(int id_, std::string title_) : id(id_), title(std::move(title_)) {}

    int id = 0;
    std::string title;
    Status status = Status::inconclusive;
    std::string detail;
    std::vector<Metric> metrics;

    void add(std::string name, MetricValue v) { metrics.push_back({std::move(name), std::move(v)}); }
};

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> r) { rows.push_back(std::move(r)); }
    std::string csv() const;
};

/// Shortest text that reproduces the double exactly.
std::string cell(double v);
std::string cell(std::size_t v);

struct SuiteResult {
    std::string suite;
    std::vector<CriterionResult> criteria;
    Table table;                          ///< written as <suite>.csv
    std::map<std::string, Table> plotdata;  ///< written as plotdata/<name>.csv

    bool passed() const;  ///< no criterion failed
};

SuiteResult run_carleman(const ExperimentConfig& cfg);
SuiteResult run_decay(const ExperimentConfig& cfg);
SuiteResult run_counterexample(const ExperimentConfig& cfg);
SuiteResult run_sw_gradcheck(const ExperimentConfig& cfg);
SuiteResult run_sw_flow(const ExperimentConfig& cfg);
SuiteResult run_observables(const ExperimentConfig& cfg);

SuiteResult run_suite(const ExperimentConfig& cfg);

/// Deterministic report: no timings, keys in a fixed order.
std::string report_json(const ExperimentConfig& cfg, const SuiteResult& r);

/// report.json, <suite>.csv and plotdata/*.csv under cfg.out. Throws IoError.
void write_outputs(const ExperimentConfig& cfg, const SuiteResult& r);

/// Suite names, criteria, keys and defaults.
std::string list_suites_text();

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int assertion_failure = 1;
inline constexpr int parse_error = 2;
inline constexpr int io_error = 3;
}  // namespace exit_code

/// Resolve, run and write; returns one of the exit codes. Criterion lines go to out, errors to err.
int run_experiment(const ConfigFile& file, const std::string& suite, std::ostream& out, std::ostream& err);

}  // namespace ucplab::harness
