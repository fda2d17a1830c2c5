#include <charconv>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "ucplab/common.hpp"
#include "ucplab/harness/suites.hpp"

namespace ucplab::harness {

namespace {

nlohmann::ordered_json to_json(const Value& v) {
    return std::visit([](const auto& x) { return nlohmann::ordered_json(x); }, v);
}

nlohmann::ordered_json to_json(const MetricValue& v) {
    return std::visit(
        [](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, double>)
                if (!std::isfinite(x)) return nlohmann::ordered_json(x > 0 ? "inf" : (x < 0 ? "-inf" : "nan"));
            return nlohmann::ordered_json(x);
        },
        v);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
    f << content;
    f.flush();
    if (!f) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace

const char* to_string(Status s) {
    switch (s) {
        case Status::pass: return "pass";
        case Status::fail: return "fail";
        case Status::inconclusive: return "inconclusive";
    }
    return "unknown";
}

std::string cell(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

std::string cell(std::size_t v) { return std::to_string(v); }

std::string Table::csv() const {
    std::string out;
    auto line = [&](const std::vector<std::string>& r) {
        for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + r[i];
        out += '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
    return out;
}

bool SuiteResult::passed() const {
    for (const auto& c : criteria)
        if (c.status == Status::fail) return false;
    return true;
}

SuiteResult run_suite(const ExperimentConfig& cfg) {
    if (cfg.suite == "carleman") return run_carleman(cfg);
    if (cfg.suite == "decay") return run_decay(cfg);
    if (cfg.suite == "counterexample") return run_counterexample(cfg);
    if (cfg.suite == "sw-gradcheck") return run_sw_gradcheck(cfg);
    if (cfg.suite == "sw-flow") return run_sw_flow(cfg);
    if (cfg.suite == "observables") return run_observables(cfg);
    throw ParseError("unknown suite '" + cfg.suite + "'");
}

std::string report_json(const ExperimentConfig& cfg, const SuiteResult& r) {
    nlohmann::ordered_json j;
    j["suite"] = r.suite;
    j["seed"] = cfg.seed;
    auto& config = j["config"] = nlohmann::ordered_json::object();
    for (const auto& k : find_suite(cfg.suite).keys) config[k.key] = to_json(cfg.values.at(k.key));
    auto& criteria = j["criteria"] = nlohmann::ordered_json::array();
    for (const auto& c : r.criteria) {
        nlohmann::ordered_json e;
        e["id"] = c.id;
        e["title"] = c.title;
        e["status"] = to_string(c.status);
        e["detail"] = c.detail;
        auto& m = e["metrics"] = nlohmann::ordered_json::object();
        for (const auto& metric : c.metrics) m[metric.name] = to_json(metric.value);
        criteria.push_back(std::move(e));
    }
    j["passed"] = r.passed();
    auto& files = j["files"] = nlohmann::ordered_json::array();
    files.push_back(r.suite + ".csv");
    for (const auto& [name, t] : r.plotdata) files.push_back("plotdata/" + name + ".csv");
    return j.dump(2) + "\n";
}

void write_outputs(const ExperimentConfig& cfg, const SuiteResult& r) {
    const std::filesystem::path dir(cfg.out);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
    write_file(dir / "report.json", report_json(cfg, r));
    write_file(dir / (r.suite + ".csv"), r.table.csv());
    if (!r.plotdata.empty()) {
        std::filesystem::create_directories(dir / "plotdata", ec);
        if (ec) throw IoError("cannot create '" + (dir / "plotdata").string() + "': " + ec.message());
        for (const auto& [name, t] : r.plotdata) write_file(dir / "plotdata" / (name + ".csv"), t.csv());
    }
}

std::string list_suites_text() {
    std::ostringstream s;
    s << "Common keys (top level of the config file):\n";
    for (const auto& k : common_keys())
        s << "  " << k.key << " = " << format_value(k.default_value) << "    " << k.help << "\n";
    for (const auto& suite : suite_catalogue()) {
        s << "\n" << suite.name << ": " << suite.summary << "\n  criteria:";
        for (int c : suite.criteria) s << " " << c;
        s << "\n  keys ([" << suite.name << "] section):\n";
        for (const auto& k : suite.keys)
            s << "    " << k.key << " = " << format_value(k.default_value) << "    " << k.help << "\n";
    }
    return s.str();
}

int run_experiment(const ConfigFile& file, const std::string& suite, std::ostream& out, std::ostream& err) {
    ExperimentConfig cfg;
    try {
        cfg = resolve_config(file, suite);
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return exit_code::parse_error;
    }
    SuiteResult result;
    try {
        result = run_suite(cfg);
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return exit_code::parse_error;
    } catch (const PreconditionError& e) {
        err << "error: invalid configuration: " << e.what() << "\n";
        return exit_code::parse_error;
    }
    try {
        write_outputs(cfg, result);
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return exit_code::io_error;
    }
    for (const auto& c : result.criteria) out << "criterion " << c.id << " " << to_string(c.status) << ": " << c.detail << "\n";
    return result.passed() ? exit_code::ok : exit_code::assertion_failure;
}

}  // namespace ucplab::harness
