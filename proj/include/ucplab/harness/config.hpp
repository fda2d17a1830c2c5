#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace ucplab::harness {

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Value = std::variant<bool, std::int64_t, double, std::string, std::vector<double>>;

enum class ValueType { boolean, integer, real, text, real_list };

struct KeySpec {
    std::string key;
    ValueType type;
    Value default_value;
    std::string help;
};

struct SuiteSpec {
    std::string name;
    std::string summary;
    std::vector<int> criteria;
    std::vector<KeySpec> keys;
};

/// Every suite with its keys and embedded defaults, in listing order.
const std::vector<SuiteSpec>& suite_catalogue();
const SuiteSpec& find_suite(const std::string& name);  ///< ParseError if unknown

/// Top-level keys shared by all suites: suite, seed, out, jobs.
const std::vector<KeySpec>& common_keys();

std::string format_value(const Value& v);

/// Resolved configuration for one run. Values hold every key of the suite, defaults filled in.
struct ExperimentConfig {
    std::string suite;
    std::uint64_t seed = 42;
    std::string out = "ucp-out";
    unsigned jobs = 1;
    std::map<std::string, Value> values;

    static ExperimentConfig defaults(const std::string& suite);

    double real(const std::string& key) const;
    std::int64_t integer(const std::string& key) const;
    std::size_t count(const std::string& key) const;  ///< non-negative integer
    bool flag(const std::string& key) const;
    const std::string& text(const std::string& key) const;
    const std::vector<double>& list(const std::string& key) const;
};

/// Parsed TOML-style text: top-level `key = value` lines and `[suite]` sections.
/// Values are numbers, booleans, "quoted strings" or [number, ...] lists; `#` starts a comment.
struct ConfigFile {
    std::map<std::string, Value> top;
    std::map<std::string, std::map<std::string, Value>> sections;
};

ConfigFile parse_config_text(const std::string& text);
ConfigFile load_config_file(const std::string& path);  ///< IoError if unreadable

/// Merge defaults, file contents and command-line overrides, validating keys and types.
/// An empty suite_override uses the file's `suite` key.
ExperimentConfig resolve_config(const ConfigFile& file, const std::string& suite_override);

}  // namespace ucplab::harness
