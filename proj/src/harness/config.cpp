#include "ucplab/harness/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace ucplab::harness {

namespace {

using V = std::vector<double>;

KeySpec real(std::string k, double d, std::string h) { return {std::move(k), ValueType::real, d, std::move(h)}; }
KeySpec integer(std::string k, std::int64_t d, std::string h) { return {std::move(k), ValueType::integer, d, std::move(h)}; }
KeySpec text(std::string k, std::string d, std::string h) { return {std::move(k), ValueType::text, std::move(d), std::move(h)}; }
KeySpec list(std::string k, V d, std::string h) { return {std::move(k), ValueType::real_list, std::move(d), std::move(h)}; }

std::vector<KeySpec> interval_keys() {
    return {
        real("T", 0.1, "normal extent of the collar"),
        integer("nodes", 401, "grid nodes in the normal direction"),
        real("R_min", 10.0, "smallest weight parameter of the log-spaced grid"),
        real("R_max", 1000.0, "largest weight parameter of the log-spaced grid"),
        integer("R_count", 7, "points of the log-spaced grid"),
        list("R_grid", {}, "explicit weight parameters; overrides R_min/R_max/R_count when non-empty"),
        integer("samples", 20, "random cutoff fields per weight parameter"),
        integer("max_modes", 5, "sine modes per random field"),
        real("perturbation_amplitude", 1.0, "sup |a| of the pointwise perturbation <u, a> u"),
    };
}

std::vector<SuiteSpec> build_catalogue() {
    auto carleman = interval_keys();
    carleman.push_back(real("boundedness_factor", 2.0, "allowed max/min ratio of the constant estimates"));
    carleman.push_back(integer("appendix_samples", 50, "random inputs for the expanded-estimate split"));
    carleman.push_back(real("appendix_R", 50.0, "weight parameter for the expanded-estimate split"));
    carleman.push_back(real("split_tolerance", 1e-10, "relative defect allowed in the split"));
    carleman.push_back(list("appendix_nodes", {201, 401, 801}, "grids for the constant-coefficient convergence order"));
    carleman.push_back(real("min_order", 1.9, "required convergence order"));

    auto decay = interval_keys();
    decay.push_back(real("slope_tolerance", 0.01, "relative tolerance on the asymptotic log-slope"));

    return {
        {"carleman", "Carleman constant sweeps (plain and perturbed) and the expanded-estimate identities", {1, 2, 4}, carleman},
        {"decay", "decay bound of cutoff solutions and its exponential rate in R", {3}, decay},
        {"counterexample",
         "Peano branches, the rank-one non-uniqueness example and UCP condition classification",
         {5},
         {
             integer("nodes", 16385, "grid nodes on [0, 2] for the rank-one example"),
             integer("peano_nodes", 4097, "grid nodes for the Peano branches"),
             real("collar", 0.02, "width of the smoothing collars of the indicator profile"),
             real("residual_tolerance", 1e-6, "allowed ODE residual"),
             real("value_tolerance", 1e-8, "allowed error in <u, a> = 1 and u(2) = sqrt 2"),
             real("eigen_frequency", 3.141592653589793, "frequency of the eigenspinor profile for condition (i)"),
         }},
        {"sw-gradcheck",
         "central-difference check of the functional gradient in all three cases",
         {6},
         {
             integer("N", 4, "lattice modes per axis (|k_j| <= N)"),
             integer("configs", 10, "random configurations per case"),
             real("amplitude", 0.3, "amplitude of the random configurations"),
             integer("max_mode", 2, "largest Fourier mode of the random configurations"),
             list("h", {1e-2, 1e-3, 1e-4}, "difference steps, decreasing"),
             real("min_order", 1.9, "required convergence order"),
         }},
        {"sw-flow",
         "gradient flow from small random data and the flat-torus spinor bound",
         {8},
         {
             integer("N", 4, "lattice modes per axis"),
             integer("configs", 5, "random initial configurations"),
             real("amplitude", 0.01, "amplitude of the initial configurations"),
             real("dt", 0.02, "time step"),
             integer("max_steps", 2000, "step limit per trajectory"),
             text("scheme", "explicit", "explicit or semi-implicit"),
             real("residual_tolerance", 1e-6, "residual that counts as a solution"),
             real("psi_bound", 1e-4, "required sup |psi|^2 at the limit"),
         }},
        {"observables",
         "gauge behaviour of the observables, adjoint identity and spinor-block admissibility",
         {7, 9},
         {
             integer("N", 4, "lattice modes per axis"),
             integer("configs", 5, "random configurations"),
             real("amplitude", 0.3, "amplitude of the random configurations"),
             real("gauge_amplitude", 0.05, "amplitude of the mean-zero gauge function"),
             integer("pairs", 20, "random pairs for the adjoint identity"),
             real("zeta_tolerance", 1e-10, "allowed change of zeta under gauge"),
             real("eta_tolerance", 1e-8, "allowed change of eta under mean-zero gauge"),
             real("tau_tolerance", 1e-8, "allowed error of the winding shift of tau"),
             real("adjoint_tolerance", 1e-10, "allowed relative defect of the adjoint identity"),
         }},
    };
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string& line) {
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') quoted = !quoted;
        if (line[i] == '#' && !quoted) return line.substr(0, i);
    }
    return line;
}

bool parse_number(const std::string& s, Value& out) {
    std::int64_t i = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), i);
    if (ec == std::errc() && p == s.data() + s.size()) {
        out = i;
        return true;
    }
    // from_chars for double is unavailable on older toolchains; strtod with a full-consumption check
    char* end = nullptr;
    const double d = std::strtod(s.c_str(), &end);
    if (!s.empty() && end == s.c_str() + s.size()) {
        out = d;
        return true;
    }
    return false;
}

Value parse_value(const std::string& raw, const std::string& where) {
    const auto s = trim(raw);
    if (s.empty()) throw ParseError(where + ": missing value");
    if (s == "true") return true;
    if (s == "false") return false;
    if (s.front() == '"') {
        if (s.size() < 2 || s.back() != '"') throw ParseError(where + ": unterminated string");
        return s.substr(1, s.size() - 2);
    }
    if (s.front() == '[') {
        if (s.back() != ']') throw ParseError(where + ": unterminated list");
        std::vector<double> items;
        std::stringstream body(s.substr(1, s.size() - 2));
        std::string item;
        while (std::getline(body, item, ',')) {
            item = trim(item);
            if (item.empty()) continue;
            Value v;
            if (!parse_number(item, v)) throw ParseError(where + ": list item '" + item + "' is not a number");
            items.push_back(std::holds_alternative<std::int64_t>(v) ? static_cast<double>(std::get<std::int64_t>(v))
                                                                    : std::get<double>(v));
        }
        return items;
    }
    Value v;
    if (!parse_number(s, v)) throw ParseError(where + ": cannot parse value '" + s + "'");
    return v;
}

Value coerce(const KeySpec& spec, const Value& v, const std::string& where) {
    switch (spec.type) {
        case ValueType::boolean:
            if (std::holds_alternative<bool>(v)) return v;
            break;
        case ValueType::integer:
            if (std::holds_alternative<std::int64_t>(v)) return v;
            break;
        case ValueType::real:
            if (std::holds_alternative<double>(v)) return v;
            if (std::holds_alternative<std::int64_t>(v)) return static_cast<double>(std::get<std::int64_t>(v));
            break;
        case ValueType::text:
            if (std::holds_alternative<std::string>(v)) return v;
            break;
        case ValueType::real_list:
            if (std::holds_alternative<std::vector<double>>(v)) return v;
            break;
    }
    throw ParseError(where + ": wrong type for key '" + spec.key + "'");
}

const KeySpec* find_key(const std::vector<KeySpec>& keys, const std::string& k) {
    for (const auto& s : keys)
        if (s.key == k) return &s;
    return nullptr;
}

template <class T>
const T& typed(const std::map<std::string, Value>& values, const std::string& key) {
    const auto it = values.find(key);
    if (it == values.end()) throw ParseError("configuration key '" + key + "' is not defined for this suite");
    if (!std::holds_alternative<T>(it->second)) throw ParseError("configuration key '" + key + "' has the wrong type");
    return std::get<T>(it->second);
}

}  // namespace

const std::vector<SuiteSpec>& suite_catalogue() {
    static const auto catalogue = build_catalogue();
    return catalogue;
}

const SuiteSpec& find_suite(const std::string& name) {
    for (const auto& s : suite_catalogue())
        if (s.name == name) return s;
    throw ParseError("unknown suite '" + name + "'");
}

const std::vector<KeySpec>& common_keys() {
    static const std::vector<KeySpec> keys = {
        text("suite", "", "suite to run"),
        integer("seed", 42, "seed of the counter-based generator"),
        text("out", "ucp-out", "output directory"),
        integer("jobs", 1, "concurrent sweep points"),
    };
    return keys;
}

std::string format_value(const Value& v) {
    struct {
        std::string operator()(bool b) const { return b ? "true" : "false"; }
        std::string operator()(std::int64_t i) const { return std::to_string(i); }
        std::string operator()(double d) const {
            std::ostringstream s;
            s << d;
            return s.str();
        }
        std::string operator()(const std::string& s) const { return "\"" + s + "\""; }
        std::string operator()(const std::vector<double>& l) const {
            std::string out = "[";
            for (std::size_t i = 0; i < l.size(); ++i) out += (i ? ", " : "") + (*this)(l[i]);
            return out + "]";
        }
    } visitor;
    return std::visit(visitor, v);
}

ExperimentConfig ExperimentConfig::defaults(const std::string& suite) {
    ExperimentConfig c;
    c.suite = find_suite(suite).name;
    for (const auto& k : find_suite(suite).keys) c.values[k.key] = k.default_value;
    return c;
}

double ExperimentConfig::real(const std::string& key) const { return typed<double>(values, key); }
std::int64_t ExperimentConfig::integer(const std::string& key) const { return typed<std::int64_t>(values, key); }
bool ExperimentConfig::flag(const std::string& key) const { return typed<bool>(values, key); }
const std::string& ExperimentConfig::text(const std::string& key) const { return typed<std::string>(values, key); }
const std::vector<double>& ExperimentConfig::list(const std::string& key) const {
    return typed<std::vector<double>>(values, key);
}

std::size_t ExperimentConfig::count(const std::string& key) const {
    const auto v = integer(key);
    if (v < 0) throw ParseError("configuration key '" + key + "' must be non-negative");
    return static_cast<std::size_t>(v);
}

ConfigFile parse_config_text(const std::string& text) {
    ConfigFile out;
    std::istringstream in(text);
    std::string line, section;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto s = trim(strip_comment(line));
        if (s.empty()) continue;
        const std::string where = "line " + std::to_string(lineno);
        if (s.front() == '[') {
            if (s.back() != ']') throw ParseError(where + ": malformed section header");
            section = trim(s.substr(1, s.size() - 2));
            find_suite(section);
            out.sections[section];
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ParseError(where + ": expected key = value");
        const auto key = trim(s.substr(0, eq));
        if (key.empty() || !std::all_of(key.begin(), key.end(), [](char c) {
                return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
            }))
            throw ParseError(where + ": invalid key '" + key + "'");
        auto& target = section.empty() ? out.top : out.sections[section];
        if (target.count(key)) throw ParseError(where + ": duplicate key '" + key + "'");
        target[key] = parse_value(s.substr(eq + 1), where);
    }
    return out;
}

ConfigFile load_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot read config file '" + path + "'");
    std::stringstream buf;
    buf << f.rdbuf();
    return parse_config_text(buf.str());
}

ExperimentConfig resolve_config(const ConfigFile& file, const std::string& suite_override) {
    for (const auto& [k, v] : file.top)
        if (!find_key(common_keys(), k)) throw ParseError("unknown top-level key '" + k + "'");
    std::string suite = suite_override;
    if (suite.empty()) {
        const auto it = file.top.find("suite");
        if (it == file.top.end()) throw ParseError("no suite given");
        suite = std::get<std::string>(coerce(*find_key(common_keys(), "suite"), it->second, "suite"));
    }
    auto cfg = ExperimentConfig::defaults(suite);
    for (const auto& [k, v] : file.top) {
        const auto val = coerce(*find_key(common_keys(), k), v, "top level");
        if (k == "seed") {
            if (std::get<std::int64_t>(val) < 0) throw ParseError("seed must be non-negative");
            cfg.seed = static_cast<std::uint64_t>(std::get<std::int64_t>(val));
        } else if (k == "out") {
            cfg.out = std::get<std::string>(val);
        } else if (k == "jobs") {
            if (std::get<std::int64_t>(val) < 1) throw ParseError("jobs must be at least 1");
            cfg.jobs = static_cast<unsigned>(std::get<std::int64_t>(val));
        }
    }
    for (const auto& [name, entries] : file.sections) {
        const auto& spec = find_suite(name);
        for (const auto& [k, v] : entries) {
            const auto* ks = find_key(spec.keys, k);
            if (!ks) throw ParseError("unknown key '" + k + "' in section [" + name + "]");
            const auto val = coerce(*ks, v, "[" + name + "]");
            if (name == cfg.suite) cfg.values[k] = val;
        }
    }
    return cfg;
}

}  // namespace ucplab::harness
