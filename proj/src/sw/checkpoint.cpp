#include "ucplab/sw/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"

namespace ucplab::sw {

namespace {

constexpr const char* kFormat = "ucplab-sw-checkpoint";

void put(std::ostream& os, double v) {
    auto bits = std::bit_cast<std::uint64_t>(v);
    unsigned char bytes[8];
    for (int i = 0; i < 8; ++i) bytes[i] = static_cast<unsigned char>(bits >> (8 * i));
    os.write(reinterpret_cast<const char*>(bytes), 8);
}

double get(std::istream& is) {
    unsigned char bytes[8];
    if (!is.read(reinterpret_cast<char*>(bytes), 8)) throw CheckpointError("checkpoint payload is truncated");
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
    return std::bit_cast<double>(bits);
}

std::string hex(std::uint64_t h) {
    std::ostringstream s;
    s << std::hex << std::setw(16) << std::setfill('0') << h;
    return s.str();
}

}  // namespace

void write_checkpoint(const std::filesystem::path& path, const Checkpoint& cp) {
    cp.config.check();
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::ios_base::failure("cannot open " + path.string());
    nlohmann::ordered_json header{{"format", kFormat},
                                  {"version", 1},
                                  {"N", cp.config.N},
                                  {"points", cp.config.psi.points()},
                                  {"case", to_string(cp.which)},
                                  {"params_hash", hex(cp.params_hash)}};
    f << header.dump() << '\n';
    for (double v : cp.config.b) put(f, v);
    for (const auto& z : cp.config.psi.values()) {
        put(f, z.real());
        put(f, z.imag());
    }
    if (!f) throw std::ios_base::failure("write failed for " + path.string());
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::ios_base::failure("cannot open " + path.string());
    std::string line;
    if (!std::getline(f, line)) throw CheckpointError("checkpoint header is missing");
    Checkpoint cp;
    try {
        const auto header = nlohmann::json::parse(line);
        if (header.at("format").get<std::string>() != kFormat) throw CheckpointError("not a ucplab checkpoint");
        if (header.at("version").get<int>() != 1) throw CheckpointError("unsupported checkpoint version");
        const int N = header.at("N").get<int>();
        cp.config = SWConfiguration::zero(N);
        if (header.at("points").get<std::size_t>() != cp.config.psi.points())
            throw CheckpointError("checkpoint point count does not match N");
        cp.which = parse_case(header.at("case").get<std::string>());
        cp.params_hash = std::stoull(header.at("params_hash").get<std::string>(), nullptr, 16);
    } catch (const nlohmann::json::exception& e) {
        throw CheckpointError(std::string("bad checkpoint header: ") + e.what());
    } catch (const PreconditionError& e) {
        throw CheckpointError(std::string("bad checkpoint header: ") + e.what());
    }
    for (auto& v : cp.config.b) v = get(f);
    for (auto& z : cp.config.psi.values()) {
        const double re = get(f);
        z = {re, get(f)};
    }
    if (f.peek() != std::char_traits<char>::eof()) throw CheckpointError("checkpoint has trailing bytes");
    return cp;
}

}  // namespace ucplab::sw
