#pragma once

#include <filesystem>
#include <stdexcept>

#include "ucplab/sw/model.hpp"

namespace ucplab::sw {

class CheckpointError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Checkpoint {
    SWConfiguration config;
    Case which = Case::unperturbed;
    std::uint64_t params_hash = 0;
};

/// One JSON header line, then little-endian f64: b (3 per point), then psi as (re, im) pairs,
/// point-major over (i1, i2, i3) with components innermost. The stored 1-form is b = -i a.
void write_checkpoint(const std::filesystem::path& path, const Checkpoint& cp);

/// Throws CheckpointError on a malformed header or truncated payload.
Checkpoint read_checkpoint(const std::filesystem::path& path);

}  // namespace ucplab::sw
