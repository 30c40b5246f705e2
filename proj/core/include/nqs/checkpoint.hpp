#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "nqs/rbm.hpp"

namespace nqs {

/// Serialized RBM state. The on-disk form is a JSON document:
///
///   {"format": "nqs-rbm-checkpoint", "version": 1,
///    "n_visible": N, "n_hidden": M, "epoch": e, "seed": s,
///    "a": [[re, im], ...], "b": [[re, im], ...],
///    "w": [[re, im], ...]}          // w flattened row-major (i * M + j)
///
/// Doubles are written in shortest round-trip form, so reading back a
/// written checkpoint reproduces every parameter bit for bit.
struct Checkpoint {
    RbmParams params;
    std::int64_t epoch = 0;
    std::uint64_t seed = 0;
};

std::string checkpoint_to_string(const Checkpoint& checkpoint);
/// Throws CheckpointError on malformed input.
Checkpoint checkpoint_from_string(const std::string& text);

void write_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint);
Checkpoint read_checkpoint(const std::filesystem::path& path);

}  // namespace nqs
