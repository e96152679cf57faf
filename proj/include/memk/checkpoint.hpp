#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "memk/data.hpp"
#include "memk/model.hpp"

namespace memk {

inline constexpr uint32_t kCheckpointVersion = 1;

struct CheckpointMeta {
    Target target = Target::kShortTerm;
    uint64_t seed = 0;
    uint32_t epochs_run = 0;
    // NaN when the run never produced a defined validation Spearman.
    double best_val_spearman = 0.0;
};

struct Checkpoint {
    uint32_t version = kCheckpointVersion;
    std::vector<size_t> dims;
    CheckpointMeta meta;
    MlpModel model;
};

// Binary format, all multi-byte values little-endian:
//   magic "MEMK" | version u32 | n_dims u32 | dims u32 each
//   | target u8 | seed u64 | epochs_run u32 | best_val_spearman f64
//   | per block (1..n): gamma, beta, running_mean, running_var,
//     weight row-major (out x in), bias -- all f64
// Loading a saved model reproduces parameters and running statistics
// bit-for-bit.
void save_checkpoint(const MlpModel& model, const CheckpointMeta& meta, const std::string& path);

Checkpoint load_checkpoint(const std::string& path);

// Exact on-disk size for a given architecture; used by tooling and tests.
size_t checkpoint_file_size(const std::vector<size_t>& dims);

} // namespace memk
