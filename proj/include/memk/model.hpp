#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "memk/layers.hpp"
#include "memk/matrix.hpp"
#include "memk/rng.hpp"

namespace memk {

enum class Mode { kTrain, kEval };

enum class Activation { kReLU, kSigmoid };

// One building block: BatchNorm -> Dropout -> FullyConnected -> activation.
struct Block {
    BatchNormLayer bn;
    DropoutLayer dropout;
    LinearLayer fc;
    Activation act = Activation::kReLU;

    // train-pass caches
    Matrix preact_;
    Matrix act_out_;
};

// The regression MLP: a sequence of blocks whose widths follow dims
// (input, hidden..., 1). Hidden blocks end in ReLU, the head in Sigmoid,
// so every prediction lies strictly inside (0,1).
struct MlpModel {
    std::vector<size_t> dims;
    std::vector<Block> blocks;
    double dropout_p = 0.1;
    Rng dropout_rng{0};

    size_t input_dim() const { return dims.front(); }
    size_t block_count() const { return blocks.size(); }

    // Runtime-only fine-tune state; 1-based indices, never serialized.
    // Frozen blocks run in inference mode during training passes.
    void set_frozen_blocks(const std::set<size_t>& one_based);
    bool is_frozen(size_t block_index) const;

    bool has_train_cache() const { return has_train_cache_; }

    std::vector<uint8_t> frozen_;
    bool has_train_cache_ = false;
};

// Weights ~ Normal(0, sqrt(2/in_dim)), biases zero, gamma=1, beta=0,
// running stats (0,1). Deterministic for a given seed.
MlpModel init_model(const std::vector<size_t>& dims, uint64_t seed, double dropout_p = 0.1);

// Train mode uses batch statistics and live dropout and caches every
// intermediate needed by backward; it rejects batches of size 1 (batch
// variance undefined). Eval mode is a pure function of the model.
Matrix forward(MlpModel& model, const Matrix& x, Mode mode);

// Eval forward on an immutable model; safe for concurrent callers.
Matrix eval_forward(const MlpModel& model, const Matrix& x);

// Populates every parameter gradient from the cached train-mode forward
// and returns the gradient w.r.t. the input batch.
Matrix backward(MlpModel& model, const Matrix& grad_output);

// Trainable parameters only (gamma, beta, weight, bias per block);
// running statistics are excluded.
size_t param_count(const MlpModel& model);

// Trainable parameters of one block, same exclusion.
size_t block_param_count(const MlpModel& model, size_t block_index);

// Flat view over trainable parameters in fixed traversal order
// (block 1..n; within a block: gamma, beta, weight row-major, bias).
struct ParamRef {
    std::string name;
    size_t block_index = 0; // 1-based
    std::vector<double>* values = nullptr;
    std::vector<double>* grads = nullptr;
};

std::vector<ParamRef> trainable_params(MlpModel& model);

} // namespace memk
