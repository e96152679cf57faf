#include "memk/model.hpp"

#include <cmath>
#include <limits>

#include "memk/error.hpp"

namespace memk {

namespace {

// Clamped so saturated outputs stay strictly inside (0,1) even where
// exp() underflow would round the quotient to 0 or 1 in doubles.
double sigmoid(double z) {
    double y = 1.0 / (1.0 + std::exp(-z));
    const double hi = 1.0 - std::numeric_limits<double>::epsilon() / 2.0;
    if (y >= 1.0) return hi;
    if (y <= 0.0) return std::numeric_limits<double>::min();
    return y;
}

Matrix apply_activation(const Matrix& z, Activation act) {
    Matrix y(z.rows, z.cols);
    if (act == Activation::kReLU) {
        for (size_t i = 0; i < z.data.size(); ++i) y.data[i] = z.data[i] > 0.0 ? z.data[i] : 0.0;
    } else {
        for (size_t i = 0; i < z.data.size(); ++i) y.data[i] = sigmoid(z.data[i]);
    }
    return y;
}

Matrix activation_backward(const Block& block, const Matrix& grad_out) {
    Matrix g(grad_out.rows, grad_out.cols);
    if (block.act == Activation::kReLU) {
        for (size_t i = 0; i < g.data.size(); ++i) {
            g.data[i] = block.preact_.data[i] > 0.0 ? grad_out.data[i] : 0.0;
        }
    } else {
        for (size_t i = 0; i < g.data.size(); ++i) {
            const double y = block.act_out_.data[i];
            g.data[i] = grad_out.data[i] * y * (1.0 - y);
        }
    }
    return g;
}

} // namespace

void MlpModel::set_frozen_blocks(const std::set<size_t>& one_based) {
    frozen_.assign(blocks.size(), 0);
    for (size_t idx : one_based) {
        if (idx < 1 || idx > blocks.size()) {
            throw Error("freeze_blocks: block index " + std::to_string(idx) +
                        " outside 1.." + std::to_string(blocks.size()));
        }
        frozen_[idx - 1] = 1;
    }
}

bool MlpModel::is_frozen(size_t block_index) const {
    return block_index < frozen_.size() && frozen_[block_index] != 0;
}

MlpModel init_model(const std::vector<size_t>& dims, uint64_t seed, double dropout_p) {
    if (dims.size() < 2) throw Error("init_model: need at least input and output dimensions");
    for (size_t d : dims) {
        if (d == 0) throw Error("init_model: dimensions must be positive");
    }
    if (dims.back() != 1) throw Error("init_model: output dimension must be 1");
    if (dropout_p < 0.0 || dropout_p >= 1.0) throw Error("init_model: dropout p must be in [0,1)");

    MlpModel model;
    model.dims = dims;
    model.dropout_p = dropout_p;
    model.dropout_rng = Rng(derive_seed(seed, 1));
    Rng init_rng(seed);

    model.blocks.resize(dims.size() - 1);
    for (size_t b = 0; b < model.blocks.size(); ++b) {
        Block& blk = model.blocks[b];
        const size_t in = dims[b];
        const size_t out = dims[b + 1];

        blk.bn.gamma.assign(in, 1.0);
        blk.bn.beta.assign(in, 0.0);
        blk.bn.running_mean.assign(in, 0.0);
        blk.bn.running_var.assign(in, 1.0);
        blk.bn.grad_gamma.assign(in, 0.0);
        blk.bn.grad_beta.assign(in, 0.0);

        blk.dropout.p = dropout_p;

        blk.fc.weight = Matrix(out, in);
        const double stddev = std::sqrt(2.0 / static_cast<double>(in));
        for (double& w : blk.fc.weight.data) w = init_rng.normal(0.0, stddev);
        blk.fc.bias.assign(out, 0.0);
        blk.fc.grad_weight = Matrix(out, in);
        blk.fc.grad_bias.assign(out, 0.0);

        blk.act = (b + 1 == model.blocks.size()) ? Activation::kSigmoid : Activation::kReLU;
    }
    model.frozen_.assign(model.blocks.size(), 0);
    return model;
}

Matrix eval_forward(const MlpModel& model, const Matrix& x) {
    if (x.cols != model.input_dim()) {
        throw Error("forward: input has " + std::to_string(x.cols) + " features, model expects " +
                    std::to_string(model.input_dim()));
    }
    Matrix cur = x;
    for (const Block& blk : model.blocks) {
        cur = blk.bn.eval_output(cur);
        cur = blk.fc.apply(cur);
        cur = apply_activation(cur, blk.act);
    }
    return cur;
}

Matrix forward(MlpModel& model, const Matrix& x, Mode mode) {
    if (mode == Mode::kEval) return eval_forward(model, x);

    if (x.cols != model.input_dim()) {
        throw Error("forward: input has " + std::to_string(x.cols) + " features, model expects " +
                    std::to_string(model.input_dim()));
    }
    if (x.rows < 2) {
        throw Error("forward: train mode needs batch size >= 2 (batch variance undefined)");
    }
    Matrix cur = x;
    for (size_t b = 0; b < model.blocks.size(); ++b) {
        Block& blk = model.blocks[b];
        const bool frozen = model.is_frozen(b);
        cur = frozen ? blk.bn.forward_frozen(cur) : blk.bn.forward_train(cur);
        cur = blk.dropout.forward_train(cur, !frozen, model.dropout_rng);
        blk.preact_ = blk.fc.forward_train(cur);
        blk.act_out_ = apply_activation(blk.preact_, blk.act);
        cur = blk.act_out_;
    }
    model.has_train_cache_ = true;
    return cur;
}

Matrix backward(MlpModel& model, const Matrix& grad_output) {
    if (!model.has_train_cache_) {
        throw Error("backward: no preceding train-mode forward on this model");
    }
    if (grad_output.rows != model.blocks.back().act_out_.rows || grad_output.cols != 1) {
        throw Error("backward: gradient shape mismatch");
    }
    Matrix g = grad_output;
    for (size_t b = model.blocks.size(); b-- > 0;) {
        Block& blk = model.blocks[b];
        g = activation_backward(blk, g);
        g = blk.fc.backward(g);
        g = blk.dropout.backward(g);
        g = blk.bn.backward(g);
    }
    model.has_train_cache_ = false;
    return g;
}

size_t param_count(const MlpModel& model) {
    size_t total = 0;
    for (size_t b = 0; b < model.blocks.size(); ++b) total += block_param_count(model, b);
    return total;
}

size_t block_param_count(const MlpModel& model, size_t block_index) {
    const Block& blk = model.blocks.at(block_index);
    return blk.bn.gamma.size() + blk.bn.beta.size() + blk.fc.weight.data.size() +
           blk.fc.bias.size();
}

std::vector<ParamRef> trainable_params(MlpModel& model) {
    std::vector<ParamRef> refs;
    refs.reserve(model.blocks.size() * 4);
    for (size_t b = 0; b < model.blocks.size(); ++b) {
        Block& blk = model.blocks[b];
        const std::string prefix = "block" + std::to_string(b + 1) + ".";
        refs.push_back({prefix + "gamma", b + 1, &blk.bn.gamma, &blk.bn.grad_gamma});
        refs.push_back({prefix + "beta", b + 1, &blk.bn.beta, &blk.bn.grad_beta});
        refs.push_back({prefix + "weight", b + 1, &blk.fc.weight.data, &blk.fc.grad_weight.data});
        refs.push_back({prefix + "bias", b + 1, &blk.fc.bias, &blk.fc.grad_bias});
    }
    return refs;
}

} // namespace memk
