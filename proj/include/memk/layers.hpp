#pragma once

#include <vector>

#include "memk/matrix.hpp"
#include "memk/rng.hpp"

namespace memk {

// Fully-connected layer, weight is (out_dim x in_dim). Gradients mirror
// parameter shapes and are overwritten (not accumulated) by backward.
struct LinearLayer {
    Matrix weight;
    std::vector<double> bias;
    Matrix grad_weight;
    std::vector<double> grad_bias;

    size_t in_dim() const { return weight.cols; }
    size_t out_dim() const { return weight.rows; }

    // y = x * W^T + b, caching x for backward.
    Matrix forward_train(const Matrix& x);
    // Same map, no caching, no mutation.
    Matrix apply(const Matrix& x) const;
    // Fills grad_weight/grad_bias, returns gradient w.r.t. the input.
    Matrix backward(const Matrix& grad_out);

  private:
    Matrix input_;
};

// BatchNorm over the feature axis. Train mode normalizes by biased batch
// statistics and folds them into the running estimates
// (running <- (1-momentum)*running + momentum*batch); eval mode uses only
// the running estimates.
struct BatchNormLayer {
    std::vector<double> gamma;
    std::vector<double> beta;
    std::vector<double> running_mean;
    std::vector<double> running_var;
    std::vector<double> grad_gamma;
    std::vector<double> grad_beta;
    double momentum = 0.1;
    double eps = 1e-5;

    size_t dim() const { return gamma.size(); }

    // Batch statistics path; updates running stats and caches for backward.
    Matrix forward_train(const Matrix& x);
    // Running statistics path with caching, for frozen blocks inside a
    // training pass. Running stats are left untouched.
    Matrix forward_frozen(const Matrix& x);
    // Pure eval map; const so eval passes cannot mutate anything.
    Matrix eval_output(const Matrix& x) const;
    // Uses the full batch-statistics derivative when the last forward ran
    // on batch statistics, the per-feature scaling otherwise.
    Matrix backward(const Matrix& grad_out);

  private:
    Matrix xhat_;
    std::vector<double> inv_std_;
    bool batch_path_ = false;
};

// Inverted dropout: kept units are scaled by 1/(1-p) at train time so the
// eval map is the identity.
struct DropoutLayer {
    double p = 0.1;

    // Draws a fresh mask when active (and p > 0); identity otherwise.
    Matrix forward_train(const Matrix& x, bool active, Rng& rng);
    Matrix backward(const Matrix& grad_out) const;
    const Matrix& last_mask() const { return mask_; }

  private:
    Matrix mask_; // empty means the last forward was an identity pass
};

} // namespace memk
