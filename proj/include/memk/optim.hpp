#pragma once

#include <cstdint>
#include <vector>

#include "memk/model.hpp"

namespace memk {

struct AdamParams {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

// First/second moments aligned with the trainable_params traversal.
struct AdamState {
    std::vector<std::vector<double>> m;
    std::vector<std::vector<double>> v;
    uint64_t step = 0;
};

AdamState make_adam_state(MlpModel& model);

// Standard Adam with bias correction. Validates every gradient before
// touching any parameter; a non-finite gradient aborts the whole step
// and the error names the parameter.
void adam_step(MlpModel& model, AdamState& state, const AdamParams& params);

// Plain gradient descent, exposed for ablation runs.
void sgd_step(MlpModel& model, double lr);

} // namespace memk
