#include "memk/optim.hpp"

#include <cmath>

#include "memk/error.hpp"

namespace memk {

namespace {

void require_finite_grads(const std::vector<ParamRef>& refs) {
    for (const ParamRef& ref : refs) {
        for (double g : *ref.grads) {
            if (!std::isfinite(g)) {
                throw Error("optimizer: non-finite gradient in " + ref.name + ", step aborted");
            }
        }
    }
}

} // namespace

AdamState make_adam_state(MlpModel& model) {
    AdamState state;
    for (const ParamRef& ref : trainable_params(model)) {
        state.m.emplace_back(ref.values->size(), 0.0);
        state.v.emplace_back(ref.values->size(), 0.0);
    }
    return state;
}

void adam_step(MlpModel& model, AdamState& state, const AdamParams& params) {
    std::vector<ParamRef> refs = trainable_params(model);
    if (refs.size() != state.m.size()) {
        throw Error("optimizer: state does not match model parameter layout");
    }
    require_finite_grads(refs);

    state.step += 1;
    const double t = static_cast<double>(state.step);
    const double bc1 = 1.0 - std::pow(params.beta1, t);
    const double bc2 = 1.0 - std::pow(params.beta2, t);

    for (size_t r = 0; r < refs.size(); ++r) {
        std::vector<double>& values = *refs[r].values;
        const std::vector<double>& grads = *refs[r].grads;
        std::vector<double>& m = state.m[r];
        std::vector<double>& v = state.v[r];
        if (grads.size() != values.size()) {
            throw Error("optimizer: gradient shape mismatch in " + refs[r].name);
        }
        for (size_t i = 0; i < values.size(); ++i) {
            m[i] = params.beta1 * m[i] + (1.0 - params.beta1) * grads[i];
            v[i] = params.beta2 * v[i] + (1.0 - params.beta2) * grads[i] * grads[i];
            const double m_hat = m[i] / bc1;
            const double v_hat = v[i] / bc2;
            values[i] -= params.lr * m_hat / (std::sqrt(v_hat) + params.eps);
        }
    }
}

void sgd_step(MlpModel& model, double lr) {
    std::vector<ParamRef> refs = trainable_params(model);
    require_finite_grads(refs);
    for (const ParamRef& ref : refs) {
        std::vector<double>& values = *ref.values;
        const std::vector<double>& grads = *ref.grads;
        for (size_t i = 0; i < values.size(); ++i) values[i] -= lr * grads[i];
    }
}

} // namespace memk
