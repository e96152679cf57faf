#pragma once

#include "memk/matrix.hpp"

namespace memk {

struct LossGrad {
    double loss = 0.0;
    Matrix grad; // d(loss)/d(pred), same shape as pred
};

// Mean absolute error; grad is sign(pred-target)/N with sign(0) = 0.
LossGrad l1_loss(const Matrix& pred, const Matrix& target);

// Mean squared error; grad is 2*(pred-target)/N.
LossGrad mse_loss(const Matrix& pred, const Matrix& target);

} // namespace memk
