#include "memk/losses.hpp"

#include <cmath>

#include "memk/error.hpp"

namespace memk {

namespace {

void require_same_shape(const Matrix& pred, const Matrix& target, const char* what) {
    if (!pred.same_shape(target)) {
        throw Error(std::string(what) + ": prediction and target shapes differ");
    }
    if (pred.data.empty()) throw Error(std::string(what) + ": empty input");
}

} // namespace

LossGrad l1_loss(const Matrix& pred, const Matrix& target) {
    require_same_shape(pred, target, "l1_loss");
    const double inv_n = 1.0 / static_cast<double>(pred.data.size());
    LossGrad out;
    out.grad = Matrix(pred.rows, pred.cols);
    for (size_t i = 0; i < pred.data.size(); ++i) {
        const double d = pred.data[i] - target.data[i];
        out.loss += std::abs(d);
        out.grad.data[i] = d > 0.0 ? inv_n : (d < 0.0 ? -inv_n : 0.0);
    }
    out.loss *= inv_n;
    return out;
}

LossGrad mse_loss(const Matrix& pred, const Matrix& target) {
    require_same_shape(pred, target, "mse_loss");
    const double inv_n = 1.0 / static_cast<double>(pred.data.size());
    LossGrad out;
    out.grad = Matrix(pred.rows, pred.cols);
    for (size_t i = 0; i < pred.data.size(); ++i) {
        const double d = pred.data[i] - target.data[i];
        out.loss += d * d;
        out.grad.data[i] = 2.0 * d * inv_n;
    }
    out.loss *= inv_n;
    return out;
}

} // namespace memk
