#include "memk/layers.hpp"

#include <cmath>
#include <string>

#include "memk/error.hpp"

namespace memk {

Matrix LinearLayer::forward_train(const Matrix& x) {
    input_ = x;
    return apply(x);
}

Matrix LinearLayer::apply(const Matrix& x) const {
    if (x.cols != in_dim()) {
        throw Error("linear: input has " + std::to_string(x.cols) + " features, expected " +
                    std::to_string(in_dim()));
    }
    Matrix y = matmul_nt(x, weight);
    for (size_t i = 0; i < y.rows; ++i) {
        for (size_t j = 0; j < y.cols; ++j) y.at(i, j) += bias[j];
    }
    return y;
}

Matrix LinearLayer::backward(const Matrix& grad_out) {
    if (grad_out.rows != input_.rows || grad_out.cols != out_dim()) {
        throw Error("linear backward: gradient shape mismatch");
    }
    grad_weight = matmul_tn(grad_out, input_);
    grad_bias.assign(out_dim(), 0.0);
    for (size_t i = 0; i < grad_out.rows; ++i) {
        for (size_t j = 0; j < grad_out.cols; ++j) grad_bias[j] += grad_out.at(i, j);
    }
    return matmul_nn(grad_out, weight);
}

Matrix BatchNormLayer::forward_train(const Matrix& x) {
    if (x.cols != dim()) {
        throw Error("batchnorm: input has " + std::to_string(x.cols) + " features, expected " +
                    std::to_string(dim()));
    }
    const size_t n = x.rows;
    const size_t d = x.cols;
    const double inv_n = 1.0 / static_cast<double>(n);

    std::vector<double> mean(d, 0.0), var(d, 0.0);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < d; ++j) mean[j] += x.at(i, j);
    }
    for (size_t j = 0; j < d; ++j) mean[j] *= inv_n;
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < d; ++j) {
            const double c = x.at(i, j) - mean[j];
            var[j] += c * c;
        }
    }
    for (size_t j = 0; j < d; ++j) var[j] *= inv_n;

    inv_std_.assign(d, 0.0);
    for (size_t j = 0; j < d; ++j) inv_std_[j] = 1.0 / std::sqrt(var[j] + eps);

    xhat_ = Matrix(n, d);
    Matrix y(n, d);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < d; ++j) {
            const double xh = (x.at(i, j) - mean[j]) * inv_std_[j];
            xhat_.at(i, j) = xh;
            y.at(i, j) = gamma[j] * xh + beta[j];
        }
    }
    for (size_t j = 0; j < d; ++j) {
        running_mean[j] = (1.0 - momentum) * running_mean[j] + momentum * mean[j];
        running_var[j] = (1.0 - momentum) * running_var[j] + momentum * var[j];
    }
    batch_path_ = true;
    return y;
}

Matrix BatchNormLayer::forward_frozen(const Matrix& x) {
    Matrix y = eval_output(x);
    const size_t n = x.rows;
    const size_t d = x.cols;
    inv_std_.assign(d, 0.0);
    for (size_t j = 0; j < d; ++j) inv_std_[j] = 1.0 / std::sqrt(running_var[j] + eps);
    xhat_ = Matrix(n, d);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < d; ++j) {
            xhat_.at(i, j) = (x.at(i, j) - running_mean[j]) * inv_std_[j];
        }
    }
    batch_path_ = false;
    return y;
}

Matrix BatchNormLayer::eval_output(const Matrix& x) const {
    if (x.cols != dim()) {
        throw Error("batchnorm: input has " + std::to_string(x.cols) + " features, expected " +
                    std::to_string(dim()));
    }
    Matrix y(x.rows, x.cols);
    for (size_t j = 0; j < x.cols; ++j) {
        const double inv = 1.0 / std::sqrt(running_var[j] + eps);
        for (size_t i = 0; i < x.rows; ++i) {
            y.at(i, j) = gamma[j] * (x.at(i, j) - running_mean[j]) * inv + beta[j];
        }
    }
    return y;
}

Matrix BatchNormLayer::backward(const Matrix& grad_out) {
    if (!grad_out.same_shape(xhat_)) {
        throw Error("batchnorm backward: gradient shape mismatch");
    }
    const size_t n = grad_out.rows;
    const size_t d = grad_out.cols;

    grad_gamma.assign(d, 0.0);
    grad_beta.assign(d, 0.0);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < d; ++j) {
            grad_gamma[j] += grad_out.at(i, j) * xhat_.at(i, j);
            grad_beta[j] += grad_out.at(i, j);
        }
    }

    Matrix gx(n, d);
    if (!batch_path_) {
        // Running statistics were constants in forward.
        for (size_t i = 0; i < n; ++i) {
            for (size_t j = 0; j < d; ++j) {
                gx.at(i, j) = grad_out.at(i, j) * gamma[j] * inv_std_[j];
            }
        }
        return gx;
    }

    // Full derivative through the batch mean and variance.
    const double inv_n = 1.0 / static_cast<double>(n);
    std::vector<double> dvar(d, 0.0), dmean(d, 0.0), sum_dxhat(d, 0.0), sum_centered(d, 0.0);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < d; ++j) {
            const double dxhat = grad_out.at(i, j) * gamma[j];
            const double centered = xhat_.at(i, j) / inv_std_[j];
            dvar[j] += dxhat * centered;
            sum_dxhat[j] += dxhat;
            sum_centered[j] += centered;
        }
    }
    for (size_t j = 0; j < d; ++j) {
        dvar[j] *= -0.5 * inv_std_[j] * inv_std_[j] * inv_std_[j];
        dmean[j] = -inv_std_[j] * sum_dxhat[j] + dvar[j] * (-2.0 * inv_n) * sum_centered[j];
    }
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < d; ++j) {
            const double dxhat = grad_out.at(i, j) * gamma[j];
            const double centered = xhat_.at(i, j) / inv_std_[j];
            gx.at(i, j) =
                dxhat * inv_std_[j] + dvar[j] * 2.0 * centered * inv_n + dmean[j] * inv_n;
        }
    }
    return gx;
}

Matrix DropoutLayer::forward_train(const Matrix& x, bool active, Rng& rng) {
    if (!active || p == 0.0) {
        mask_ = Matrix();
        return x;
    }
    const double scale = 1.0 / (1.0 - p);
    mask_ = Matrix(x.rows, x.cols);
    Matrix y(x.rows, x.cols);
    for (size_t i = 0; i < x.data.size(); ++i) {
        const double keep = rng.uniform() >= p ? scale : 0.0;
        mask_.data[i] = keep;
        y.data[i] = x.data[i] * keep;
    }
    return y;
}

Matrix DropoutLayer::backward(const Matrix& grad_out) const {
    if (mask_.data.empty()) return grad_out;
    if (!grad_out.same_shape(mask_)) {
        throw Error("dropout backward: gradient shape mismatch");
    }
    Matrix gx(grad_out.rows, grad_out.cols);
    for (size_t i = 0; i < gx.data.size(); ++i) gx.data[i] = grad_out.data[i] * mask_.data[i];
    return gx;
}

} // namespace memk
