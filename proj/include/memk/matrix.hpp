#pragma once

#include <cstddef>
#include <vector>

namespace memk {

// Row-major dense matrix of 64-bit reals. rows is the batch dimension
// throughout the toolkit.
struct Matrix {
    size_t rows = 0;
    size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(size_t r, size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

    double& at(size_t i, size_t j) { return data[i * cols + j]; }
    double at(size_t i, size_t j) const { return data[i * cols + j]; }

    bool same_shape(const Matrix& other) const {
        return rows == other.rows && cols == other.cols;
    }
};

// C = A * B          A: (r x k), B: (k x c)
Matrix matmul_nn(const Matrix& a, const Matrix& b);

// C = A * B^T        A: (r x k), B: (c x k)
Matrix matmul_nt(const Matrix& a, const Matrix& b);

// C = A^T * B        A: (k x r), B: (k x c)
Matrix matmul_tn(const Matrix& a, const Matrix& b);

// Debug-build guard: aborts if any entry is NaN/Inf. No-op in release.
void debug_check_finite(const Matrix& m, const char* label);

} // namespace memk
