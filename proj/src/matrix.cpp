#include "memk/matrix.hpp"

#include <cassert>
#include <cmath>
#include <string>

#include "memk/error.hpp"

namespace memk {

Matrix matmul_nn(const Matrix& a, const Matrix& b) {
    if (a.cols != b.rows) {
        throw Error("matmul_nn: inner dimensions differ (" + std::to_string(a.cols) +
                    " vs " + std::to_string(b.rows) + ")");
    }
    Matrix c(a.rows, b.cols);
    for (size_t i = 0; i < a.rows; ++i) {
        const double* arow = &a.data[i * a.cols];
        double* crow = &c.data[i * c.cols];
        for (size_t k = 0; k < a.cols; ++k) {
            const double aik = arow[k];
            const double* brow = &b.data[k * b.cols];
            for (size_t j = 0; j < b.cols; ++j) crow[j] += aik * brow[j];
        }
    }
    debug_check_finite(c, "matmul_nn");
    return c;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
    if (a.cols != b.cols) {
        throw Error("matmul_nt: inner dimensions differ (" + std::to_string(a.cols) +
                    " vs " + std::to_string(b.cols) + ")");
    }
    Matrix c(a.rows, b.rows);
    for (size_t i = 0; i < a.rows; ++i) {
        const double* arow = &a.data[i * a.cols];
        for (size_t j = 0; j < b.rows; ++j) {
            const double* brow = &b.data[j * b.cols];
            double acc = 0.0;
            for (size_t k = 0; k < a.cols; ++k) acc += arow[k] * brow[k];
            c.at(i, j) = acc;
        }
    }
    debug_check_finite(c, "matmul_nt");
    return c;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
    if (a.rows != b.rows) {
        throw Error("matmul_tn: inner dimensions differ (" + std::to_string(a.rows) +
                    " vs " + std::to_string(b.rows) + ")");
    }
    Matrix c(a.cols, b.cols);
    for (size_t k = 0; k < a.rows; ++k) {
        const double* arow = &a.data[k * a.cols];
        const double* brow = &b.data[k * b.cols];
        for (size_t i = 0; i < a.cols; ++i) {
            const double aki = arow[i];
            double* crow = &c.data[i * c.cols];
            for (size_t j = 0; j < b.cols; ++j) crow[j] += aki * brow[j];
        }
    }
    debug_check_finite(c, "matmul_tn");
    return c;
}

void debug_check_finite(const Matrix& m, const char* label) {
#ifndef NDEBUG
    for (double v : m.data) {
        if (!std::isfinite(v)) {
            assert(false && "non-finite matrix entry");
            throw Error(std::string("non-finite value in ") + label);
        }
    }
#else
    (void)m;
    (void)label;
#endif
}

} // namespace memk
