#include "uq/kernels.hpp"

namespace uq::kernels {
namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

void matvec_scalar(const double* A, const double* x, const double* bias, double* y,
                   std::size_t rows, std::size_t cols) {
    for (std::size_t r = 0; r < rows; ++r) {
        y[r] = bias[r] + dot_scalar(A + r * cols, x, cols);
    }
}

void matvec_t_scalar(const double* A, const double* v, double* y, std::size_t rows,
                     std::size_t cols) {
    for (std::size_t c = 0; c < cols; ++c) y[c] = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
        const double* row = A + r * cols;
        const double vr = v[r];
        for (std::size_t c = 0; c < cols; ++c) y[c] += vr * row[c];
    }
}

void ger_acc_scalar(double* A, const double* d, const double* x, std::size_t rows,
                    std::size_t cols) {
    for (std::size_t r = 0; r < rows; ++r) {
        double* row = A + r * cols;
        const double dr = d[r];
        for (std::size_t c = 0; c < cols; ++c) row[c] += dr * x[c];
    }
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scale_axpy_scalar(double* v, double a, double b, const double* g, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) v[i] = a * v[i] + b * g[i];
}

}  // namespace

const Impl& scalar_impl() {
    static const Impl impl{"scalar",       dot_scalar,  matvec_scalar, matvec_t_scalar,
                           ger_acc_scalar, axpy_scalar, scale_axpy_scalar};
    return impl;
}

}  // namespace uq::kernels
