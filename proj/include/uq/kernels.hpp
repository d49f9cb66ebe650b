#pragma once

// Dense double-precision kernels used by the network forward/backward passes
// and the optimizer. A scalar reference implementation always exists; an
// AVX2/FMA variant is compiled on x86-64 and selected at runtime when the CPU
// supports it. The env var UQ_KERNELS (values: scalar, avx2) overrides the
// automatic choice. Variants are interchangeable up to floating-point
// rounding; the test suite checks them against each other.

#include <cstddef>
#include <string_view>

namespace uq::kernels {

struct Impl {
    const char* name;
    // sum_i x[i] * y[i]
    double (*dot)(const double* x, const double* y, std::size_t n);
    // y = A x + bias; A row-major (rows x cols), bias length rows
    void (*matvec)(const double* A, const double* x, const double* bias, double* y,
                   std::size_t rows, std::size_t cols);
    // y = A^T v; result length cols, v length rows
    void (*matvec_t)(const double* A, const double* v, double* y, std::size_t rows,
                     std::size_t cols);
    // A += d x^T (rank-one accumulate); d length rows, x length cols
    void (*ger_acc)(double* A, const double* d, const double* x, std::size_t rows,
                    std::size_t cols);
    // y += a x
    void (*axpy)(double a, const double* x, double* y, std::size_t n);
    // v = a v + b g (momentum-style update)
    void (*scale_axpy)(double* v, double a, double b, const double* g, std::size_t n);
};

const Impl& scalar_impl();

// nullptr when the AVX2 variant is unavailable (not compiled in, or the CPU
// lacks AVX2/FMA).
const Impl* avx2_impl();

// The selected implementation. First call resolves UQ_KERNELS, else picks the
// best available variant. Stable for the rest of the process.
const Impl& active();

// Force a variant by name ("scalar" | "avx2"); throws ConfigError if unknown
// or unavailable. Intended for tests and benchmarks.
void select(std::string_view name);

inline double dot(const double* x, const double* y, std::size_t n) {
    return active().dot(x, y, n);
}
inline void matvec(const double* A, const double* x, const double* bias, double* y,
                   std::size_t rows, std::size_t cols) {
    active().matvec(A, x, bias, y, rows, cols);
}
inline void matvec_t(const double* A, const double* v, double* y, std::size_t rows,
                     std::size_t cols) {
    active().matvec_t(A, v, y, rows, cols);
}
inline void ger_acc(double* A, const double* d, const double* x, std::size_t rows,
                    std::size_t cols) {
    active().ger_acc(A, d, x, rows, cols);
}
inline void axpy(double a, const double* x, double* y, std::size_t n) {
    active().axpy(a, x, y, n);
}
inline void scale_axpy(double* v, double a, double b, const double* g, std::size_t n) {
    active().scale_axpy(v, a, b, g, n);
}

}  // namespace uq::kernels
