// AVX2/FMA kernel variant. This translation unit is compiled with
// -mavx2 -mfma when the toolchain targets x86-64; callers must check
// avx2_impl() (which performs the CPU feature test) before use.

#include "uq/kernels.hpp"

#if defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

namespace uq::kernels {
namespace {

inline double hsum4(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d swapped = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    }
    double acc = hsum4(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

void matvec_avx2(const double* A, const double* x, const double* bias, double* y,
                 std::size_t rows, std::size_t cols) {
    for (std::size_t r = 0; r < rows; ++r) {
        y[r] = bias[r] + dot_avx2(A + r * cols, x, cols);
    }
}

void matvec_t_avx2(const double* A, const double* v, double* y, std::size_t rows,
                   std::size_t cols) {
    std::size_t c = 0;
    for (; c + 4 <= cols; c += 4) _mm256_storeu_pd(y + c, _mm256_setzero_pd());
    for (; c < cols; ++c) y[c] = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
        const double* row = A + r * cols;
        const __m256d vr = _mm256_set1_pd(v[r]);
        std::size_t i = 0;
        for (; i + 4 <= cols; i += 4) {
            __m256d acc = _mm256_loadu_pd(y + i);
            acc = _mm256_fmadd_pd(vr, _mm256_loadu_pd(row + i), acc);
            _mm256_storeu_pd(y + i, acc);
        }
        const double vrs = v[r];
        for (; i < cols; ++i) y[i] += vrs * row[i];
    }
}

void ger_acc_avx2(double* A, const double* d, const double* x, std::size_t rows,
                  std::size_t cols) {
    for (std::size_t r = 0; r < rows; ++r) {
        double* row = A + r * cols;
        const __m256d dr = _mm256_set1_pd(d[r]);
        std::size_t i = 0;
        for (; i + 4 <= cols; i += 4) {
            __m256d acc = _mm256_loadu_pd(row + i);
            acc = _mm256_fmadd_pd(dr, _mm256_loadu_pd(x + i), acc);
            _mm256_storeu_pd(row + i, acc);
        }
        const double drs = d[r];
        for (; i < cols; ++i) row[i] += drs * x[i];
    }
}

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
    const __m256d av = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d acc = _mm256_loadu_pd(y + i);
        acc = _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), acc);
        _mm256_storeu_pd(y + i, acc);
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

void scale_axpy_avx2(double* v, double a, double b, const double* g, std::size_t n) {
    const __m256d av = _mm256_set1_pd(a);
    const __m256d bv = _mm256_set1_pd(b);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d acc = _mm256_mul_pd(av, _mm256_loadu_pd(v + i));
        acc = _mm256_fmadd_pd(bv, _mm256_loadu_pd(g + i), acc);
        _mm256_storeu_pd(v + i, acc);
    }
    for (; i < n; ++i) v[i] = a * v[i] + b * g[i];
}

}  // namespace

const Impl* avx2_impl_compiled() {
    static const Impl impl{"avx2",       dot_avx2,  matvec_avx2, matvec_t_avx2,
                           ger_acc_avx2, axpy_avx2, scale_axpy_avx2};
    return &impl;
}

}  // namespace uq::kernels

#else

namespace uq::kernels {
const Impl* avx2_impl_compiled() { return nullptr; }
}  // namespace uq::kernels

#endif
